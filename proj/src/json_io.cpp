#include "boundarykit/json_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace boundarykit {

namespace {

nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
    nlohmann::json arr = nlohmann::json::array();
    for (int k = 0; k < v.size(); ++k) arr.push_back(v(k));
    return arr;
}

nlohmann::json basis_to_json(const Eigen::MatrixXd& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (int r = 0; r < m.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

nlohmann::json boundary_to_json(const BoundaryResult& result, const PointCloud& cloud) {
    nlohmann::json doc;
    doc["detected"] = result.detected;
    doc["degenerate"] = result.degenerate;
    doc["probe_radii"] = result.probe_radii;

    nlohmann::json normals = nlohmann::json::array();
    nlohmann::json frames = nlohmann::json::array();
    nlohmann::json witnesses = nlohmann::json::array();
    for (std::size_t t = 0; t < result.detected.size(); ++t) {
        int i = result.detected[t];
        normals.push_back({{"index", i}, {"eta", vector_to_json(result.normals[t])}});
        frames.push_back(
            {{"index", i}, {"basis", basis_to_json(result.boundary_frames[t].basis())}});
        nlohmann::json wlist = nlohmann::json::array();
        for (const WitnessNormal& w : result.witnesses[t]) wlist.push_back(w.witness);
        witnesses.push_back({{"index", i}, {"witnesses", wlist}});
    }
    doc["normals"] = normals;
    doc["boundary_frames"] = frames;
    doc["witnesses"] = witnesses;
    doc["n"] = cloud.size();
    doc["ambient_dim"] = cloud.ambient_dim();
    doc["intrinsic_dim"] = cloud.intrinsic_dim();
    return doc;
}

void write_boundary_csv(const BoundaryResult& result, const PointCloud& cloud,
                        const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    const int D = cloud.ambient_dim();
    out << "index,is_boundary,rho_i";
    for (int k = 0; k < D; ++k) out << ",eta_" << k;
    out << "\n";
    for (int i = 0; i < cloud.size(); ++i) {
        int pos = result.position_of(i);
        out << i << ',' << (pos >= 0 ? 1 : 0) << ','
            << format_double(result.probe_radii[static_cast<std::size_t>(i)]);
        for (int k = 0; k < D; ++k) {
            double v = pos >= 0 ? result.normals[static_cast<std::size_t>(pos)](k) : 0.0;
            out << ',' << format_double(v);
        }
        out << "\n";
    }
    if (!out) throw IoError("failed writing '" + path + "'");
}

nlohmann::json calibration_to_json(const CalibrationReport& report) {
    nlohmann::json doc;
    doc["h"] = report.h;
    doc["k_used"] = report.k_used;
    doc["R0"] = report.R0;
    doc["distortion_delta"] = report.distortion_delta;
    doc["rho"] = report.rho;
    doc["r"] = report.r;
    doc["jump"] = {{"index", report.jump.index},
                   {"gap", report.jump.gap},
                   {"found", report.jump.found_jump},
                   {"low_contrast", report.jump.low_contrast}};
    doc["jump_rule"] = jump_rule_name(report.jump_rule);
    doc["rho_clamped"] = report.rho_clamped;
    doc["sorted_radii_count"] = static_cast<int>(report.sorted_radii.size());
    return doc;
}

void write_distortion_csv(const CalibrationReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << "pair_distance,tangential_ratio\n";
    for (const auto& [dist, ratio] : report.distortion_samples)
        out << format_double(dist) << ',' << format_double(ratio) << "\n";
    if (!out) throw IoError("failed writing '" + path + "'");
}

void write_radii_csv(const CalibrationReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << "rank,radius\n";
    for (std::size_t k = 0; k < report.sorted_radii.size(); ++k)
        out << k << ',' << format_double(report.sorted_radii[k]) << "\n";
    if (!out) throw IoError("failed writing '" + path + "'");
}

nlohmann::json patches_to_json(const PatchComplex& complex) {
    nlohmann::json doc;
    doc["eps_int"] = complex.eps_int;
    doc["eps_bd"] = complex.eps_bd;
    doc["warnings"] = complex.warnings;
    nlohmann::json inner = nlohmann::json::array();
    for (const InnerPatch& p : complex.inner)
        inner.push_back({{"center", vector_to_json(p.center)},
                         {"basis", basis_to_json(p.frame.basis())},
                         {"radius", p.radius}});
    nlohmann::json boundary = nlohmann::json::array();
    for (const BoundaryPatch& p : complex.boundary)
        boundary.push_back({{"center", vector_to_json(p.center)},
                            {"basis", basis_to_json(p.frame.basis())},
                            {"normal", vector_to_json(p.normal)},
                            {"radius", p.radius}});
    doc["inner"] = inner;
    doc["boundary"] = boundary;
    return doc;
}

nlohmann::json hausdorff_to_json(const HausdorffReport& report) {
    return {{"sup_M_to_Mhat", report.sup_M_to_Mhat},
            {"sup_Mhat_to_M", report.sup_Mhat_to_M},
            {"hausdorff", report.hausdorff()},
            {"truth_resolution", report.truth_resolution},
            {"truth_count", report.truth_count},
            {"estimator_sample_count", report.estimator_sample_count}};
}

nlohmann::json sample_sidecar(const SyntheticManifold& manifold, int n, std::uint64_t seed) {
    ReachInfo reach = manifold.reaches();
    auto finite_or_null = [](double v) {
        return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json();
    };
    return {{"kind", kind_name(manifold.kind())},
            {"n", n},
            {"seed", seed},
            {"intrinsic_dim", manifold.intrinsic_dim()},
            {"ambient_dim", manifold.ambient_dim()},
            {"has_boundary", manifold.has_boundary()},
            {"reach_manifold", finite_or_null(reach.manifold)},
            {"reach_boundary", finite_or_null(reach.boundary)},
            {"params", manifold.params_summary()}};
}

void save_json(const nlohmann::json& doc, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << doc.dump(2) << "\n";
    if (!out) throw IoError("failed writing '" + path + "'");
}

nlohmann::json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::parse_error& e) {
        throw IoError("parse failure in '" + path + "': " + e.what());
    }
    return doc;
}

CsvTable read_csv_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty CSV '" + path + "'");
    std::stringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) table.header.push_back(cell);

    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<double> row;
        std::size_t start = 0;
        while (true) {
            std::size_t comma = line.find(',', start);
            std::string_view field(line.data() + start,
                                   (comma == std::string::npos ? line.size() : comma) - start);
            double value = 0.0;
            auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
            if (ec != std::errc() || ptr != field.data() + field.size())
                throw IoError("bad numeric field at " + path + ":" +
                              std::to_string(lineno));
            row.push_back(value);
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (row.size() != table.header.size())
            throw IoError("column count mismatch at " + path + ":" + std::to_string(lineno));
        table.rows.push_back(std::move(row));
    }
    return table;
}

namespace {

std::string json_type_name(const nlohmann::json& v) {
    if (v.is_object()) return "object";
    if (v.is_array()) return "array";
    if (v.is_string()) return "string";
    if (v.is_boolean()) return "boolean";
    if (v.is_null()) return "null";
    if (v.is_number_integer() || v.is_number_unsigned()) return "integer";
    return "number";
}

void validate_node(const nlohmann::json& doc, const nlohmann::json& schema,
                   const std::string& where) {
    if (schema.contains("type")) {
        std::string want = schema["type"].get<std::string>();
        std::string got = json_type_name(doc);
        bool ok = want == got || (want == "number" && got == "integer");
        if (!ok)
            throw IoError("schema mismatch at " + where + ": expected " + want + ", got " +
                          got);
    }
    if (schema.contains("enum")) {
        bool ok = false;
        for (const auto& v : schema["enum"])
            if (v == doc) ok = true;
        if (!ok) throw IoError("schema mismatch at " + where + ": value outside enum");
    }
    if (schema.contains("required")) {
        for (const auto& key : schema["required"])
            if (!doc.contains(key.get<std::string>()))
                throw IoError("schema mismatch at " + where + ": missing key '" +
                              key.get<std::string>() + "'");
    }
    if (schema.contains("properties") && doc.is_object()) {
        for (const auto& [key, sub] : schema["properties"].items())
            if (doc.contains(key)) validate_node(doc[key], sub, where + "." + key);
    }
    if (schema.contains("items") && doc.is_array()) {
        int k = 0;
        for (const auto& item : doc)
            validate_node(item, schema["items"], where + "[" + std::to_string(k++) + "]");
    }
}

}  // namespace

void validate_schema(const nlohmann::json& doc, const nlohmann::json& schema) {
    validate_node(doc, schema, "$");
}

}  // namespace boundarykit
