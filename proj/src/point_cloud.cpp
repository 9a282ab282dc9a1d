#include "boundarykit/point_cloud.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

namespace boundarykit {

PointCloud::PointCloud(Eigen::MatrixXd points, int intrinsic_dim)
    : pts_(std::move(points)), d_(intrinsic_dim) {
    if (pts_.rows() < 1) throw EmptyInput("point cloud needs at least one point");
    int D = static_cast<int>(pts_.cols());
    if (D < 1 || D > kMaxAmbientDim)
        throw DimensionTooHigh("ambient dimension " + std::to_string(D) +
                               " outside [1, " + std::to_string(kMaxAmbientDim) + "]");
    if (d_ < 1 || d_ > D)
        throw DimensionMismatch("intrinsic dimension " + std::to_string(d_) +
                                " outside [1, " + std::to_string(D) + "]");
    if (!pts_.allFinite()) throw InvalidParams("point cloud contains non-finite values");
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

static double parse_double(std::string_view tok, const std::string& path, int line) {
    double v = 0.0;
    // from_chars rejects leading '+' and whitespace; trim spaces only
    std::size_t b = tok.find_first_not_of(" \t");
    std::size_t e = tok.find_last_not_of(" \t\r");
    if (b == std::string_view::npos)
        throw IoError(path + ":" + std::to_string(line) + ": empty field");
    tok = tok.substr(b, e - b + 1);
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
        throw IoError(path + ":" + std::to_string(line) + ": bad number '" +
                      std::string(tok) + "'");
    return v;
}

PointCloud load_cloud_csv(const std::string& path, int intrinsic_dim) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);

    std::string line;
    if (!std::getline(in, line)) throw IoError(path + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    // header must be exactly x0,...,x{D-1}
    std::vector<std::string> cols;
    {
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) cols.push_back(tok);
    }
    int D = static_cast<int>(cols.size());
    for (int k = 0; k < D; ++k)
        if (cols[k] != "x" + std::to_string(k))
            throw IoError(path + ": expected header column x" + std::to_string(k) +
                          ", got '" + cols[k] + "'");

    std::vector<double> values;
    int nline = 1;
    while (std::getline(in, line)) {
        ++nline;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        int got = 0;
        std::size_t pos = 0;
        while (true) {
            std::size_t next = line.find(',', pos);
            std::string_view tok(line.data() + pos,
                                 (next == std::string::npos ? line.size() : next) - pos);
            values.push_back(parse_double(tok, path, nline));
            ++got;
            if (next == std::string::npos) break;
            pos = next + 1;
        }
        if (got != D)
            throw IoError(path + ":" + std::to_string(nline) + ": expected " +
                          std::to_string(D) + " fields, got " + std::to_string(got));
    }
    if (values.empty()) throw IoError(path + ": no data rows");

    int n = static_cast<int>(values.size()) / D;
    Eigen::MatrixXd pts(n, D);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < D; ++k) pts(i, k) = values[static_cast<std::size_t>(i) * D + k];
    try {
        return PointCloud(std::move(pts), intrinsic_dim);
    } catch (const InvalidParams& e) {
        throw IoError(path + ": " + e.what());
    }
}

void save_cloud_csv(const PointCloud& cloud, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    int D = cloud.ambient_dim();
    for (int k = 0; k < D; ++k) out << (k ? ",x" : "x") << k;
    out << '\n';
    for (int i = 0; i < cloud.size(); ++i) {
        for (int k = 0; k < D; ++k) {
            if (k) out << ',';
            out << format_double(cloud.points()(i, k));
        }
        out << '\n';
    }
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace boundarykit
