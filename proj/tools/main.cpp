// Command line front-end: sample | calibrate | detect | estimate | rates.
// Exit codes: 0 success, 2 configuration, 3 numeric degeneracy, 4 I/O.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "boundarykit/json_io.hpp"
#include "boundarykit/pipeline.hpp"

namespace bk = boundarykit;
namespace fs = std::filesystem;

namespace {

struct SynthSpec {
    std::string kind;
    int n = 1000;
    std::uint64_t seed = 1;
    double length = 1.0;
    double radius = 1.0;
    double eta = 0.0075;
    double bump_delta = 0.6;
};

bk::SyntheticManifold make_from_spec(const SynthSpec& spec) {
    switch (bk::kind_from_name(spec.kind)) {
        case bk::ManifoldKind::segment: return bk::make_segment(spec.length);
        case bk::ManifoldKind::circle: return bk::make_circle(spec.radius);
        case bk::ManifoldKind::sphere: return bk::make_sphere(spec.radius);
        case bk::ManifoldKind::spiral: return bk::make_spiral();
        case bk::ManifoldKind::annulus: return bk::make_annulus();
        case bk::ManifoldKind::half_sphere: return bk::make_half_sphere();
        case bk::ManifoldKind::moebius: return bk::make_moebius();
        case bk::ManifoldKind::bumped_sphere:
            return bk::make_bumped_sphere(spec.eta, spec.bump_delta);
        case bk::ManifoldKind::bumped_ball:
            return bk::make_bumped_ball(spec.eta, spec.bump_delta);
    }
    throw bk::InvalidParams("unknown manifold kind '" + spec.kind + "'");
}

void add_synth_flags(CLI::App* cmd, SynthSpec& spec, bool require_kind) {
    auto* kind = cmd->add_option("--kind", spec.kind, "synthetic manifold kind");
    if (require_kind) kind->required();
    cmd->add_option("--n", spec.n, "sample size");
    cmd->add_option("--seed", spec.seed, "sampler seed");
    cmd->add_option("--length", spec.length, "segment length");
    cmd->add_option("--radius", spec.radius, "circle/sphere radius");
    cmd->add_option("--eta", spec.eta, "bump height");
    cmd->add_option("--bump-delta", spec.bump_delta, "bump support radius");
}

void add_param_flags(CLI::App* cmd, bk::PipelineOptions& opt, std::string& jump_rule) {
    cmd->add_option("--k", opt.k, "bandwidth neighbor count (0: d ln n rule)");
    cmd->add_option("--delta", opt.delta, "distortion tolerance for R0");
    cmd->add_option("--h", opt.h, "PCA bandwidth override");
    cmd->add_option("--R0", opt.R0, "localization scale override");
    cmd->add_option("--rho", opt.rho, "cell width override");
    cmd->add_option("--r", opt.r, "witness neighborhood radius");
    cmd->add_option("--eps-int", opt.eps_int, "interior patch radius override");
    cmd->add_option("--eps-bd", opt.eps_bd, "boundary patch radius override");
    cmd->add_option("--jump-rule", jump_rule, "rho jump rule: max | first-above-factor");
    cmd->add_option("--threads", opt.threads,
                    "worker threads (0: BOUNDARYKIT_THREADS or hardware)");
}

fs::path prepare_out_dir(const std::string& dir) {
    fs::path p(dir);
    std::error_code ec;
    fs::create_directories(p, ec);
    if (ec) throw bk::IoError("cannot create output directory '" + dir + "'");
    return p;
}

struct LoadedInput {
    bk::PointCloud cloud;
    std::optional<bk::SyntheticManifold> truth;
};

LoadedInput load_input(const std::string& input, int d, const SynthSpec& spec) {
    if (!input.empty()) {
        if (d < 1) throw bk::InvalidParams("--d is required with --input");
        return {bk::load_cloud_csv(input, d), std::nullopt};
    }
    if (spec.kind.empty())
        throw bk::InvalidParams("exactly one of --input or --kind is required");
    bk::SyntheticManifold manifold = make_from_spec(spec);
    return {manifold.sample_uniform(spec.n, spec.seed), manifold};
}

void write_calibration_files(const bk::CalibrationReport& report, const fs::path& dir) {
    bk::save_json(bk::calibration_to_json(report), (dir / "calibration.json").string());
    bk::write_distortion_csv(report, (dir / "distortion.csv").string());
    bk::write_radii_csv(report, (dir / "radii.csv").string());
}

nlohmann::json run_summary(const bk::PipelineRun& run, const bk::PointCloud& cloud) {
    nlohmann::json doc;
    doc["n"] = cloud.size();
    doc["ambient_dim"] = cloud.ambient_dim();
    doc["intrinsic_dim"] = cloud.intrinsic_dim();
    doc["params"] = {{"h", run.params.h},
                     {"R0", run.params.R0},
                     {"r", run.params.r},
                     {"rho", run.params.rho}};
    doc["r_eff"] = run.r_eff;
    doc["detected_count"] = static_cast<int>(run.boundary.detected.size());
    doc["degenerate_count"] = static_cast<int>(run.boundary.degenerate.size());
    return doc;
}

int cmd_sample(const SynthSpec& spec, const std::string& out) {
    bk::SyntheticManifold manifold = make_from_spec(spec);
    bk::PointCloud cloud = manifold.sample_uniform(spec.n, spec.seed);
    fs::path csv(out);
    if (csv.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(csv.parent_path(), ec);
        if (ec) throw bk::IoError("cannot create directory for '" + out + "'");
    }
    bk::save_cloud_csv(cloud, csv.string());
    fs::path sidecar = csv;
    sidecar.replace_extension(".json");
    bk::save_json(bk::sample_sidecar(manifold, spec.n, spec.seed), sidecar.string());
    std::cout << "wrote " << csv.string() << " (" << cloud.size() << " x "
              << cloud.ambient_dim() << ") and " << sidecar.string() << "\n";
    return 0;
}

int cmd_calibrate(const LoadedInput& input, const bk::PipelineOptions& opt,
                  const fs::path& dir) {
    bk::PipelineRun run = bk::run_detection(input.cloud, opt);
    write_calibration_files(run.calibration, dir);
    std::cout << "h=" << run.params.h << " R0=" << run.params.R0
              << " rho=" << run.params.rho << " r=" << run.params.r << "\n";
    return 0;
}

int cmd_detect(const LoadedInput& input, const bk::PipelineOptions& opt,
               const fs::path& dir) {
    bk::PipelineRun run = bk::run_detection(input.cloud, opt);
    write_calibration_files(run.calibration, dir);
    bk::save_json(bk::boundary_to_json(run.boundary, input.cloud),
                  (dir / "boundary.json").string());
    bk::write_boundary_csv(run.boundary, input.cloud, (dir / "boundary.csv").string());
    std::cout << "detected " << run.boundary.detected.size() << " of "
              << input.cloud.size() << " points\n";
    return 0;
}

int cmd_estimate(const LoadedInput& input, const bk::PipelineOptions& opt,
                 const fs::path& dir, int m_truth, int per_patch, std::uint64_t eval_seed) {
    bk::PipelineRun run = bk::run_detection(input.cloud, opt);
    bk::add_patches(run, input.cloud, opt);

    write_calibration_files(run.calibration, dir);
    bk::save_json(bk::boundary_to_json(run.boundary, input.cloud),
                  (dir / "boundary.json").string());
    bk::write_boundary_csv(run.boundary, input.cloud, (dir / "boundary.csv").string());
    bk::save_json(bk::patches_to_json(run.patches), (dir / "patches.json").string());

    nlohmann::json metrics = run_summary(run, input.cloud);
    metrics["eps_int"] = run.eps_int;
    metrics["eps_bd"] = run.eps_bd;
    metrics["inner_patches"] = static_cast<int>(run.patches.inner.size());
    metrics["boundary_patches"] = static_cast<int>(run.patches.boundary.size());
    metrics["warnings"] = run.patches.warnings;
    if (input.truth.has_value()) {
        bk::HausdorffReport hd = bk::hausdorff_to_truth(run.patches, *input.truth, m_truth,
                                                        per_patch, eval_seed, opt.threads);
        metrics["hausdorff"] = bk::hausdorff_to_json(hd);
    }
    bk::save_json(metrics, (dir / "metrics.json").string());
    std::cout << "patches: " << run.patches.inner.size() << " inner, "
              << run.patches.boundary.size() << " boundary\n";
    return 0;
}

int cmd_rates(const SynthSpec& spec, const std::vector<int>& ns, int seed_count,
              const bk::PipelineOptions& opt, const fs::path& dir, int grid, int m_truth,
              int per_patch) {
    bk::SyntheticManifold manifold = make_from_spec(spec);
    std::vector<std::uint64_t> seeds;
    for (int s = 0; s < seed_count; ++s) seeds.push_back(spec.seed + static_cast<unsigned>(s));
    bk::RateSummary summary =
        bk::rate_sweep(manifold, ns, seeds, opt, grid, m_truth, per_patch);

    std::ofstream csv(dir / "rates.csv");
    if (!csv) throw bk::IoError("cannot open rates.csv for writing");
    csv << "n,seed,detected,dH_boundary_cover,dH_boundary_excess,dH_manifold,"
           "sup_M_to_Mhat,sup_Mhat_to_M,truth_resolution\n";
    for (const bk::RateRow& row : summary.rows)
        csv << row.n << ',' << row.seed << ',' << row.detected_count << ','
            << bk::format_double(row.cover) << ',' << bk::format_double(row.excess) << ','
            << bk::format_double(row.hausdorff) << ','
            << bk::format_double(row.sup_M_to_Mhat) << ','
            << bk::format_double(row.sup_Mhat_to_M) << ','
            << bk::format_double(row.truth_resolution) << "\n";
    if (!csv) throw bk::IoError("failed writing rates.csv");

    auto slope_json = [](const std::optional<double>& s) {
        return s.has_value() ? nlohmann::json(*s) : nlohmann::json();
    };
    nlohmann::json doc = {{"kind", spec.kind},
                          {"rows", static_cast<int>(summary.rows.size())},
                          {"slope_cover", slope_json(summary.slope_cover)},
                          {"slope_excess", slope_json(summary.slope_excess)},
                          {"slope_manifold", slope_json(summary.slope_hausdorff)}};
    bk::save_json(doc, (dir / "rates.json").string());
    std::cout << doc.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"boundary detection and boundary-adaptive reconstruction for point clouds"};
    // the short -h would collide with the --h bandwidth override
    app.set_help_flag("--help", "print usage and exit");
    app.require_subcommand(1);

    SynthSpec spec;
    bk::PipelineOptions opt;
    std::string jump_rule;
    std::string input, out = "cloud.csv", out_dir = ".";
    int d = 0;
    int m_truth = 20000, per_patch = 32, grid = 720;
    std::vector<int> ns;
    int seed_count = 5;

    CLI::App* sample = app.add_subcommand("sample", "draw a synthetic cloud to CSV");
    add_synth_flags(sample, spec, true);
    sample->add_option("--out", out, "output CSV path");

    CLI::App* calibrate = app.add_subcommand("calibrate", "derive h, R0, rho from the data");
    CLI::App* detect = app.add_subcommand("detect", "calibrate and detect boundary points");
    CLI::App* estimate =
        app.add_subcommand("estimate", "detect, build patches, evaluate when synthetic");
    for (CLI::App* cmd : {calibrate, detect, estimate}) {
        cmd->add_option("--input", input, "cloud CSV path");
        cmd->add_option("--d", d, "intrinsic dimension of a CSV input");
        add_synth_flags(cmd, spec, false);
        add_param_flags(cmd, opt, jump_rule);
        cmd->add_option("--out-dir", out_dir, "output directory");
    }
    estimate->add_option("--m-truth", m_truth, "truth sample size for the Hausdorff report");
    estimate->add_option("--per-patch", per_patch, "estimator samples per patch");

    CLI::App* rates = app.add_subcommand("rates", "detection and estimation error sweep");
    add_synth_flags(rates, spec, true);
    add_param_flags(rates, opt, jump_rule);
    rates->add_option("--n-list", ns, "sample sizes")->delimiter(',')->required();
    rates->add_option("--seeds", seed_count, "seeds per sample size");
    rates->add_option("--grid", grid, "boundary grid size for cover error");
    rates->add_option("--m-truth", m_truth, "truth sample size per run");
    rates->add_option("--per-patch", per_patch, "estimator samples per patch");
    rates->add_option("--out-dir", out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (!jump_rule.empty()) opt.jump_rule = bk::jump_rule_from_name(jump_rule);
        if (sample->parsed()) return cmd_sample(spec, out);

        fs::path dir = prepare_out_dir(out_dir);
        if (calibrate->parsed() || detect->parsed() || estimate->parsed()) {
            if (!input.empty() && !spec.kind.empty())
                throw bk::InvalidParams("--input and --kind are mutually exclusive");
            LoadedInput loaded = load_input(input, d, spec);
            if (calibrate->parsed()) return cmd_calibrate(loaded, opt, dir);
            if (detect->parsed()) return cmd_detect(loaded, opt, dir);
            return cmd_estimate(loaded, opt, dir, m_truth, per_patch, spec.seed + 0x51u);
        }
        return cmd_rates(spec, ns, seed_count, opt, dir, grid, m_truth, per_patch);
    } catch (const bk::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const bk::NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const bk::InvalidParams& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
