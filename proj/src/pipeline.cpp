#include "boundarykit/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace boundarykit {

double auto_R0_cap(const PointCloud& cloud, int cap_neighbors, int cap_sample) {
    if (cap_neighbors < 1 || cap_sample < 1)
        throw ParamsOutOfRange("auto_R0_cap: cap parameters must be positive");
    const int n = cloud.size();
    if (n < 2) throw ParamsOutOfRange("auto_R0_cap: need at least two points");
    const int m = std::min(cap_neighbors, n - 1);
    const int stride = std::max(1, n / cap_sample);

    const Eigen::MatrixXd& pts = cloud.points();
    std::vector<double> d2(static_cast<std::size_t>(n));
    std::vector<double> scales;
    for (int i = 0; i < n; i += stride) {
        for (int j = 0; j < n; ++j)
            d2[static_cast<std::size_t>(j)] = (pts.row(j) - pts.row(i)).squaredNorm();
        // m-th other point = (m + 1)-th including the zero self distance
        std::nth_element(d2.begin(), d2.begin() + m, d2.end());
        scales.push_back(std::sqrt(d2[static_cast<std::size_t>(m)]));
    }
    std::size_t mid = scales.size() / 2;
    std::nth_element(scales.begin(), scales.begin() + static_cast<std::ptrdiff_t>(mid),
                     scales.end());
    return scales[mid];
}

PipelineRun run_detection(const PointCloud& cloud, const PipelineOptions& opt) {
    PipelineRun run;
    CalibrationReport& report = run.calibration;

    report.k_used = opt.k > 0 ? opt.k : default_bandwidth_k(cloud);
    report.h = opt.h > 0.0 ? opt.h : bandwidth_h(cloud, report.k_used);

    run.tangents = estimate_all_tangents(cloud, report.h, opt.threads);

    if (opt.R0 > 0.0) {
        report.R0 = opt.R0;
    } else {
        report.R0 = std::min(scale_R0(cloud, run.tangents, opt.delta),
                             auto_R0_cap(cloud, opt.r0_cap_neighbors, opt.r0_cap_sample));
    }
    report.distortion_delta = opt.delta;
    report.distortion_samples = distortion_curve(cloud, run.tangents);

    std::vector<VoronoiProbe> probes =
        self_probes(cloud, run.tangents, report.R0, opt.threads);
    report.sorted_radii.reserve(probes.size());
    for (const VoronoiProbe& p : probes) report.sorted_radii.push_back(p.radius);
    std::sort(report.sorted_radii.begin(), report.sorted_radii.end());

    report.jump_rule = opt.jump_rule;
    const double clip = 4.0 * report.R0;
    if (opt.rho > 0.0) {
        report.rho = opt.rho;
    } else {
        report.jump = select_rho(report.sorted_radii, clip, opt.jump_rule);
        report.rho = report.jump.rho;
        // rho beyond 2 R0 carries no extra information (the decision set is
        // identical anywhere inside the jump gap) but violates the detection
        // contract, so pull it just under the cap
        double cap = 2.0 * report.R0 * 0.999;
        if (report.rho > cap) {
            report.rho = cap;
            report.rho_clamped = true;
        }
    }
    report.r = opt.r;

    run.params = DetectionParams{report.R0, opt.r, report.rho, report.h};
    run.boundary = detect(cloud, run.tangents, run.params, opt.threads,
                          NumericPolicy::standard(), &probes);

    double max_gap = bandwidth_h(cloud, std::min(2, cloud.size()));
    run.r_eff = opt.r > 0.0 ? opt.r : max_gap / 6.0;
    return run;
}

void add_patches(PipelineRun& run, const PointCloud& cloud, const PipelineOptions& opt) {
    run.eps_bd = opt.eps_bd > 0.0 ? opt.eps_bd : 18.0 * run.r_eff;
    run.eps_int =
        opt.eps_int > 0.0 ? opt.eps_int : bandwidth_h(cloud, std::min(3, cloud.size()));
    run.patches = build_patches(cloud, run.tangents, run.boundary, run.eps_int, run.eps_bd);
    run.has_patches = true;
}

std::optional<double> loglog_slope(const std::vector<std::pair<double, double>>& xy) {
    std::vector<double> xs;
    for (const auto& [x, y] : xy) {
        if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(x) || !std::isfinite(y))
            return std::nullopt;
        xs.push_back(x);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    if (xs.size() < 3) return std::nullopt;

    double mx = 0.0, my = 0.0;
    for (const auto& [x, y] : xy) {
        mx += std::log(x);
        my += std::log(y);
    }
    mx /= static_cast<double>(xy.size());
    my /= static_cast<double>(xy.size());
    double num = 0.0, den = 0.0;
    for (const auto& [x, y] : xy) {
        num += (std::log(x) - mx) * (std::log(y) - my);
        den += (std::log(x) - mx) * (std::log(x) - mx);
    }
    if (den == 0.0) return std::nullopt;
    return num / den;
}

RateSummary rate_sweep(const SyntheticManifold& manifold, const std::vector<int>& ns,
                       const std::vector<std::uint64_t>& seeds, const PipelineOptions& opt,
                       int boundary_grid_count, int m_truth, int per_patch) {
    if (ns.empty() || seeds.empty())
        throw ParamsOutOfRange("rate_sweep: empty n list or seed list");
    if (!manifold.has_boundary())
        throw InvalidParams("rate_sweep: the boundary metrics need a boundary");

    std::vector<Eigen::VectorXd> grid = manifold.boundary_grid(boundary_grid_count);
    RateSummary summary;
    for (int n : ns) {
        for (std::uint64_t seed : seeds) {
            PointCloud cloud = manifold.sample_uniform(n, seed);
            PipelineRun run = run_detection(cloud, opt);
            add_patches(run, cloud, opt);

            RateRow row;
            row.n = n;
            row.seed = seed;
            row.detected_count = static_cast<int>(run.boundary.detected.size());

            double cover = 0.0;
            for (const Eigen::VectorXd& g : grid) {
                double best = std::numeric_limits<double>::infinity();
                for (int i : run.boundary.detected)
                    best = std::min(best, (cloud.point(i) - g).norm());
                cover = std::max(cover, best);
            }
            row.cover = cover;  // +inf when nothing was detected

            double excess = run.boundary.detected.empty()
                                ? std::numeric_limits<double>::infinity()
                                : 0.0;
            for (int i : run.boundary.detected)
                excess = std::max(excess, manifold.distance_to_boundary(cloud.point(i)));
            row.excess = excess;

            HausdorffReport hd =
                hausdorff_to_truth(run.patches, manifold, m_truth, per_patch, seed ^ 0x9E37u,
                                   opt.threads);
            row.sup_M_to_Mhat = hd.sup_M_to_Mhat;
            row.sup_Mhat_to_M = hd.sup_Mhat_to_M;
            row.hausdorff = hd.hausdorff();
            row.truth_resolution = hd.truth_resolution;
            summary.rows.push_back(row);
        }
    }

    std::vector<std::pair<double, double>> cover_xy, excess_xy, hd_xy;
    for (const RateRow& row : summary.rows) {
        cover_xy.emplace_back(row.n, row.cover);
        excess_xy.emplace_back(row.n, row.excess);
        hd_xy.emplace_back(row.n, row.hausdorff);
    }
    summary.slope_cover = loglog_slope(cover_xy);
    summary.slope_excess = loglog_slope(excess_xy);
    summary.slope_hausdorff = loglog_slope(hd_xy);
    return summary;
}

}  // namespace boundarykit
