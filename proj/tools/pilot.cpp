// Measurement runs behind the frozen constants in
// tests/acceptance/frozen_thresholds.hpp.  Each stage prints what it
// measured; nothing here is wired into ctest.  Regenerate with
//   boundarykit-pilot [stage ...]
// stages: radii c3 c4c5 c6 c7 tangent eps   (default: all but c6)

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include "boundarykit/json_io.hpp"
#include "boundarykit/pipeline.hpp"

namespace bk = boundarykit;

namespace {

double percentile(std::vector<double> v, double q) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    double idx = q * (static_cast<double>(v.size()) - 1.0);
    std::size_t lo = static_cast<std::size_t>(idx);
    std::size_t hi = std::min(lo + 1, v.size() - 1);
    double f = idx - static_cast<double>(lo);
    return v[lo] * (1.0 - f) + v[hi] * f;
}

void print_radii_profile(const std::string& name, const bk::PipelineRun& run) {
    const std::vector<double>& r = run.calibration.sorted_radii;
    std::cout << "  " << name << ": n=" << r.size() << " min=" << r.front()
              << " p50=" << percentile(r, 0.5) << " p90=" << percentile(r, 0.9)
              << " p99=" << percentile(r, 0.99) << " max=" << r.back() << "\n";
    std::cout << "    top radii:";
    for (std::size_t k = r.size() >= 12 ? r.size() - 12 : 0; k < r.size(); ++k)
        std::cout << ' ' << r[k];
    std::cout << "\n    largest consecutive ratios above p50:";
    std::vector<std::pair<double, double>> ratios;  // (ratio, hi)
    double med = percentile(r, 0.5);
    for (std::size_t k = 0; k + 1 < r.size(); ++k)
        if (r[k] > 0.0 && r[k + 1] >= med) ratios.emplace_back(r[k + 1] / r[k], r[k + 1]);
    std::sort(ratios.rbegin(), ratios.rend());
    for (std::size_t k = 0; k < std::min<std::size_t>(5, ratios.size()); ++k)
        std::cout << " " << ratios[k].first << "@" << ratios[k].second;
    std::cout << "\n    rho=" << run.params.rho << " (rule "
              << bk::jump_rule_name(run.calibration.jump_rule)
              << ", found=" << run.calibration.jump.found_jump
              << ", clamped=" << run.calibration.rho_clamped << ")"
              << " R0=" << run.params.R0 << " h=" << run.params.h
              << " detected=" << run.boundary.detected.size() << "\n";
}

void stage_radii() {
    std::cout << "[radii] sorted self-probe radii profiles\n";
    bk::PipelineOptions opt;
    {
        bk::PointCloud cloud = bk::make_circle().sample_uniform(1500, 1);
        print_radii_profile("circle n=1500 seed=1", bk::run_detection(cloud, opt));
    }
    {
        bk::PointCloud cloud = bk::make_sphere().sample_uniform(4000, 1);
        print_radii_profile("sphere n=4000 seed=1", bk::run_detection(cloud, opt));
    }
    for (std::uint64_t seed : {1, 2, 3}) {
        bk::PointCloud cloud = bk::make_annulus().sample_uniform(3000, seed);
        print_radii_profile("annulus n=3000 seed=" + std::to_string(seed),
                            bk::run_detection(cloud, opt));
    }
}

void stage_c3() {
    std::cout << "[c3] boundaryless false positives over 20 seeds\n";
    bk::PipelineOptions opt;
    for (const auto& [name, manifold, n] :
         {std::tuple{"circle", bk::make_circle(), 1500},
          std::tuple{"sphere", bk::make_sphere(), 4000}}) {
        int clean = 0;
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            bk::PointCloud cloud = manifold.sample_uniform(n, seed);
            bk::PipelineRun run = bk::run_detection(cloud, opt);
            if (run.boundary.detected.empty()) {
                ++clean;
            } else {
                std::cout << "  " << name << " seed " << seed << ": detected "
                          << run.boundary.detected.size()
                          << " (rho=" << run.params.rho
                          << ", max radius=" << run.calibration.sorted_radii.back() << ")\n";
            }
        }
        std::cout << "  " << name << " n=" << n << ": " << clean << "/20 empty\n";
    }
}

void stage_c4c5() {
    std::cout << "[c4c5] annulus n=3000, seeds 1..10: excess, cover, normal error\n";
    bk::SyntheticManifold annulus = bk::make_annulus();
    std::vector<Eigen::VectorXd> grid = annulus.boundary_grid(720);
    bk::PipelineOptions opt;
    double tau = std::min(annulus.reaches().manifold, annulus.reaches().boundary);

    double worst_excess = 0.0, worst_cover = 0.0, worst_p95 = 0.0, worst_bound_ratio = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        bk::PointCloud cloud = annulus.sample_uniform(3000, seed);
        bk::PipelineRun run = bk::run_detection(cloud, opt);

        double excess = 0.0;
        std::vector<double> normal_err;
        for (std::size_t t = 0; t < run.boundary.detected.size(); ++t) {
            int i = run.boundary.detected[t];
            excess = std::max(excess, annulus.distance_to_boundary(cloud.point(i)));
            Eigen::VectorXd eta = run.boundary.normals[t];
            if (eta.norm() > 1e-9)
                normal_err.push_back(
                    (annulus.exact_outward_normal(cloud.point(i)) - eta / eta.norm()).norm());
        }
        double cover = 0.0;
        for (const Eigen::VectorXd& g : grid) {
            double best = std::numeric_limits<double>::infinity();
            for (int i : run.boundary.detected)
                best = std::min(best, (cloud.point(i) - g).norm());
            cover = std::max(cover, best);
        }
        double p95 = percentile(normal_err, 0.95);
        double bound = 2.0 * 20.0 * run.r_eff / std::sqrt(run.params.R0 * tau);
        std::cout << "  seed " << seed << ": detected=" << run.boundary.detected.size()
                  << " excess=" << excess << " cover=" << cover << " p95_normal=" << p95
                  << " bound=" << bound << " r_eff=" << run.r_eff << " R0=" << run.params.R0
                  << " rho=" << run.params.rho << "\n";
        worst_excess = std::max(worst_excess, excess);
        worst_cover = std::max(worst_cover, cover);
        worst_p95 = std::max(worst_p95, p95);
        worst_bound_ratio = std::max(worst_bound_ratio, p95 / bound);
    }
    std::cout << "  worst: excess=" << worst_excess << " cover=" << worst_cover
              << " p95_normal=" << worst_p95 << " p95/bound=" << worst_bound_ratio << "\n";
}

void stage_c6() {
    std::cout << "[c6] annulus rate sweep (5 seeds)\n";
    bk::PipelineOptions opt;
    bk::RateSummary summary =
        bk::rate_sweep(bk::make_annulus(), {500, 1000, 2000, 4000, 8000}, {1, 2, 3, 4, 5},
                       opt, 720, 4000, 8);
    for (const bk::RateRow& row : summary.rows)
        std::cout << "  n=" << row.n << " seed=" << row.seed
                  << " detected=" << row.detected_count << " cover=" << row.cover
                  << " excess=" << row.excess << " dH=" << row.hausdorff << "\n";
    auto show = [](const char* name, const std::optional<double>& s) {
        std::cout << "  slope_" << name << "=";
        if (s.has_value())
            std::cout << *s << "\n";
        else
            std::cout << "null\n";
    };
    show("cover", summary.slope_cover);
    show("excess", summary.slope_excess);
    show("hausdorff", summary.slope_hausdorff);
}

void stage_c7() {
    std::cout << "[c7] annulus n=4000: adaptive vs all-inner reconstruction\n";
    bk::SyntheticManifold annulus = bk::make_annulus();
    for (std::uint64_t seed : {3, 7}) {
        bk::PointCloud cloud = annulus.sample_uniform(4000, seed);
        bk::PipelineOptions opt;
        bk::PipelineRun run = bk::run_detection(cloud, opt);
        bk::add_patches(run, cloud, opt);
        bk::HausdorffReport adaptive =
            bk::hausdorff_to_truth(run.patches, annulus, 20000, 32, seed * 101);

        bk::BoundaryResult none;
        none.probe_radii.assign(static_cast<std::size_t>(cloud.size()), 0.0);
        bk::PatchComplex flat =
            bk::build_patches(cloud, run.tangents, none, run.eps_int, run.eps_bd);
        bk::HausdorffReport all_inner =
            bk::hausdorff_to_truth(flat, annulus, 20000, 32, seed * 101);

        std::cout << "  seed " << seed << ": eps_int=" << run.eps_int
                  << " eps_bd=" << run.eps_bd << "\n";
        std::cout << "    adaptive : sup_M=" << adaptive.sup_M_to_Mhat
                  << " sup_Mhat=" << adaptive.sup_Mhat_to_M
                  << " dH=" << adaptive.hausdorff()
                  << " resolution=" << adaptive.truth_resolution << "\n";
        std::cout << "    all-inner: sup_M=" << all_inner.sup_M_to_Mhat
                  << " sup_Mhat=" << all_inner.sup_Mhat_to_M
                  << " dH=" << all_inner.hausdorff() << "\n";
    }
}

void stage_tangent() {
    std::cout << "[tangent] principal angle of estimated vs exact frames\n";
    for (const auto& [name, manifold, n] :
         {std::tuple{"sphere", bk::make_sphere(), 4000},
          std::tuple{"annulus", bk::make_annulus(), 3000},
          std::tuple{"circle", bk::make_circle(), 1500}}) {
        bk::PointCloud cloud = manifold.sample_uniform(n, 1);
        double h = bk::bandwidth_h(cloud);
        bk::TangentField tangents = bk::estimate_all_tangents(cloud, h);
        std::vector<double> angles;
        for (int i = 0; i < cloud.size(); ++i)
            angles.push_back(bk::principal_angle(tangents.frame(i),
                                                 manifold.exact_tangent(cloud.point(i))));
        std::cout << "  " << name << " n=" << n << " h=" << h
                  << ": p50=" << percentile(angles, 0.5)
                  << " p95=" << percentile(angles, 0.95)
                  << " max=" << *std::max_element(angles.begin(), angles.end()) << "\n";
    }
}

void stage_eps() {
    std::cout << "[eps] default patch radii\n";
    for (int n : {500, 1000, 2000, 4000, 8000}) {
        bk::PointCloud cloud = bk::make_annulus().sample_uniform(n, 1);
        double g = bk::bandwidth_h(cloud, 2);
        double eps_int = bk::bandwidth_h(cloud, 3);
        std::cout << "  annulus n=" << n << ": g=" << g << " r_eff=" << g / 6.0
                  << " eps_bd=" << 3.0 * g << " eps_int=" << eps_int << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> stages(argv + 1, argv + argc);
    if (stages.empty()) stages = {"radii", "c3", "c4c5", "c7", "tangent", "eps"};
    std::cout.precision(6);
    for (const std::string& stage : stages) {
        if (stage == "radii") stage_radii();
        else if (stage == "c3") stage_c3();
        else if (stage == "c4c5") stage_c4c5();
        else if (stage == "c6") stage_c6();
        else if (stage == "c7") stage_c7();
        else if (stage == "tangent") stage_tangent();
        else if (stage == "eps") stage_eps();
        else {
            std::cerr << "unknown stage '" << stage << "'\n";
            return 2;
        }
    }
    return 0;
}
