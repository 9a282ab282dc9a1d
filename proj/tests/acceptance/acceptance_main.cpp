// Acceptance gate.  Nine release criteria, one PASS or FAIL line each with
// the measured numbers; the exit status is the count of failed criteria.
// Stage names select a subset:
//   acceptance [c1 c2 c3 c4c5 c6 c7 c8 c9]
// Criteria with no closed-form threshold read frozen_thresholds.hpp.

#include <sys/wait.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "boundarykit/pipeline.hpp"
#include "boundarykit/voronoi.hpp"
#include "frozen_thresholds.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace boundarykit;

namespace {

constexpr double kInfty = std::numeric_limits<double>::infinity();

int g_failures = 0;

void report(const std::string& name, bool pass, const std::string& detail) {
    std::cout << name << ' ' << (pass ? "PASS" : "FAIL") << "  " << detail << std::endl;
    if (!pass) ++g_failures;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
}

double percentile(std::vector<double> v, double q) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    double idx = q * (static_cast<double>(v.size()) - 1.0);
    std::size_t lo = static_cast<std::size_t>(idx);
    std::size_t hi = std::min(lo + 1, v.size() - 1);
    double f = idx - static_cast<double>(lo);
    return v[lo] * (1.0 - f) + v[hi] * f;
}

// C1: the exact cell probe against the rejection-sampling oracle, plus the
// interval closed form in dimension one.
void c1() {
    CounterRng rng(11);
    double worst = 0.0, worst_1d = 0.0;
    for (int c = 0; c < 200; ++c) {
        int d = 1 + c % 3;
        int m = 2 + static_cast<int>(rng.uniform(0.0, 24.0));
        std::vector<Eigen::VectorXd> sites;
        sites.reserve(static_cast<std::size_t>(m));
        for (int s = 0; s < m; ++s) sites.push_back(testutil::rand_vec(rng, d, -1.0, 1.0));
        int p = std::min(m - 1, static_cast<int>(rng.uniform(0.0, static_cast<double>(m))));
        double clip = rng.uniform(0.3, 1.5);

        double lib = cell_probe(sites, p, clip).radius;
        double oracle =
            oracles::voronoi_radius(sites, p, clip, 4000u + static_cast<std::uint64_t>(c),
                                    2'000'000)
                .radius;
        worst = std::max(worst, std::abs(lib - oracle));
        if (d == 1) {
            std::vector<double> line;
            for (const Eigen::VectorXd& s : sites) line.push_back(s(0));
            worst_1d =
                std::max(worst_1d, std::abs(lib - oracles::interval_radius(line, p, clip)));
        }
    }
    report("C1", worst <= 2e-3 && worst_1d <= 1e-12,
           "cell probe vs rejection oracle over 200 instances: max |diff| = " + fmt(worst) +
               " (tol 2e-3); d=1 closed form max |diff| = " + fmt(worst_1d) + " (tol 1e-12)");
}

// C2: exact half-ball distance against the dense grid oracle.
void c2() {
    CounterRng rng(12);
    double worst = 0.0;
    for (int c = 0; c < 100; ++c) {
        int D = 2 + c % 5;
        Frame frame = testutil::random_frame(rng, D, 2);
        BoundaryPatch patch;
        patch.center = testutil::rand_vec(rng, D, -1.0, 1.0);
        patch.frame = frame;
        patch.radius = rng.uniform(0.05, 0.2);
        double angle = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
        Eigen::Vector2d w(std::cos(angle), std::sin(angle));
        patch.normal = frame.basis() * w;

        Eigen::VectorXd z =
            patch.center + frame.basis() * testutil::rand_vec(rng, 2, -2.0 * patch.radius,
                                                              2.0 * patch.radius);
        Eigen::VectorXd off = testutil::rand_vec(rng, D, -1.0, 1.0);
        off -= frame.basis() * frame.project_coeffs(off);
        z += off * rng.uniform(0.0, 1.0);

        double lib = distance_to_boundary_patch(z, patch);
        double grid = oracles::halfdisk_grid_distance(z, patch.center, frame.basis(), w,
                                                      patch.radius, 5e-4);
        worst = std::max(worst, std::abs(lib - grid));
    }
    report("C2", worst <= 1e-3,
           "half-ball distance vs grid oracle over 100 instances: max |diff| = " + fmt(worst) +
               " (tol 1e-3)");
}

// C3: boundaryless manifolds must come out empty under auto calibration.
void c3() {
    PipelineOptions opt;
    int circle_empty = 0, sphere_empty = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        PointCloud circle = make_circle().sample_uniform(1500, seed);
        if (run_detection(circle, opt).boundary.detected.empty()) ++circle_empty;
        PointCloud sphere = make_sphere().sample_uniform(4000, seed);
        if (run_detection(sphere, opt).boundary.detected.empty()) ++sphere_empty;
    }
    report("C3", circle_empty >= 19 && sphere_empty >= 19,
           "false positives on boundaryless shapes: circle " + std::to_string(circle_empty) +
               "/20 empty, sphere " + std::to_string(sphere_empty) + "/20 empty (need 19/20)");
}

// C4 and C5 share the same ten annulus runs: detected-point excess and
// boundary-grid cover against the frozen thresholds, then the normal-error
// 95th percentile against the analytic per-run bound.
void c4c5() {
    SyntheticManifold annulus = make_annulus();
    std::vector<Eigen::VectorXd> grid = annulus.boundary_grid(720);
    double tau = std::min(annulus.reaches().manifold, annulus.reaches().boundary);
    PipelineOptions opt;

    int pass4 = 0, pass5 = 0;
    double worst_excess = 0.0, worst_cover = 0.0, worst_p95 = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        PointCloud cloud = annulus.sample_uniform(3000, seed);
        PipelineRun run = run_detection(cloud, opt);

        double excess = run.boundary.detected.empty() ? kInfty : 0.0;
        std::vector<double> errs;
        for (std::size_t t = 0; t < run.boundary.detected.size(); ++t) {
            int i = run.boundary.detected[t];
            excess = std::max(excess, annulus.distance_to_boundary(cloud.point(i)));
            const Eigen::VectorXd& eta = run.boundary.normals[t];
            if (eta.norm() > 1e-9)
                errs.push_back(
                    (annulus.exact_outward_normal(cloud.point(i)) - eta / eta.norm()).norm());
        }
        double cover = 0.0;
        for (const Eigen::VectorXd& g : grid) {
            double best = kInfty;
            for (int i : run.boundary.detected)
                best = std::min(best, (cloud.point(i) - g).norm());
            cover = std::max(cover, best);
        }

        if (excess <= frozen::kC4ExcessMax && cover <= frozen::kC4CoverMax) ++pass4;
        double bound =
            frozen::kC5SlackFactor * 20.0 * run.r_eff / std::sqrt(run.params.R0 * tau);
        double p95 = errs.empty() ? kInfty : percentile(errs, 0.95);
        if (p95 <= bound) ++pass5;

        worst_excess = std::max(worst_excess, excess);
        worst_cover = std::max(worst_cover, cover);
        worst_p95 = std::max(worst_p95, p95);
    }
    report("C4", pass4 >= frozen::kC4MinPassingSeeds,
           "annulus detection, 10 seeds: " + std::to_string(pass4) +
               " passing, worst excess = " + fmt(worst_excess) + " (max " +
               fmt(frozen::kC4ExcessMax) + "), worst cover = " + fmt(worst_cover) + " (max " +
               fmt(frozen::kC4CoverMax) + ")");
    report("C5", pass5 >= frozen::kC5MinPassingSeeds,
           "normal accuracy, 10 seeds: " + std::to_string(pass5) +
               " passing, worst p95 error = " + fmt(worst_p95) + " vs 2x analytic bound");
}

// C6: empirical convergence rates on the annulus.
void c6() {
    RateSummary summary = rate_sweep(make_annulus(), {500, 1000, 2000, 4000, 8000},
                                     {1, 2, 3, 4, 5}, PipelineOptions{}, 720, 4000, 8);
    double nan = std::numeric_limits<double>::quiet_NaN();
    double sc = summary.slope_cover.value_or(nan);
    double se = summary.slope_excess.value_or(nan);
    bool pass = summary.slope_cover.has_value() && summary.slope_excess.has_value() &&
                sc >= frozen::kC6CoverSlopeLo && sc <= frozen::kC6CoverSlopeHi &&
                se >= frozen::kC6ExcessSlopeLo && se <= frozen::kC6ExcessSlopeHi;
    report("C6", pass,
           "rate slopes over 25 runs: cover " + fmt(sc) + " (band [" +
               fmt(frozen::kC6CoverSlopeLo) + ", " + fmt(frozen::kC6CoverSlopeHi) +
               "]), excess " + fmt(se) + " (band [" + fmt(frozen::kC6ExcessSlopeLo) + ", " +
               fmt(frozen::kC6ExcessSlopeHi) + "])");
}

// C7: the boundary-adaptive reconstruction beats the all-inner one and stays
// under the frozen Hausdorff budget.
void c7() {
    SyntheticManifold annulus = make_annulus();
    PointCloud cloud = annulus.sample_uniform(4000, 3);
    PipelineOptions opt;
    PipelineRun run = run_detection(cloud, opt);
    add_patches(run, cloud, opt);
    HausdorffReport adaptive = hausdorff_to_truth(run.patches, annulus, 20000, 32, 303);

    BoundaryResult none;
    none.probe_radii.assign(static_cast<std::size_t>(cloud.size()), 0.0);
    PatchComplex flat = build_patches(cloud, run.tangents, none, run.eps_int, run.eps_bd);
    HausdorffReport all_inner = hausdorff_to_truth(flat, annulus, 20000, 32, 303);

    bool pass = adaptive.hausdorff() <= frozen::kC7HausdorffMax &&
                adaptive.hausdorff() < all_inner.hausdorff();
    report("C7", pass,
           "annulus n=4000: adaptive dH = " + fmt(adaptive.hausdorff()) + " (max " +
               fmt(frozen::kC7HausdorffMax) +
               "), all-inner dH = " + fmt(all_inner.hausdorff()));
}

// C8: kernel derivative certificates by finite differences, and the bit-exact
// identity of the push map outside its support.
void c8() {
    const int N = 41;
    const double step_g = 1e-6, step_h = 1e-4;
    double worst_grad = 0.0, worst_hess = 0.0;
    auto phi2 = [](const Eigen::Vector2d& v) { return BumpMap::phi(v); };
    for (int a = 0; a < N; ++a) {
        for (int b = 0; b < N; ++b) {
            Eigen::Vector2d y(-1.0 + 2.0 * a / (N - 1.0), -1.0 + 2.0 * b / (N - 1.0));
            if (y.norm() > 1.0) continue;

            Eigen::Vector2d g;
            for (int k = 0; k < 2; ++k) {
                Eigen::Vector2d e = Eigen::Vector2d::Zero();
                e(k) = step_g;
                g(k) = (phi2(y + e) - phi2(y - e)) / (2.0 * step_g);
            }
            worst_grad = std::max(worst_grad, g.norm());

            Eigen::Matrix2d H;
            for (int k = 0; k < 2; ++k) {
                Eigen::Vector2d e = Eigen::Vector2d::Zero();
                e(k) = step_h;
                H(k, k) = (phi2(y + e) - 2.0 * phi2(y) + phi2(y - e)) / (step_h * step_h);
            }
            Eigen::Vector2d e0(step_h, 0.0), e1(0.0, step_h);
            H(0, 1) = H(1, 0) = (phi2(y + e0 + e1) - phi2(y + e0 - e1) - phi2(y - e0 + e1) +
                                 phi2(y - e0 - e1)) /
                                (4.0 * step_h * step_h);
            Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(H);
            worst_hess = std::max(worst_hess, es.eigenvalues().cwiseAbs().maxCoeff());
        }
    }
    bool kernel_ok = worst_grad <= 2.5 * 1.01 && worst_hess <= 23.0 * 1.01;

    Eigen::VectorXd x0(2), dir(2);
    x0 << 1.0, 0.0;
    dir << 1.0, 0.0;
    BumpMap bump(x0, 0.5, 0.01, dir);
    CounterRng rng(13);
    double worst_identity = 0.0;
    for (int c = 0; c < 500; ++c) {
        Eigen::VectorXd x = testutil::rand_vec(rng, 2, -3.0, 3.0);
        double dist = (x - x0).norm();
        if (dist < 0.5) x = x0 + (x - x0) * (0.5001 / std::max(dist, 1e-12));
        worst_identity = std::max(worst_identity, (bump.apply(x) - x).norm());
    }
    bool identity_ok = worst_identity <= 1e-15;
    report("C8", kernel_ok && identity_ok,
           "kernel certificates: sup |grad phi| = " + fmt(worst_grad) +
               " (max 2.525), sup |hess phi| = " + fmt(worst_hess) +
               " (max 23.23); identity outside support: max |Phi(x) - x| = " +
               fmt(worst_identity) + " (tol 1e-15)");
}

// C9: every module's property suite, rerun as shipped binaries.
void c9() {
    const char* bins[] = {BK_BIN_GEOMCORE, BK_BIN_TANGENT,  BK_BIN_VORONOI,
                          BK_BIN_DETECTOR, BK_BIN_PATCHES,  BK_BIN_SYNTH,
                          BK_BIN_CALIBRATE, BK_BIN_IO,      BK_BIN_PIPELINE,
                          BK_BIN_CLI};
    std::string failing;
    for (const char* bin : bins) {
        std::string cmd = std::string("\"") + bin + "\" > /dev/null 2>&1";
        int status = std::system(cmd.c_str());
        int code = status == -1 ? -1 : (WIFEXITED(status) ? WEXITSTATUS(status) : -1);
        if (code != 0) failing += std::string(" ") + bin;
    }
    report("C9", failing.empty(),
           failing.empty() ? "all 10 module property suites green"
                           : "failing suites:" + failing);
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> stages(argv + 1, argv + argc);
    if (stages.empty()) stages = {"c1", "c2", "c3", "c4c5", "c6", "c7", "c8", "c9"};
    for (const std::string& stage : stages) {
        if (stage == "c1") c1();
        else if (stage == "c2") c2();
        else if (stage == "c3") c3();
        else if (stage == "c4c5" || stage == "c4" || stage == "c5") c4c5();
        else if (stage == "c6") c6();
        else if (stage == "c7") c7();
        else if (stage == "c8") c8();
        else if (stage == "c9") c9();
        else {
            std::cerr << "unknown criterion '" << stage << "'\n";
            return 64;
        }
    }
    return g_failures;
}
