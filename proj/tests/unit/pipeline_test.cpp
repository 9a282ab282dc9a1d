#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "boundarykit/pipeline.hpp"
#include "boundarykit/rng.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace boundarykit;
using testutil::close;

namespace {
constexpr double kInfty = std::numeric_limits<double>::infinity();
}  // namespace

TEST_CASE("auto_R0_cap is the median sampled neighbor scale") {
    CounterRng rng(901);
    PointCloud cloud = testutil::random_cloud(rng, 23, 3, 2);

    // cap_sample >= n probes every point; m-th other = (m+1)-th including self
    {
        const int m = 4;
        std::vector<double> scales;
        for (int i = 0; i < cloud.size(); ++i)
            scales.push_back(oracles::kth_neighbor_distance(cloud, i, m + 1));
        std::sort(scales.begin(), scales.end());
        CHECK(auto_R0_cap(cloud, m, cloud.size()) == scales[scales.size() / 2]);
    }

    // n = 23, cap_sample = 5 gives stride 4: probes 0, 4, 8, 12, 16, 20
    {
        const int m = 2;
        std::vector<double> scales;
        for (int i = 0; i < cloud.size(); i += 4)
            scales.push_back(oracles::kth_neighbor_distance(cloud, i, m + 1));
        std::sort(scales.begin(), scales.end());
        CHECK(auto_R0_cap(cloud, m, 5) == scales[scales.size() / 2]);
    }

    // neighbor count beyond n - 1 saturates at the farthest point
    {
        std::vector<double> scales;
        for (int i = 0; i < cloud.size(); ++i)
            scales.push_back(oracles::kth_neighbor_distance(cloud, i, cloud.size()));
        std::sort(scales.begin(), scales.end());
        CHECK(auto_R0_cap(cloud, 500, cloud.size()) == scales[scales.size() / 2]);
    }

    CHECK_THROWS_AS(auto_R0_cap(cloud, 0, 10), ParamsOutOfRange);
    CHECK_THROWS_AS(auto_R0_cap(cloud, 3, 0), ParamsOutOfRange);
    Eigen::MatrixXd one(1, 2);
    one << 0.0, 0.0;
    CHECK_THROWS_AS(auto_R0_cap(PointCloud(one, 1), 1, 1), ParamsOutOfRange);
}

TEST_CASE("run_detection honors explicit overrides verbatim") {
    PointCloud cloud = make_annulus().sample_uniform(350, 902);
    PipelineOptions opt;
    opt.k = 7;
    opt.h = 0.3;
    opt.R0 = 0.25;
    opt.rho = 0.1;
    opt.r = 0.02;
    PipelineRun run = run_detection(cloud, opt);

    CHECK(run.calibration.k_used == 7);
    CHECK(run.calibration.h == 0.3);
    CHECK(run.calibration.R0 == 0.25);
    CHECK(run.calibration.rho == 0.1);
    CHECK(run.calibration.r == 0.02);
    CHECK(run.params.R0 == 0.25);
    CHECK(run.params.r == 0.02);
    CHECK(run.params.rho == 0.1);
    CHECK(run.params.h == 0.3);
    CHECK(run.r_eff == 0.02);
    CHECK_FALSE(run.calibration.rho_clamped);
    // an overridden rho skips the jump selection entirely
    CHECK(run.calibration.jump.index == -1);
    CHECK(run.calibration.jump.rho == 0.0);

    // sorted_radii is the self-probe multiset
    std::vector<double> sorted = run.boundary.probe_radii;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == run.calibration.sorted_radii);

    // the cached-probe path reproduces the from-scratch detection
    BoundaryResult direct = detect(cloud, run.tangents, run.params);
    CHECK(direct.detected == run.boundary.detected);
    CHECK(direct.degenerate == run.boundary.degenerate);
    REQUIRE(direct.probe_radii.size() == run.boundary.probe_radii.size());
    for (std::size_t i = 0; i < direct.probe_radii.size(); ++i)
        CHECK(direct.probe_radii[i] == run.boundary.probe_radii[i]);
    REQUIRE(direct.normals.size() == run.boundary.normals.size());
    for (std::size_t t = 0; t < direct.normals.size(); ++t)
        CHECK((direct.normals[t] - run.boundary.normals[t]).norm() == 0.0);
}

TEST_CASE("run_detection derives each scale from the previous ones") {
    PointCloud cloud = make_annulus().sample_uniform(800, 903);
    PipelineOptions opt;
    PipelineRun run = run_detection(cloud, opt);
    const CalibrationReport& cal = run.calibration;

    CHECK(cal.k_used == default_bandwidth_k(cloud));
    CHECK(cal.h == bandwidth_h(cloud, cal.k_used));

    TangentField tang = estimate_all_tangents(cloud, cal.h);
    for (int i : {0, cloud.size() / 2, cloud.size() - 1})
        CHECK((run.tangents.frame(i).basis() - tang.frame(i).basis()).norm() == 0.0);

    double expect_R0 = std::min(scale_R0(cloud, tang, opt.delta),
                                auto_R0_cap(cloud, opt.r0_cap_neighbors, opt.r0_cap_sample));
    CHECK(cal.R0 == expect_R0);
    CHECK(cal.distortion_delta == opt.delta);
    CHECK(cal.distortion_samples == distortion_curve(cloud, tang));

    REQUIRE(cal.sorted_radii.size() == static_cast<std::size_t>(cloud.size()));
    CHECK(std::is_sorted(cal.sorted_radii.begin(), cal.sorted_radii.end()));

    JumpInfo jump = select_rho(cal.sorted_radii, 4.0 * cal.R0, JumpRule::first_above_factor);
    double cap = 2.0 * cal.R0 * 0.999;
    CHECK(cal.rho == std::min(jump.rho, cap));
    CHECK(cal.rho_clamped == (jump.rho > cap));
    if (!cal.rho_clamped) {
        CHECK(cal.jump.index == jump.index);
        CHECK(cal.jump.gap == jump.gap);
        CHECK(cal.jump.found_jump == jump.found_jump);
    }

    CHECK(cal.r == 0.0);
    CHECK(run.params.rho == cal.rho);
    CHECK(run.r_eff == bandwidth_h(cloud, 2) / 6.0);

    // a bounded manifold at this density must flag something
    CHECK(!run.boundary.detected.empty());
}

TEST_CASE("add_patches fills the working radii") {
    PointCloud cloud = make_annulus().sample_uniform(400, 904);
    PipelineOptions opt;
    PipelineRun run = run_detection(cloud, opt);
    REQUIRE(!run.has_patches);

    PipelineRun defaulted = run;
    add_patches(defaulted, cloud, opt);
    CHECK(defaulted.has_patches);
    CHECK(defaulted.eps_bd == 18.0 * defaulted.r_eff);
    CHECK(defaulted.eps_int == bandwidth_h(cloud, 3));
    CHECK(defaulted.patches.eps_int == defaulted.eps_int);
    CHECK(defaulted.patches.eps_bd == defaulted.eps_bd);
    CHECK(defaulted.patches.inner.size() + defaulted.patches.boundary.size() <=
          static_cast<std::size_t>(cloud.size()));
    CHECK(defaulted.patches.boundary.size() ==
          defaulted.boundary.detected.size() - defaulted.boundary.degenerate.size());

    PipelineOptions over = opt;
    over.eps_int = 0.04;
    over.eps_bd = 0.3;
    PipelineRun overridden = run;
    add_patches(overridden, cloud, over);
    CHECK(overridden.eps_int == 0.04);
    CHECK(overridden.eps_bd == 0.3);
    CHECK(overridden.patches.eps_bd == 0.3);
}

TEST_CASE("loglog_slope fits exact power laws and rejects junk") {
    std::vector<std::pair<double, double>> clean;
    for (double x : {10.0, 100.0, 1000.0, 10000.0})
        clean.emplace_back(x, 2.0 * std::pow(x, -0.5));
    std::optional<double> slope = loglog_slope(clean);
    REQUIRE(slope.has_value());
    CHECK(close(*slope, -0.5, 1e-12));

    // repeated x values are fine as long as three distinct ones remain
    std::vector<std::pair<double, double>> repeated = {
        {10.0, 5.0}, {10.0, 5.0}, {100.0, 2.0}, {1000.0, 1.0}};
    CHECK(loglog_slope(repeated).has_value());

    CounterRng rng(905);
    std::vector<std::pair<double, double>> noisy;
    for (int i = 1; i <= 100; ++i) {
        double x = 10.0 * i;
        noisy.emplace_back(x, 3.0 / x * std::exp(0.01 * rng.uniform(-1.0, 1.0)));
    }
    std::optional<double> noisy_slope = loglog_slope(noisy);
    REQUIRE(noisy_slope.has_value());
    CHECK(close(*noisy_slope, -1.0, 0.01));

    CHECK_FALSE(loglog_slope({}).has_value());
    CHECK_FALSE(loglog_slope({{10.0, 1.0}, {10.0, 2.0}, {20.0, 3.0}}).has_value());
    CHECK_FALSE(loglog_slope({{1.0, 1.0}, {2.0, 2.0}}).has_value());
    CHECK_FALSE(loglog_slope({{10.0, 1.0}, {20.0, 0.0}, {30.0, 1.0}}).has_value());
    CHECK_FALSE(loglog_slope({{10.0, 1.0}, {20.0, -2.0}, {30.0, 1.0}}).has_value());
    CHECK_FALSE(loglog_slope({{10.0, 1.0}, {20.0, kInfty}, {30.0, 1.0}}).has_value());
    CHECK_FALSE(loglog_slope({{-1.0, 1.0}, {20.0, 1.0}, {30.0, 1.0}}).has_value());
    double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK_FALSE(loglog_slope({{10.0, nan}, {20.0, 1.0}, {30.0, 1.0}}).has_value());
}

TEST_CASE("a boundaryless cloud flows through to an empty detection") {
    PointCloud cloud = make_circle().sample_uniform(700, 906);
    PipelineRun run = run_detection(cloud, PipelineOptions{});
    CHECK(run.boundary.detected.empty());
    CHECK_FALSE(run.calibration.jump.found_jump);
    // the fallback threshold sits above every probe radius
    CHECK(run.calibration.rho > run.calibration.sorted_radii.back());
}

TEST_CASE("rate_sweep emits one row per pair and mirrors its slopes") {
    SyntheticManifold annulus = make_annulus();
    PipelineOptions opt;
    std::vector<int> ns = {150, 250, 400};
    std::vector<std::uint64_t> seeds = {1, 2};
    RateSummary summary = rate_sweep(annulus, ns, seeds, opt, 60, 300, 2);
    REQUIRE(summary.rows.size() == 6);

    std::vector<std::pair<double, double>> cover_xy, excess_xy, hd_xy;
    std::size_t idx = 0;
    for (int n : ns) {
        for (std::uint64_t seed : seeds) {
            const RateRow& row = summary.rows[idx++];
            CHECK(row.n == n);
            CHECK(row.seed == seed);
            CHECK(row.detected_count >= 0);
            if (row.detected_count == 0) {
                CHECK(row.cover == kInfty);
                CHECK(row.excess == kInfty);
            } else {
                CHECK(std::isfinite(row.cover));
                CHECK(row.cover > 0.0);
                CHECK(row.excess >= 0.0);
                // every annulus point is within 0.3 of one of the two circles
                CHECK(row.excess <= 0.3 + 1e-12);
            }
            CHECK(row.hausdorff == std::max(row.sup_M_to_Mhat, row.sup_Mhat_to_M));
            CHECK(std::isfinite(row.hausdorff));
            CHECK(row.hausdorff > 0.0);
            CHECK(row.truth_resolution > 0.0);
            cover_xy.emplace_back(row.n, row.cover);
            excess_xy.emplace_back(row.n, row.excess);
            hd_xy.emplace_back(row.n, row.hausdorff);
        }
    }
    CHECK(summary.slope_cover == loglog_slope(cover_xy));
    CHECK(summary.slope_excess == loglog_slope(excess_xy));
    CHECK(summary.slope_hausdorff == loglog_slope(hd_xy));

    // rerunning the same configuration reproduces every number
    RateSummary once = rate_sweep(annulus, {150}, {3}, opt, 40, 200, 2);
    RateSummary twice = rate_sweep(annulus, {150}, {3}, opt, 40, 200, 2);
    REQUIRE(once.rows.size() == 1);
    CHECK(once.rows[0].detected_count == twice.rows[0].detected_count);
    CHECK(once.rows[0].cover == twice.rows[0].cover);
    CHECK(once.rows[0].excess == twice.rows[0].excess);
    CHECK(once.rows[0].hausdorff == twice.rows[0].hausdorff);
    CHECK(once.rows[0].truth_resolution == twice.rows[0].truth_resolution);

    CHECK_THROWS_AS(rate_sweep(annulus, {}, seeds, opt), ParamsOutOfRange);
    CHECK_THROWS_AS(rate_sweep(annulus, ns, {}, opt), ParamsOutOfRange);
    CHECK_THROWS_AS(rate_sweep(make_circle(), ns, seeds, opt), InvalidParams);
}

TEST_CASE("thread count does not change any result") {
    PointCloud cloud = make_annulus().sample_uniform(300, 907);
    PipelineOptions one;
    one.threads = 1;
    PipelineOptions four;
    four.threads = 4;
    PipelineRun a = run_detection(cloud, one);
    PipelineRun b = run_detection(cloud, four);

    CHECK(a.boundary.detected == b.boundary.detected);
    CHECK(a.boundary.degenerate == b.boundary.degenerate);
    CHECK(a.calibration.sorted_radii == b.calibration.sorted_radii);
    CHECK(a.calibration.R0 == b.calibration.R0);
    CHECK(a.calibration.rho == b.calibration.rho);
    REQUIRE(a.boundary.normals.size() == b.boundary.normals.size());
    for (std::size_t t = 0; t < a.boundary.normals.size(); ++t)
        CHECK((a.boundary.normals[t] - b.boundary.normals[t]).norm() == 0.0);

    add_patches(a, cloud, one);
    add_patches(b, cloud, four);
    REQUIRE(a.patches.inner.size() == b.patches.inner.size());
    REQUIRE(a.patches.boundary.size() == b.patches.boundary.size());

    SyntheticManifold annulus = make_annulus();
    HausdorffReport ha = hausdorff_to_truth(a.patches, annulus, 400, 3, 77, 1);
    HausdorffReport hb = hausdorff_to_truth(b.patches, annulus, 400, 3, 77, 4);
    CHECK(ha.sup_M_to_Mhat == hb.sup_M_to_Mhat);
    CHECK(ha.sup_Mhat_to_M == hb.sup_Mhat_to_M);
    CHECK(ha.truth_resolution == hb.truth_resolution);
}
