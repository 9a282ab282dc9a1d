#include "boundarykit/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace boundarykit {

int default_bandwidth_k(const PointCloud& cloud) {
    int n = cloud.size();
    int k = static_cast<int>(
        std::ceil(cloud.intrinsic_dim() * std::log(static_cast<double>(n))));
    k = std::max(k, cloud.intrinsic_dim() + 1);
    return std::min(k, n);
}

double bandwidth_h(const PointCloud& cloud, int k) {
    int n = cloud.size();
    if (k <= 0) k = default_bandwidth_k(cloud);
    if (k > n) throw InvalidK("bandwidth_h: k exceeds the sample size");

    const Eigen::MatrixXd& pts = cloud.points();
    double h = 0.0;
    std::vector<double> d2(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j)
            d2[static_cast<std::size_t>(j)] = (pts.row(j) - pts.row(i)).squaredNorm();
        // k-th smallest including the zero self distance
        std::nth_element(d2.begin(), d2.begin() + (k - 1), d2.end());
        h = std::max(h, std::sqrt(d2[static_cast<std::size_t>(k - 1)]));
    }
    return h;
}

namespace {

double tangential_ratio(const PointCloud& cloud, const TangentField& tangents, int i, int j,
                        double dist) {
    Eigen::VectorXd off = cloud.point(j) - cloud.point(i);
    return tangents.frame(i).project_coeffs(off).norm() / dist;
}

}  // namespace

double scale_R0(const PointCloud& cloud, const TangentField& tangents, double delta) {
    if (!(delta > 0.0) || !(delta < 1.0))
        throw ParamsOutOfRange("scale_R0: delta must lie in (0, 1)");
    if (tangents.size() != cloud.size())
        throw DimensionMismatch("scale_R0: tangent field size mismatch");
    int n = cloud.size();
    if (n < 2) throw NoAdmissibleScale("scale_R0: need at least two points");

    // pass one: smallest violating pair distance, plus the global max
    double min_violating = std::numeric_limits<double>::infinity();
    double max_dist = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            double dist = (cloud.point(i) - cloud.point(j)).norm();
            max_dist = std::max(max_dist, dist);
            if (dist >= min_violating) continue;
            bool violates =
                std::abs(tangential_ratio(cloud, tangents, i, j, dist) - 1.0) > delta ||
                std::abs(tangential_ratio(cloud, tangents, j, i, dist) - 1.0) > delta;
            if (violates) min_violating = dist;
        }
    }
    if (!std::isfinite(min_violating)) return max_dist;

    // pass two: largest pair distance strictly below the first violation
    double best = -1.0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            double dist = (cloud.point(i) - cloud.point(j)).norm();
            if (dist < min_violating) best = std::max(best, dist);
        }
    }
    if (best < 0.0)
        throw NoAdmissibleScale("scale_R0: the nearest pair already exceeds the distortion");
    return best;
}

std::vector<std::pair<double, double>> distortion_curve(const PointCloud& cloud,
                                                        const TangentField& tangents,
                                                        int max_samples) {
    if (max_samples < 1) throw ParamsOutOfRange("distortion_curve: max_samples must be positive");
    int n = cloud.size();
    long long total = static_cast<long long>(n) * (n - 1) / 2;
    long long stride = std::max(1ll, total / max_samples);
    std::vector<std::pair<double, double>> out;
    long long counter = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (counter++ % stride != 0) continue;
            double dist = (cloud.point(i) - cloud.point(j)).norm();
            if (dist <= 0.0) continue;
            out.emplace_back(dist, tangential_ratio(cloud, tangents, i, j, dist));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string jump_rule_name(JumpRule rule) {
    return rule == JumpRule::max_gap ? "max" : "first-above-factor";
}

JumpRule jump_rule_from_name(const std::string& name) {
    if (name == "max") return JumpRule::max_gap;
    if (name == "first-above-factor") return JumpRule::first_above_factor;
    throw InvalidParams("unknown jump rule '" + name + "'");
}

JumpInfo select_rho(const std::vector<double>& radii, double clip, JumpRule rule) {
    if (!(clip > 0.0)) throw ParamsOutOfRange("select_rho: clip must be positive");
    std::vector<double> r;
    r.reserve(radii.size());
    for (double v : radii) {
        if (!std::isfinite(v)) continue;
        if (v < 0.0) throw ParamsOutOfRange("select_rho: negative radius");
        r.push_back(v);
    }
    if (r.size() < 2) throw TooFewRadii("select_rho: need at least two finite radii");
    std::sort(r.begin(), r.end());
    const int m = static_cast<int>(r.size());

    JumpInfo info;
    if (rule == JumpRule::max_gap) {
        info.index = 0;
        for (int k = 0; k + 1 < m; ++k) {
            double gap = r[static_cast<std::size_t>(k) + 1] - r[static_cast<std::size_t>(k)];
            if (gap > info.gap) {
                info.gap = gap;
                info.index = k;
            }
        }
        info.rho = 0.5 * (r[static_cast<std::size_t>(info.index)] +
                          r[static_cast<std::size_t>(info.index) + 1]);
        info.low_contrast = info.gap == 0.0;
        return info;
    }

    // Cells are clipped at clip = 4*R0 and the detector's guarantees cover
    // widths in [R0/4, R0/2], so the admissible band is [clip/16, clip/8].
    const double band_lo = clip / 16.0;
    const double band_mid = 1.5 * band_lo;

    // first gap that is a 3x step up, lands above twice the median, and
    // reaches the band floor; the median guard stops tiny-over-tiny ratios
    // near zero from counting and the floor discards jumps that top out in
    // sampling noise well below any width the detector would act on
    double median = 0.5 * (r[static_cast<std::size_t>((m - 1) / 2)] +
                           r[static_cast<std::size_t>(m / 2)]);
    for (int k = 0; k + 1 < m; ++k) {
        double lo = r[static_cast<std::size_t>(k)], hi = r[static_cast<std::size_t>(k) + 1];
        if (hi >= 3.0 * lo && lo > 0.0 && hi >= 2.0 * median && hi >= band_lo) {
            info.index = k;
            info.gap = hi - lo;
            info.rho = 0.5 * (lo + hi);
            return info;
        }
    }
    // No isolated jump. Dense clouds often grade continuously from interior
    // to boundary widths, so falling back above the largest radius would
    // silently disable detection; the band midpoint keeps the guarantees and
    // stays far above interior widths, which scale with the sample spacing.
    info.found_jump = false;
    info.low_contrast = r.front() == r.back();
    info.rho = band_mid;
    return info;
}

double threshold_rho(const std::vector<double>& radii, double clip) {
    return select_rho(radii, clip, JumpRule::max_gap).rho;
}

}  // namespace boundarykit
