#include "boundarykit/detector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "boundarykit/parallel.hpp"

namespace boundarykit {

void DetectionParams::validate() const {
    if (!(R0 > 0.0)) throw ParamsOutOfRange("detect: R0 must be positive");
    if (!(r >= 0.0)) throw ParamsOutOfRange("detect: r must be nonnegative");
    if (!(rho > 0.0)) throw ParamsOutOfRange("detect: rho must be positive");
    if (rho > 2.0 * R0)
        throw ParamsOutOfRange("detect: rho beyond 2 R0 exceeds the clip regime");
    if (!(h > 0.0)) throw ParamsOutOfRange("detect: h must be positive");
}

double DetectionParams::r_minus(double reach_min, int d, int n, double density_factor) const {
    if (!(reach_min > 0.0) || d < 1 || n < 2 || !(density_factor > 0.0))
        throw ParamsOutOfRange("r_minus: bad bracket inputs");
    double inner = density_factor * std::log(static_cast<double>(n)) /
                   (static_cast<double>(n) * std::pow(R0, d));
    return std::sqrt(reach_min * R0) * std::pow(inner, 1.0 / (d + 1));
}

int BoundaryResult::position_of(int cloud_index) const {
    auto it = std::lower_bound(detected.begin(), detected.end(), cloud_index);
    if (it == detected.end() || *it != cloud_index) return -1;
    return static_cast<int>(it - detected.begin());
}

namespace {

constexpr double kRhoSlack = 1e-12;

// one (i, j) probe outcome; normals lifted back to ambient coordinates
struct PairHit {
    int i = -1;
    Eigen::VectorXd normal;
};

}  // namespace

std::vector<VoronoiProbe> self_probes(const PointCloud& cloud, const TangentField& tangents,
                                      double R0, int threads, const NumericPolicy& policy) {
    if (!(R0 > 0.0)) throw ParamsOutOfRange("self_probes: R0 must be positive");
    if (tangents.size() != cloud.size())
        throw DimensionMismatch("self_probes: tangent field size mismatch");
    const int n = cloud.size();
    std::vector<VoronoiProbe> probes(static_cast<std::size_t>(n));
    parallel_for(n, resolve_threads(threads), [&](int j) {
        LocalProjection local = project_local_cloud(cloud, tangents, j, R0);
        probes[static_cast<std::size_t>(j)] =
            cell_probe(local.sites, local.origin_position, 4.0 * R0, policy);
    });
    return probes;
}

BoundaryResult detect(const PointCloud& cloud, const TangentField& tangents,
                      const DetectionParams& params, int threads,
                      const NumericPolicy& policy,
                      const std::vector<VoronoiProbe>* cached_self) {
    params.validate();
    if (tangents.size() != cloud.size())
        throw DimensionMismatch("detect: tangent field size mismatch");
    if (cached_self != nullptr &&
        static_cast<int>(cached_self->size()) != cloud.size())
        throw DimensionMismatch("detect: self-probe cache size mismatch");
    const int n = cloud.size();
    const double clip = 4.0 * params.R0;

    std::vector<std::vector<PairHit>> hits_by_witness(static_cast<std::size_t>(n));
    std::vector<double> self_radii(static_cast<std::size_t>(n), 0.0);

    parallel_for(n, resolve_threads(threads), [&](int j) {
        // candidate observed points: everything within r of the witness
        std::vector<int> candidates;
        if (params.r == 0.0) {
            candidates.push_back(j);
        } else {
            candidates = neighbors_within(cloud, j, params.r);
        }

        bool only_self = candidates.size() == 1 && candidates[0] == j;
        LocalProjection local;
        if (!(only_self && cached_self != nullptr))
            local = project_local_cloud(cloud, tangents, j, params.R0);

        auto& out = hits_by_witness[static_cast<std::size_t>(j)];
        for (int i : candidates) {
            VoronoiProbe probe;
            if (i == j && cached_self != nullptr) {
                probe = (*cached_self)[static_cast<std::size_t>(j)];
            } else {
                int p_index;
                std::vector<Eigen::VectorXd>* sites = &local.sites;
                std::vector<Eigen::VectorXd> extended;
                if (i == j) {
                    p_index = local.origin_position;
                } else {
                    auto it = std::lower_bound(local.cloud_indices.begin(),
                                               local.cloud_indices.end(), i);
                    if (it != local.cloud_indices.end() && *it == i) {
                        p_index = static_cast<int>(it - local.cloud_indices.begin());
                    } else {
                        // observed point beyond R0: its projection joins the
                        // diagram as its own site
                        extended = local.sites;
                        extended.push_back(tangents.frame(j).project_coeffs(
                            cloud.point(i) - cloud.point(j)));
                        sites = &extended;
                        p_index = static_cast<int>(extended.size()) - 1;
                    }
                }
                probe = cell_probe(*sites, p_index, clip, policy);
            }
            if (i == j) self_radii[static_cast<std::size_t>(j)] = probe.radius;
            if (probe.radius >= params.rho - kRhoSlack && probe.direction.size() > 0) {
                PairHit hit;
                hit.i = i;
                hit.normal = tangents.frame(j).lift(probe.direction);
                out.push_back(hit);
            }
        }
    });

    // merge in witness order; per-point witness lists come out ascending in j
    std::vector<std::vector<WitnessNormal>> by_point(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
        for (const PairHit& hit : hits_by_witness[static_cast<std::size_t>(j)])
            by_point[static_cast<std::size_t>(hit.i)].push_back(
                WitnessNormal{j, hit.normal});

    BoundaryResult result;
    result.probe_radii = std::move(self_radii);
    for (int i = 0; i < n; ++i) {
        auto& wits = by_point[static_cast<std::size_t>(i)];
        if (wits.empty()) continue;
        Eigen::VectorXd mean = Eigen::VectorXd::Zero(cloud.ambient_dim());
        for (const WitnessNormal& w : wits) mean += w.normal;
        mean /= static_cast<double>(wits.size());

        result.detected.push_back(i);
        result.witnesses.push_back(std::move(wits));
        result.normals.push_back(mean);

        const Frame& frame = tangents.frame(i);
        if (frame.project_coeffs(mean).norm() <= policy.degenerate_normal_tol) {
            result.degenerate.push_back(i);
            result.boundary_frames.emplace_back();
        } else {
            result.boundary_frames.push_back(boundary_tangent(frame, mean, policy));
        }
    }
    return result;
}

Frame boundary_tangent(const Frame& frame, const Eigen::VectorXd& normal,
                       const NumericPolicy& policy) {
    if (normal.size() != frame.ambient_dim())
        throw DimensionMismatch("boundary_tangent: normal dimension mismatch");
    Eigen::VectorXd coeffs = frame.project_coeffs(normal);
    double norm = coeffs.norm();
    if (norm <= policy.degenerate_normal_tol)
        throw DegenerateNormal("boundary_tangent: projected normal vanishes");
    // complement within the frame coordinates, then re-embed
    Eigen::MatrixXd comp = complement_basis(coeffs / norm);
    return Frame(frame.basis() * comp, policy);
}

std::vector<int> sparsify(const std::vector<Eigen::VectorXd>& points, double eps) {
    if (points.empty()) throw EmptySet("sparsify: no points");
    if (!(eps > 0.0)) throw ParamsOutOfRange("sparsify: eps must be positive");
    const int n = static_cast<int>(points.size());

    std::vector<int> selected = {0};
    std::vector<double> dist(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t)
        dist[static_cast<std::size_t>(t)] = (points[static_cast<std::size_t>(t)] -
                                             points[0]).norm();
    while (true) {
        int far = 0;
        for (int t = 1; t < n; ++t)
            if (dist[static_cast<std::size_t>(t)] > dist[static_cast<std::size_t>(far)])
                far = t;
        if (dist[static_cast<std::size_t>(far)] <= eps) break;
        selected.push_back(far);
        for (int t = 0; t < n; ++t)
            dist[static_cast<std::size_t>(t)] =
                std::min(dist[static_cast<std::size_t>(t)],
                         (points[static_cast<std::size_t>(t)] -
                          points[static_cast<std::size_t>(far)]).norm());
    }
    return selected;
}

}  // namespace boundarykit
