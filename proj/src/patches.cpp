#include "boundarykit/patches.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "boundarykit/parallel.hpp"
#include "boundarykit/rng.hpp"

namespace boundarykit {

PatchComplex build_patches(const PointCloud& cloud, const TangentField& tangents,
                           const BoundaryResult& boundary, double eps_int, double eps_bd,
                           const NumericPolicy& policy) {
    if (cloud.size() < 1) throw EmptyCloud("build_patches: empty cloud");
    if (tangents.size() != cloud.size())
        throw DimensionMismatch("build_patches: tangent field size mismatch");
    if (!(eps_int > 0.0) || !(eps_bd > 0.0))
        throw ParamsOutOfRange("build_patches: patch radii must be positive");

    PatchComplex complex;
    complex.eps_int = eps_int;
    complex.eps_bd = eps_bd;
    if (eps_int > eps_bd / 6.0)
        complex.warnings.push_back("eps_int exceeds eps_bd / 6; the half-ball headroom "
                                   "assumed by the error analysis is gone");

    const int n = cloud.size();
    const int m = static_cast<int>(boundary.detected.size());
    for (int t = 0; t < m; ++t) {
        int i = boundary.detected[static_cast<std::size_t>(t)];
        const Eigen::VectorXd& eta = boundary.normals[static_cast<std::size_t>(t)];
        const Frame& frame = tangents.frame(i);
        if (eta.norm() <= policy.degenerate_normal_tol ||
            frame.project_coeffs(eta).norm() <= policy.degenerate_normal_tol) {
            complex.warnings.push_back("dropped boundary patch at point " +
                                       std::to_string(i) + ": degenerate normal");
            continue;
        }
        complex.boundary.push_back(BoundaryPatch{cloud.point(i), frame, eta, eps_bd});
    }

    // interior rule against the full detected set, degenerate entries
    // included: dropping a patch must not promote its neighbors to interior
    for (int i = 0; i < n; ++i) {
        double dist = std::numeric_limits<double>::infinity();
        for (int j : boundary.detected)
            dist = std::min(dist, (cloud.point(i) - cloud.point(j)).norm());
        if (dist >= eps_bd / 2.0)
            complex.inner.push_back(InnerPatch{cloud.point(i), tangents.frame(i), eps_int});
    }
    return complex;
}

double distance_to_inner_patch(const Eigen::VectorXd& z, const InnerPatch& patch) {
    if (z.size() != patch.center.size())
        throw DimensionMismatch("distance_to_inner_patch: dimension mismatch");
    Decomposition split = decompose(patch.frame, z - patch.center);
    double excess = std::max(0.0, split.tangential.norm() - patch.radius);
    return std::hypot(split.normal_norm, excess);
}

double distance_to_boundary_patch(const Eigen::VectorXd& z, const BoundaryPatch& patch,
                                  const NumericPolicy& policy) {
    if (z.size() != patch.center.size())
        throw DimensionMismatch("distance_to_boundary_patch: dimension mismatch");
    Eigen::VectorXd w = patch.frame.project_coeffs(patch.normal);
    double wn = w.norm();
    if (wn <= policy.degenerate_normal_tol)
        throw DegenerateNormal("distance_to_boundary_patch: projected normal vanishes");
    w /= wn;

    Decomposition split = decompose(patch.frame, z - patch.center);
    Eigen::VectorXd t = split.tangential;
    Eigen::VectorXd proj = t - std::max(0.0, t.dot(w)) * w;
    double pn = proj.norm();
    if (pn > patch.radius) proj *= patch.radius / pn;
    return std::hypot(split.normal_norm, (t - proj).norm());
}

double distance_to_complex(const Eigen::VectorXd& z, const PatchComplex& complex,
                           const NumericPolicy& policy) {
    if (complex.size() == 0) throw EmptyComplex("distance_to_complex: no patches");
    double best = std::numeric_limits<double>::infinity();
    for (const InnerPatch& p : complex.inner)
        best = std::min(best, distance_to_inner_patch(z, p));
    for (const BoundaryPatch& p : complex.boundary)
        best = std::min(best, distance_to_boundary_patch(z, p, policy));
    return best;
}

namespace {

Eigen::VectorXd sample_in_frame(CounterRng& rng, int d, double radius,
                                const Eigen::VectorXd* halfspace_w) {
    Eigen::VectorXd u(d);
    while (true) {
        for (int k = 0; k < d; ++k) u(k) = rng.uniform(-radius, radius);
        if (u.norm() > radius) continue;
        if (halfspace_w != nullptr && u.dot(*halfspace_w) > 0.0) continue;
        return u;
    }
}

}  // namespace

std::vector<Eigen::VectorXd> sample_complex(const PatchComplex& complex, int per_patch,
                                            std::uint64_t seed) {
    if (per_patch < 0) throw ParamsOutOfRange("sample_complex: negative per_patch");
    std::vector<Eigen::VectorXd> out;
    out.reserve(static_cast<std::size_t>(complex.size()) *
                static_cast<std::size_t>(per_patch));
    CounterRng root(seed);
    std::uint64_t patch_id = 0;

    for (const InnerPatch& p : complex.inner) {
        CounterRng patch_rng = root.fork(patch_id++);
        for (int s = 0; s < per_patch; ++s) {
            CounterRng draw = patch_rng.fork(static_cast<std::uint64_t>(s));
            Eigen::VectorXd u = sample_in_frame(draw, p.frame.dim(), p.radius, nullptr);
            out.push_back(p.center + p.frame.lift(u));
        }
    }
    for (const BoundaryPatch& p : complex.boundary) {
        CounterRng patch_rng = root.fork(patch_id++);
        Eigen::VectorXd w = p.frame.project_coeffs(p.normal);
        double wn = w.norm();
        if (wn <= NumericPolicy::standard().degenerate_normal_tol)
            throw DegenerateNormal("sample_complex: projected normal vanishes");
        w /= wn;
        for (int s = 0; s < per_patch; ++s) {
            CounterRng draw = patch_rng.fork(static_cast<std::uint64_t>(s));
            Eigen::VectorXd u = sample_in_frame(draw, p.frame.dim(), p.radius, &w);
            out.push_back(p.center + p.frame.lift(u));
        }
    }
    return out;
}

HausdorffReport hausdorff_to_truth(const PatchComplex& complex,
                                   const SyntheticManifold& manifold, int m_truth,
                                   int per_patch, std::uint64_t seed, int threads) {
    if (complex.size() == 0) throw EmptyComplex("hausdorff_to_truth: no patches");
    if (m_truth < 2) throw ParamsOutOfRange("hausdorff_to_truth: m_truth below 2");
    if (per_patch < 1) throw ParamsOutOfRange("hausdorff_to_truth: per_patch below 1");

    int nthreads = resolve_threads(threads);
    PointCloud truth = manifold.sample_uniform(m_truth, seed);
    std::vector<Eigen::VectorXd> est = sample_complex(complex, per_patch, seed + 1);

    HausdorffReport report;
    report.truth_count = m_truth;
    report.estimator_sample_count = static_cast<int>(est.size());

    std::vector<double> to_complex(static_cast<std::size_t>(m_truth));
    std::vector<double> nn_gap(static_cast<std::size_t>(m_truth));
    parallel_for(m_truth, nthreads, [&](int i) {
        Eigen::VectorXd p = truth.point(i);
        to_complex[static_cast<std::size_t>(i)] = distance_to_complex(p, complex);
        double best2 = std::numeric_limits<double>::infinity();
        for (int j = 0; j < m_truth; ++j) {
            if (j == i) continue;
            best2 = std::min(best2, (truth.point(j) - p).squaredNorm());
        }
        nn_gap[static_cast<std::size_t>(i)] = std::sqrt(best2);
    });
    report.sup_M_to_Mhat = *std::max_element(to_complex.begin(), to_complex.end());
    report.truth_resolution = *std::max_element(nn_gap.begin(), nn_gap.end());

    std::vector<double> to_truth(est.size());
    parallel_for(static_cast<int>(est.size()), nthreads, [&](int i) {
        to_truth[static_cast<std::size_t>(i)] =
            manifold.distance_to(est[static_cast<std::size_t>(i)]);
    });
    report.sup_Mhat_to_M = *std::max_element(to_truth.begin(), to_truth.end());
    return report;
}

}  // namespace boundarykit
