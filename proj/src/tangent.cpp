#include "boundarykit/tangent.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "boundarykit/parallel.hpp"

namespace boundarykit {

Eigen::MatrixXd local_covariance(const PointCloud& cloud, int i, double h) {
    if (i < 0 || i >= cloud.size())
        throw IndexOutOfRange("local_covariance: index out of range");
    if (h < 0.0) throw ParamsOutOfRange("local_covariance: negative bandwidth");
    const int D = cloud.ambient_dim();
    const auto& P = cloud.points();
    Eigen::RowVectorXd c = P.row(i);
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(D, D);
    const double h2 = h * h;
    for (int j = 0; j < cloud.size(); ++j) {
        if (j == i) continue;
        Eigen::RowVectorXd delta = P.row(j) - c;
        if (delta.squaredNorm() <= h2)
            cov.noalias() += delta.transpose() * delta;
    }
    if (cloud.size() > 1) cov /= static_cast<double>(cloud.size() - 1);
    return cov;
}

TangentEstimate estimate_tangent(const PointCloud& cloud, int i, double h,
                                 const NumericPolicy& policy) {
    const int d = cloud.intrinsic_dim();
    const int D = cloud.ambient_dim();

    int count = static_cast<int>(neighbors_within(cloud, i, h).size()) - 1;
    if (count < d)
        throw InsufficientNeighbors("estimate_tangent: point " + std::to_string(i) + " has " +
                                        std::to_string(count) + " neighbors inside h=" +
                                        std::to_string(h) + ", needs " + std::to_string(d),
                                    i);

    Eigen::MatrixXd cov = local_covariance(cloud, i, h);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    if (es.info() != Eigen::Success)
        throw DegenerateSpectrum("estimate_tangent: eigensolver failed at point " +
                                     std::to_string(i),
                                 i);

    // eigensolver is ascending; flip to descending
    Eigen::VectorXd evals(D);
    Eigen::MatrixXd evecs(D, D);
    for (int k = 0; k < D; ++k) {
        evals(k) = es.eigenvalues()(D - 1 - k);
        evecs.col(k) = es.eigenvectors().col(D - 1 - k);
    }

    const double top = evals(0);
    if (!(top > 0.0) || evals(d - 1) <= policy.spectral_gap_tol * top)
        throw DegenerateSpectrum("estimate_tangent: top-" + std::to_string(d) +
                                     " eigenvalue vanishes at point " + std::to_string(i),
                                 i);
    if (d < D && evals(d - 1) - evals(d) <= policy.spectral_gap_tol * top)
        throw DegenerateSpectrum("estimate_tangent: eigenvalues " + std::to_string(d - 1) +
                                     " and " + std::to_string(d) +
                                     " coincide at point " + std::to_string(i),
                                 i);

    Eigen::MatrixXd basis = evecs.leftCols(d);
    for (int k = 0; k < d; ++k) {
        for (int r = 0; r < D; ++r) {
            if (std::abs(basis(r, k)) > policy.abs) {
                if (basis(r, k) < 0.0) basis.col(k) = -basis.col(k);
                break;
            }
        }
    }

    TangentEstimate out;
    out.frame = Frame(std::move(basis), policy);
    out.eigenvalues = std::move(evals);
    out.neighbor_count = count;
    return out;
}

TangentField estimate_all_tangents(const PointCloud& cloud, double h, int threads,
                                   const NumericPolicy& policy) {
    const std::size_t n = static_cast<std::size_t>(cloud.size());
    TangentField field;
    field.bandwidth = h;
    field.estimates.resize(n);

    std::vector<std::exception_ptr> errs(n);
    parallel_for(n, threads, [&](std::size_t i) {
        try {
            field.estimates[i] = estimate_tangent(cloud, static_cast<int>(i), h, policy);
        } catch (...) {
            errs[i] = std::current_exception();
        }
    });
    for (std::size_t i = 0; i < n; ++i)
        if (errs[i]) std::rethrow_exception(errs[i]);  // lowest failing index
    return field;
}

}  // namespace boundarykit
