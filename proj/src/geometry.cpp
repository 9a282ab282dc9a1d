#include "boundarykit/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace boundarykit {

Frame::Frame(Eigen::MatrixXd basis, const NumericPolicy& policy) : basis_(std::move(basis)) {
    int D = static_cast<int>(basis_.rows());
    int k = static_cast<int>(basis_.cols());
    if (k > 0 && D < 1) throw DimensionMismatch("frame with vectors of dimension 0");
    if (k > D) throw DimensionMismatch("frame dimension exceeds ambient dimension");
    if (k > 0) {
        double gram_err =
            (basis_.transpose() * basis_ - Eigen::MatrixXd::Identity(k, k)).cwiseAbs().maxCoeff();
        if (gram_err > policy.orthonormal_tol)
            throw InvalidParams("frame columns are not orthonormal (Gram residual " +
                                std::to_string(gram_err) + ")");
    }
}

Frame orthonormalize(const std::vector<Eigen::VectorXd>& vectors, const NumericPolicy& policy) {
    if (vectors.empty()) throw EmptySet("orthonormalize: no vectors");
    int D = static_cast<int>(vectors[0].size());
    int k = static_cast<int>(vectors.size());
    if (D < 1) throw DimensionMismatch("orthonormalize: zero-dimensional vectors");
    Eigen::MatrixXd A(D, k);
    for (int j = 0; j < k; ++j) {
        if (vectors[j].size() != D)
            throw DimensionMismatch("orthonormalize: mixed vector dimensions");
        A.col(j) = vectors[j];
    }
    if (k > D) throw RankDeficient("orthonormalize: more vectors than ambient dimension");

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
    double smax = svd.singularValues()(0);
    double smin = svd.singularValues()(k - 1);
    if (smax <= 0.0 || smin <= policy.rank_tol * smax)
        throw RankDeficient("orthonormalize: numerically dependent input");

    // Householder QR keeps exact zeros of axis-aligned input; normalize signs
    // so the change of basis from the input has positive diagonal.
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(A);
    Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(D, k);
    Eigen::MatrixXd R = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    for (int j = 0; j < k; ++j)
        if (R(j, j) < 0) Q.col(j) = -Q.col(j);
    return Frame(std::move(Q), policy);
}

Decomposition decompose(const Frame& frame, const Eigen::VectorXd& v) {
    if (v.size() != frame.ambient_dim())
        throw DimensionMismatch("decompose: vector dimension does not match frame");
    Decomposition out;
    out.tangential = frame.project_coeffs(v);
    Eigen::VectorXd residual = v - frame.lift(out.tangential);
    out.normal_norm = residual.norm();
    return out;
}

Eigen::MatrixXd complement_basis(const Eigen::VectorXd& unit) {
    const int D = static_cast<int>(unit.size());
    if (D < 1) throw ParamsOutOfRange("complement_basis: empty vector");
    if (std::abs(unit.norm() - 1.0) > 1e-9)
        throw ParamsOutOfRange("complement_basis: input must be a unit vector");
    Eigen::VectorXd w = unit;
    w(0) += (unit(0) >= 0.0 ? 1.0 : -1.0);
    Eigen::MatrixXd H =
        Eigen::MatrixXd::Identity(D, D) - (2.0 / w.squaredNorm()) * (w * w.transpose());
    return H.rightCols(D - 1);
}

double principal_angle(const Frame& f1, const Frame& f2) {
    if (f1.ambient_dim() != f2.ambient_dim())
        throw DimensionMismatch("principal_angle: ambient dimensions differ");
    Eigen::MatrixXd diff = f1.projector() - f2.projector();
    // symmetric, so the operator norm is the largest absolute eigenvalue
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(diff, Eigen::EigenvaluesOnly);
    double lo = std::abs(es.eigenvalues()(0));
    double hi = std::abs(es.eigenvalues()(es.eigenvalues().size() - 1));
    return std::max(lo, hi);
}

double directed_hausdorff(const std::vector<Eigen::VectorXd>& a,
                          const std::vector<Eigen::VectorXd>& b) {
    if (a.empty() || b.empty()) throw EmptySet("hausdorff: empty point set");
    const int D = static_cast<int>(a[0].size());
    for (const auto& p : a)
        if (p.size() != D) throw DimensionMismatch("hausdorff: mixed dimensions");
    for (const auto& p : b)
        if (p.size() != D) throw DimensionMismatch("hausdorff: mixed dimensions");

    double worst2 = 0.0;  // squared distances throughout
    for (const auto& p : a) {
        double best2 = std::numeric_limits<double>::infinity();
        for (const auto& q : b) {
            double d2 = (p - q).squaredNorm();
            if (d2 < best2) {
                best2 = d2;
                if (best2 <= worst2) break;  // cannot raise the max
            }
        }
        if (best2 > worst2) worst2 = best2;
    }
    return std::sqrt(worst2);
}

double hausdorff(const std::vector<Eigen::VectorXd>& a,
                 const std::vector<Eigen::VectorXd>& b) {
    return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

std::vector<int> neighbors_within(const PointCloud& cloud, int i, double radius) {
    if (i < 0 || i >= cloud.size())
        throw IndexOutOfRange("neighbors_within: index " + std::to_string(i) +
                              " outside [0, " + std::to_string(cloud.size()) + ")");
    if (radius < 0.0) throw ParamsOutOfRange("neighbors_within: negative radius");
    std::vector<int> out;
    const auto& P = cloud.points();
    const double r2 = radius * radius;
    Eigen::RowVectorXd c = P.row(i);
    for (int j = 0; j < cloud.size(); ++j)
        if ((P.row(j) - c).squaredNorm() <= r2) out.push_back(j);
    return out;
}

}  // namespace boundarykit
