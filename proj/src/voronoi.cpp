#include "boundarykit/voronoi.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "boundarykit/geometry.hpp"

namespace boundarykit {

namespace {

constexpr int kMaxCellDim = 6;

// x . normal <= offset, |normal| = 1
struct Halfspace {
    std::array<double, kMaxCellDim> normal;
    double offset;
};

double dot(const std::array<double, kMaxCellDim>& a, const double* b, int d) {
    double s = 0.0;
    for (int k = 0; k < d; ++k) s += a[k] * b[k];
    return s;
}

// Solve the d x d system rows(idx) . v = offsets(idx) by partial-pivot
// elimination.  Unit-norm rows make an absolute pivot threshold meaningful.
bool solve_vertex(const std::vector<Halfspace>& hs, const int* idx, int d, double* v) {
    double A[kMaxCellDim][kMaxCellDim + 1];
    for (int r = 0; r < d; ++r) {
        const Halfspace& h = hs[static_cast<std::size_t>(idx[r])];
        for (int c = 0; c < d; ++c) A[r][c] = h.normal[c];
        A[r][d] = h.offset;
    }
    for (int c = 0; c < d; ++c) {
        int piv = c;
        for (int r = c + 1; r < d; ++r)
            if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
        if (std::abs(A[piv][c]) < 1e-10) return false;  // parallel/degenerate subset
        if (piv != c)
            for (int k = c; k <= d; ++k) std::swap(A[c][k], A[piv][k]);
        for (int r = c + 1; r < d; ++r) {
            double f = A[r][c] / A[c][c];
            if (f == 0.0) continue;
            for (int k = c; k <= d; ++k) A[r][k] -= f * A[c][k];
        }
    }
    for (int r = d - 1; r >= 0; --r) {
        double s = A[r][d];
        for (int k = r + 1; k < d; ++k) s -= A[r][k] * v[k];
        v[r] = s / A[r][r];
    }
    return true;
}

struct CellScan {
    double radius2 = -1.0;
    std::vector<std::array<double, kMaxCellDim>> top;  // vertices near the max
    double tie_tol;

    void consider(const double* v, const double* p, int d) {
        double r2 = 0.0;
        for (int k = 0; k < d; ++k) r2 += (v[k] - p[k]) * (v[k] - p[k]);
        double r = std::sqrt(std::max(r2, 0.0));
        double best = radius2 < 0.0 ? -1.0 : std::sqrt(radius2);
        if (r > best) {
            if (r - tie_tol > best) top.clear();
            radius2 = r2;
        } else if (r < best - tie_tol) {
            return;
        }
        std::array<double, kMaxCellDim> entry{};
        for (int k = 0; k < d; ++k) entry[k] = v[k];
        top.push_back(entry);
    }
};

// Enumerate feasible vertices of the polytope cut out by `hs`, tracking the
// distance maximum from p.  Returns false when no subset produced a feasible
// vertex (cannot happen for a nonempty box-clipped cell; guarded anyway).
bool enumerate_cell(const std::vector<Halfspace>& hs, const double* p, int d, double feas_tol,
                    CellScan& scan) {
    const int M = static_cast<int>(hs.size());
    if (M < d) return false;
    int idx[kMaxCellDim];
    for (int k = 0; k < d; ++k) idx[k] = k;
    double v[kMaxCellDim];
    bool any = false;
    while (true) {
        if (solve_vertex(hs, idx, d, v)) {
            bool ok = true;
            for (int c = 0; c < M && ok; ++c)
                ok = dot(hs[static_cast<std::size_t>(c)].normal, v, d) <=
                     hs[static_cast<std::size_t>(c)].offset + feas_tol;
            if (ok) {
                scan.consider(v, p, d);
                any = true;
            }
        }
        // next lexicographic d-combination of [0, M)
        int k = d - 1;
        while (k >= 0 && idx[k] == M - d + k) --k;
        if (k < 0) break;
        ++idx[k];
        for (int j = k + 1; j < d; ++j) idx[j] = idx[j - 1] + 1;
    }
    return any;
}

}  // namespace

VoronoiProbe cell_probe(const std::vector<Eigen::VectorXd>& sites, int p_index, double clip,
                        const NumericPolicy& policy) {
    if (sites.empty()) throw EmptyInput("cell_probe: no sites");
    if (p_index < 0 || p_index >= static_cast<int>(sites.size()))
        throw IndexOutOfRange("cell_probe: site index out of range");
    const int d = static_cast<int>(sites[static_cast<std::size_t>(p_index)].size());
    if (d < 1 || d > kMaxCellDim)
        throw DimensionTooHigh("cell_probe: dimension " + std::to_string(d) +
                               " outside [1, " + std::to_string(kMaxCellDim) + "]");
    for (const auto& s : sites)
        if (static_cast<int>(s.size()) != d)
            throw DimensionMismatch("cell_probe: mixed site dimensions");
    if (!(clip > 0.0) || !std::isfinite(clip))
        throw ParamsOutOfRange("cell_probe: clip must be positive and finite");

    const Eigen::VectorXd& p = sites[static_cast<std::size_t>(p_index)];
    double pbuf[kMaxCellDim];
    for (int k = 0; k < d; ++k) pbuf[k] = p(k);

    // drop copies of p, merge duplicate sites (first occurrence wins)
    std::vector<Eigen::VectorXd> others;
    others.reserve(sites.size());
    for (const auto& s : sites) {
        if ((s - p).norm() <= policy.abs) continue;
        bool dup = false;
        for (const auto& o : others)
            if ((s - o).norm() <= policy.abs) {
                dup = true;
                break;
            }
        if (!dup) others.push_back(s);
    }

    // distance order, index as tie-break, so the active-set growth is
    // deterministic
    std::vector<int> order(others.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> dist(others.size());
    for (std::size_t s = 0; s < others.size(); ++s) dist[s] = (others[s] - p).norm();
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        std::size_t ua = static_cast<std::size_t>(a), ub = static_cast<std::size_t>(b);
        return dist[ua] != dist[ub] ? dist[ua] < dist[ub] : a < b;
    });

    const double scale = 1.0 + p.cwiseAbs().maxCoeff() + clip;
    const double feas_tol = policy.rel * scale;

    std::vector<Halfspace> hs;
    auto rebuild = [&](std::size_t active_count) {
        hs.clear();
        hs.reserve(active_count + 2 * static_cast<std::size_t>(d));
        for (std::size_t s = 0; s < active_count; ++s) {
            const Eigen::VectorXd& q = others[static_cast<std::size_t>(order[s])];
            Eigen::VectorXd nrm = (q - p) / (q - p).norm();
            Halfspace h{};
            for (int k = 0; k < d; ++k) h.normal[k] = nrm(k);
            h.offset = nrm.dot((q + p) / 2.0);
            hs.push_back(h);
        }
        for (int k = 0; k < d; ++k) {
            Halfspace lo{}, hi{};
            hi.normal[k] = 1.0;
            hi.offset = p(k) + clip;
            lo.normal[k] = -1.0;
            lo.offset = clip - p(k);
            hs.push_back(hi);
            hs.push_back(lo);
        }
    };

    // Active-set loop.  Enumerating a subset of the bisectors can only grow
    // the cell, so the radius it reports upper-bounds the true radius; any
    // site farther than twice that bound has its bisector strictly outside
    // the ball containing the cell and cannot cut it.  When the inclusion
    // threshold stabilizes, the restricted cell equals the full cell exactly.
    std::size_t active = std::min<std::size_t>(others.size(),
                                               static_cast<std::size_t>(2 * d + 6));
    CellScan scan;
    while (true) {
        rebuild(active);
        scan = CellScan{};
        scan.tie_tol = feas_tol;
        if (!enumerate_cell(hs, pbuf, d, feas_tol, scan))
            throw NumericError("cell_probe: vertex enumeration found no feasible vertex");
        double R = std::sqrt(std::max(scan.radius2, 0.0));
        double include = 2.0 * R * (1.0 + policy.rel) + policy.abs;
        std::size_t needed = active;
        while (needed < others.size() &&
               dist[static_cast<std::size_t>(order[needed])] <= include)
            ++needed;
        if (needed == active) break;
        active = needed;
    }

    VoronoiProbe probe;
    probe.radius = std::sqrt(std::max(scan.radius2, 0.0));

    // lexicographically smallest vertex among those attaining the radius;
    // boundedness looks at all of them
    const double facet_tol = feas_tol;
    bool on_facet = false;
    const std::array<double, kMaxCellDim>* best = nullptr;
    for (const auto& v : scan.top) {
        double r = 0.0;
        for (int k = 0; k < d; ++k) r += (v[k] - pbuf[k]) * (v[k] - pbuf[k]);
        if (std::sqrt(r) < probe.radius - scan.tie_tol) continue;
        for (int k = 0; k < d; ++k)
            if (std::abs(v[k] - pbuf[k]) >= clip - facet_tol) on_facet = true;
        if (!best) {
            best = &v;
            continue;
        }
        for (int k = 0; k < d; ++k) {
            if (v[k] < (*best)[k]) {
                best = &v;
                break;
            }
            if (v[k] > (*best)[k]) break;
        }
    }
    probe.witness = Eigen::VectorXd(d);
    for (int k = 0; k < d; ++k) probe.witness(k) = (*best)[k];
    probe.bounded = !on_facet;
    if (probe.radius > policy.abs * scale) {
        probe.direction = (probe.witness - p) / probe.radius;
    }
    return probe;
}

LocalProjection project_local_cloud(const PointCloud& cloud, const TangentField& tangents,
                                    int j, double R0) {
    if (tangents.size() != cloud.size())
        throw DimensionMismatch("project_local_cloud: tangent field size mismatch");
    if (!(R0 >= 0.0)) throw ParamsOutOfRange("project_local_cloud: R0 must be nonnegative");
    LocalProjection out;
    const Frame& frame = tangents.frame(j);
    Eigen::VectorXd xj = cloud.point(j);
    out.cloud_indices = neighbors_within(cloud, j, R0);
    out.sites.reserve(out.cloud_indices.size());
    for (std::size_t s = 0; s < out.cloud_indices.size(); ++s) {
        int k = out.cloud_indices[s];
        if (k == j) {
            out.origin_position = static_cast<int>(s);
            out.sites.push_back(Eigen::VectorXd::Zero(frame.dim()));
        } else {
            out.sites.push_back(frame.project_coeffs(cloud.point(k) - xj));
        }
    }
    return out;
}

}  // namespace boundarykit
