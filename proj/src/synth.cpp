#include "boundarykit/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "boundarykit/rng.hpp"

namespace boundarykit {

namespace {

constexpr double kPi = 3.141592653589793238462643383279;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kOnManifoldTol = 1e-6;

// ----------------------------------------------------------------------
// small numeric helpers

// golden-section minimum of f on [a, b]; f unimodal on the bracket
template <typename F>
double golden_min(F&& f, double a, double b, int iters = 90) {
    const double gr = 0.6180339887498948482;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < iters; ++i) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

// coarse grid + golden refinement around the best node; returns the argmin
template <typename F>
double grid_refine_1d(F&& f, double a, double b, int nodes) {
    double best_t = a, best_f = f(a);
    double step = (b - a) / (nodes - 1);
    for (int k = 1; k < nodes; ++k) {
        double t = a + step * k;
        double v = f(t);
        if (v < best_f) {
            best_f = v;
            best_t = t;
        }
    }
    double lo = std::max(a, best_t - step), hi = std::min(b, best_t + step);
    return golden_min(f, lo, hi);
}

// compass pattern search for a 2-variable objective; step halves on failure
template <typename F>
void pattern_search_2d(F&& f, double& x, double& y, double sx, double sy, int halvings = 64) {
    double fx = f(x, y);
    for (int h = 0; h < halvings;) {
        bool moved = false;
        const double cand[8][2] = {{sx, 0},  {-sx, 0}, {0, sy},   {0, -sy},
                                   {sx, sy}, {sx, -sy}, {-sx, sy}, {-sx, -sy}};
        for (const auto& c : cand) {
            double v = f(x + c[0], y + c[1]);
            if (v < fx) {
                fx = v;
                x += c[0];
                y += c[1];
                moved = true;
                break;
            }
        }
        if (!moved) {
            sx *= 0.5;
            sy *= 0.5;
            ++h;
        }
    }
}

}  // namespace

// ----------------------------------------------------------------------
// BumpMap

BumpMap::BumpMap(Eigen::VectorXd x0, double delta, double eta, Eigen::VectorXd push_dir)
    : x0_(std::move(x0)), e1_(std::move(push_dir)), delta_(delta), eta_(eta) {
    if (!(delta_ > 0.0)) throw ParamsOutOfRange("bump map: delta must be positive");
    if (eta_ < 0.0) throw ParamsOutOfRange("bump map: eta must be nonnegative");
    if (x0_.size() != e1_.size()) throw DimensionMismatch("bump map: x0 / direction mismatch");
    double n = e1_.norm();
    if (n <= 0.0) throw ParamsOutOfRange("bump map: zero push direction");
    e1_ /= n;
}

double BumpMap::phi(const Eigen::VectorXd& y) {
    double n2 = y.squaredNorm();
    if (n2 >= 1.0) return 0.0;
    return std::exp(-n2 / (1.0 - n2));
}

Eigen::VectorXd BumpMap::grad_phi(const Eigen::VectorXd& y) {
    double n2 = y.squaredNorm();
    if (n2 >= 1.0) return Eigen::VectorXd::Zero(y.size());
    double s = 1.0 - n2;
    return (-2.0 * std::exp(-n2 / s) / (s * s)) * y;
}

Eigen::VectorXd BumpMap::apply(const Eigen::VectorXd& x) const {
    double v = phi((x - x0_) / delta_);
    if (v == 0.0) return x;  // identity outside the support, bit-exact
    return x + (eta_ * v) * e1_;
}

Eigen::MatrixXd BumpMap::jacobian(const Eigen::VectorXd& x) const {
    const int D = static_cast<int>(x.size());
    Eigen::VectorXd g = grad_phi((x - x0_) / delta_);
    return Eigen::MatrixXd::Identity(D, D) + (eta_ / delta_) * (e1_ * g.transpose());
}

double BumpMap::grad_phi_norm_fd(const Eigen::VectorXd& y, double step) {
    const int D = static_cast<int>(y.size());
    Eigen::VectorXd g(D);
    for (int k = 0; k < D; ++k) {
        Eigen::VectorXd hi = y, lo = y;
        hi(k) += step;
        lo(k) -= step;
        g(k) = (phi(hi) - phi(lo)) / (2.0 * step);
    }
    return g.norm();
}

double BumpMap::hess_phi_norm_fd(const Eigen::VectorXd& y, double step) {
    const int D = static_cast<int>(y.size());
    Eigen::MatrixXd H(D, D);
    double f0 = phi(y);
    for (int a = 0; a < D; ++a) {
        Eigen::VectorXd hi = y, lo = y;
        hi(a) += step;
        lo(a) -= step;
        H(a, a) = (phi(hi) - 2.0 * f0 + phi(lo)) / (step * step);
        for (int b = a + 1; b < D; ++b) {
            Eigen::VectorXd pp = y, pm = y, mp = y, mm = y;
            pp(a) += step; pp(b) += step;
            pm(a) += step; pm(b) -= step;
            mp(a) -= step; mp(b) += step;
            mm(a) -= step; mm(b) -= step;
            H(a, b) = H(b, a) = (phi(pp) - phi(pm) - phi(mp) + phi(mm)) / (4.0 * step * step);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H, Eigen::EigenvaluesOnly);
    return std::max(std::abs(es.eigenvalues()(0)),
                    std::abs(es.eigenvalues()(es.eigenvalues().size() - 1)));
}

double BumpMap::dmap_minus_identity_norm_fd(const Eigen::VectorXd& x, double step) const {
    // dPhi - I = (eta/delta) e1 grad^T, so the operator norm is eta/delta
    // times |grad phi|; estimate the gradient by central differences of phi
    return (eta_ / delta_) * grad_phi_norm_fd((x - x0_) / delta_, step / delta_);
}

double BumpMap::d2map_norm_fd(const Eigen::VectorXd& x, double step) const {
    // second differential is eta e1 (x) Hess phi / delta^2; its norm as a
    // bilinear map is eta/delta^2 times the spectral norm of the Hessian
    return (eta_ / (delta_ * delta_)) * hess_phi_norm_fd((x - x0_) / delta_, step / delta_);
}

BumpMap::Admissibility BumpMap::admissibility(double base_reach) const {
    Admissibility a;
    a.slope = 2.5 * eta_ / delta_;
    a.slope_limit = 0.1;
    a.curvature = 23.0 * eta_ / (delta_ * delta_);
    a.curvature_limit = 0.5 / base_reach;
    return a;
}

// ----------------------------------------------------------------------
// manifold implementations

struct SyntheticManifold::Impl {
    ManifoldKind kind;
    int d = 1, D = 1;
    bool has_bd = false;
    ReachInfo reach;

    virtual ~Impl() = default;
    virtual Eigen::VectorXd sample_one(CounterRng& rng) const = 0;
    virtual double dist(const Eigen::VectorXd& z) const = 0;
    virtual double bd_dist(const Eigen::VectorXd& x) const { (void)x; return kInf; }
    virtual Frame tangent(const Eigen::VectorXd& x) const = 0;
    virtual Eigen::VectorXd outward(const Eigen::VectorXd& x) const {
        (void)x;
        throw InvalidParams(kind_name(kind) + " has no boundary");
    }
    virtual std::vector<Eigen::VectorXd> grid_bd(int count) const {
        (void)count;
        throw InvalidParams(kind_name(kind) + " has no boundary");
    }
    virtual std::string params() const { return ""; }
};

namespace {

struct SegmentImpl final : SyntheticManifold::Impl {
    double L;
    explicit SegmentImpl(double length, int ambient) : L(length) {
        kind = ManifoldKind::segment;
        d = 1;
        D = ambient;
        has_bd = true;
        reach = {kInf, L / 2.0};
    }
    Eigen::VectorXd sample_one(CounterRng& rng) const override {
        Eigen::VectorXd x = Eigen::VectorXd::Zero(D);
        x(0) = L * rng.uniform();
        return x;
    }
    double dist(const Eigen::VectorXd& z) const override {
        double t = std::clamp(z(0), 0.0, L);
        double s2 = (z(0) - t) * (z(0) - t);
        for (int k = 1; k < D; ++k) s2 += z(k) * z(k);
        return std::sqrt(s2);
    }
    double bd_dist(const Eigen::VectorXd& x) const override {
        return std::max(0.0, std::min(x(0), L - x(0)));
    }
    Frame tangent(const Eigen::VectorXd&) const override {
        Eigen::MatrixXd b = Eigen::MatrixXd::Zero(D, 1);
        b(0, 0) = 1.0;
        return Frame(b);
    }
    Eigen::VectorXd outward(const Eigen::VectorXd& x) const override {
        Eigen::VectorXd n = Eigen::VectorXd::Zero(D);
        n(0) = x(0) <= L / 2.0 ? -1.0 : 1.0;
        return n;
    }
    std::vector<Eigen::VectorXd> grid_bd(int) const override {
        Eigen::VectorXd a = Eigen::VectorXd::Zero(D), b = Eigen::VectorXd::Zero(D);
        b(0) = L;
        return {a, b};
    }
    std::string params() const override { return "length=" + format_double(L); }
};

struct CircleImpl final : SyntheticManifold::Impl {
    double R;
    explicit CircleImpl(double radius) : R(radius) {
        kind = ManifoldKind::circle;
        d = 1;
        D = 2;
        reach = {R, kInf};
    }
    Eigen::VectorXd sample_one(CounterRng& rng) const override {
        double th = 2.0 * kPi * rng.uniform();
        Eigen::Vector2d x(R * std::cos(th), R * std::sin(th));
        return x;
    }
    double dist(const Eigen::VectorXd& z) const override { return std::abs(z.norm() - R); }
    Frame tangent(const Eigen::VectorXd& x) const override {
        Eigen::Vector2d u = x.normalized();
        Eigen::MatrixXd b(2, 1);
        b(0, 0) = -u(1);
        b(1, 0) = u(0);
        return Frame(b);
    }
    std::string params() const override { return "radius=" + format_double(R); }
};

struct SphereImpl final : SyntheticManifold::Impl {
    double R;
    explicit SphereImpl(double radius) : R(radius) {
        kind = ManifoldKind::sphere;
        d = 2;
        D = 3;
        reach = {R, kInf};
    }
    Eigen::VectorXd sample_one(CounterRng& rng) const override {
        Eigen::Vector3d g;
        do {
            for (int k = 0; k < 3; ++k) g(k) = rng.normal();
        } while (g.norm() < 1e-12);
        return R * g.normalized();
    }
    double dist(const Eigen::VectorXd& z) const override { return std::abs(z.norm() - R); }
    Frame tangent(const Eigen::VectorXd& x) const override {
        return Frame(complement_basis(x.normalized()));
    }
    std::string params() const override { return "radius=" + format_double(R); }
};

struct SpiralImpl final : SyntheticManifold::Impl {
    static constexpr double T = 5.0 * kPi;
    SpiralImpl() {
        kind = ManifoldKind::spiral;
        d = 1;
        D = 3;
        has_bd = true;
        // manifold reach certified numerically (pair formula on a dense
        // grid, dominated by the gap between consecutive windings); the
        // boundary reach is half the distance between the two endpoints
        reach = {0.9916, 0.5 * std::sqrt(4.0 + 25.0 * kPi * kPi / 9.0)};
    }
    static Eigen::Vector3d at(double t) {
        return {std::cos(t), std::sin(t), t / 3.0};
    }
    Eigen::VectorXd sample_one(CounterRng& rng) const override {
        return at(T * rng.uniform());
    }
    double nearest_param(const Eigen::VectorXd& z) const {
        auto f = [&](double t) { return (at(t) - z.head<3>()).squaredNorm(); };
        return grid_refine_1d(f, 0.0, T, 4096);
    }
    double dist(const Eigen::VectorXd& z) const override {
        return (at(nearest_param(z)) - z.head<3>()).norm();
    }
    double bd_dist(const Eigen::VectorXd& x) const override {
        return std::min((x.head<3>() - at(0.0)).norm(), (x.head<3>() - at(T)).norm());
    }
    Frame tangent(const Eigen::VectorXd& x) const override {
        double t = nearest_param(x);
        Eigen::Vector3d v(-std::sin(t), std::cos(t), 1.0 / 3.0);
        Eigen::MatrixXd b(3, 1);
        b.col(0) = v.normalized();
        return Frame(b);
    }
    Eigen::VectorXd outward(const Eigen::VectorXd& x) const override {
        bool at_start = (x.head<3>() - at(0.0)).norm() <= (x.head<3>() - at(T)).norm();
        double t = at_start ? 0.0 : T;
        Eigen::Vector3d v(-std::sin(t), std::cos(t), 1.0 / 3.0);
        v.normalize();
        return at_start ? Eigen::VectorXd(-v) : Eigen::VectorXd(v);
    }
    std::vector<Eigen::VectorXd> grid_bd(int) const override {
        return {Eigen::VectorXd(at(0.0)), Eigen::VectorXd(at(T))};
    }
    std::string params() const override { return "t_max=5pi"; }
};

struct AnnulusImpl final : SyntheticManifold::Impl {
    static constexpr double r0 = 0.4, r1 = 1.0;
    AnnulusImpl() {
        kind = ManifoldKind::annulus;
        d = 2;
        D = 2;
        has_bd = true;
        // boundary reach: the medial axis of the two circles is {0} union
        // the circle of radius 0.7, so reach(dM) = min(0.3, 0.4) = 0.3
        reach = {0.4, 0.3};
    }
    Eigen::VectorXd sample_one(CounterRng& rng) const override {
        double r = std::sqrt(r0 * r0 + (r1 * r1 - r0 * r0) * rng.uniform());
        double th = 2.0 * kPi * rng.uniform();
        return Eigen::Vector2d(r * std::cos(th), r * std::sin(th));
    }
    double dist(const Eigen::VectorXd& z) const override {
        double n = z.norm();
        if (n > r1) return n - r1;
        if (n < r0) return r0 - n;
        return 0.0;
    }
    double bd_dist(const Eigen::VectorXd& x) const override {
        double n = x.norm();
        return std::max(0.0, std::min(r1 - n, n - r0));
    }
    Frame tangent(const Eigen::VectorXd&) const override {
        return Frame(Eigen::MatrixXd::Identity(2, 2));
    }
    Eigen::VectorXd outward(const Eigen::VectorXd& x) const override {
        double n = x.norm();
        Eigen::Vector2d u = x / n;
        return (r1 - n <= n - r0) ? Eigen::VectorXd(u) : Eigen::VectorXd(-u);
    }
    std::vector<Eigen::VectorXd> grid_bd(int count) const override {
        // both circles, points split in proportion to circumference
        count = std::max(count, 4);
        int n_out = static_cast<int>(std::lround(count * r1 / (r0 + r1)));
        n_out = std::clamp(n_out, 2, count - 2);
        int n_in = count - n_out;
        std::vector<Eigen::VectorXd> out;
        out.reserve(static_cast<std::size_t>(count));
        for (int k = 0; k < n_out; ++k) {
            double th = 2.0 * kPi * k / n_out;
            out.push_back(Eigen::Vector2d(r1 * std::cos(th), r1 * std::sin(th)));
        }
        for (int k = 0; k < n_in; ++k) {
            double th = 2.0 * kPi * k / n_in;
            out.push_back(Eigen::Vector2d(r0 * std::cos(th), r0 * std::sin(th)));
        }
        return out;
    }
    std::string params() const override { return "radii=[0.4,1]"; }
};

struct HalfSphereImpl final : SyntheticManifold::Impl {
    HalfSphereImpl() {
        kind = ManifoldKind::half_sphere;
        d = 2;
        D = 3;
        has_bd = true;
        reach = {1.0, 1.0};  // unit sphere piece; boundary is a unit circle
    }
    Eigen::VectorXd sample_one(CounterRng& rng) const override {
        Eigen::Vector3d g;
        do {
            for (int k = 0; k < 3; ++k) g(k) = rng.normal();
        } while (g.norm() < 1e-12);
        g.normalize();
        g(0) = std::abs(g(0));  // fold onto x0 >= 0
        return g;
    }
    double dist(const Eigen::VectorXd& z) const override {
        if (z(0) >= 0.0) return std::abs(z.norm() - 1.0);
        double s = std::hypot(z(1), z(2));
        return std::hypot(z(0), s - 1.0);
    }
    double bd_dist(const Eigen::VectorXd& x) const override {
        double s = std::hypot(x(1), x(2));
        return std::hypot(x(0), s - 1.0);
    }
    Frame tangent(const Eigen::VectorXd& x) const override {
        return Frame(complement_basis(x.normalized()));
    }
    Eigen::VectorXd outward(const Eigen::VectorXd&) const override {
        Eigen::VectorXd n = Eigen::VectorXd::Zero(3);
        n(0) = -1.0;
        return n;
    }
    std::vector<Eigen::VectorXd> grid_bd(int count) const override {
        count = std::max(count, 3);
        std::vector<Eigen::VectorXd> out;
        out.reserve(static_cast<std::size_t>(count));
        for (int k = 0; k < count; ++k) {
            double th = 2.0 * kPi * k / count;
            out.push_back(Eigen::Vector3d(0.0, std::cos(th), std::sin(th)));
        }
        return out;
    }
    std::string params() const override { return "radius=1"; }
};

struct MoebiusImpl final : SyntheticManifold::Impl {
    MoebiusImpl() {
        kind = ManifoldKind::moebius;
        d = 2;
        D = 3;
        has_bd = true;
        // both values certified numerically: the surface reach by the pair
        // formula on a 61x600 grid with local refinement (2.1205...), the
        // boundary reach by opposite-edge pairs at distance exactly 2
        reach = {2.12, 1.0};
    }
    static Eigen::Vector3d at(double u, double th) {
        double w = u * std::cos(th / 2.0) + 3.0;
        return {w * std::cos(th), w * std::sin(th), u * std::sin(th / 2.0)};
    }
    static Eigen::Vector3d du_vec(double u, double th) {
        (void)u;
        return {std::cos(th / 2.0) * std::cos(th), std::cos(th / 2.0) * std::sin(th),
                std::sin(th / 2.0)};
    }
    static Eigen::Vector3d dth_vec(double u, double th) {
        double w = u * std::cos(th / 2.0) + 3.0;
        double hu = 0.5 * u * std::sin(th / 2.0);
        return {-w * std::sin(th) - hu * std::cos(th), w * std::cos(th) - hu * std::sin(th),
                0.5 * u * std::cos(th / 2.0)};
    }
    // area element: the coordinate tangents are orthogonal with |du| = 1, so
    // it equals |dth| = sqrt(w^2 + u^2/4); the maximum over the domain is at
    // u = 1, th = 0
    static double area_element(double u, double th) {
        double w = u * std::cos(th / 2.0) + 3.0;
        return std::sqrt(w * w + 0.25 * u * u);
    }
    Eigen::VectorXd sample_one(CounterRng& rng) const override {
        const double a_max = std::sqrt(16.25);
        while (true) {
            double u = rng.uniform(-1.0, 1.0);
            double th = rng.uniform(0.0, 2.0 * kPi);
            if (rng.uniform() * a_max <= area_element(u, th)) return at(u, th);
        }
    }
    std::pair<double, double> nearest_param(const Eigen::VectorXd& z) const {
        Eigen::Vector3d p = z.head<3>();
        double bu = 0.0, bt = 0.0, bf = kInf;
        const int nu = 17, nt = 256;
        for (int i = 0; i < nu; ++i) {
            double u = -1.0 + 2.0 * i / (nu - 1);
            for (int j = 0; j < nt; ++j) {
                double th = 2.0 * kPi * j / nt;
                double f = (at(u, th) - p).squaredNorm();
                if (f < bf) {
                    bf = f;
                    bu = u;
                    bt = th;
                }
            }
        }
        // th is free (the chart formula continues across the seam with the
        // u -> -u identification built in), u clamps to the strip
        auto f = [&](double u, double th) {
            return (at(std::clamp(u, -1.0, 1.0), th) - p).squaredNorm();
        };
        pattern_search_2d(f, bu, bt, 2.0 / (nu - 1), 2.0 * kPi / nt);
        return {std::clamp(bu, -1.0, 1.0), bt};
    }
    double dist(const Eigen::VectorXd& z) const override {
        auto [u, th] = nearest_param(z);
        return (at(u, th) - z.head<3>()).norm();
    }
    double bd_dist(const Eigen::VectorXd& x) const override {
        // one closed curve: B(t) = at(1, t) for t in [0, 4pi)
        Eigen::Vector3d p = x.head<3>();
        auto f = [&](double t) { return (at(1.0, t) - p).squaredNorm(); };
        double t = grid_refine_1d(f, 0.0, 4.0 * kPi, 2048);
        return (at(1.0, t) - p).norm();
    }
    Frame tangent(const Eigen::VectorXd& x) const override {
        auto [u, th] = nearest_param(x);
        Eigen::MatrixXd b(3, 2);
        b.col(0) = du_vec(u, th);  // unit by construction
        b.col(1) = dth_vec(u, th).normalized();
        return Frame(b);
    }
    Eigen::VectorXd outward(const Eigen::VectorXd& x) const override {
        Eigen::Vector3d p = x.head<3>();
        auto f = [&](double t) { return (at(1.0, t) - p).squaredNorm(); };
        double t = grid_refine_1d(f, 0.0, 4.0 * kPi, 2048);
        return du_vec(1.0, t);  // unit, points off the u = 1 edge
    }
    std::vector<Eigen::VectorXd> grid_bd(int count) const override {
        count = std::max(count, 3);
        std::vector<Eigen::VectorXd> out;
        out.reserve(static_cast<std::size_t>(count));
        for (int k = 0; k < count; ++k)
            out.push_back(Eigen::VectorXd(at(1.0, 4.0 * kPi * k / count)));
        return out;
    }
    std::string params() const override { return "half_width=1 center_radius=3"; }
};

struct BumpedSphereImpl final : SyntheticManifold::Impl {
    BumpMap bump;
    explicit BumpedSphereImpl(double eta, double delta)
        : bump(Eigen::Vector3d(1, 0, 0), delta, eta, Eigen::Vector3d(1, 0, 0)) {
        kind = ManifoldKind::bumped_sphere;
        d = 2;
        D = 3;
        auto adm = bump.admissibility(1.0);
        if (!adm.ok())
            throw ParamsOutOfRange("bumped_sphere: eta/delta outside the admissible range");
        // conservative reach from the push-map stability bound (half the base
        // reach); the default eta = 0.0075, delta = 0.6 measures 0.94 by the
        // pair formula on a 10k-point grid
        reach = {0.5, kInf};
    }
    Eigen::Vector3d base_sample(CounterRng& rng) const {
        Eigen::Vector3d g;
        do {
            for (int k = 0; k < 3; ++k) g(k) = rng.normal();
        } while (g.norm() < 1e-12);
        return g.normalized();
    }
    double area_jacobian(const Eigen::Vector3d& q) const {
        Eigen::MatrixXd t = complement_basis(q);
        Eigen::MatrixXd m = bump.jacobian(q) * t;
        return std::sqrt((m.transpose() * m).determinant());
    }
    Eigen::VectorXd sample_one(CounterRng& rng) const override {
        double slope = 2.5 * bump.eta() / bump.delta();
        double jmax = (1.0 + slope) * (1.0 + slope);
        while (true) {
            Eigen::Vector3d q = base_sample(rng);
            if (rng.uniform() * jmax <= area_jacobian(q)) return bump.apply(q);
        }
    }
    // nearest base-sphere parameter by Fibonacci grid + tangent-plane search
    Eigen::Vector3d nearest_base(const Eigen::VectorXd& z) const {
        Eigen::Vector3d p = z.head<3>();
        const int m = 4096;
        const double ga = kPi * (3.0 - std::sqrt(5.0));
        Eigen::Vector3d best;
        double bf = kInf;
        for (int k = 0; k < m; ++k) {
            double c = 1.0 - 2.0 * (k + 0.5) / m;
            double r = std::sqrt(std::max(0.0, 1.0 - c * c));
            Eigen::Vector3d q(c, r * std::cos(ga * k), r * std::sin(ga * k));
            double f = (bump.apply(q) - p).squaredNorm();
            if (f < bf) {
                bf = f;
                best = q;
            }
        }
        Eigen::MatrixXd t = complement_basis(best);
        auto f = [&](double a, double b) {
            Eigen::Vector3d q = (best + a * t.col(0) + b * t.col(1)).normalized();
            return (bump.apply(q) - p).squaredNorm();
        };
        double a = 0.0, b = 0.0;
        pattern_search_2d(f, a, b, 0.04, 0.04, 70);
        return (best + a * t.col(0) + b * t.col(1)).normalized();
    }
    double dist(const Eigen::VectorXd& z) const override {
        return (bump.apply(nearest_base(z)) - z.head<3>()).norm();
    }
    Frame tangent(const Eigen::VectorXd& x) const override {
        Eigen::Vector3d q = nearest_base(x);
        Eigen::MatrixXd t = complement_basis(q);
        std::vector<Eigen::VectorXd> cols = {bump.jacobian(q) * t.col(0),
                                             bump.jacobian(q) * t.col(1)};
        return orthonormalize(cols);
    }
    std::string params() const override {
        return "radius=1 eta=" + format_double(bump.eta()) +
               " delta=" + format_double(bump.delta());
    }
};

struct BumpedBallImpl final : SyntheticManifold::Impl {
    BumpMap bump;
    static constexpr double R = 1.0;
    explicit BumpedBallImpl(double eta, double delta)
        : bump(Eigen::Vector2d(R, 0), delta, eta, Eigen::Vector2d(1, 0)) {
        kind = ManifoldKind::bumped_ball;
        d = 2;
        D = 2;
        has_bd = true;
        auto adm = bump.admissibility(R);
        if (!adm.ok())
            throw ParamsOutOfRange("bumped_ball: eta/delta outside the admissible range");
        // admissible pushes keep the region convex, so the region itself has
        // infinite reach; the boundary curve bound is half the base reach
        // (defaults measure 0.80 by the pair formula)
        reach = {kInf, 0.5 * R};
    }
    Eigen::Vector2d boundary_at(double t) const {
        Eigen::Vector2d q(R * std::cos(t), R * std::sin(t));
        return bump.apply(q).head<2>();
    }
    // Phi displaces along e1 only, so the inverse is a scalar fixed point;
    // the slope bound makes it a contraction
    Eigen::Vector2d invert(const Eigen::Vector2d& z) const {
        Eigen::Vector2d y = z;
        for (int it = 0; it < 60; ++it) {
            Eigen::Vector2d y_next = z - (bump.apply(y) - y);
            if ((y_next - y).norm() < 1e-15) return y_next;
            y = y_next;
        }
        return y;
    }
    Eigen::VectorXd sample_one(CounterRng& rng) const override {
        double slope = 2.5 * bump.eta() / bump.delta();
        double jmax = 1.0 + slope;
        while (true) {
            double r = R * std::sqrt(rng.uniform());
            double th = 2.0 * kPi * rng.uniform();
            Eigen::Vector2d q(r * std::cos(th), r * std::sin(th));
            Eigen::VectorXd g = BumpMap::grad_phi((q - bump.center()) / bump.delta());
            double jac = 1.0 + (bump.eta() / bump.delta()) * g(0);
            if (rng.uniform() * jmax <= jac) return bump.apply(q);
        }
    }
    double boundary_distance(const Eigen::Vector2d& p) const {
        auto f = [&](double t) { return (boundary_at(t) - p).squaredNorm(); };
        double lo = 0.0, hi = 2.0 * kPi;
        double bt = 0.0, bf = kInf;
        const int nodes = 2048;
        for (int k = 0; k < nodes; ++k) {
            double t = lo + (hi - lo) * k / nodes;
            double v = f(t);
            if (v < bf) {
                bf = v;
                bt = t;
            }
        }
        double t = golden_min(f, bt - 2.0 * kPi / nodes, bt + 2.0 * kPi / nodes);
        return (boundary_at(t) - p).norm();
    }
    double dist(const Eigen::VectorXd& z) const override {
        Eigen::Vector2d p = z.head<2>();
        if (invert(p).norm() <= R) return 0.0;
        return boundary_distance(p);
    }
    double bd_dist(const Eigen::VectorXd& x) const override {
        return boundary_distance(x.head<2>());
    }
    Frame tangent(const Eigen::VectorXd&) const override {
        return Frame(Eigen::MatrixXd::Identity(2, 2));
    }
    Eigen::VectorXd outward(const Eigen::VectorXd& x) const override {
        Eigen::Vector2d p = x.head<2>();
        auto f = [&](double t) { return (boundary_at(t) - p).squaredNorm(); };
        double bt = 0.0, bf = kInf;
        const int nodes = 2048;
        for (int k = 0; k < nodes; ++k) {
            double t = 2.0 * kPi * k / nodes;
            double v = f(t);
            if (v < bf) {
                bf = v;
                bt = t;
            }
        }
        double t = golden_min(f, bt - 2.0 * kPi / nodes, bt + 2.0 * kPi / nodes);
        Eigen::Vector2d q(R * std::cos(t), R * std::sin(t));
        Eigen::Vector2d tv = bump.jacobian(q).topLeftCorner<2, 2>() *
                             Eigen::Vector2d(-std::sin(t), std::cos(t));
        Eigen::Vector2d n(tv(1), -tv(0));
        n.normalize();
        // orient outward: nudging along n must leave the region
        if (invert(boundary_at(t) + 1e-5 * n).norm() <= R) n = -n;
        return n;
    }
    std::vector<Eigen::VectorXd> grid_bd(int count) const override {
        count = std::max(count, 3);
        std::vector<Eigen::VectorXd> out;
        out.reserve(static_cast<std::size_t>(count));
        for (int k = 0; k < count; ++k)
            out.push_back(Eigen::VectorXd(boundary_at(2.0 * kPi * k / count)));
        return out;
    }
    std::string params() const override {
        return "radius=1 eta=" + format_double(bump.eta()) +
               " delta=" + format_double(bump.delta());
    }
};

}  // namespace

// ----------------------------------------------------------------------
// public wrapper

ManifoldKind SyntheticManifold::kind() const { return impl_->kind; }
int SyntheticManifold::intrinsic_dim() const { return impl_->d; }
int SyntheticManifold::ambient_dim() const { return impl_->D; }
bool SyntheticManifold::has_boundary() const { return impl_->has_bd; }
ReachInfo SyntheticManifold::reaches() const {
    return {impl_->reach.manifold, impl_->has_bd ? impl_->reach.boundary : kInf};
}
std::string SyntheticManifold::params_summary() const { return impl_->params(); }

PointCloud SyntheticManifold::sample_uniform(int n, std::uint64_t seed) const {
    if (n < 1) throw ParamsOutOfRange("sample_uniform: n must be positive");
    Eigen::MatrixXd pts(n, impl_->D);
    CounterRng root(seed);
    for (int i = 0; i < n; ++i) {
        CounterRng sub = root.fork(static_cast<std::uint64_t>(i));
        pts.row(i) = impl_->sample_one(sub).transpose();
    }
    return PointCloud(std::move(pts), impl_->d);
}

double SyntheticManifold::distance_to(const Eigen::VectorXd& z) const {
    if (z.size() != impl_->D)
        throw DimensionMismatch("distance_to: point dimension mismatch");
    return impl_->dist(z);
}

static void require_on_manifold(const SyntheticManifold::Impl& impl, const Eigen::VectorXd& x,
                                const char* op) {
    if (x.size() != impl.D) throw DimensionMismatch(std::string(op) + ": dimension mismatch");
    double d = impl.dist(x);
    if (d > kOnManifoldTol)
        throw OutsideDomain(std::string(op) + ": point is " + format_double(d) +
                            " away from the manifold");
}

double SyntheticManifold::distance_to_boundary(const Eigen::VectorXd& x) const {
    require_on_manifold(*impl_, x, "distance_to_boundary");
    if (!impl_->has_bd) return kInf;
    return impl_->bd_dist(x);
}

Frame SyntheticManifold::exact_tangent(const Eigen::VectorXd& x) const {
    require_on_manifold(*impl_, x, "exact_tangent");
    return impl_->tangent(x);
}

Eigen::VectorXd SyntheticManifold::exact_outward_normal(const Eigen::VectorXd& x) const {
    if (!impl_->has_bd)
        throw InvalidParams(kind_name(impl_->kind) + " has no boundary");
    require_on_manifold(*impl_, x, "exact_outward_normal");
    return impl_->outward(x);
}

std::vector<Eigen::VectorXd> SyntheticManifold::boundary_grid(int count) const {
    if (count < 1) throw ParamsOutOfRange("boundary_grid: count must be positive");
    if (!impl_->has_bd)
        throw InvalidParams(kind_name(impl_->kind) + " has no boundary");
    return impl_->grid_bd(count);
}

// ----------------------------------------------------------------------
// factories

std::string kind_name(ManifoldKind k) {
    switch (k) {
        case ManifoldKind::segment: return "segment";
        case ManifoldKind::circle: return "circle";
        case ManifoldKind::sphere: return "sphere";
        case ManifoldKind::spiral: return "spiral";
        case ManifoldKind::annulus: return "annulus";
        case ManifoldKind::half_sphere: return "half_sphere";
        case ManifoldKind::moebius: return "moebius";
        case ManifoldKind::bumped_sphere: return "bumped_sphere";
        case ManifoldKind::bumped_ball: return "bumped_ball";
    }
    throw InvalidParams("unknown manifold kind");
}

ManifoldKind kind_from_name(const std::string& name) {
    for (ManifoldKind k :
         {ManifoldKind::segment, ManifoldKind::circle, ManifoldKind::sphere,
          ManifoldKind::spiral, ManifoldKind::annulus, ManifoldKind::half_sphere,
          ManifoldKind::moebius, ManifoldKind::bumped_sphere, ManifoldKind::bumped_ball})
        if (kind_name(k) == name) return k;
    throw InvalidParams("unknown manifold kind '" + name + "'");
}

SyntheticManifold make_segment(double length, int ambient_dim) {
    if (!(length > 0.0)) throw ParamsOutOfRange("segment: length must be positive");
    if (ambient_dim < 1 || ambient_dim > PointCloud::kMaxAmbientDim)
        throw ParamsOutOfRange("segment: bad ambient dimension");
    return SyntheticManifold(std::make_shared<SegmentImpl>(length, ambient_dim));
}
SyntheticManifold make_circle(double radius) {
    if (!(radius > 0.0)) throw ParamsOutOfRange("circle: radius must be positive");
    return SyntheticManifold(std::make_shared<CircleImpl>(radius));
}
SyntheticManifold make_sphere(double radius) {
    if (!(radius > 0.0)) throw ParamsOutOfRange("sphere: radius must be positive");
    return SyntheticManifold(std::make_shared<SphereImpl>(radius));
}
SyntheticManifold make_spiral() { return SyntheticManifold(std::make_shared<SpiralImpl>()); }
SyntheticManifold make_annulus() { return SyntheticManifold(std::make_shared<AnnulusImpl>()); }
SyntheticManifold make_half_sphere() {
    return SyntheticManifold(std::make_shared<HalfSphereImpl>());
}
SyntheticManifold make_moebius() { return SyntheticManifold(std::make_shared<MoebiusImpl>()); }
SyntheticManifold make_bumped_sphere(double eta, double delta) {
    return SyntheticManifold(std::make_shared<BumpedSphereImpl>(eta, delta));
}
SyntheticManifold make_bumped_ball(double eta, double delta) {
    return SyntheticManifold(std::make_shared<BumpedBallImpl>(eta, delta));
}

SyntheticManifold make_manifold(ManifoldKind kind) {
    switch (kind) {
        case ManifoldKind::segment: return make_segment();
        case ManifoldKind::circle: return make_circle();
        case ManifoldKind::sphere: return make_sphere();
        case ManifoldKind::spiral: return make_spiral();
        case ManifoldKind::annulus: return make_annulus();
        case ManifoldKind::half_sphere: return make_half_sphere();
        case ManifoldKind::moebius: return make_moebius();
        case ManifoldKind::bumped_sphere: return make_bumped_sphere();
        case ManifoldKind::bumped_ball: return make_bumped_ball();
    }
    throw InvalidParams("unknown manifold kind");
}

}  // namespace boundarykit
