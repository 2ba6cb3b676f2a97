#include "wulff/body.hpp"

#include <algorithm>
#include <cmath>

namespace wulff {

namespace {

constexpr double kPerturbationCap = 0.2;

void check_dim(int dim) {
    if (dim != 2 && dim != 3) throw ValidationError("body: ambient dimension must be 2 or 3");
}

}  // namespace

std::array<Vec3, 2> tangent_basis(const Vec3& w, int dim) {
    std::array<Vec3, 2> basis;
    if (dim == 2) {
        basis[0] = rot90ccw(w);
        basis[1] = Vec3{};
        return basis;
    }
    // Pick the coordinate axis least aligned with w, then Gram-Schmidt.
    Vec3 seed = std::abs(w.x) <= std::abs(w.y)
                    ? (std::abs(w.x) <= std::abs(w.z) ? Vec3{1, 0, 0} : Vec3{0, 0, 1})
                    : (std::abs(w.y) <= std::abs(w.z) ? Vec3{0, 1, 0} : Vec3{0, 0, 1});
    basis[0] = normalized(seed - w * dot(seed, w));
    basis[1] = cross(w, basis[0]);
    return basis;
}

std::vector<Vec3> sphere_sample(int dim, int count) {
    std::vector<Vec3> out;
    out.reserve(static_cast<std::size_t>(count));
    if (dim == 2) {
        for (int i = 0; i < count; ++i) {
            const double t = 2.0 * M_PI * (i + 0.5) / count;
            out.push_back({std::cos(t), std::sin(t), 0.0});
        }
        return out;
    }
    // Fibonacci lattice on the sphere.
    const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
    for (int i = 0; i < count; ++i) {
        const double z = 1.0 - 2.0 * (i + 0.5) / count;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = 2.0 * M_PI * i / golden;
        out.push_back({r * std::cos(phi), r * std::sin(phi), z});
    }
    return out;
}

ConvexBody ConvexBody::ball(int dim, double radius) {
    check_dim(dim);
    if (radius <= 0) throw ValidationError("ball: radius must be positive");
    ConvexBody b;
    b.dim_ = dim;
    b.kind_ = BodyKind::Ball;
    b.radius_ = radius;
    b.centrally_symmetric_ = true;
    b.validate();
    return b;
}

ConvexBody ConvexBody::ellipsoid(int dim, std::vector<double> semi_axes) {
    check_dim(dim);
    if (static_cast<int>(semi_axes.size()) != dim)
        throw ValidationError("ellipsoid: need one semi-axis per dimension");
    for (double a : semi_axes)
        if (a <= 0) throw ValidationError("ellipsoid: semi-axes must be positive");
    ConvexBody b;
    b.dim_ = dim;
    b.kind_ = BodyKind::Ellipsoid;
    b.axes_ = std::move(semi_axes);
    b.centrally_symmetric_ = true;
    b.validate();
    return b;
}

ConvexBody ConvexBody::offset_ellipsoid(int dim, std::vector<double> semi_axes, Vec3 offset) {
    ConvexBody b = ellipsoid(dim, std::move(semi_axes));
    b.kind_ = BodyKind::OffsetEllipsoid;
    b.offset_ = offset;
    b.centrally_symmetric_ = false;
    b.validate();
    return b;
}

ConvexBody ConvexBody::lp_ball(int dim, double p, double radius) {
    check_dim(dim);
    if (!(p > 1.0) || !std::isfinite(p)) throw ValidationError("lp_ball: p must lie in (1, inf)");
    if (radius <= 0) throw ValidationError("lp_ball: radius must be positive");
    ConvexBody b;
    b.dim_ = dim;
    b.kind_ = BodyKind::LpBall;
    b.radius_ = radius;
    b.p_ = p;
    b.q_ = p / (p - 1.0);
    b.centrally_symmetric_ = true;
    b.validate();
    return b;
}

ConvexBody ConvexBody::perturbed_ball(int dim, double eps, double radius) {
    check_dim(dim);
    if (eps < 0 || eps > kPerturbationCap)
        throw ValidationError("perturbed_ball: amplitude must lie in [0, 0.2]");
    if (radius <= 0) throw ValidationError("perturbed_ball: radius must be positive");
    ConvexBody b;
    b.dim_ = dim;
    b.kind_ = BodyKind::PerturbedBall;
    b.radius_ = radius;
    b.eps_ = eps;
    b.centrally_symmetric_ = (eps == 0.0);
    b.validate();
    return b;
}

std::string ConvexBody::kind_name() const {
    switch (kind_) {
        case BodyKind::Ball: return "ball";
        case BodyKind::Ellipsoid: return "ellipsoid";
        case BodyKind::OffsetEllipsoid: return "offset-ellipsoid";
        case BodyKind::LpBall: return "lp-ball";
        case BodyKind::PerturbedBall: return "perturbed-ball";
    }
    return "?";
}

Jet2 ConvexBody::support_formula(const JetVec3& w) const {
    switch (kind_) {
        case BodyKind::Ball:
            return jnorm(w, dim_) * radius_;
        case BodyKind::Ellipsoid:
        case BodyKind::OffsetEllipsoid: {
            JetVec3 aw = w;
            for (int i = 0; i < dim_; ++i) aw[static_cast<std::size_t>(i)] = w[static_cast<std::size_t>(i)] * axes_[static_cast<std::size_t>(i)];
            Jet2 h = jnorm(aw, dim_);
            if (kind_ == BodyKind::OffsetEllipsoid)
                h = h + (w[0] * offset_.x + w[1] * offset_.y + w[2] * offset_.z);
            return h;
        }
        case BodyKind::LpBall: {
            // Dual norm: h(w) = r * ||w||_q with 1/p + 1/q = 1.
            Jet2 s = pow(w[0] * w[0], q_ / 2.0) + pow(w[1] * w[1], q_ / 2.0);
            if (dim_ == 3) s = s + pow(w[2] * w[2], q_ / 2.0);
            return pow(s, 1.0 / q_) * radius_;
        }
        case BodyKind::PerturbedBall: {
            // r (|w| + eps (w1^3 - 3 w1 w2^2) / |w|^2); the cubic is harmonic.
            const Jet2 n = jnorm(w, dim_);
            const Jet2 cubic = w[0] * w[0] * w[0] - 3.0 * (w[0] * (w[1] * w[1]));
            return (n + eps_ * (cubic / (n * n))) * radius_;
        }
    }
    throw std::logic_error("unreachable");
}

double ConvexBody::support(const Vec3& w) const {
    return support_eval(w).h;
}

SupportEval ConvexBody::support_eval(const Vec3& w) const {
    if (norm2(w) == 0.0) throw std::domain_error("support: zero direction");
    JetVec3 jw;
    if (dim_ == 2) {
        auto seeds = Jet2::seed(std::array<double, 2>{w.x, w.y});
        jw = {seeds[0], seeds[1], Jet2(0.0, 2)};
    } else {
        auto seeds = Jet2::seed(std::array<double, 3>{w.x, w.y, w.z});
        jw = {seeds[0], seeds[1], seeds[2]};
    }
    const Jet2 h = support_formula(jw);
    SupportEval ev;
    ev.h = h.value();
    for (int i = 0; i < dim_; ++i) {
        ev.grad[i] = h.grad(i);
        for (int j = 0; j < dim_; ++j) ev.hess.m[i][j] = h.hess(i, j);
    }
    return ev;
}

ConvexBody::TangentHessian ConvexBody::projection_differential(const Vec3& w) const {
    if (std::abs(norm(w) - 1.0) > 1e-8)
        throw std::domain_error("projection_differential: direction must be unit");
    const SupportEval ev = support_eval(w);
    TangentHessian th;
    th.basis = tangent_basis(w, dim_);
    th.restricted.n = dim_ - 1;
    for (int i = 0; i < dim_ - 1; ++i)
        for (int j = 0; j < dim_ - 1; ++j)
            th.restricted.m[i][j] = ev.hess.quad(th.basis[static_cast<std::size_t>(i)], th.basis[static_cast<std::size_t>(j)]);
    return th;
}

std::pair<Vec3, Vec3> ConvexBody::boundary_point_and_normal(const Vec3& w) const {
    if (std::abs(norm(w) - 1.0) > 1e-8)
        throw std::domain_error("boundary_point_and_normal: direction must be unit");
    return {projection(w), w};
}

void ConvexBody::validate() {
    const int sample_count = dim_ == 2 ? 720 : 2000;
    const auto sample = sphere_sample(dim_, sample_count);
    double min_eig = std::numeric_limits<double>::infinity();
    for (const Vec3& w : sample) {
        if (kind_ == BodyKind::LpBall) {
            // The dual-norm formula is smooth only off coordinate hyperplanes.
            double guard = std::min(std::abs(w.x), std::abs(w.y));
            if (dim_ == 3) guard = std::min(guard, std::abs(w.z));
            if (guard < 5e-2) continue;
        }
        const SupportEval ev = support_eval(w);
        if (!(ev.h > 0.0))
            throw ValidationError(kind_name() + ": support function not positive (origin outside interior)");
        if (norm(ev.hess.apply(w)) > 1e-8 * (1.0 + std::abs(ev.h)))
            throw ValidationError(kind_name() + ": Hessian kernel is not the radial direction");
        const auto basis = tangent_basis(w, dim_);
        if (dim_ == 2) {
            min_eig = std::min(min_eig, ev.hess.quad(basis[0], basis[0]));
        } else {
            const auto eigs = sym_eigenvalues2(ev.hess.quad(basis[0], basis[0]),
                                               ev.hess.quad(basis[0], basis[1]),
                                               ev.hess.quad(basis[1], basis[1]));
            min_eig = std::min(min_eig, eigs[0]);
        }
    }
    if (!(min_eig > 1e-9))
        throw ValidationError(kind_name() + ": restricted Hessian not positive definite (body not strictly convex)");
    convexity_margin_ = min_eig;
}

}  // namespace wulff
