#pragma once

#include <string>
#include <vector>

#include "wulff/geom.hpp"
#include "wulff/jet.hpp"

namespace wulff {

/// Thrown when a body or scenario fails construction-time validation.
class ValidationError : public std::runtime_error {
  public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

enum class BodyKind { Ball, Ellipsoid, OffsetEllipsoid, LpBall, PerturbedBall };

/// Support function value with its first and second ambient derivatives.
/// grad is the boundary point realizing the support value; hess is its
/// differential (positive semidefinite with kernel along w).
struct SupportEval {
    double h = 0.0;
    Vec3 grad;
    Mat3 hess;
};

/// Smooth strictly convex body about the origin, defined by its support
/// function. All geometry (boundary point of a given outer normal, tangent
/// map of that correspondence) is derived from second-order jets of h.
class ConvexBody {
  public:
    /// Round ball of the given radius.
    static ConvexBody ball(int dim, double radius);
    /// Axis-aligned ellipsoid with the given semi-axes (dim entries).
    static ConvexBody ellipsoid(int dim, std::vector<double> semi_axes);
    /// Ellipsoid translated by `offset`; rejected if the origin leaves the interior.
    static ConvexBody offset_ellipsoid(int dim, std::vector<double> semi_axes, Vec3 offset);
    /// Unit ball of the l^p norm scaled by `radius`, p in (1, inf); smooth off
    /// coordinate hyperplanes in direction space.
    static ConvexBody lp_ball(int dim, double p, double radius);
    /// |w| (1 + eps P(w/|w|)) with P a fixed degree-3 harmonic; eps <= 0.2,
    /// convexity checked on a dense sphere sample.
    static ConvexBody perturbed_ball(int dim, double eps, double radius);

    int dim() const { return dim_; }
    BodyKind kind() const { return kind_; }
    bool centrally_symmetric() const { return centrally_symmetric_; }
    std::string kind_name() const;

    /// Support value h(w); w must be nonzero.
    double support(const Vec3& w) const;

    /// h(w) together with the boundary point (gradient) and its differential
    /// (Hessian) with respect to the ambient coordinates.
    SupportEval support_eval(const Vec3& w) const;

    /// Boundary point whose supporting hyperplane has outer normal w.
    Vec3 projection(const Vec3& w) const { return support_eval(w).grad; }

    /// Hessian restricted to the hyperplane orthogonal to a unit direction w;
    /// positive definite there, annihilates w. Returned in an orthonormal
    /// basis of w-perp (rank dim-1) along with that basis.
    struct TangentHessian {
        MatN restricted;              // (dim-1) x (dim-1), symmetric
        std::array<Vec3, 2> basis;    // orthonormal basis of w-perp
    };
    TangentHessian projection_differential(const Vec3& w) const;

    /// (boundary point, outer unit normal) pair parameterizing the boundary.
    std::pair<Vec3, Vec3> boundary_point_and_normal(const Vec3& w) const;

    /// Smallest restricted-Hessian eigenvalue found on the validation sample.
    double convexity_margin() const { return convexity_margin_; }
    double perturbation_eps() const { return eps_; }
    double lp_exponent() const { return p_; }

  private:
    ConvexBody() = default;
    void validate();

    Jet2 support_formula(const JetVec3& w) const;

    int dim_ = 3;
    BodyKind kind_ = BodyKind::Ball;
    double radius_ = 1.0;
    std::vector<double> axes_;
    Vec3 offset_;
    double p_ = 4.0;      // lp exponent
    double q_ = 4.0 / 3;  // dual exponent
    double eps_ = 0.0;    // perturbation amplitude
    bool centrally_symmetric_ = true;
    double convexity_margin_ = 0.0;
};

/// Orthonormal basis of the hyperplane orthogonal to unit w (dim-1 vectors).
std::array<Vec3, 2> tangent_basis(const Vec3& w, int dim);

/// Deterministic quasi-uniform sphere/circle sample used for validation.
std::vector<Vec3> sphere_sample(int dim, int count);

}  // namespace wulff
