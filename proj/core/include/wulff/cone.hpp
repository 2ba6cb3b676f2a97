#pragma once

#include <memory>
#include <string>

#include "wulff/aniso.hpp"
#include "wulff/body.hpp"
#include "wulff/patch.hpp"

namespace wulff {

/// Closed curve on the unit sphere bounding the cone's base domain, given by
/// a polar-angle profile alpha(s) over the azimuth: s -> (sin a cos s,
/// sin a sin s, cos a). Exposes gamma, gamma', gamma'' as jet-evaluable maps,
/// so one more derivative of each is available through jet composition.
class SphericalBaseCurve {
  public:
    SphericalBaseCurve(double alpha0, double amplitude, int frequency)
        : alpha0_(alpha0), amp_(amplitude), k_(frequency) {}

    void eval(const Jet2& s, JetVec3& g0, JetVec3& g1, JetVec3& g2) const;
    void eval(double s, Vec3& g0, Vec3& g1, Vec3& g2) const;

    double alpha0() const { return alpha0_; }
    double amplitude() const { return amp_; }

  private:
    double alpha0_;
    double amp_;
    int k_;
};

enum class ConeKind { HalfSpace, Circular, Perturbed, PlanarWedge };

/// Convex (or deliberately non-convex) solid cone with vertex at the origin.
/// In the plane the boundary is two rays; in space it is the ruled surface
/// over a spherical base curve, with inner normal xi and second fundamental
/// form vanishing on rulings.
class SolidCone {
  public:
    static SolidCone half_space();                      // 3D, boundary z = 0
    static SolidCone circular(double half_angle);       // 3D, axis e3
    static SolidCone perturbed(double alpha0, double amplitude, int frequency);
    static SolidCone planar_wedge(double angle0, double angle1);  // 2D sector

    int dim() const { return dim_; }
    ConeKind kind() const { return kind_; }
    std::string kind_name() const;

    /// Minimum cross-ruling second fundamental form at r = 1 (3D), or the
    /// angle margin pi - opening (2D). Nonnegative iff the cone is convex.
    double convexity_certificate() const { return certificate_; }
    bool convex() const { return certificate_ >= -1e-10; }
    bool strictly_convex_base() const { return certificate_ > 1e-6; }

    struct WallFrame {
        Vec3 p;
        Vec3 ruling;    // unit direction of the ray through p
        Vec3 cross;     // gamma'(s) (3D); zero for rays
        Vec3 xi;        // inner unit normal of the wall
        Vec3 dxi_ds;    // derivative of xi along the base curve (3D)
        double r = 0, s = 0;
        int wall = 0;   // ray index for the planar wedge
    };
    WallFrame wall_frame(double r, double s, int wall = 0) const;

    /// Second fundamental form w.r.t. the inner normal, for tangent vectors
    /// of the wall at the frame point. Vanishes when either argument is the
    /// ruling direction; >= 0 on convex cones.
    double second_fundamental(const WallFrame& wf, const Vec3& u, const Vec3& v) const;

    struct Projection {
        double r = 0, s = 0;
        int wall = 0;
        double distance = 0;
    };
    /// Closest wall point; s found by Newton on the base curve (3D) or by
    /// picking the nearer ray (2D).
    Projection project(const Vec3& p) const;

    const SphericalBaseCurve& base_curve() const;
    Vec3 ray_direction(int wall) const;
    Vec3 ray_inner_normal(int wall) const;
    double opening() const { return angle1_ - angle0_; }

  private:
    SolidCone() = default;
    void compute_certificate();

    int dim_ = 3;
    ConeKind kind_ = ConeKind::Circular;
    std::shared_ptr<SphericalBaseCurve> curve_;
    double angle0_ = 0, angle1_ = 0;  // planar wedge ray angles
    double certificate_ = 0;
};

/// Angle frame between the surface boundary frame {nu, N} and the wall frame
/// {xi, mu} in the plane orthogonal to the boundary.
struct BoundaryAngleFrame {
    Vec3 xi, mu;
    double theta = 0;
    double containment = 0;      // distance of the point from the wall
    double frame_residual = 0;   // defect of the angle relations
    double anangle_residual = 0; // defect of the conormal angle identities
};

inline constexpr double kContainmentTol = 1e-8;
inline constexpr double kStationaryTol = 1e-8;

BoundaryAngleFrame angle_frame(const SolidCone& cone, const ConvexBody& body, const Patch& patch,
                               const Edge& edge, double s);

/// Max distance of the patch boundary nodes from the cone wall.
double boundary_containment(const SolidCone& cone, const Patch& patch, const QuadratureGrid& grid);

/// hk_spread: max - min of H_K over interior nodes. nk_xi_sup: sup over the
/// boundary of |<N_K, xi>| (zero when no cone or no boundary).
struct StationarityResiduals {
    double hk_spread = 0;
    double nk_xi_sup = 0;
    double hk_mean = 0;
    double hk_min = 0, hk_max = 0;
};
StationarityResiduals stationarity_residuals(const ConvexBody& body, const Patch& patch,
                                             const QuadratureGrid& grid,
                                             const SolidCone* cone);

/// |integral of (phi + H_K <p, N>)| / aniso-area, with pointwise H_K.
double minkowski_residual(const ConvexBody& body, const Patch& patch, const QuadratureGrid& grid);

/// Chart of the sphere of radius R about the origin clipped by the cone over
/// a spherical base curve: (rho, s) follows the great-circle arc from the
/// pole e3 to gamma(s), so rho = 1 lands exactly on the cone wall.
class CapInConeChart : public Chart {
  public:
    CapInConeChart(std::shared_ptr<const SphericalBaseCurve> curve, double radius)
        : curve_(std::move(curve)), r_(radius) {}
    int dim() const override { return 3; }
    ChartFrame eval(double u, double v) const override;

  private:
    std::shared_ptr<const SphericalBaseCurve> curve_;
    double r_;
};

}  // namespace wulff
