#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "wulff/aniso.hpp"
#include "wulff/body.hpp"
#include "wulff/cone.hpp"
#include "wulff/patch.hpp"

namespace wulff {

/// Geometry sampled once per grid node; shared by every functional below so
/// all of them integrate the same frames in the same order.
struct GeometryCache {
    const ConvexBody* body = nullptr;
    const Patch* patch = nullptr;
    const QuadratureGrid* grid = nullptr;
    std::vector<FrameData> frames;        // aligned with grid->nodes
    std::vector<AnisoFrame> aniso;
    std::vector<BoundaryFrame> bframes;   // aligned with grid->boundary
    std::vector<AnisoFrame> baniso;
    std::vector<Vec3> nu_k;               // anisotropic conormal at boundary nodes

    double area = 0, aniso_area = 0, volume = 0;
};

GeometryCache build_geometry(const ConvexBody& body, const Patch& patch,
                             const QuadratureGrid& grid);

/// Velocity/acceleration 2-jet of a deformation, sampled on the grid. The
/// chart derivatives of both fields are carried so deformed tangents are
/// exact to second order in t.
struct Variation2Jet {
    enum class Mode { Generic, AnisoNormal };
    Mode mode = Mode::Generic;
    bool deformable = true;  // node-table fields cannot be deformed

    std::vector<Vec3> X, Z;                     // interior nodes
    std::vector<std::array<Vec3, 2>> dX, dZ;    // chart derivatives
    std::vector<Vec3> Xb, Zb;                   // boundary nodes
    std::vector<double> rdot, sdot;             // wall-chart decomposition record
    std::string label;
};

/// Catalog of generic velocity fields (acceleration zero).
struct ConstantField { Vec3 c; };
struct RadialField {};
struct CoordinateNormalField { int axis = 0; };  // X = p[axis] * N
struct NodeTableField { std::vector<Vec3> interior; std::vector<Vec3> boundary; };
using FieldSpec = std::variant<ConstantField, RadialField, CoordinateNormalField, NodeTableField>;

Variation2Jet build_generic_variation(const GeometryCache& geo, const FieldSpec& spec);

/// X = N_K everywhere; on the boundary of a cone scenario the acceleration Z
/// is the exact second derivative of the wall-chart curve
/// t -> (r + t rdot) gamma(s + t sdot), blended into the interior over a
/// collar of 20% of the parameter range; Z = 0 without a cone.
Variation2Jet build_wulff_normal_variation(const GeometryCache& geo, const SolidCone* cone);

struct FirstVariation {
    double area_rate = 0;    // - int n H_K u - bd int <X, nu_K>
    double volume_rate = 0;  // int u + lateral flux
    // Flux of the deformation through the cone over the moving boundary:
    // (1/(n+1)) bd int det(p, X, T). Zero for closed patches and for fields
    // tangent to the wall through the boundary (the volume-rate formula of
    // the admissible setting is int u alone).
    double volume_boundary_flux = 0;
};
FirstVariation first_variation_analytic(const GeometryCache& geo, const Variation2Jet& jet);

struct SecondVariation {
    double total = 0;
    double bulk_h2 = 0;      // + int n^2 H_K^2 phi
    double bulk_trb2 = 0;    // - int tr(B_K^2) phi
    double bulk_v = 0;       // - int n H_K v
    double boundary_z = 0;   // - bd int <Z, nu_K>
};
/// Requires jet.mode == AnisoNormal.
SecondVariation second_variation_analytic(const GeometryCache& geo, const Variation2Jet& jet);

struct ConeSecondVariation {
    SecondVariation area;        // boundary term via II(N_K, N_K)/cos(theta)
    double volume_accel = 0;     // int (-n H_K phi + v)
    double z_xi_residual = 0;    // sup |<Z, xi> - II(N_K, N_K)| over the boundary
};
/// Requires a stationary scenario and a jet from build_wulff_normal_variation.
ConeSecondVariation second_variation_cone(const GeometryCache& geo, const SolidCone* cone,
                                          const Variation2Jet& jet);

/// Functionals along the deformation F_t = p + t X + (t^2/2) Z, evaluated on
/// the symmetric stencil {0, +-h/2, +-h, +-2h}, plus Richardson-extrapolated
/// finite-difference derivatives at t = 0.
struct FunctionalProfile {
    double h = 1e-3;
    struct Row {
        double t = 0, area_k = 0, volume = 0, lambda = 0, corrected_area = 0;
    };
    std::vector<Row> rows;  // ascending in t; the middle row is t = 0
    double A1_fd = 0, A2_fd = 0, V1_fd = 0, V2_fd = 0;
    double lambda1_fd = 0, lambda2_fd = 0, a2_fd = 0;
};

/// Optional cubic test hook: adds t^3 * kappa * p to the deformation (with the
/// matching tangent contribution); second derivatives at t = 0 must not feel it.
FunctionalProfile functional_profile(const GeometryCache& geo, const Variation2Jet& jet, double h,
                                     double radial_cubic = 0.0);

/// Richardson finite-difference rates of A_K and V alone (no volume
/// correction, so usable on any deformable field regardless of V).
struct FdRates {
    double A1 = 0, A2 = 0, V1 = 0, V2 = 0;
};
FdRates fd_rates(const GeometryCache& geo, const Variation2Jet& jet, double h,
                 double radial_cubic = 0.0);

/// A_K and V of the deformed patch at a single t (the profile's primitive).
void deformed_functionals(const GeometryCache& geo, const Variation2Jet& jet, double t,
                          double& area_k, double& volume, double radial_cubic = 0.0);

/// Dilation-corrected second derivative in closed form:
/// total = - int (tr B_K^2 - n H_K^2) phi - bd int II(N_K,N_K)/cos(theta) phi.
/// Nonpositive over convex cones; zero exactly on planes and Wulff pieces
/// with ruling-tangent boundary.
struct StabilityForm {
    double total = 0;
    double bulk = 0;
    double boundary = 0;
};
StabilityForm stability_form(const GeometryCache& geo, const SolidCone* cone);

/// Sup-norm residuals of the first and second t-derivatives of the deformed
/// unit normal against their tangential closed forms. The second residual is
/// meaningful for aniso-normal jets only and is skipped otherwise.
struct NormalDerivativeResiduals {
    double first = 0;
    double second = 0;
    bool second_checked = false;
};
NormalDerivativeResiduals normal_derivative_checks(const GeometryCache& geo,
                                                   const Variation2Jet& jet, double h);

/// Volume drift of the corrected deformation when lambda is replaced by its
/// quadratic expansion 1 + t l1 + (t^2/2) l2: the drift must be O(t^3), which
/// independently validates the analytic l1, l2.
struct VolumeDrift {
    double at_h = 0;
    double at_2h = 0;
};
VolumeDrift corrected_volume_drift(const FunctionalProfile& profile, int n, double lambda1,
                                   double lambda2);

inline constexpr double kMinVolume = 1e-8;
inline constexpr double kBuildStationarityGate = 1e-6;

}  // namespace wulff
