#pragma once

#include <optional>
#include <string>

#include "wulff/body.hpp"
#include "wulff/patch.hpp"

namespace wulff {

/// Anisotropic frame at a surface point: the body boundary point N_K whose
/// outer normal matches the surface normal, the support weight phi = h(N),
/// the anisotropic shape operator (in chart coordinates) and its invariants.
struct AnisoFrame {
    Vec3 N_K;
    double phi = 0.0;
    Mat3 hess;                   // differential of the body projection at N
    std::array<Vec3, 2> dN_K{};  // chart derivatives of N_K
    MatN B_chart;                // classical shape operator, chart coords
    MatN BK_chart;               // anisotropic shape operator, chart coords
    double HK = 0.0;             // tr(BK)/rank
    double trBK2 = 0.0;
    double defect = 0.0;         // tr(BK^2) - rank * HK^2, >= 0 up to roundoff
};

AnisoFrame aniso_frame(const ConvexBody& body, const FrameData& f);

/// Anisotropic shape operator expressed in an orthonormal tangent basis
/// (Gram-Schmidt of the chart tangents); use for norm comparisons.
MatN aniso_shape_orthonormal(const FrameData& f, const AnisoFrame& af);

/// Boundary flux direction: phi nu - <N_K, nu> N; normal to the boundary and
/// orthogonal to N_K.
Vec3 aniso_conormal(const ConvexBody& body, const BoundaryFrame& bf);

/// Integral of h(N) over the patch.
double aniso_area(const ConvexBody& body, const Patch& patch, const QuadratureGrid& grid);

/// Residual |grad_Sigma phi + B(N_K^tangential)| of the support-weight
/// gradient identity; both sides from chart data.
double grad_phi_residual(const ConvexBody& body, const FrameData& f, const AnisoFrame& af);

/// H_K recomputed from the chart divergence of N_K (independent route).
double mean_curvature_from_divergence(const FrameData& f, const AnisoFrame& af);

struct UmbilicityDefect {
    double sup = 0.0;       // max over nodes of defect
    double min = 0.0;       // min over nodes (>= -1e-9 up to roundoff)
    double integral = 0.0;  // integral of defect * phi
};
UmbilicityDefect umbilicity_defect(const ConvexBody& body, const Patch& patch,
                                   const QuadratureGrid& grid);

/// Pointwise-constant anisotropic umbilicity classification. When the defect
/// and the H_K spread are below tolerance the surface is a piece of a plane
/// (H_K ~ 0) or of a translated dilated body boundary, recovered through the
/// first integral c = H_K p + N_K.
struct UmbilicalVerdict {
    enum class Kind { Plane, Wulff, NotUmbilical } kind = Kind::NotUmbilical;
    Vec3 center;        // recovered translation (Wulff case)
    double lambda = 0;  // recovered dilation (Wulff case)
    double residual = 0;
    double sup_defect = 0;
    double hk_spread = 0;
    std::string kind_name() const {
        switch (kind) {
            case Kind::Plane: return "plane";
            case Kind::Wulff: return "wulff";
            case Kind::NotUmbilical: return "not-umbilical";
        }
        return "?";
    }
};

inline constexpr double kUmbilicTolerance = 1e-6;

UmbilicalVerdict classify_umbilical(const ConvexBody& body, const Patch& patch,
                                    const QuadratureGrid& grid,
                                    double tol = kUmbilicTolerance);

}  // namespace wulff
