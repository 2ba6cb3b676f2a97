#pragma once

#include <memory>
#include <string>
#include <vector>

#include "wulff/body.hpp"
#include "wulff/geom.hpp"
#include "wulff/jet.hpp"
#include "wulff/quadrature.hpp"

namespace wulff {

/// Chart data at a parameter point: position, tangents, oriented unit normal
/// and the chart derivatives of the normal. Charts with a closed-form Gauss
/// map fill dN directly; graph-style charts derive it from the position 2-jet.
struct ChartFrame {
    Vec3 p;
    std::array<Vec3, 2> t{};   // df/du_j for j < rank
    Vec3 N;
    std::array<Vec3, 2> dN{};  // dN/du_j
};

class Chart {
  public:
    virtual ~Chart() = default;
    virtual int dim() const = 0;
    virtual ChartFrame eval(double u, double v) const = 0;
    int rank() const { return dim() - 1; }
};

/// Frame with first fundamental form data attached.
struct FrameData {
    int dim = 3;
    int rank = 2;
    Vec3 p;
    std::array<Vec3, 2> t{};
    Vec3 N;
    std::array<Vec3, 2> dN{};
    MatN metric;      // <t_i, t_j>
    MatN inv_metric;
    double area_element = 0.0;  // sqrt(det metric)
};

/// Domain edge: axis 0 is u (or the curve parameter), axis 1 is v.
struct Edge {
    int axis = 0;
    int side = 1;  // 0 = lower end, 1 = upper end
    bool operator==(const Edge& o) const { return axis == o.axis && side == o.side; }
};

struct Domain {
    int rank = 2;
    double lo[2] = {0, 0};
    double hi[2] = {1, 1};
    bool periodic[2] = {false, false};
    double length(int axis) const { return hi[axis] - lo[axis]; }
};

/// Tensor Gauss-Legendre nodes over the parameter domain plus per-edge
/// boundary rules. For curves the boundary nodes are the two endpoints with
/// unit counting weight.
struct QuadratureGrid {
    struct Node {
        double u = 0, v = 0, weight = 0;
    };
    struct BoundaryNode {
        Edge edge;
        double s = 0;       // coordinate along the edge
        double u = 0, v = 0;
        double weight = 0;  // parameter-space weight (1 for curve endpoints)
    };
    int interior_order = 48;
    int boundary_order = 96;
    std::vector<Node> nodes;
    std::vector<BoundaryNode> boundary;  // grouped by edge, stable order
};

/// Frame on a boundary edge: inner conormal nu is unit, tangent to the
/// surface, normal to the boundary and points into the parameter domain.
struct BoundaryFrame {
    FrameData frame;
    Vec3 nu;
    Vec3 edge_tangent;     // unit, zero for curve endpoints
    double line_element = 1.0;  // |d position / d s| along the edge (1 for endpoints)
};

/// Parameterized immersed hypersurface: a chart, its domain, the subset of
/// edges that form the true boundary, an orientation sign, and an ambient
/// similarity transform p -> scale * p + shift applied on top of the chart.
class Patch {
  public:
    Patch(std::shared_ptr<const Chart> chart, Domain domain, std::vector<Edge> boundary_edges,
          bool flip_orientation = false);

    int dim() const { return chart_->dim(); }
    int rank() const { return chart_->rank(); }
    const Domain& domain() const { return domain_; }
    const std::vector<Edge>& boundary_edges() const { return boundary_edges_; }
    bool orientation_flipped() const { return orient_ < 0; }
    double scale() const { return scale_; }
    const Vec3& shift() const { return shift_; }

    /// Geometric frame at a parameter point. Throws on degenerate tangents.
    FrameData frame(double u, double v) const;

    /// Shape operator in chart coordinates (acts on tangent coefficients).
    /// asymmetry, when requested, reports the residual of the self-adjointness
    /// of the associated bilinear form in the ambient inner product.
    MatN shape_operator(const FrameData& f, double* asymmetry = nullptr) const;

    BoundaryFrame boundary_frame(const Edge& edge, double s) const;

    /// Parameter point of an edge coordinate.
    void edge_point(const Edge& edge, double s, double& u, double& v) const;

    QuadratureGrid build_grid(int interior_order, int boundary_order) const;

    /// Dilation about the origin composed with a translation; the chart's
    /// normal field is transported unchanged.
    Patch transformed(double lambda, const Vec3& translation) const;

    /// Same surface with the opposite unit normal.
    Patch flipped() const;

  private:
    std::shared_ptr<const Chart> chart_;
    Domain domain_;
    std::vector<Edge> boundary_edges_;
    double orient_ = 1.0;
    double scale_ = 1.0;
    Vec3 shift_{};
};

/// Euclidean area (length for curves) by tensor quadrature.
double area(const Patch& patch, const QuadratureGrid& grid);

/// Signed cone volume over the patch with vertex at the origin:
/// (1/(dim)) * integral of <p, N>.
double algebraic_volume(const Patch& patch, const QuadratureGrid& grid);

/// Chart frame from per-coordinate position 2-jets (graph-style charts):
/// derives N and dN from the tangents and second derivatives.
ChartFrame frame_from_position_jets(int dim, const JetVec3& f);

// --- chart catalog -----------------------------------------------------------

/// Sphere chart f(polar, azimuth) = center + R (sin u cos v, sin u sin v, cos u);
/// natural orientation is the outer radial normal.
class SphereChart : public Chart {
  public:
    SphereChart(Vec3 center, double radius) : c_(center), r_(radius) {}
    int dim() const override { return 3; }
    ChartFrame eval(double u, double v) const override;

  private:
    Vec3 c_;
    double r_;
};

/// Boundary of a convex body parameterized by its outer normal direction:
/// f = projection(w(u, v)); the normal at f is w itself.
class WulffChart : public Chart {
  public:
    explicit WulffChart(std::shared_ptr<const ConvexBody> body) : body_(std::move(body)) {
        if (body_->dim() != 3) throw ValidationError("WulffChart: needs a 3D body");
    }
    int dim() const override { return 3; }
    ChartFrame eval(double u, double v) const override;

  private:
    std::shared_ptr<const ConvexBody> body_;
};

/// Planar circle arc f(s) = center + R (cos s, sin s); outer normal.
class CircleChart : public Chart {
  public:
    CircleChart(Vec3 center, double radius) : c_(center), r_(radius) {}
    int dim() const override { return 2; }
    ChartFrame eval(double u, double v) const override;

  private:
    Vec3 c_;
    double r_;
};

/// Boundary of a planar convex body via its outer normal angle.
class Wulff2DChart : public Chart {
  public:
    explicit Wulff2DChart(std::shared_ptr<const ConvexBody> body) : body_(std::move(body)) {
        if (body_->dim() != 2) throw ValidationError("Wulff2DChart: needs a 2D body");
    }
    int dim() const override { return 2; }
    ChartFrame eval(double u, double v) const override;

  private:
    std::shared_ptr<const ConvexBody> body_;
};

/// Scalar graph profile g(x, y) evaluated on jets.
class GraphFn {
  public:
    virtual ~GraphFn() = default;
    virtual Jet2 eval(const Jet2& x, const Jet2& y) const = 0;
};

/// g = c0 + cx x + cy y + axx x^2 + ayy y^2 + amp sin(kx x) cos(ky y)
class PolyTrigFn : public GraphFn {
  public:
    double c0 = 0, cx = 0, cy = 0, axx = 0, ayy = 0, amp = 0, kx = 1, ky = 1;
    Jet2 eval(const Jet2& x, const Jet2& y) const override;
};

/// Graph chart f(x, y) = (x, y, g(x, y)) over a rectangle; upward normal.
class GraphChart : public Chart {
  public:
    explicit GraphChart(std::shared_ptr<const GraphFn> g) : g_(std::move(g)) {}
    int dim() const override { return 3; }
    ChartFrame eval(double u, double v) const override;

  private:
    std::shared_ptr<const GraphFn> g_;
};

/// Disc-like graph f(rho, psi) = (R rho cos psi, R rho sin psi, height(rho, psi))
/// with height = amp (1 - rho^2)(1 + tilt rho cos psi), a polynomial in (x, y);
/// the rim rho = 1 sits in z = 0.
class PolarGraphChart : public Chart {
  public:
    PolarGraphChart(double base_radius, double amp, double tilt)
        : R_(base_radius), amp_(amp), tilt_(tilt) {}
    int dim() const override { return 3; }
    ChartFrame eval(double u, double v) const override;

  private:
    double R_, amp_, tilt_;
};

/// Planar graph curve f(x) = (x, g(x, 0)); upward normal.
class Graph2DChart : public Chart {
  public:
    explicit Graph2DChart(std::shared_ptr<const GraphFn> g) : g_(std::move(g)) {}
    int dim() const override { return 2; }
    ChartFrame eval(double u, double v) const override;

  private:
    std::shared_ptr<const GraphFn> g_;
};

}  // namespace wulff
