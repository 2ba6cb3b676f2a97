#include "wulff/patch.hpp"

#include <algorithm>
#include <cmath>

namespace wulff {

namespace {

constexpr double kDegenerateGram = 1e-12;

Vec3 jet_value(const JetVec3& f) {
    return {f[0].value(), f[1].value(), f[2].value()};
}
Vec3 jet_grad(const JetVec3& f, int j) {
    return {f[0].grad(j), f[1].grad(j), f[2].grad(j)};
}
Vec3 jet_hess(const JetVec3& f, int i, int j) {
    return {f[0].hess(i, j), f[1].hess(i, j), f[2].hess(i, j)};
}

}  // namespace

ChartFrame frame_from_position_jets(int dim, const JetVec3& f) {
    ChartFrame out;
    out.p = jet_value(f);
    if (dim == 2) {
        const Vec3 T = jet_grad(f, 0);
        const Vec3 Ts = jet_hess(f, 0, 0);
        const double n = norm(T);
        if (n * n < kDegenerateGram) throw std::domain_error("frame: degenerate tangent");
        // Outward normal of a counterclockwise curve: rotate the tangent clockwise.
        const Vec3 R{T.y, -T.x, 0.0};
        const Vec3 Rs{Ts.y, -Ts.x, 0.0};
        out.t[0] = T;
        out.N = R / n;
        out.dN[0] = Rs / n - R * (dot(T, Ts) / (n * n * n));
        return out;
    }
    const Vec3 fu = jet_grad(f, 0), fv = jet_grad(f, 1);
    const Vec3 fuu = jet_hess(f, 0, 0), fuv = jet_hess(f, 0, 1), fvv = jet_hess(f, 1, 1);
    const Vec3 C = cross(fu, fv);
    const Vec3 Cu = cross(fuu, fv) + cross(fu, fuv);
    const Vec3 Cv = cross(fuv, fv) + cross(fu, fvv);
    const double n = norm(C);
    if (n * n < kDegenerateGram) throw std::domain_error("frame: degenerate tangents");
    out.t[0] = fu;
    out.t[1] = fv;
    out.N = C / n;
    out.dN[0] = Cu / n - C * (dot(C, Cu) / (n * n * n));
    out.dN[1] = Cv / n - C * (dot(C, Cv) / (n * n * n));
    return out;
}

Patch::Patch(std::shared_ptr<const Chart> chart, Domain domain, std::vector<Edge> boundary_edges,
             bool flip_orientation)
    : chart_(std::move(chart)),
      domain_(domain),
      boundary_edges_(std::move(boundary_edges)),
      orient_(flip_orientation ? -1.0 : 1.0) {
    if (domain_.rank != chart_->rank()) throw ValidationError("Patch: domain rank mismatch");
    for (const Edge& e : boundary_edges_) {
        if (e.axis < 0 || e.axis >= domain_.rank || (e.side != 0 && e.side != 1))
            throw ValidationError("Patch: invalid boundary edge");
        if (domain_.periodic[e.axis])
            throw ValidationError("Patch: a periodic seam cannot be a boundary edge");
    }
}

FrameData Patch::frame(double u, double v) const {
    ChartFrame cf = chart_->eval(u, v);
    FrameData f;
    f.dim = dim();
    f.rank = rank();
    f.p = cf.p * scale_ + shift_;
    for (int j = 0; j < f.rank; ++j) {
        f.t[j] = cf.t[j] * scale_;
        f.dN[j] = cf.dN[j] * orient_;
    }
    f.N = cf.N * orient_;
    f.metric.n = f.rank;
    for (int i = 0; i < f.rank; ++i)
        for (int j = 0; j < f.rank; ++j) f.metric.m[i][j] = dot(f.t[i], f.t[j]);
    const double det = f.metric.det();
    if (!(det > kDegenerateGram)) throw std::domain_error("frame: degenerate tangents");
    f.inv_metric = f.metric.inverse();
    f.area_element = std::sqrt(det);
    return f;
}

MatN Patch::shape_operator(const FrameData& f, double* asymmetry) const {
    MatN M;  // second fundamental form via -<t_i, dN_j>
    M.n = f.rank;
    for (int i = 0; i < f.rank; ++i)
        for (int j = 0; j < f.rank; ++j) M.m[i][j] = -dot(f.t[i], f.dN[j]);
    if (asymmetry) {
        *asymmetry = 0.0;
        for (int i = 0; i < f.rank; ++i)
            for (int j = i + 1; j < f.rank; ++j)
                *asymmetry = std::max(*asymmetry, std::abs(M.m[i][j] - M.m[j][i]));
    }
    return f.inv_metric.mul(M);
}

void Patch::edge_point(const Edge& edge, double s, double& u, double& v) const {
    const double fixed = edge.side == 0 ? domain_.lo[edge.axis] : domain_.hi[edge.axis];
    if (rank() == 1) {
        u = fixed;
        v = 0.0;
        return;
    }
    if (edge.axis == 0) {
        u = fixed;
        v = s;
    } else {
        u = s;
        v = fixed;
    }
}

BoundaryFrame Patch::boundary_frame(const Edge& edge, double s) const {
    if (std::find(boundary_edges_.begin(), boundary_edges_.end(), edge) == boundary_edges_.end())
        throw ValidationError("boundary_frame: not a boundary edge");
    double u, v;
    edge_point(edge, s, u, v);
    BoundaryFrame bf;
    bf.frame = frame(u, v);
    // Direction into the parameter domain along the edge's perpendicular axis.
    const double inward = edge.side == 0 ? 1.0 : -1.0;
    if (rank() == 1) {
        bf.edge_tangent = Vec3{};
        bf.line_element = 1.0;
        bf.nu = normalized(bf.frame.t[0] * inward);
        return bf;
    }
    const int along = 1 - edge.axis;
    const Vec3 Te = bf.frame.t[along];
    bf.edge_tangent = normalized(Te);
    bf.line_element = norm(Te);
    const Vec3 inner = bf.frame.t[edge.axis] * inward;
    const Vec3 nu_raw = inner - bf.edge_tangent * dot(inner, bf.edge_tangent);
    bf.nu = normalized(nu_raw);
    return bf;
}

QuadratureGrid Patch::build_grid(int interior_order, int boundary_order) const {
    QuadratureGrid grid;
    grid.interior_order = interior_order;
    grid.boundary_order = boundary_order;
    if (rank() == 1) {
        const GaussRule rule = gauss_legendre_on(interior_order, domain_.lo[0], domain_.hi[0]);
        grid.nodes.reserve(rule.nodes.size());
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
            grid.nodes.push_back({rule.nodes[i], 0.0, rule.weights[i]});
        for (const Edge& e : boundary_edges_) {
            QuadratureGrid::BoundaryNode bn;
            bn.edge = e;
            bn.s = e.side == 0 ? domain_.lo[0] : domain_.hi[0];
            edge_point(e, bn.s, bn.u, bn.v);
            bn.weight = 1.0;
            grid.boundary.push_back(bn);
        }
        return grid;
    }
    const GaussRule ru = gauss_legendre_on(interior_order, domain_.lo[0], domain_.hi[0]);
    const GaussRule rv = gauss_legendre_on(interior_order, domain_.lo[1], domain_.hi[1]);
    grid.nodes.reserve(ru.nodes.size() * rv.nodes.size());
    for (std::size_t i = 0; i < ru.nodes.size(); ++i)
        for (std::size_t j = 0; j < rv.nodes.size(); ++j)
            grid.nodes.push_back({ru.nodes[i], rv.nodes[j], ru.weights[i] * rv.weights[j]});
    for (const Edge& e : boundary_edges_) {
        const int along = 1 - e.axis;
        const GaussRule rs = gauss_legendre_on(boundary_order, domain_.lo[along], domain_.hi[along]);
        for (std::size_t i = 0; i < rs.nodes.size(); ++i) {
            QuadratureGrid::BoundaryNode bn;
            bn.edge = e;
            bn.s = rs.nodes[i];
            bn.weight = rs.weights[i];
            edge_point(e, bn.s, bn.u, bn.v);
            grid.boundary.push_back(bn);
        }
    }
    return grid;
}

Patch Patch::transformed(double lambda, const Vec3& translation) const {
    if (!(lambda > 0)) throw ValidationError("transformed: dilation factor must be positive");
    Patch out = *this;
    out.scale_ = lambda * scale_;
    out.shift_ = shift_ * lambda + translation;
    return out;
}

Patch Patch::flipped() const {
    Patch out = *this;
    out.orient_ = -orient_;
    return out;
}

double area(const Patch& patch, const QuadratureGrid& grid) {
    std::vector<double> vals;
    vals.reserve(grid.nodes.size());
    for (const auto& n : grid.nodes) {
        const FrameData f = patch.frame(n.u, n.v);
        vals.push_back(n.weight * f.area_element);
    }
    return pairwise_sum(vals);
}

double algebraic_volume(const Patch& patch, const QuadratureGrid& grid) {
    std::vector<double> vals;
    vals.reserve(grid.nodes.size());
    for (const auto& n : grid.nodes) {
        const FrameData f = patch.frame(n.u, n.v);
        vals.push_back(n.weight * f.area_element * dot(f.p, f.N));
    }
    return pairwise_sum(vals) / patch.dim();
}

// --- chart catalog -----------------------------------------------------------

ChartFrame SphereChart::eval(double u, double v) const {
    const double su = std::sin(u), cu = std::cos(u), sv = std::sin(v), cv = std::cos(v);
    ChartFrame f;
    const Vec3 w{su * cv, su * sv, cu};
    const Vec3 wu{cu * cv, cu * sv, -su};
    const Vec3 wv{-su * sv, su * cv, 0.0};
    f.p = c_ + w * r_;
    f.t[0] = wu * r_;
    f.t[1] = wv * r_;
    f.N = w;
    f.dN[0] = wu;
    f.dN[1] = wv;
    return f;
}

ChartFrame WulffChart::eval(double u, double v) const {
    const double su = std::sin(u), cu = std::cos(u), sv = std::sin(v), cv = std::cos(v);
    const Vec3 w{su * cv, su * sv, cu};
    const Vec3 wu{cu * cv, cu * sv, -su};
    const Vec3 wv{-su * sv, su * cv, 0.0};
    const SupportEval ev = body_->support_eval(w);
    ChartFrame f;
    f.p = ev.grad;
    f.t[0] = ev.hess.apply(wu);
    f.t[1] = ev.hess.apply(wv);
    f.N = w;
    f.dN[0] = wu;
    f.dN[1] = wv;
    return f;
}

ChartFrame CircleChart::eval(double u, double /*v*/) const {
    const double cs = std::cos(u), sn = std::sin(u);
    ChartFrame f;
    f.p = c_ + Vec3{cs, sn, 0} * r_;
    f.t[0] = Vec3{-sn, cs, 0} * r_;
    f.N = {cs, sn, 0};
    f.dN[0] = {-sn, cs, 0};
    return f;
}

ChartFrame Wulff2DChart::eval(double u, double /*v*/) const {
    const double cs = std::cos(u), sn = std::sin(u);
    const Vec3 w{cs, sn, 0};
    const Vec3 wp{-sn, cs, 0};
    const SupportEval ev = body_->support_eval(w);
    ChartFrame f;
    f.p = ev.grad;
    f.t[0] = ev.hess.apply(wp);
    f.N = w;
    f.dN[0] = wp;
    return f;
}

Jet2 PolyTrigFn::eval(const Jet2& x, const Jet2& y) const {
    Jet2 g = Jet2(c0, x.seeds()) + cx * x + cy * y + axx * (x * x) + ayy * (y * y);
    if (amp != 0.0) g = g + amp * (sin(x * kx) * cos(y * ky));
    return g;
}

ChartFrame GraphChart::eval(double u, double v) const {
    const auto s = Jet2::seed(std::array<double, 2>{u, v});
    JetVec3 f{s[0], s[1], g_->eval(s[0], s[1])};
    return frame_from_position_jets(3, f);
}

ChartFrame PolarGraphChart::eval(double u, double v) const {
    const auto s = Jet2::seed(std::array<double, 2>{u, v});
    const Jet2& rho = s[0];
    const Jet2& psi = s[1];
    const Jet2 height = amp_ * ((1.0 - rho * rho) * (1.0 + tilt_ * (rho * cos(psi))));
    JetVec3 f{R_ * (rho * cos(psi)), R_ * (rho * sin(psi)), height};
    return frame_from_position_jets(3, f);
}

ChartFrame Graph2DChart::eval(double u, double /*v*/) const {
    const auto s = Jet2::seed(std::array<double, 1>{u});
    JetVec3 f{s[0], g_->eval(s[0], Jet2(0.0, 1)), Jet2(0.0, 1)};
    return frame_from_position_jets(2, f);
}

}  // namespace wulff
