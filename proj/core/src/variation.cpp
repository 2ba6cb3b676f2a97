#include "wulff/variation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wulff {

namespace {

std::array<double, 2> tangential_coords(const FrameData& f, const Vec3& w) {
    double rhs[2];
    for (int i = 0; i < f.rank; ++i) rhs[i] = dot(f.t[i], w);
    std::array<double, 2> a{};
    for (int i = 0; i < f.rank; ++i)
        for (int j = 0; j < f.rank; ++j) a[i] += f.inv_metric.m[i][j] * rhs[j];
    return a;
}

Vec3 chart_gradient(const FrameData& f, const double* partials) {
    Vec3 g{};
    for (int i = 0; i < f.rank; ++i) {
        double coef = 0;
        for (int j = 0; j < f.rank; ++j) coef += f.inv_metric.m[i][j] * partials[j];
        g += f.t[i] * coef;
    }
    return g;
}

// Collar weight: 1 at the boundary, identically 0 past d = 1, all derivatives
// vanishing at the seam. A polynomial smoothstep is only finitely smooth
// there and its derivative jump leaks into the quadrature of the
// integrated-by-parts second-variation identity; the bump profile keeps the
// blended integrands spectrally convergent.
double collar_weight(double d) {
    if (d >= 1.0) return 0.0;
    const double q = 1.0 - d * d;
    return std::exp(-3.0 * d * d / q);
}
double collar_weight_deriv(double d) {
    if (d >= 1.0) return 0.0;
    const double q = 1.0 - d * d;
    return collar_weight(d) * (-6.0 * d / (q * q));
}

// Five-point central first/second derivatives at step h from samples
// y(-2h), y(-h), y(0), y(h), y(2h).
double diff1(double ym2, double ym1, double yp1, double yp2, double h) {
    return (-yp2 + 8.0 * yp1 - 8.0 * ym1 + ym2) / (12.0 * h);
}
double diff2(double ym2, double ym1, double y0, double yp1, double yp2, double h) {
    return (-yp2 + 16.0 * yp1 - 30.0 * y0 + 16.0 * ym1 - ym2) / (12.0 * h * h);
}

// One Richardson step over the 4th-order stencils at h and h/2. The values
// array is indexed by t in {-2h,-h,-h/2,0,h/2,h,2h}.
double richardson1(const std::array<double, 7>& y, double h) {
    const double d_h = diff1(y[0], y[1], y[5], y[6], h);
    const double d_h2 = diff1(y[1], y[2], y[4], y[5], h / 2.0);
    return (16.0 * d_h2 - d_h) / 15.0;
}
double richardson2(const std::array<double, 7>& y, double h) {
    const double d_h = diff2(y[0], y[1], y[3], y[5], y[6], h);
    const double d_h2 = diff2(y[1], y[2], y[3], y[4], y[5], h / 2.0);
    return (16.0 * d_h2 - d_h) / 15.0;
}

constexpr std::array<double, 7> kStencil = {-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0};

struct BoundaryZ {
    Vec3 value;
    Vec3 deriv;  // d/da along the edge
    double rdot = 0, sdot = 0;
};

// Acceleration of the wall-chart curve t -> (r + t rdot) gamma(s + t sdot)
// through the boundary point at edge coordinate a, as a 1-jet in a.
BoundaryZ boundary_acceleration(const GeometryCache& geo, const SolidCone& cone, const Edge& edge,
                                double a) {
    const Patch& patch = *geo.patch;
    double u, v;
    patch.edge_point(edge, a, u, v);
    const FrameData f = patch.frame(u, v);
    const AnisoFrame af = aniso_frame(*geo.body, f);
    BoundaryZ out;
    if (patch.dim() == 2) {
        const SolidCone::Projection pr = cone.project(f.p);
        out.rdot = dot(af.N_K, cone.ray_direction(pr.wall));
        return out;  // straight rays: zero acceleration
    }
    const int along = 1 - edge.axis;
    JetVec3 p, nk;
    for (int i = 0; i < 3; ++i) {
        p[i] = Jet2(f.p[i], 1);
        p[i].grad(0) = f.t[along][i];
        nk[i] = Jet2(af.N_K[i], 1);
        nk[i].grad(0) = af.dN_K[along][i];
    }
    const Jet2 r = jnorm(p, 3);
    const Jet2 s = atan2(p[1], p[0]);
    JetVec3 g0, g1, g2;
    cone.base_curve().eval(s, g0, g1, g2);
    const Jet2 rdot = jdot(nk, g0, 3);
    const Jet2 sdot = jdot(nk, g1, 3) / (r * jdot(g1, g1, 3));
    for (int i = 0; i < 3; ++i) {
        const Jet2 zi = 2.0 * (rdot * sdot) * g1[i] + r * (sdot * sdot) * g2[i];
        out.value[i] = zi.value();
        out.deriv[i] = zi.grad(0);
    }
    out.rdot = rdot.value();
    out.sdot = sdot.value();
    return out;
}

// Deformed tangents and sign-stable oriented normal at one interior node.
struct DeformedFrame {
    Vec3 p;
    Vec3 N;
    double element = 0;
};

DeformedFrame deform_node(const GeometryCache& geo, const Variation2Jet& jet, std::size_t i,
                          double t, double radial_cubic) {
    const FrameData& f = geo.frames[i];
    DeformedFrame out;
    const double t2 = 0.5 * t * t;
    const double t3 = t * t * t * radial_cubic;
    out.p = f.p + jet.X[i] * t + jet.Z[i] * t2 + f.p * t3;
    Vec3 T[2];
    for (int j = 0; j < f.rank; ++j)
        T[j] = f.t[j] + jet.dX[i][j] * t + jet.dZ[i][j] * t2 + f.t[j] * t3;
    if (f.rank == 1) {
        const Vec3 R{T[0].y, -T[0].x, 0.0};
        const Vec3 R0{f.t[0].y, -f.t[0].x, 0.0};
        const double sign = dot(R0, f.N) >= 0 ? 1.0 : -1.0;
        const double n = norm(R);
        if (!(n * n > 1e-12)) throw std::domain_error("deformation: degenerate frame");
        out.N = R * (sign / n);
        out.element = n;
        return out;
    }
    const Vec3 C = cross(T[0], T[1]);
    const Vec3 C0 = cross(f.t[0], f.t[1]);
    const double sign = dot(C0, f.N) >= 0 ? 1.0 : -1.0;
    const double n = norm(C);
    if (!(n * n > 1e-12)) throw std::domain_error("deformation: degenerate frame");
    out.N = C * (sign / n);
    out.element = n;
    return out;
}

}  // namespace

GeometryCache build_geometry(const ConvexBody& body, const Patch& patch,
                             const QuadratureGrid& grid) {
    GeometryCache geo;
    geo.body = &body;
    geo.patch = &patch;
    geo.grid = &grid;
    geo.frames.reserve(grid.nodes.size());
    geo.aniso.reserve(grid.nodes.size());
    std::vector<double> a_vals, ak_vals, v_vals;
    a_vals.reserve(grid.nodes.size());
    for (const auto& n : grid.nodes) {
        FrameData f = patch.frame(n.u, n.v);
        AnisoFrame af = aniso_frame(body, f);
        a_vals.push_back(n.weight * f.area_element);
        ak_vals.push_back(n.weight * f.area_element * af.phi);
        v_vals.push_back(n.weight * f.area_element * dot(f.p, f.N));
        geo.frames.push_back(std::move(f));
        geo.aniso.push_back(std::move(af));
    }
    geo.area = pairwise_sum(a_vals);
    geo.aniso_area = pairwise_sum(ak_vals);
    geo.volume = pairwise_sum(v_vals) / patch.dim();
    geo.bframes.reserve(grid.boundary.size());
    for (const auto& bn : grid.boundary) {
        BoundaryFrame bf = patch.boundary_frame(bn.edge, bn.s);
        geo.baniso.push_back(aniso_frame(body, bf.frame));
        geo.nu_k.push_back(aniso_conormal(body, bf));
        geo.bframes.push_back(std::move(bf));
    }
    return geo;
}

Variation2Jet build_generic_variation(const GeometryCache& geo, const FieldSpec& spec) {
    Variation2Jet jet;
    jet.mode = Variation2Jet::Mode::Generic;
    const std::size_t ni = geo.frames.size();
    const std::size_t nb = geo.bframes.size();
    jet.X.resize(ni);
    jet.Z.assign(ni, Vec3{});
    jet.dX.resize(ni);
    jet.dZ.assign(ni, {Vec3{}, Vec3{}});
    jet.Xb.resize(nb);
    jet.Zb.assign(nb, Vec3{});
    if (const auto* c = std::get_if<ConstantField>(&spec)) {
        jet.label = "constant";
        for (std::size_t i = 0; i < ni; ++i) {
            jet.X[i] = c->c;
            jet.dX[i] = {Vec3{}, Vec3{}};
        }
        for (std::size_t i = 0; i < nb; ++i) jet.Xb[i] = c->c;
    } else if (std::get_if<RadialField>(&spec)) {
        jet.label = "radial";
        for (std::size_t i = 0; i < ni; ++i) {
            jet.X[i] = geo.frames[i].p;
            jet.dX[i] = {geo.frames[i].t[0], geo.frames[i].t[1]};
        }
        for (std::size_t i = 0; i < nb; ++i) jet.Xb[i] = geo.bframes[i].frame.p;
    } else if (const auto* cn = std::get_if<CoordinateNormalField>(&spec)) {
        jet.label = "coordinate-normal";
        const int ax = cn->axis;
        for (std::size_t i = 0; i < ni; ++i) {
            const FrameData& f = geo.frames[i];
            jet.X[i] = f.N * f.p[ax];
            for (int j = 0; j < f.rank; ++j) jet.dX[i][j] = f.N * f.t[j][ax] + f.dN[j] * f.p[ax];
        }
        for (std::size_t i = 0; i < nb; ++i) {
            const FrameData& f = geo.bframes[i].frame;
            jet.Xb[i] = f.N * f.p[ax];
        }
    } else if (const auto* tbl = std::get_if<NodeTableField>(&spec)) {
        jet.label = "node-table";
        if (tbl->interior.size() != ni || tbl->boundary.size() != nb)
            throw ValidationError("node-table field: size mismatch with the grid");
        jet.X = tbl->interior;
        jet.Xb = tbl->boundary;
        jet.deformable = false;
        jet.dX.clear();
        jet.dZ.clear();
    }
    return jet;
}

Variation2Jet build_wulff_normal_variation(const GeometryCache& geo, const SolidCone* cone) {
    Variation2Jet jet;
    jet.mode = Variation2Jet::Mode::AnisoNormal;
    jet.label = "aniso-normal";
    const std::size_t ni = geo.frames.size();
    const std::size_t nb = geo.bframes.size();
    jet.X.resize(ni);
    jet.dX.resize(ni);
    jet.Z.assign(ni, Vec3{});
    jet.dZ.assign(ni, {Vec3{}, Vec3{}});
    jet.Xb.resize(nb);
    jet.Zb.assign(nb, Vec3{});
    jet.rdot.assign(nb, 0.0);
    jet.sdot.assign(nb, 0.0);
    for (std::size_t i = 0; i < ni; ++i) {
        jet.X[i] = geo.aniso[i].N_K;
        jet.dX[i] = geo.aniso[i].dN_K;
    }
    for (std::size_t i = 0; i < nb; ++i) jet.Xb[i] = geo.baniso[i].N_K;
    if (!cone) return jet;

    // With a wall attached the construction only makes sense when the normal
    // deformation can stay tangent to the wall.
    StationarityResiduals res = stationarity_residuals(*geo.body, *geo.patch, *geo.grid, cone);
    if (!(res.hk_spread < kBuildStationarityGate) || !(res.nk_xi_sup < kBuildStationarityGate))
        throw ValidationError("aniso-normal variation: scenario is not stationary (residuals " +
                              std::to_string(res.hk_spread) + ", " + std::to_string(res.nk_xi_sup) +
                              ")");

    for (std::size_t i = 0; i < nb; ++i) {
        const auto& bn = geo.grid->boundary[i];
        const BoundaryZ bz = boundary_acceleration(geo, *cone, bn.edge, bn.s);
        jet.Zb[i] = bz.value;
        jet.rdot[i] = bz.rdot;
        jet.sdot[i] = bz.sdot;
    }
    if (geo.patch->dim() == 2) return jet;  // straight rays: Z stays zero

    const Domain& dom = geo.patch->domain();
    for (std::size_t i = 0; i < ni; ++i) {
        const auto& node = geo.grid->nodes[i];
        for (const Edge& e : geo.patch->boundary_edges()) {
            const double c = e.axis == 0 ? node.u : node.v;
            const double cb = e.side == 0 ? dom.lo[e.axis] : dom.hi[e.axis];
            const double depth = 0.2 * dom.length(e.axis);
            const double d = std::abs(c - cb) / depth;
            if (d >= 1.0) continue;
            const double chi = collar_weight(d);
            const double dchi_dc = collar_weight_deriv(d) * ((c >= cb ? 1.0 : -1.0) / depth);
            const double a = e.axis == 0 ? node.v : node.u;
            const int along = 1 - e.axis;
            const BoundaryZ bz = boundary_acceleration(geo, *cone, e, a);
            jet.Z[i] += bz.value * chi;
            jet.dZ[i][along] += bz.deriv * chi;
            jet.dZ[i][e.axis] += bz.value * dchi_dc;
        }
    }
    return jet;
}

FirstVariation first_variation_analytic(const GeometryCache& geo, const Variation2Jet& jet) {
    const int n = geo.patch->rank();
    std::vector<double> a_vals, v_vals, b_vals, flux_vals;
    a_vals.reserve(geo.frames.size());
    for (std::size_t i = 0; i < geo.frames.size(); ++i) {
        const auto& node = geo.grid->nodes[i];
        const double u = dot(jet.X[i], geo.frames[i].N);
        const double w = node.weight * geo.frames[i].area_element;
        a_vals.push_back(-w * n * geo.aniso[i].HK * u);
        v_vals.push_back(w * u);
    }
    for (std::size_t i = 0; i < geo.bframes.size(); ++i) {
        const auto& bn = geo.grid->boundary[i];
        const BoundaryFrame& bf = geo.bframes[i];
        b_vals.push_back(-bn.weight * bf.line_element * dot(jet.Xb[i], geo.nu_k[i]));
        // Lateral flux through the cone over the moving boundary. Endpoint
        // sign: +1 where the inner conormal points against the parameter
        // direction (upper end), -1 at the lower end.
        if (n == 1) {
            const double sigma = dot(bf.nu, bf.frame.t[0]) > 0 ? -1.0 : 1.0;
            const double det2 = bf.frame.p.x * jet.Xb[i].y - bf.frame.p.y * jet.Xb[i].x;
            flux_vals.push_back(sigma * det2 / (n + 1));
        } else {
            const Vec3 t_stokes = cross(bf.nu, bf.frame.N);
            const double det3 = dot(bf.frame.p, cross(jet.Xb[i], t_stokes));
            flux_vals.push_back(bn.weight * bf.line_element * det3 / (n + 1));
        }
    }
    FirstVariation out;
    out.area_rate = pairwise_sum(a_vals) + pairwise_sum(b_vals);
    out.volume_boundary_flux = pairwise_sum(flux_vals);
    out.volume_rate = pairwise_sum(v_vals) + out.volume_boundary_flux;
    return out;
}

SecondVariation second_variation_analytic(const GeometryCache& geo, const Variation2Jet& jet) {
    if (jet.mode != Variation2Jet::Mode::AnisoNormal)
        throw std::invalid_argument("second variation: needs the aniso-normal 2-jet");
    const int n = geo.patch->rank();
    std::vector<double> h2, tb2, vv, bz;
    h2.reserve(geo.frames.size());
    for (std::size_t i = 0; i < geo.frames.size(); ++i) {
        const auto& node = geo.grid->nodes[i];
        const AnisoFrame& af = geo.aniso[i];
        const double w = node.weight * geo.frames[i].area_element;
        const double v = dot(jet.Z[i], geo.frames[i].N);
        h2.push_back(w * n * n * af.HK * af.HK * af.phi);
        tb2.push_back(-w * af.trBK2 * af.phi);
        vv.push_back(-w * n * af.HK * v);
    }
    for (std::size_t i = 0; i < geo.bframes.size(); ++i) {
        const auto& bn = geo.grid->boundary[i];
        bz.push_back(-bn.weight * geo.bframes[i].line_element * dot(jet.Zb[i], geo.nu_k[i]));
    }
    SecondVariation out;
    out.bulk_h2 = pairwise_sum(h2);
    out.bulk_trb2 = pairwise_sum(tb2);
    out.bulk_v = pairwise_sum(vv);
    out.boundary_z = pairwise_sum(bz);
    out.total = out.bulk_h2 + out.bulk_trb2 + out.bulk_v + out.boundary_z;
    return out;
}

ConeSecondVariation second_variation_cone(const GeometryCache& geo, const SolidCone* cone,
                                          const Variation2Jet& jet) {
    if (jet.mode != Variation2Jet::Mode::AnisoNormal)
        throw std::invalid_argument("second variation: needs the aniso-normal 2-jet");
    ConeSecondVariation out;
    const int n = geo.patch->rank();
    std::vector<double> h2, tb2, vv, bterm, v2;
    for (std::size_t i = 0; i < geo.frames.size(); ++i) {
        const auto& node = geo.grid->nodes[i];
        const AnisoFrame& af = geo.aniso[i];
        const double w = node.weight * geo.frames[i].area_element;
        const double v = dot(jet.Z[i], geo.frames[i].N);
        h2.push_back(w * n * n * af.HK * af.HK * af.phi);
        tb2.push_back(-w * af.trBK2 * af.phi);
        vv.push_back(-w * n * af.HK * v);
        v2.push_back(w * (-n * af.HK * af.phi + v));
    }
    for (std::size_t i = 0; i < geo.bframes.size(); ++i) {
        const auto& bn = geo.grid->boundary[i];
        const BoundaryFrame& bf = geo.bframes[i];
        const AnisoFrame& af = geo.baniso[i];
        double ii = 0.0, cos_theta = 1.0;
        if (cone) {
            const SolidCone::Projection pr = cone->project(bf.frame.p);
            const SolidCone::WallFrame wf = cone->wall_frame(pr.r, pr.s, pr.wall);
            ii = cone->second_fundamental(wf, af.N_K, af.N_K);
            cos_theta = dot(bf.nu, wf.xi);
            out.z_xi_residual = std::max(out.z_xi_residual, std::abs(dot(jet.Zb[i], wf.xi) - ii));
        }
        bterm.push_back(-bn.weight * bf.line_element * (ii / cos_theta) * af.phi);
    }
    out.area.bulk_h2 = pairwise_sum(h2);
    out.area.bulk_trb2 = pairwise_sum(tb2);
    out.area.bulk_v = pairwise_sum(vv);
    out.area.boundary_z = pairwise_sum(bterm);
    out.area.total = out.area.bulk_h2 + out.area.bulk_trb2 + out.area.bulk_v + out.area.boundary_z;
    out.volume_accel = pairwise_sum(v2);
    return out;
}

void deformed_functionals(const GeometryCache& geo, const Variation2Jet& jet, double t,
                          double& area_k, double& volume, double radial_cubic) {
    if (!jet.deformable) throw ValidationError("deformation: field has no chart derivatives");
    std::vector<double> ak, vol;
    ak.reserve(geo.frames.size());
    for (std::size_t i = 0; i < geo.frames.size(); ++i) {
        const auto& node = geo.grid->nodes[i];
        const DeformedFrame df = deform_node(geo, jet, i, t, radial_cubic);
        const double w = node.weight * df.element;
        ak.push_back(w * geo.body->support(df.N));
        vol.push_back(w * dot(df.p, df.N));
    }
    area_k = pairwise_sum(ak);
    volume = pairwise_sum(vol) / geo.patch->dim();
}

FunctionalProfile functional_profile(const GeometryCache& geo, const Variation2Jet& jet, double h,
                                     double radial_cubic) {
    if (!(h > 0)) throw std::invalid_argument("functional_profile: step must be positive");
    if (std::abs(geo.volume) < kMinVolume)
        throw ValidationError("functional_profile: |V| below 1e-8, corrected profile undefined");
    FunctionalProfile out;
    out.h = h;
    const int n = geo.patch->rank();
    std::array<double, 7> A{}, V{}, L{}, a{};
    for (int k = 0; k < 7; ++k) {
        const double t = kStencil[k] * h;
        FunctionalProfile::Row row;
        row.t = t;
        if (t == 0.0) {
            row.area_k = geo.aniso_area;
            row.volume = geo.volume;
        } else {
            deformed_functionals(geo, jet, t, row.area_k, row.volume, radial_cubic);
        }
        if (row.volume * geo.volume <= 0.0)
            throw ValidationError("functional_profile: volume changes sign across the stencil");
        row.lambda = std::pow(geo.volume / row.volume, 1.0 / (n + 1));
        row.corrected_area = std::pow(row.lambda, n) * row.area_k;
        A[k] = row.area_k;
        V[k] = row.volume;
        L[k] = row.lambda;
        a[k] = row.corrected_area;
        out.rows.push_back(row);
    }
    out.A1_fd = richardson1(A, h);
    out.A2_fd = richardson2(A, h);
    out.V1_fd = richardson1(V, h);
    out.V2_fd = richardson2(V, h);
    out.lambda1_fd = richardson1(L, h);
    out.lambda2_fd = richardson2(L, h);
    out.a2_fd = richardson2(a, h);
    return out;
}

FdRates fd_rates(const GeometryCache& geo, const Variation2Jet& jet, double h,
                 double radial_cubic) {
    if (!(h > 0)) throw std::invalid_argument("fd_rates: step must be positive");
    std::array<double, 7> A{}, V{};
    for (int k = 0; k < 7; ++k) {
        const double t = kStencil[k] * h;
        if (t == 0.0) {
            A[k] = geo.aniso_area;
            V[k] = geo.volume;
        } else {
            deformed_functionals(geo, jet, t, A[k], V[k], radial_cubic);
        }
    }
    FdRates out;
    out.A1 = richardson1(A, h);
    out.A2 = richardson2(A, h);
    out.V1 = richardson1(V, h);
    out.V2 = richardson2(V, h);
    return out;
}

StabilityForm stability_form(const GeometryCache& geo, const SolidCone* cone) {
    StabilityForm out;
    std::vector<double> bulk, bnd;
    bulk.reserve(geo.frames.size());
    for (std::size_t i = 0; i < geo.frames.size(); ++i) {
        const auto& node = geo.grid->nodes[i];
        const AnisoFrame& af = geo.aniso[i];
        bulk.push_back(-node.weight * geo.frames[i].area_element * af.defect * af.phi);
    }
    for (std::size_t i = 0; i < geo.bframes.size(); ++i) {
        if (!cone) break;
        const auto& bn = geo.grid->boundary[i];
        const BoundaryFrame& bf = geo.bframes[i];
        const AnisoFrame& af = geo.baniso[i];
        const SolidCone::Projection pr = cone->project(bf.frame.p);
        const SolidCone::WallFrame wf = cone->wall_frame(pr.r, pr.s, pr.wall);
        const double ii = cone->second_fundamental(wf, af.N_K, af.N_K);
        const double cos_theta = dot(bf.nu, wf.xi);
        bnd.push_back(-bn.weight * bf.line_element * (ii / cos_theta) * af.phi);
    }
    out.bulk = pairwise_sum(bulk);
    out.boundary = pairwise_sum(bnd);
    out.total = out.bulk + out.boundary;
    return out;
}

NormalDerivativeResiduals normal_derivative_checks(const GeometryCache& geo,
                                                   const Variation2Jet& jet, double h) {
    if (!jet.deformable) throw ValidationError("normal derivative check: field not deformable");
    NormalDerivativeResiduals out;
    out.second_checked = jet.mode == Variation2Jet::Mode::AnisoNormal;
    for (std::size_t i = 0; i < geo.frames.size(); ++i) {
        const FrameData& f = geo.frames[i];
        std::array<Vec3, 7> normals;
        for (int k = 0; k < 7; ++k)
            normals[k] = deform_node(geo, jet, i, kStencil[k] * h, 0.0).N;
        Vec3 fd1, fd2;
        for (int c = 0; c < 3; ++c) {
            std::array<double, 7> y{};
            for (int k = 0; k < 7; ++k) y[k] = normals[k][c];
            fd1[c] = richardson1(y, h);
            fd2[c] = richardson2(y, h);
        }
        // First derivative: -grad u - B(X^T) with u = <X, N>.
        double u_j[2];
        for (int j = 0; j < f.rank; ++j)
            u_j[j] = dot(jet.dX[i][j], f.N) + dot(jet.X[i], f.dN[j]);
        const Vec3 grad_u = chart_gradient(f, u_j);
        const auto ax = tangential_coords(f, jet.X[i]);
        Vec3 bxt{};
        for (int j = 0; j < f.rank; ++j) bxt -= f.dN[j] * ax[j];
        out.first = std::max(out.first, norm(fd1 + grad_u + bxt));
        if (out.second_checked) {
            double v_j[2];
            for (int j = 0; j < f.rank; ++j)
                v_j[j] = dot(jet.dZ[i][j], f.N) + dot(jet.Z[i], f.dN[j]);
            const Vec3 grad_v = chart_gradient(f, v_j);
            const auto az = tangential_coords(f, jet.Z[i]);
            Vec3 bzt{};
            for (int j = 0; j < f.rank; ++j) bzt -= f.dN[j] * az[j];
            out.second = std::max(out.second, norm(fd2 + grad_v + bzt));
        }
    }
    return out;
}

VolumeDrift corrected_volume_drift(const FunctionalProfile& profile, int n, double lambda1,
                                   double lambda2) {
    const double v0 = profile.rows[3].volume;
    auto drift = [&](int idx) {
        const double t = profile.rows[idx].t;
        const double lam = 1.0 + t * lambda1 + 0.5 * t * t * lambda2;
        return std::abs(std::pow(lam, n + 1) * profile.rows[idx].volume - v0);
    };
    VolumeDrift out;
    out.at_h = std::max(drift(1), drift(5));
    out.at_2h = std::max(drift(0), drift(6));
    return out;
}

}  // namespace wulff
