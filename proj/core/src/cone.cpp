#include "wulff/cone.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wulff {

void SphericalBaseCurve::eval(const Jet2& s, JetVec3& g0, JetVec3& g1, JetVec3& g2) const {
    const int m = s.seeds();
    const Jet2 ks = s * static_cast<double>(k_);
    const Jet2 a = Jet2(alpha0_, m) + amp_ * cos(ks);
    const Jet2 ap = (-amp_ * k_) * sin(ks);
    const Jet2 app = (-amp_ * k_ * k_) * cos(ks);
    const Jet2 sa = sin(a), ca = cos(a);
    const Jet2 ss = sin(s), cs = cos(s);
    g0 = {sa * cs, sa * ss, ca};
    g1 = {ap * ca * cs - sa * ss, ap * ca * ss + sa * cs, -(ap * sa)};
    // d/ds of g1, written out so that the jet layer can differentiate it once more.
    g2 = {app * ca * cs - ap * ap * sa * cs - 2.0 * (ap * ca * ss) - sa * cs,
          app * ca * ss - ap * ap * sa * ss + 2.0 * (ap * ca * cs) - sa * ss,
          -(app * sa) - ap * ap * ca};
}

void SphericalBaseCurve::eval(double s, Vec3& g0, Vec3& g1, Vec3& g2) const {
    JetVec3 j0, j1, j2;
    const auto seeds = Jet2::seed(std::array<double, 1>{s});
    eval(seeds[0], j0, j1, j2);
    g0 = {j0[0].value(), j0[1].value(), j0[2].value()};
    g1 = {j1[0].value(), j1[1].value(), j1[2].value()};
    g2 = {j2[0].value(), j2[1].value(), j2[2].value()};
}

SolidCone SolidCone::half_space() {
    SolidCone c;
    c.dim_ = 3;
    c.kind_ = ConeKind::HalfSpace;
    c.curve_ = std::make_shared<SphericalBaseCurve>(M_PI / 2.0, 0.0, 1);
    c.compute_certificate();
    return c;
}

SolidCone SolidCone::circular(double half_angle) {
    if (!(half_angle > 0) || !(half_angle < M_PI))
        throw ValidationError("circular cone: half-angle must lie in (0, pi)");
    SolidCone c;
    c.dim_ = 3;
    c.kind_ = ConeKind::Circular;
    c.curve_ = std::make_shared<SphericalBaseCurve>(half_angle, 0.0, 1);
    c.compute_certificate();
    return c;
}

SolidCone SolidCone::perturbed(double alpha0, double amplitude, int frequency) {
    if (!(alpha0 > 0) || !(alpha0 < M_PI)) throw ValidationError("perturbed cone: bad base angle");
    if (frequency < 1) throw ValidationError("perturbed cone: frequency must be >= 1");
    if (std::abs(amplitude) + alpha0 >= M_PI || alpha0 - std::abs(amplitude) <= 0)
        throw ValidationError("perturbed cone: amplitude leaves the open polar range");
    SolidCone c;
    c.dim_ = 3;
    c.kind_ = ConeKind::Perturbed;
    c.curve_ = std::make_shared<SphericalBaseCurve>(alpha0, amplitude, frequency);
    c.compute_certificate();
    return c;
}

SolidCone SolidCone::planar_wedge(double angle0, double angle1) {
    if (!(angle1 > angle0) || !(angle1 - angle0 < 2 * M_PI))
        throw ValidationError("planar wedge: need 0 < opening < 2 pi");
    SolidCone c;
    c.dim_ = 2;
    c.kind_ = ConeKind::PlanarWedge;
    c.angle0_ = angle0;
    c.angle1_ = angle1;
    c.compute_certificate();
    return c;
}

std::string SolidCone::kind_name() const {
    switch (kind_) {
        case ConeKind::HalfSpace: return "half-space";
        case ConeKind::Circular: return "circular";
        case ConeKind::Perturbed: return "perturbed";
        case ConeKind::PlanarWedge: return "planar-wedge";
    }
    return "?";
}

const SphericalBaseCurve& SolidCone::base_curve() const {
    if (!curve_) throw std::logic_error("base_curve: planar cone has no base curve");
    return *curve_;
}

Vec3 SolidCone::ray_direction(int wall) const {
    const double a = wall == 0 ? angle0_ : angle1_;
    return {std::cos(a), std::sin(a), 0};
}

Vec3 SolidCone::ray_inner_normal(int wall) const {
    // Interior is counterclockwise from ray 0 and clockwise from ray 1.
    const Vec3 d = ray_direction(wall);
    return wall == 0 ? rot90ccw(d) : -rot90ccw(d);
}

SolidCone::WallFrame SolidCone::wall_frame(double r, double s, int wall) const {
    if (!(r > 0)) throw std::domain_error("wall_frame: radius must be positive");
    WallFrame wf;
    wf.r = r;
    wf.s = s;
    wf.wall = wall;
    if (dim_ == 2) {
        wf.ruling = ray_direction(wall);
        wf.p = wf.ruling * r;
        wf.xi = ray_inner_normal(wall);
        return wf;
    }
    Vec3 g0, g1, g2;
    curve_->eval(s, g0, g1, g2);
    wf.p = g0 * r;
    wf.ruling = g0;
    wf.cross = g1;
    const Vec3 C = cross(g0, g1);
    const double nC = norm(C);
    wf.xi = C / nC;
    if (wf.xi.z < 0) throw std::logic_error("wall_frame: unexpected normal orientation");
    // d xi / ds; gamma' x gamma' drops out of the product rule.
    const Vec3 Cp = cross(g0, g2);
    wf.dxi_ds = Cp / nC - C * (dot(C, Cp) / (nC * nC * nC));
    return wf;
}

double SolidCone::second_fundamental(const WallFrame& wf, const Vec3& u, const Vec3& v) const {
    if (dim_ == 2) return 0.0;
    const double g1n2 = norm2(wf.cross);
    const double us = dot(u, wf.cross) / (wf.r * g1n2);
    return -us * dot(wf.dxi_ds, v);
}

SolidCone::Projection SolidCone::project(const Vec3& p) const {
    Projection pr;
    if (dim_ == 2) {
        double best = std::numeric_limits<double>::infinity();
        for (int wall = 0; wall < 2; ++wall) {
            const Vec3 d = ray_direction(wall);
            const double r = std::max(dot(p, d), 1e-12);
            const double dist = norm(p - d * r);
            if (dist < best) {
                best = dist;
                pr = {r, 0.0, wall, dist};
            }
        }
        return pr;
    }
    // Newton on f(s) = <p_hat, gamma'(s)> = 0 from the azimuth of p.
    double s = std::atan2(p.y, p.x);
    Vec3 g0, g1, g2;
    for (int it = 0; it < 50; ++it) {
        curve_->eval(s, g0, g1, g2);
        const double f = dot(p, g1);
        const double df = dot(p, g2);
        if (df == 0.0) break;
        const double step = f / df;
        s -= step;
        if (std::abs(step) < 1e-14) break;
    }
    curve_->eval(s, g0, g1, g2);
    const double r = std::max(dot(p, g0), 1e-12);
    pr.r = r;
    pr.s = s;
    pr.distance = norm(p - g0 * r);
    return pr;
}

void SolidCone::compute_certificate() {
    if (dim_ == 2) {
        certificate_ = M_PI - opening();
        return;
    }
    double min_ii = std::numeric_limits<double>::infinity();
    const int samples = 720;
    for (int i = 0; i < samples; ++i) {
        const double s = 2.0 * M_PI * (i + 0.5) / samples;
        const WallFrame wf = wall_frame(1.0, s);
        const Vec3 u = wf.cross / norm(wf.cross);
        min_ii = std::min(min_ii, second_fundamental(wf, u, u));
    }
    certificate_ = min_ii;
}

BoundaryAngleFrame angle_frame(const SolidCone& cone, const ConvexBody& body, const Patch& patch,
                               const Edge& edge, double s) {
    const BoundaryFrame bf = patch.boundary_frame(edge, s);
    const SolidCone::Projection pr = cone.project(bf.frame.p);
    BoundaryAngleFrame out;
    out.containment = pr.distance;
    if (pr.distance > kContainmentTol)
        throw ValidationError("angle_frame: boundary point does not lie on the cone wall");
    const SolidCone::WallFrame wf = cone.wall_frame(pr.r, pr.s, pr.wall);
    out.xi = wf.xi;
    out.theta = std::atan2(dot(wf.xi, bf.frame.N), dot(wf.xi, bf.nu));
    const double st = std::sin(out.theta), ct = std::cos(out.theta);
    out.mu = bf.nu * (-st) + bf.frame.N * ct;
    out.frame_residual = std::max(norm(bf.nu - (wf.xi * ct - out.mu * st)),
                                  norm(bf.frame.N - (wf.xi * st + out.mu * ct)));
    const AnisoFrame af = aniso_frame(body, bf.frame);
    const Vec3 nuk = aniso_conormal(body, bf);
    out.anangle_residual = std::max(std::abs(dot(af.N_K, out.mu) - dot(nuk, wf.xi)),
                                    std::abs(dot(af.N_K, wf.xi) + dot(nuk, out.mu)));
    return out;
}

double boundary_containment(const SolidCone& cone, const Patch& patch,
                            const QuadratureGrid& grid) {
    double worst = 0;
    for (const auto& bn : grid.boundary) {
        const FrameData f = patch.frame(bn.u, bn.v);
        worst = std::max(worst, cone.project(f.p).distance);
    }
    return worst;
}

StationarityResiduals stationarity_residuals(const ConvexBody& body, const Patch& patch,
                                             const QuadratureGrid& grid, const SolidCone* cone) {
    StationarityResiduals out;
    double hmin = std::numeric_limits<double>::infinity(), hmax = -hmin, hsum = 0;
    for (const auto& n : grid.nodes) {
        const FrameData f = patch.frame(n.u, n.v);
        const AnisoFrame af = aniso_frame(body, f);
        hmin = std::min(hmin, af.HK);
        hmax = std::max(hmax, af.HK);
        hsum += af.HK;
    }
    out.hk_min = hmin;
    out.hk_max = hmax;
    out.hk_spread = hmax - hmin;
    out.hk_mean = hsum / static_cast<double>(grid.nodes.size());
    if (cone) {
        for (const auto& bn : grid.boundary) {
            const FrameData f = patch.frame(bn.u, bn.v);
            const AnisoFrame af = aniso_frame(body, f);
            const SolidCone::Projection pr = cone->project(f.p);
            const SolidCone::WallFrame wf = cone->wall_frame(pr.r, pr.s, pr.wall);
            out.nk_xi_sup = std::max(out.nk_xi_sup, std::abs(dot(af.N_K, wf.xi)));
        }
    }
    return out;
}

ChartFrame CapInConeChart::eval(double u, double v) const {
    // u = rho in [0, 1], v = s along the base curve.
    const auto seeds = Jet2::seed(std::array<double, 2>{u, v});
    const Jet2& rho = seeds[0];
    const Jet2& s = seeds[1];
    JetVec3 g0, g1, g2;
    curve_->eval(s, g0, g1, g2);
    // Polar angle of gamma(s); the base curve stays off both poles.
    const Jet2 hyp = sqrt(g0[0] * g0[0] + g0[1] * g0[1]);
    const Jet2 phi = atan2(hyp, g0[2]);
    const Jet2 sphi = sin(phi);
    const Jet2 w_pole = sin((1.0 - rho) * phi) / sphi;
    const Jet2 w_curve = sin(rho * phi) / sphi;
    JetVec3 f{(g0[0] * w_curve) * r_, (g0[1] * w_curve) * r_,
              (w_pole + g0[2] * w_curve) * r_};
    ChartFrame out;
    out.p = {f[0].value(), f[1].value(), f[2].value()};
    for (int j = 0; j < 2; ++j) {
        out.t[j] = {f[0].grad(j), f[1].grad(j), f[2].grad(j)};
        out.dN[j] = out.t[j] / r_;
    }
    out.N = out.p / r_;
    return out;
}

double minkowski_residual(const ConvexBody& body, const Patch& patch, const QuadratureGrid& grid) {
    std::vector<double> vals, areas;
    vals.reserve(grid.nodes.size());
    areas.reserve(grid.nodes.size());
    for (const auto& n : grid.nodes) {
        const FrameData f = patch.frame(n.u, n.v);
        const AnisoFrame af = aniso_frame(body, f);
        vals.push_back(n.weight * f.area_element * (af.phi + af.HK * dot(f.p, f.N)));
        areas.push_back(n.weight * f.area_element * af.phi);
    }
    return std::abs(pairwise_sum(vals)) / std::abs(pairwise_sum(areas));
}

}  // namespace wulff
