#include "wulff/aniso.hpp"

#include <algorithm>
#include <cmath>

namespace wulff {

namespace {

// Chart coefficients of the tangential projection of an ambient vector.
std::array<double, 2> tangential_coords(const FrameData& f, const Vec3& w) {
    double rhs[2];
    for (int i = 0; i < f.rank; ++i) rhs[i] = dot(f.t[i], w);
    std::array<double, 2> a{};
    for (int i = 0; i < f.rank; ++i)
        for (int j = 0; j < f.rank; ++j) a[i] += f.inv_metric.m[i][j] * rhs[j];
    return a;
}

}  // namespace

AnisoFrame aniso_frame(const ConvexBody& body, const FrameData& f) {
    AnisoFrame af;
    const SupportEval ev = body.support_eval(f.N);
    af.N_K = ev.grad;
    af.phi = ev.h;
    af.hess = ev.hess;
    MatN M;  // -<t_i, dN_j>, the second fundamental form
    M.n = f.rank;
    MatN MK;  // -<t_i, hess dN_j>
    MK.n = f.rank;
    for (int j = 0; j < f.rank; ++j) {
        af.dN_K[j] = ev.hess.apply(f.dN[j]);
        for (int i = 0; i < f.rank; ++i) {
            M.m[i][j] = -dot(f.t[i], f.dN[j]);
            MK.m[i][j] = -dot(f.t[i], af.dN_K[j]);
        }
    }
    af.B_chart = f.inv_metric.mul(M);
    af.BK_chart = f.inv_metric.mul(MK);
    af.HK = af.BK_chart.trace() / f.rank;
    af.trBK2 = af.BK_chart.mul(af.BK_chart).trace();
    af.defect = af.trBK2 - f.rank * af.HK * af.HK;
    return af;
}

MatN aniso_shape_orthonormal(const FrameData& f, const AnisoFrame& af) {
    // T maps chart coefficients to coefficients in the Gram-Schmidt basis.
    MatN T;
    T.n = f.rank;
    const double n0 = norm(f.t[0]);
    T.m[0][0] = n0;
    if (f.rank == 2) {
        const Vec3 e0 = f.t[0] / n0;
        const Vec3 r = f.t[1] - e0 * dot(f.t[1], e0);
        T.m[0][1] = dot(f.t[1], e0);
        T.m[1][1] = norm(r);
    }
    return T.mul(af.BK_chart).mul(T.inverse());
}

Vec3 aniso_conormal(const ConvexBody& body, const BoundaryFrame& bf) {
    const SupportEval ev = body.support_eval(bf.frame.N);
    return bf.nu * ev.h - bf.frame.N * dot(ev.grad, bf.nu);
}

double aniso_area(const ConvexBody& body, const Patch& patch, const QuadratureGrid& grid) {
    std::vector<double> vals;
    vals.reserve(grid.nodes.size());
    for (const auto& n : grid.nodes) {
        const FrameData f = patch.frame(n.u, n.v);
        vals.push_back(n.weight * f.area_element * body.support(f.N));
    }
    return pairwise_sum(vals);
}

double grad_phi_residual(const ConvexBody& body, const FrameData& f, const AnisoFrame& af) {
    (void)body;
    // Chart partials of phi = h(N): phi_j = <N_K, dN_j>.
    double phi_j[2];
    for (int j = 0; j < f.rank; ++j) phi_j[j] = dot(af.N_K, f.dN[j]);
    Vec3 grad_phi{};
    for (int i = 0; i < f.rank; ++i) {
        double coef = 0;
        for (int j = 0; j < f.rank; ++j) coef += f.inv_metric.m[i][j] * phi_j[j];
        grad_phi += f.t[i] * coef;
    }
    // B applied to the tangential part of N_K; B(t_j) = -dN_j.
    const auto a = tangential_coords(f, af.N_K);
    Vec3 b_nk{};
    for (int j = 0; j < f.rank; ++j) b_nk -= f.dN[j] * a[j];
    return norm(grad_phi + b_nk);
}

double mean_curvature_from_divergence(const FrameData& f, const AnisoFrame& af) {
    double div = 0;
    for (int i = 0; i < f.rank; ++i)
        for (int j = 0; j < f.rank; ++j) div += f.inv_metric.m[i][j] * dot(af.dN_K[j], f.t[i]);
    return -div / f.rank;
}

UmbilicityDefect umbilicity_defect(const ConvexBody& body, const Patch& patch,
                                   const QuadratureGrid& grid) {
    UmbilicityDefect out;
    out.min = std::numeric_limits<double>::infinity();
    std::vector<double> vals;
    vals.reserve(grid.nodes.size());
    for (const auto& n : grid.nodes) {
        const FrameData f = patch.frame(n.u, n.v);
        const AnisoFrame af = aniso_frame(body, f);
        out.sup = std::max(out.sup, af.defect);
        out.min = std::min(out.min, af.defect);
        vals.push_back(n.weight * f.area_element * af.defect * af.phi);
    }
    out.integral = pairwise_sum(vals);
    return out;
}

UmbilicalVerdict classify_umbilical(const ConvexBody& body, const Patch& patch,
                                    const QuadratureGrid& grid, double tol) {
    UmbilicalVerdict v;
    double hk_min = std::numeric_limits<double>::infinity();
    double hk_max = -hk_min;
    double sup_defect = 0;
    std::vector<Vec3> positions, normals_k;
    std::vector<double> hks;
    positions.reserve(grid.nodes.size());
    for (const auto& n : grid.nodes) {
        const FrameData f = patch.frame(n.u, n.v);
        const AnisoFrame af = aniso_frame(body, f);
        hk_min = std::min(hk_min, af.HK);
        hk_max = std::max(hk_max, af.HK);
        sup_defect = std::max(sup_defect, af.defect);
        positions.push_back(f.p);
        normals_k.push_back(af.N_K);
        hks.push_back(af.HK);
    }
    v.sup_defect = sup_defect;
    v.hk_spread = hk_max - hk_min;
    if (!(sup_defect < tol) || !(v.hk_spread < tol)) {
        v.kind = UmbilicalVerdict::Kind::NotUmbilical;
        return v;
    }
    const double hk = 0.5 * (hk_min + hk_max);
    if (std::abs(hk) < tol) {
        v.kind = UmbilicalVerdict::Kind::Plane;
        // Residual: spread of the (constant) anisotropic normal.
        Vec3 mean{};
        for (const Vec3& nk : normals_k) mean += nk;
        mean = mean / static_cast<double>(normals_k.size());
        for (const Vec3& nk : normals_k) v.residual = std::max(v.residual, norm(nk - mean));
        return v;
    }
    // First integral c = H_K p + N_K is constant on a dilated translate.
    Vec3 mean_c{};
    std::vector<Vec3> cs;
    cs.reserve(positions.size());
    for (std::size_t i = 0; i < positions.size(); ++i) {
        const Vec3 c = positions[i] * hks[i] + normals_k[i];
        cs.push_back(c);
        mean_c += c;
    }
    mean_c = mean_c / static_cast<double>(cs.size());
    for (const Vec3& c : cs) v.residual = std::max(v.residual, norm(c - mean_c));
    v.kind = UmbilicalVerdict::Kind::Wulff;
    v.center = mean_c / hk;
    v.lambda = -1.0 / hk;
    return v;
}

}  // namespace wulff
