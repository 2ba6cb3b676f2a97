#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>

#include "wulff/aniso.hpp"
#include "wulff/body.hpp"
#include "wulff/patch.hpp"

using namespace wulff;

namespace {

Patch wulff_patch(std::shared_ptr<const ConvexBody> body, double polar_max = M_PI,
                  bool with_boundary = false, bool flip = false) {
    Domain dom;
    dom.rank = 2;
    dom.lo[0] = 0.0;
    dom.hi[0] = polar_max;
    dom.lo[1] = 0.0;
    dom.hi[1] = 2 * M_PI;
    dom.periodic[1] = true;
    std::vector<Edge> edges;
    if (with_boundary) edges.push_back(Edge{0, 1});
    return Patch(std::make_shared<WulffChart>(std::move(body)), dom, edges, flip);
}

Patch sphere_patch(double radius, double polar_max = M_PI) {
    Domain dom;
    dom.rank = 2;
    dom.hi[0] = polar_max;
    dom.lo[1] = 0.0;
    dom.hi[1] = 2 * M_PI;
    dom.periodic[1] = true;
    return Patch(std::make_shared<SphereChart>(Vec3{}, radius), dom, {});
}

Patch plane_patch() {
    Domain dom;
    dom.rank = 2;
    dom.lo[0] = -1.0;
    dom.hi[0] = 1.0;
    dom.lo[1] = -1.0;
    dom.hi[1] = 1.0;
    return Patch(std::make_shared<GraphChart>(std::make_shared<PolyTrigFn>()), dom,
                 {Edge{0, 0}, Edge{0, 1}, Edge{1, 0}, Edge{1, 1}});
}

Patch wavy_graph_patch() {
    auto fn = std::make_shared<PolyTrigFn>();
    fn->amp = 0.25;
    fn->kx = 1.4;
    fn->ky = 0.9;
    fn->axx = 0.15;
    fn->ayy = -0.1;
    Domain dom;
    dom.rank = 2;
    dom.lo[0] = -1.0;
    dom.hi[0] = 1.0;
    dom.lo[1] = -1.0;
    dom.hi[1] = 1.0;
    return Patch(std::make_shared<GraphChart>(fn), dom, {});
}

std::vector<std::shared_ptr<const ConvexBody>> bodies3() {
    return {std::make_shared<ConvexBody>(ConvexBody::ball(3, 1.0)),
            std::make_shared<ConvexBody>(ConvexBody::ellipsoid(3, {1.0, 1.0, 2.0})),
            std::make_shared<ConvexBody>(
                ConvexBody::offset_ellipsoid(3, {1.2, 1.0, 0.8}, {0.2, 0.1, -0.1})),
            std::make_shared<ConvexBody>(ConvexBody::lp_ball(3, 4.0, 1.0)),
            std::make_shared<ConvexBody>(ConvexBody::perturbed_ball(3, 0.1, 1.0))};
}

}  // namespace

TEST_CASE("boundary of the body: N_K(p) = p, B_K = -Id, H_K = -1 for every body") {
    for (const auto& body : bodies3()) {
        CAPTURE(body->kind_name());
        const Patch patch = wulff_patch(body);
        const auto grid = patch.build_grid(24, 48);
        double worst_nk = 0, worst_bk = 0, worst_hk = 0, worst_defect = 0;
        for (const auto& n : grid.nodes) {
            const FrameData f = patch.frame(n.u, n.v);
            const AnisoFrame af = aniso_frame(*body, f);
            worst_nk = std::max(worst_nk, norm(af.N_K - f.p));
            worst_hk = std::max(worst_hk, std::abs(af.HK + 1.0));
            const MatN bko = aniso_shape_orthonormal(f, af);
            worst_bk = std::max(worst_bk, bko.plus(MatN::identity(2)).frobenius());
            worst_defect = std::max(worst_defect, std::abs(af.defect));
        }
        CHECK(worst_nk < 1e-8);
        CHECK(worst_hk < 1e-8);
        CHECK(worst_bk < 1e-8);
        CHECK(worst_defect < 1e-9);
    }
}

TEST_CASE("plane: B_K = 0 and H_K = 0 for any body") {
    const auto body = std::make_shared<ConvexBody>(ConvexBody::ellipsoid(3, {1.0, 1.0, 2.0}));
    const Patch plane = plane_patch();
    const FrameData f = plane.frame(0.37, -0.21);
    const AnisoFrame af = aniso_frame(*body, f);
    CHECK(af.BK_chart.frobenius() < 1e-13);
    CHECK(std::abs(af.HK) < 1e-13);
    CHECK(std::abs(af.defect) < 1e-13);
}

TEST_CASE("round body reduces to the classical frame") {
    const auto ball = std::make_shared<ConvexBody>(ConvexBody::ball(3, 1.0));
    const Patch sphere = sphere_patch(2.0);
    const FrameData f = sphere.frame(1.2, 0.8);
    const AnisoFrame af = aniso_frame(*ball, f);
    CHECK(norm(af.N_K - f.N) < 1e-13);
    CHECK(af.phi == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(af.HK == doctest::Approx(-0.5).epsilon(1e-12));  // sphere of radius 2
    const MatN b = sphere.shape_operator(f);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            CHECK(af.BK_chart.m[i][j] == doctest::Approx(b.m[i][j]).epsilon(1e-11).scale(1.0));
}

TEST_CASE("support weight identity <N_K, N> = phi") {
    SplitMix64 rng(5);
    for (const auto& body : bodies3()) {
        const Patch patch = wavy_graph_patch();
        for (int i = 0; i < 40; ++i) {
            const FrameData f = patch.frame(rng.uniform(-0.9, 0.9), rng.uniform(-0.9, 0.9));
            if (body->kind() == BodyKind::LpBall) {
                double guard = std::min({std::abs(f.N.x), std::abs(f.N.y), std::abs(f.N.z)});
                if (guard < 5e-2) continue;
            }
            const AnisoFrame af = aniso_frame(*body, f);
            CHECK(std::abs(dot(af.N_K, f.N) - af.phi) < 1e-10);
            CHECK(af.phi > 0.0);
        }
    }
}

TEST_CASE("anisotropic conormal") {
    const auto ball = std::make_shared<ConvexBody>(ConvexBody::ball(3, 1.0));
    const auto ell = std::make_shared<ConvexBody>(ConvexBody::ellipsoid(3, {1.0, 1.0, 2.0}));
    const Patch cap = wulff_patch(ell, 1.1, true);
    const auto grid = cap.build_grid(16, 32);
    for (const auto& bn : grid.boundary) {
        const BoundaryFrame bf = cap.boundary_frame(bn.edge, bn.s);
        // Round body: conormal reduces to the inner conormal.
        const Vec3 nuk_ball = aniso_conormal(*ball, bf);
        CHECK(norm(nuk_ball - bf.nu) < 1e-12);
        // Any body: <N_K, nu_K> = 0 and nu_K is normal to the boundary edge.
        const Vec3 nuk = aniso_conormal(*ell, bf);
        const AnisoFrame af = aniso_frame(*ell, bf.frame);
        CHECK(std::abs(dot(af.N_K, nuk)) < 1e-12);
        CHECK(std::abs(dot(nuk, bf.edge_tangent)) < 1e-12);
    }
}

TEST_CASE("anisotropic area: round body gives Euclidean area") {
    const auto ball = std::make_shared<ConvexBody>(ConvexBody::ball(3, 1.0));
    const Patch wavy = wavy_graph_patch();
    const auto grid = wavy.build_grid(32, 64);
    CHECK(aniso_area(*ball, wavy, grid) == doctest::Approx(area(wavy, grid)).epsilon(1e-13));
}

TEST_CASE("anisotropic area of the body boundary is (n+1) |K|") {
    // Divergence identity: integral of <p, N> over the boundary equals
    // (n+1) |K|; with the outer normal the weight phi equals <p, N> there.
    const auto ell = std::make_shared<ConvexBody>(ConvexBody::ellipsoid(3, {1.0, 1.0, 2.0}));
    const Patch patch = wulff_patch(ell);
    const auto grid = patch.build_grid(48, 96);
    CHECK(aniso_area(*ell, patch, grid) == doctest::Approx(8 * M_PI).epsilon(1e-10));
}

TEST_CASE("anisotropic area dilation law") {
    const auto pert = std::make_shared<ConvexBody>(ConvexBody::perturbed_ball(3, 0.1, 1.0));
    const Patch patch = wulff_patch(pert);
    const auto grid = patch.build_grid(24, 48);
    const double base = aniso_area(*pert, patch, grid);
    SplitMix64 rng(9);
    for (int i = 0; i < 5; ++i) {
        const double lam = rng.uniform(0.5, 2.0);
        const double scaled = aniso_area(*pert, patch.transformed(lam, {}), grid);
        CHECK(scaled == doctest::Approx(lam * lam * base).epsilon(1e-10));
    }
}

TEST_CASE("support-weight gradient identity") {
    const auto ball = std::make_shared<ConvexBody>(ConvexBody::ball(3, 1.0));
    const Patch sphere = sphere_patch(1.0);
    const FrameData sf = sphere.frame(1.0, 0.4);
    CHECK(grad_phi_residual(*ball, sf, aniso_frame(*ball, sf)) < 1e-13);

    for (const auto& body : bodies3()) {
        if (body->kind() == BodyKind::LpBall) continue;  // graph normals cross hyperplanes
        CAPTURE(body->kind_name());
        const Patch wulff = wulff_patch(body);
        const auto grid = wulff.build_grid(16, 32);
        double worst = 0;
        for (const auto& n : grid.nodes) {
            const FrameData f = wulff.frame(n.u, n.v);
            worst = std::max(worst, grad_phi_residual(*body, f, aniso_frame(*body, f)));
        }
        CHECK(worst < 1e-8);

        const Patch wavy = wavy_graph_patch();
        const auto wgrid = wavy.build_grid(16, 32);
        worst = 0;
        for (const auto& n : wgrid.nodes) {
            const FrameData f = wavy.frame(n.u, n.v);
            worst = std::max(worst, grad_phi_residual(*body, f, aniso_frame(*body, f)));
        }
        CHECK(worst < 1e-8);
    }
}

TEST_CASE("mean curvature from the divergence route matches the trace route") {
    for (const auto& body : bodies3()) {
        CAPTURE(body->kind_name());
        const Patch wulff = wulff_patch(body);
        const auto grid = wulff.build_grid(12, 24);
        for (int i = 0; i < 20; ++i) {
            const auto& n = grid.nodes[static_cast<std::size_t>(i * 7)];
            const FrameData f = wulff.frame(n.u, n.v);
            const AnisoFrame af = aniso_frame(*body, f);
            CHECK(std::abs(mean_curvature_from_divergence(f, af) - af.HK) < 1e-8);
        }
    }
}

TEST_CASE("umbilicity defect: zero on body boundaries, positive on the control") {
    const auto ball = std::make_shared<ConvexBody>(ConvexBody::ball(3, 1.0));
    const auto ell = std::make_shared<ConvexBody>(ConvexBody::ellipsoid(3, {1.0, 1.0, 2.0}));

    const Patch wulff = wulff_patch(ell);
    const auto grid = wulff.build_grid(24, 48);
    const UmbilicityDefect own = umbilicity_defect(*ell, wulff, grid);
    CHECK(own.sup < 1e-9);
    CHECK(own.min > -1e-9);
    CHECK(std::abs(own.integral) < 1e-9);

    // Ellipsoid surface measured with the round body: genuinely non-umbilic.
    const UmbilicityDefect control = umbilicity_defect(*ball, wulff, grid);
    CHECK(control.sup > 1e-3);
    CHECK(control.min > -1e-9);
    CHECK(control.integral > 1e-3);
}

TEST_CASE("umbilical classification") {
    const auto ell = std::make_shared<ConvexBody>(ConvexBody::ellipsoid(3, {1.0, 1.0, 2.0}));
    const auto ball = std::make_shared<ConvexBody>(ConvexBody::ball(3, 1.0));

    const Patch own = wulff_patch(ell);
    const auto grid = own.build_grid(24, 48);
    const UmbilicalVerdict v1 = classify_umbilical(*ell, own, grid);
    CHECK(v1.kind == UmbilicalVerdict::Kind::Wulff);
    CHECK(norm(v1.center) < 1e-8);
    CHECK(v1.lambda == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(v1.residual < 1e-8);

    // Translate and shrink, then recover the transform.
    const Vec3 c0{0.3, -0.1, 0.2};
    const Patch moved = own.transformed(0.7, c0);
    const UmbilicalVerdict v2 = classify_umbilical(*ell, moved, grid);
    CHECK(v2.kind == UmbilicalVerdict::Kind::Wulff);
    CHECK(norm(v2.center - c0) < 1e-6);
    CHECK(v2.lambda == doctest::Approx(0.7).epsilon(1e-6));

    const UmbilicalVerdict v3 = classify_umbilical(*ell, plane_patch(), grid);
    CHECK(v3.kind == UmbilicalVerdict::Kind::Plane);

    const UmbilicalVerdict v4 = classify_umbilical(*ball, own, grid);
    CHECK(v4.kind == UmbilicalVerdict::Kind::NotUmbilical);
}

TEST_CASE("orientation sensitivity of the anisotropic area") {
    // Non-symmetric body: flipping the normal changes the area integrand.
    const auto pert = std::make_shared<ConvexBody>(ConvexBody::perturbed_ball(3, 0.1, 1.0));
    const Patch outer = wulff_patch(pert);
    const auto grid = outer.build_grid(24, 48);
    const double a_outer = aniso_area(*pert, outer, grid);
    const double a_inner = aniso_area(*pert, outer.flipped(), grid);
    CHECK(std::abs(a_outer - a_inner) > 1e-3);

    // Centrally symmetric body: the area ignores the orientation.
    const auto ell = std::make_shared<ConvexBody>(ConvexBody::ellipsoid(3, {1.0, 1.0, 2.0}));
    const Patch eo = wulff_patch(ell);
    CHECK(aniso_area(*ell, eo, grid) ==
          doctest::Approx(aniso_area(*ell, eo.flipped(), grid)).epsilon(1e-12));
}

TEST_CASE("planar anisotropic frame: body boundary curve") {
    const auto ell2 = std::make_shared<ConvexBody>(ConvexBody::ellipsoid(2, {1.0, 1.5}));
    Domain dom;
    dom.rank = 1;
    dom.lo[0] = 0.0;
    dom.hi[0] = 2 * M_PI;
    dom.periodic[0] = true;
    const Patch curve(std::make_shared<Wulff2DChart>(ell2), dom, {});
    const auto grid = curve.build_grid(48, 2);
    for (int i = 0; i < 10; ++i) {
        const auto& n = grid.nodes[static_cast<std::size_t>(i * 4)];
        const FrameData f = curve.frame(n.u, n.v);
        const AnisoFrame af = aniso_frame(*ell2, f);
        CHECK(norm(af.N_K - f.p) < 1e-10);
        CHECK(af.HK == doctest::Approx(-1.0).epsilon(1e-10));
        CHECK(std::abs(af.defect) < 1e-12);  // rank 1 is always umbilic
    }
    // A_K of the full boundary curve = 2 |K| = 2 * pi * a * b.
    CHECK(aniso_area(*ell2, curve, grid) == doctest::Approx(2 * M_PI * 1.5).epsilon(1e-10));
}
