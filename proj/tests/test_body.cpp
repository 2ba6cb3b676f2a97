#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "wulff/body.hpp"

using namespace wulff;

namespace {

// Independent support oracle: maximize <u, w> over a dense boundary sample.
// Resolution-limited, used to pin expected values before asserting the
// closed-form implementation against them.
struct SupportOracle {
    std::vector<Vec3> boundary;

    static SupportOracle for_ellipsoid(const std::vector<double>& axes, Vec3 offset = {}) {
        SupportOracle o;
        for (const Vec3& w : sphere_sample(3, 200000)) {
            o.boundary.push_back(Vec3{axes[0] * w.x, axes[1] * w.y, axes[2] * w.z} + offset);
        }
        return o;
    }

    double support(const Vec3& w) const {
        double best = -1e300;
        for (const Vec3& u : boundary) best = std::max(best, dot(u, w));
        return best;
    }
    Vec3 argmax(const Vec3& w) const {
        double best = -1e300;
        Vec3 arg;
        for (const Vec3& u : boundary) {
            const double v = dot(u, w);
            if (v > best) {
                best = v;
                arg = u;
            }
        }
        return arg;
    }
};

// Central-difference Hessian of the support function; independent of jets.
Mat3 fd_hessian(const ConvexBody& body, const Vec3& w, double h = 1e-4) {
    Mat3 H;
    for (int i = 0; i < body.dim(); ++i) {
        for (int j = 0; j < body.dim(); ++j) {
            Vec3 pp = w, pm = w, mp = w, mm = w;
            pp[i] += h; pp[j] += h;
            pm[i] += h; pm[j] -= h;
            mp[i] -= h; mp[j] += h;
            mm[i] -= h; mm[j] -= h;
            H.m[i][j] = (body.support(pp) - body.support(pm) - body.support(mp) + body.support(mm)) /
                        (4 * h * h);
        }
    }
    return H;
}

std::vector<ConvexBody> catalog3() {
    return {ConvexBody::ball(3, 1.0),
            ConvexBody::ellipsoid(3, {1.0, 1.0, 2.0}),
            ConvexBody::offset_ellipsoid(3, {1.2, 1.0, 0.8}, {0.2, 0.1, -0.1}),
            ConvexBody::lp_ball(3, 4.0, 1.0),
            ConvexBody::perturbed_ball(3, 0.1, 1.0)};
}

Vec3 guarded_direction(SplitMix64& rng, const ConvexBody& body) {
    for (;;) {
        const Vec3 w = rng.unit_vector(body.dim());
        if (body.kind() != BodyKind::LpBall) return w;
        double guard = std::min(std::abs(w.x), std::abs(w.y));
        if (body.dim() == 3) guard = std::min(guard, std::abs(w.z));
        if (guard > 5e-2) return w;
    }
}

}  // namespace

TEST_CASE("ball support is the radius on unit directions") {
    const ConvexBody b = ConvexBody::ball(3, 1.0);
    SplitMix64 rng(1);
    for (int i = 0; i < 100; ++i) {
        const Vec3 w = rng.unit_vector(3);
        CHECK(b.support(w) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(norm(b.projection(w) - w) < 1e-13);
    }
}

TEST_CASE("ellipsoid support against the brute-force oracle") {
    const ConvexBody b = ConvexBody::ellipsoid(3, {1.0, 1.0, 2.0});
    const auto oracle = SupportOracle::for_ellipsoid({1.0, 1.0, 2.0});
    // Oracle pins the frozen values: support 2 at e3, boundary point (0,0,2).
    CHECK(oracle.support({0, 0, 1}) == doctest::Approx(2.0).epsilon(1e-5));
    CHECK(norm(oracle.argmax({0, 0, 1}) - Vec3{0, 0, 2}) < 2e-2);
    CHECK(b.support({0, 0, 1}) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(norm(b.projection({0, 0, 1}) - Vec3{0, 0, 2}) < 1e-13);
    // A generic direction: implementation within oracle resolution.
    SplitMix64 rng(3);
    for (int i = 0; i < 5; ++i) {
        const Vec3 w = rng.unit_vector(3);
        CHECK(b.support(w) == doctest::Approx(oracle.support(w)).epsilon(2e-4));
    }
    // Boundary point with an axis normal.
    CHECK(norm(b.projection({1, 0, 0}) - Vec3{1, 0, 0}) < 1e-13);
}

TEST_CASE("offset ellipsoid shifts the boundary point") {
    const Vec3 c{0.2, 0.1, -0.1};
    const ConvexBody base = ConvexBody::ellipsoid(3, {1.2, 1.0, 0.8});
    const ConvexBody off = ConvexBody::offset_ellipsoid(3, {1.2, 1.0, 0.8}, c);
    SplitMix64 rng(5);
    for (int i = 0; i < 50; ++i) {
        const Vec3 w = rng.unit_vector(3);
        CHECK(off.support(w) == doctest::Approx(base.support(w) + dot(c, w)).epsilon(1e-13));
        CHECK(norm(off.projection(w) - (base.projection(w) + c)) < 1e-12);
    }
}

TEST_CASE("support identities on 1000 random directions per body") {
    SplitMix64 rng(2024);
    for (const ConvexBody& b : catalog3()) {
        CAPTURE(b.kind_name());
        double worst_id = 0, worst_kernel = 0, worst_hom = 0, worst_proj = 0;
        for (int i = 0; i < 1000; ++i) {
            const Vec3 w = guarded_direction(rng, b);
            const SupportEval ev = b.support_eval(w);
            worst_id = std::max(worst_id, std::abs(dot(ev.grad, w) - ev.h));
            worst_kernel = std::max(worst_kernel, norm(ev.hess.apply(w)));
            const double lam = rng.uniform(0.5, 3.0);
            worst_hom = std::max(worst_hom,
                                 std::abs(b.support(w * lam) - lam * ev.h) / std::abs(lam * ev.h));
            worst_proj = std::max(worst_proj, norm(b.projection(w * 3.0) - ev.grad));
        }
        CHECK(worst_id < 1e-10);
        CHECK(worst_kernel < 1e-10);
        CHECK(worst_hom < 1e-12);
        CHECK(worst_proj < 1e-10);
    }
}

TEST_CASE("strict convexity: distinct normals give distinct boundary points") {
    SplitMix64 rng(77);
    for (const ConvexBody& b : catalog3()) {
        for (int i = 0; i < 100; ++i) {
            const Vec3 w1 = guarded_direction(rng, b);
            const Vec3 w2 = guarded_direction(rng, b);
            if (norm(w1 - w2) < 1e-3) continue;
            CHECK(norm(b.projection(w1) - b.projection(w2)) > 1e-9);
        }
    }
}

TEST_CASE("projection differential: ball restricts to the identity on w-perp") {
    const ConvexBody b = ConvexBody::ball(3, 1.0);
    SplitMix64 rng(11);
    for (int i = 0; i < 20; ++i) {
        const Vec3 w = rng.unit_vector(3);
        const auto th = b.projection_differential(w);
        CHECK(th.restricted.m[0][0] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(th.restricted.m[1][1] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(th.restricted.m[0][1]) < 1e-12);
    }
}

TEST_CASE("projection differential of the (1,1,2) ellipsoid at the pole") {
    const ConvexBody b = ConvexBody::ellipsoid(3, {1.0, 1.0, 2.0});
    // FD oracle pins the restricted eigenvalues {1/2, 1/2} at w = e3.
    const Mat3 H = fd_hessian(b, {0, 0, 1});
    const auto eigs_fd = sym_eigenvalues2(H.m[0][0], H.m[0][1], H.m[1][1]);
    CHECK(eigs_fd[0] == doctest::Approx(0.5).epsilon(1e-5));
    CHECK(eigs_fd[1] == doctest::Approx(0.5).epsilon(1e-5));
    const auto th = b.projection_differential({0, 0, 1});
    const auto eigs = sym_eigenvalues2(th.restricted.m[0][0], th.restricted.m[0][1],
                                       th.restricted.m[1][1]);
    CHECK(eigs[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(eigs[1] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(b.projection_differential({0, 0, 2}), std::domain_error);
}

TEST_CASE("jet Hessian agrees with the FD Hessian on every body") {
    SplitMix64 rng(13);
    for (const ConvexBody& b : catalog3()) {
        CAPTURE(b.kind_name());
        for (int i = 0; i < 10; ++i) {
            const Vec3 w = guarded_direction(rng, b);
            const SupportEval ev = b.support_eval(w);
            const Mat3 H = fd_hessian(b, w);
            for (int r = 0; r < 3; ++r)
                for (int c = 0; c < 3; ++c)
                    CHECK(ev.hess.m[r][c] == doctest::Approx(H.m[r][c]).epsilon(5e-5).scale(1.0));
        }
    }
}

TEST_CASE("boundary point and normal invert each other") {
    for (const ConvexBody& b : catalog3()) {
        SplitMix64 rng(17);
        for (int i = 0; i < 50; ++i) {
            const Vec3 w = guarded_direction(rng, b);
            const auto [p, n] = b.boundary_point_and_normal(w);
            CHECK(norm(n - w) == 0.0);
            // The supporting hyperplane at p has normal w: h(w) = <p, w>.
            CHECK(std::abs(dot(p, w) - b.support(w)) < 1e-12);
        }
    }
}

TEST_CASE("construction rejections") {
    CHECK_THROWS_AS(ConvexBody::offset_ellipsoid(3, {1.0, 1.0, 1.0}, {1.5, 0, 0}),
                    ValidationError);  // origin outside
    CHECK_THROWS_AS(ConvexBody::perturbed_ball(3, 0.5, 1.0), ValidationError);
    // Under the amplitude cap but convexity fails for this harmonic.
    CHECK_THROWS_AS(ConvexBody::perturbed_ball(3, 0.15, 1.0), ValidationError);
    CHECK_THROWS_AS(ConvexBody::lp_ball(3, 1.0, 1.0), ValidationError);
    CHECK_THROWS_AS(ConvexBody::ellipsoid(3, {1.0, -1.0, 1.0}), ValidationError);
    CHECK_THROWS_AS(ConvexBody::ellipsoid(3, {1.0, 1.0}), ValidationError);
    CHECK_THROWS_AS(ConvexBody::ball(3, 0.0), ValidationError);
    CHECK_NOTHROW(ConvexBody::offset_ellipsoid(3, {1.0, 1.0, 1.0}, {0.4, 0.3, 0.0}));
    CHECK_THROWS_AS(ConvexBody::ball(3, 1.0).support({0, 0, 0}), std::domain_error);
}

TEST_CASE("planar bodies satisfy the same identities") {
    const std::vector<ConvexBody> bodies = {ConvexBody::ball(2, 1.0),
                                            ConvexBody::ellipsoid(2, {1.0, 1.5}),
                                            ConvexBody::perturbed_ball(2, 0.1, 1.0)};
    SplitMix64 rng(23);
    for (const ConvexBody& b : bodies) {
        CAPTURE(b.kind_name());
        for (int i = 0; i < 200; ++i) {
            const Vec3 w = rng.unit_vector(2);
            const SupportEval ev = b.support_eval(w);
            CHECK(std::abs(dot(ev.grad, w) - ev.h) < 1e-12);
            CHECK(norm(ev.hess.apply(w)) < 1e-12);
            CHECK(ev.grad.z == 0.0);
        }
    }
}

TEST_CASE("lp-ball support equals the brute-force dual norm") {
    // Oracle: maximize <u, w> over points of the l^p unit sphere obtained by
    // normalizing a dense direction sample in the l^p norm.
    for (double p : {1.5, 3.0, 4.0}) {
        const ConvexBody b = ConvexBody::lp_ball(3, p, 1.0);
        const double q = p / (p - 1.0);
        SplitMix64 rng(101);
        std::vector<Vec3> boundary;
        for (const Vec3& d : sphere_sample(3, 60000)) {
            const double lp = std::pow(std::pow(std::abs(d.x), p) + std::pow(std::abs(d.y), p) +
                                           std::pow(std::abs(d.z), p),
                                       1.0 / p);
            boundary.push_back(d / lp);
        }
        for (int i = 0; i < 10; ++i) {
            const Vec3 w = guarded_direction(rng, b);
            double oracle = -1e300;
            for (const Vec3& u : boundary) oracle = std::max(oracle, dot(u, w));
            const double dual = std::pow(std::pow(std::abs(w.x), q) + std::pow(std::abs(w.y), q) +
                                             std::pow(std::abs(w.z), q),
                                         1.0 / q);
            CHECK(b.support(w) == doctest::Approx(dual).epsilon(1e-13));
            CHECK(b.support(w) == doctest::Approx(oracle).epsilon(1e-3));
            CHECK(b.support(w) >= oracle - 1e-12);  // the sample never exceeds the true maximum
        }
    }
}

TEST_CASE("central symmetry flag matches h(-w) behavior") {
    SplitMix64 rng(29);
    for (const ConvexBody& b : catalog3()) {
        bool symmetric = true;
        for (int i = 0; i < 200; ++i) {
            const Vec3 w = guarded_direction(rng, b);
            if (std::abs(b.support(w) - b.support(-w)) > 1e-9 * std::abs(b.support(w)))
                symmetric = false;
        }
        CHECK(symmetric == b.centrally_symmetric());
    }
}
