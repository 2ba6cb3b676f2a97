#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "wulff/geom.hpp"
#include "wulff/jet.hpp"

using namespace wulff;

namespace {

// Analytic-derivative catalog used to validate the chain rule: each entry is
// (f evaluated via jets, f, f', f'') on a 1-seed jet.
struct CatalogEntry {
    const char* name;
    Jet2 (*jet_fn)(const Jet2&);
    double (*f)(double);
    double (*df)(double);
    double (*ddf)(double);
};

const CatalogEntry kCatalog[] = {
    {"square", [](const Jet2& x) { return x * x; }, [](double x) { return x * x; },
     [](double x) { return 2 * x; }, [](double) { return 2.0; }},
    {"cube-mixed", [](const Jet2& x) { return x * x * x - 2.0 * x + 1.0; },
     [](double x) { return x * x * x - 2 * x + 1; }, [](double x) { return 3 * x * x - 2; },
     [](double x) { return 6 * x; }},
    {"sqrt", [](const Jet2& x) { return sqrt(x); }, [](double x) { return std::sqrt(x); },
     [](double x) { return 0.5 / std::sqrt(x); },
     [](double x) { return -0.25 / (x * std::sqrt(x)); }},
    {"sin-cos", [](const Jet2& x) { return sin(x) * cos(x); },
     [](double x) { return std::sin(x) * std::cos(x); },
     [](double x) { return std::cos(2 * x); }, [](double x) { return -2 * std::sin(2 * x); }},
    {"pow-2.5", [](const Jet2& x) { return pow(x, 2.5); }, [](double x) { return std::pow(x, 2.5); },
     [](double x) { return 2.5 * std::pow(x, 1.5); },
     [](double x) { return 3.75 * std::pow(x, 0.5); }},
    {"rational", [](const Jet2& x) { return (x + 1.0) / (x * x + 1.0); },
     [](double x) { return (x + 1) / (x * x + 1); },
     [](double x) {
         const double d = x * x + 1;
         return (1 - 2 * x - x * x) / (d * d);
     },
     [](double x) {
         const double d = x * x + 1;
         return ((-2 - 2 * x) * d - 4 * x * (1 - 2 * x - x * x)) / (d * d * d);
     }},
};

}  // namespace

TEST_CASE("seeding produces basis gradients and zero Hessians") {
    auto jets = Jet2::seed(std::array<double, 2>{1.0, 2.0});
    CHECK(jets[0].value() == 1.0);
    CHECK(jets[0].grad(0) == 1.0);
    CHECK(jets[0].grad(1) == 0.0);
    CHECK(jets[1].value() == 2.0);
    CHECK(jets[1].grad(0) == 0.0);
    CHECK(jets[1].grad(1) == 1.0);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(jets[0].hess(i, j) == 0.0);

    auto single = Jet2::seed(std::array<double, 1>{2.0});
    CHECK(single[0].value() == 2.0);
    CHECK(single[0].grad(0) == 1.0);
    CHECK(single[0].hess(0, 0) == 0.0);

    CHECK_THROWS_AS(Jet2::seed(std::array<double, 0>{}), std::invalid_argument);
    CHECK_THROWS_AS(Jet2::seed(std::vector<double>(4, 0.0)), std::invalid_argument);
}

TEST_CASE("x^2 at a seed point") {
    auto x = Jet2::seed(std::array<double, 1>{3.0})[0];
    const Jet2 y = x * x;
    CHECK(y.value() == 9.0);
    CHECK(y.grad(0) == 6.0);
    CHECK(y.hess(0, 0) == 2.0);
}

TEST_CASE("sqrt at 4: value 2, grad 1/4, hess -1/32") {
    auto x = Jet2::seed(std::array<double, 1>{4.0})[0];
    const Jet2 y = sqrt(x);
    CHECK(y.value() == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(y.grad(0) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(y.hess(0, 0) == doctest::Approx(-1.0 / 32.0).epsilon(1e-15));
}

TEST_CASE("norm of (3,4) under two seeds") {
    auto s = Jet2::seed(std::array<double, 2>{3.0, 4.0});
    JetVec3 v{s[0], s[1], Jet2(0.0, 2)};
    const Jet2 n = jnorm(v, 2);
    CHECK(n.value() == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(n.grad(0) == doctest::Approx(0.6).epsilon(1e-14));
    CHECK(n.grad(1) == doctest::Approx(0.8).epsilon(1e-14));
}

TEST_CASE("dot of constant orthogonal vectors has zero derivatives") {
    JetVec3 a{Jet2(1.0, 2), Jet2(0.0, 2), Jet2(0.0, 2)};
    JetVec3 b{Jet2(0.0, 2), Jet2(1.0, 2), Jet2(0.0, 2)};
    const Jet2 d = jdot(a, b, 3);
    CHECK(d.value() == 0.0);
    CHECK(d.grad(0) == 0.0);
    CHECK(d.grad(1) == 0.0);
}

TEST_CASE("catalog functions match hand derivatives to 1e-12 relative") {
    const double points[] = {0.3, 0.7, 1.1, 1.9, 2.7};
    for (const auto& entry : kCatalog) {
        for (double x0 : points) {
            CAPTURE(entry.name);
            CAPTURE(x0);
            auto x = Jet2::seed(std::array<double, 1>{x0})[0];
            const Jet2 y = entry.jet_fn(x);
            const double scale_f = std::max(1.0, std::abs(entry.f(x0)));
            const double scale_d = std::max(1.0, std::abs(entry.df(x0)));
            const double scale_dd = std::max(1.0, std::abs(entry.ddf(x0)));
            CHECK(std::abs(y.value() - entry.f(x0)) / scale_f < 1e-12);
            CHECK(std::abs(y.grad(0) - entry.df(x0)) / scale_d < 1e-12);
            CHECK(std::abs(y.hess(0, 0) - entry.ddf(x0)) / scale_dd < 1e-12);
        }
    }
}

TEST_CASE("atan2 derivatives against the closed form") {
    SplitMix64 rng(42);
    for (int i = 0; i < 50; ++i) {
        const double xv = rng.uniform(-2, 2), yv = rng.uniform(-2, 2);
        if (xv * xv + yv * yv < 0.1) continue;
        auto s = Jet2::seed(std::array<double, 2>{yv, xv});
        const Jet2 a = atan2(s[0], s[1]);
        const double r2 = xv * xv + yv * yv;
        CHECK(a.value() == doctest::Approx(std::atan2(yv, xv)).epsilon(1e-14));
        CHECK(a.grad(0) == doctest::Approx(xv / r2).epsilon(1e-12));
        CHECK(a.grad(1) == doctest::Approx(-yv / r2).epsilon(1e-12));
        // d^2/dy^2 and the mixed partial
        CHECK(a.hess(0, 0) == doctest::Approx(-2 * xv * yv / (r2 * r2)).epsilon(1e-11));
        CHECK(a.hess(0, 1) == doctest::Approx((yv * yv - xv * xv) / (r2 * r2)).epsilon(1e-11));
    }
}

TEST_CASE("Hessian symmetry is exact for random expression trees") {
    SplitMix64 rng(7);
    for (int rep = 0; rep < 200; ++rep) {
        auto s = Jet2::seed(std::array<double, 3>{rng.uniform(0.2, 2), rng.uniform(0.2, 2),
                                                  rng.uniform(0.2, 2)});
        const Jet2 e = sin(s[0] * s[1]) * sqrt(s[2] + 1.0) + (s[0] / (s[2] + 3.0)) * cos(s[1]) +
                       pow(s[0] + s[1] * s[2], 1.7);
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j) CHECK(e.hess(i, j) == e.hess(j, i));
    }
}

TEST_CASE("second derivatives of a 2-variable composite match analytics") {
    // f(u,v) = sin(u) cos(v) + u^2 v
    auto s = Jet2::seed(std::array<double, 2>{0.7, 1.3});
    const Jet2 f = sin(s[0]) * cos(s[1]) + s[0] * s[0] * s[1];
    const double u = 0.7, v = 1.3;
    CHECK(f.value() == doctest::Approx(std::sin(u) * std::cos(v) + u * u * v).epsilon(1e-14));
    CHECK(f.grad(0) == doctest::Approx(std::cos(u) * std::cos(v) + 2 * u * v).epsilon(1e-13));
    CHECK(f.grad(1) == doctest::Approx(-std::sin(u) * std::sin(v) + u * u).epsilon(1e-13));
    CHECK(f.hess(0, 0) == doctest::Approx(-std::sin(u) * std::cos(v) + 2 * v).epsilon(1e-13));
    CHECK(f.hess(0, 1) == doctest::Approx(-std::cos(u) * std::sin(v) + 2 * u).epsilon(1e-13));
    CHECK(f.hess(1, 1) == doctest::Approx(-std::sin(u) * std::cos(v)).epsilon(1e-13));
}

TEST_CASE("identical expression trees evaluate bit-identically") {
    auto build = [] {
        auto s = Jet2::seed(std::array<double, 3>{0.9, 1.7, 0.4});
        return sin(s[0] * s[1]) / sqrt(s[2] + 2.0) + pow(s[0], 1.5) * cos(s[2]);
    };
    const Jet2 a = build();
    const Jet2 b = build();
    CHECK(a.value() == b.value());
    for (int i = 0; i < 3; ++i) {
        CHECK(a.grad(i) == b.grad(i));
        for (int j = 0; j < 3; ++j) CHECK(a.hess(i, j) == b.hess(i, j));
    }
}

TEST_CASE("domain guards") {
    auto x = Jet2::seed(std::array<double, 1>{0.0})[0];
    CHECK_THROWS_AS(sqrt(x), std::domain_error);                    // sqrt at 0 while seeded
    CHECK_THROWS_AS(sqrt(x - 1.0), std::domain_error);              // negative radicand
    CHECK_THROWS_AS(x / Jet2(0.0, 1), std::domain_error);           // division by zero
    CHECK_THROWS_AS(pow(x, 0.5), std::domain_error);                // pow at 0
    JetVec3 zero{x, Jet2(0.0, 1), Jet2(0.0, 1)};
    CHECK_THROWS_AS(jnorm(zero, 3), std::domain_error);             // |w| at w = 0
    CHECK_THROWS_AS(atan2(Jet2(0.0, 1), Jet2(0.0, 1)), std::domain_error);
    auto a = Jet2::seed(std::array<double, 1>{1.0})[0];
    auto b = Jet2::seed(std::array<double, 2>{1.0, 2.0})[0];
    CHECK_THROWS_AS(a + b, std::invalid_argument);                  // mixed seed counts
}
