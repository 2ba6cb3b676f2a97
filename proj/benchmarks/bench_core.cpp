#include <benchmark/benchmark.h>

#include <memory>

#include "wulff/lab.hpp"
#include "wulff/variation.hpp"

using namespace wulff;

namespace {

std::shared_ptr<const ConvexBody> bench_body(const std::string& kind) {
    if (kind == "ball") return std::make_shared<ConvexBody>(ConvexBody::ball(3, 1.0));
    if (kind == "ellipsoid")
        return std::make_shared<ConvexBody>(ConvexBody::ellipsoid(3, {1.0, 1.0, 2.0}));
    if (kind == "lp")
        return std::make_shared<ConvexBody>(ConvexBody::lp_ball(3, 4.0, 1.0));
    return std::make_shared<ConvexBody>(ConvexBody::perturbed_ball(3, 0.1, 1.0));
}

Patch bench_patch(std::shared_ptr<const ConvexBody> body) {
    Domain dom;
    dom.rank = 2;
    dom.hi[0] = M_PI;
    dom.lo[1] = 0.0;
    dom.hi[1] = 2 * M_PI;
    dom.periodic[1] = true;
    return Patch(std::make_shared<WulffChart>(std::move(body)), dom, {});
}

void BM_SupportEval(benchmark::State& state, const std::string& kind) {
    const auto body = bench_body(kind);
    SplitMix64 rng(7);
    std::vector<Vec3> dirs;
    for (int i = 0; i < 256; ++i) {
        Vec3 w = rng.unit_vector(3);
        if (kind == "lp" && std::min({std::abs(w.x), std::abs(w.y), std::abs(w.z)}) < 5e-2)
            { --i; continue; }
        dirs.push_back(w);
    }
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(body->support_eval(dirs[i++ & 255]));
    }
}

void BM_AnisoFrame(benchmark::State& state) {
    const auto body = bench_body("perturbed");
    const Patch patch = bench_patch(bench_body("ellipsoid"));
    const FrameData f = patch.frame(1.1, 0.7);
    for (auto _ : state) benchmark::DoNotOptimize(aniso_frame(*body, f));
}

void BM_AnisoArea(benchmark::State& state) {
    const auto body = bench_body("perturbed");
    const Patch patch = bench_patch(bench_body("ellipsoid"));
    const auto grid = patch.build_grid(static_cast<int>(state.range(0)), 96);
    for (auto _ : state) benchmark::DoNotOptimize(aniso_area(*body, patch, grid));
}

void BM_DeformedFunctionals(benchmark::State& state) {
    const auto body = bench_body("ellipsoid");
    const Patch patch = bench_patch(body);
    const auto grid = patch.build_grid(48, 96);
    const GeometryCache geo = build_geometry(*body, patch, grid);
    const Variation2Jet jet = build_wulff_normal_variation(geo, nullptr);
    for (auto _ : state) {
        double a = 0, v = 0;
        deformed_functionals(geo, jet, 1e-3, a, v);
        benchmark::DoNotOptimize(a + v);
    }
}

void BM_VerifyScenario(benchmark::State& state) {
    const Scenario sc = load_scenario(WULFF_SCENARIO_DIR, "sphere-circular-cone-narrow");
    for (auto _ : state) benchmark::DoNotOptimize(run_verify(sc));
}

}  // namespace

BENCHMARK_CAPTURE(BM_SupportEval, ball, std::string("ball"));
BENCHMARK_CAPTURE(BM_SupportEval, ellipsoid, std::string("ellipsoid"));
BENCHMARK_CAPTURE(BM_SupportEval, lp, std::string("lp"));
BENCHMARK_CAPTURE(BM_SupportEval, perturbed, std::string("perturbed"));
BENCHMARK(BM_AnisoFrame);
BENCHMARK(BM_AnisoArea)->Arg(24)->Arg(48)->Arg(96);
BENCHMARK(BM_DeformedFunctionals);
BENCHMARK(BM_VerifyScenario)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
