#include "wulff/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace wulff {

namespace {

using nlohmann::json;

Vec3 vec_from(const json& j, int dim) {
    if (!j.is_array() || static_cast<int>(j.size()) < dim)
        throw ValidationError("scenario: expected a coordinate array");
    Vec3 v;
    for (int i = 0; i < static_cast<int>(j.size()) && i < 3; ++i) v[i] = j[static_cast<std::size_t>(i)].get<double>();
    return v;
}

std::shared_ptr<const ConvexBody> body_from(const json& j, int dim, const Overrides& ov) {
    const std::string kind = j.at("kind").get<std::string>();
    const json params = j.value("params", json::object());
    if (kind == "ball") return std::make_shared<ConvexBody>(ConvexBody::ball(dim, params.value("radius", 1.0)));
    if (kind == "ellipsoid")
        return std::make_shared<ConvexBody>(
            ConvexBody::ellipsoid(dim, params.at("semi_axes").get<std::vector<double>>()));
    if (kind == "offset-ellipsoid")
        return std::make_shared<ConvexBody>(ConvexBody::offset_ellipsoid(
            dim, params.at("semi_axes").get<std::vector<double>>(), vec_from(params.at("offset"), dim)));
    if (kind == "lp-ball")
        return std::make_shared<ConvexBody>(
            ConvexBody::lp_ball(dim, params.value("p", 4.0), params.value("radius", 1.0)));
    if (kind == "perturbed-ball") {
        double eps = params.value("epsilon", 0.1);
        if (ov.amplitude) eps = *ov.amplitude;
        return std::make_shared<ConvexBody>(
            ConvexBody::perturbed_ball(dim, eps, params.value("radius", 1.0)));
    }
    throw ValidationError("scenario: unknown body kind '" + kind + "'");
}

std::shared_ptr<const SolidCone> cone_from(const json& j, const Overrides& ov) {
    const std::string kind = j.at("kind").get<std::string>();
    const json params = j.value("params", json::object());
    if (kind == "none") return nullptr;
    if (kind == "half-space") return std::make_shared<SolidCone>(SolidCone::half_space());
    if (kind == "circular")
        return std::make_shared<SolidCone>(SolidCone::circular(params.at("half_angle").get<double>()));
    if (kind == "perturbed") {
        double amp = params.value("amplitude", 0.1);
        if (ov.amplitude) amp = *ov.amplitude;
        return std::make_shared<SolidCone>(SolidCone::perturbed(
            params.at("alpha0").get<double>(), amp, params.value("frequency", 3)));
    }
    if (kind == "planar-wedge")
        return std::make_shared<SolidCone>(
            SolidCone::planar_wedge(params.at("angle0").get<double>(), params.at("angle1").get<double>()));
    throw ValidationError("scenario: unknown cone kind '" + kind + "'");
}

Edge edge_from_name(const std::string& name) {
    if (name == "u0" || name == "s0") return Edge{0, 0};
    if (name == "u1" || name == "s1") return Edge{0, 1};
    if (name == "v0") return Edge{1, 0};
    if (name == "v1") return Edge{1, 1};
    throw ValidationError("scenario: unknown edge name '" + name + "'");
}

std::vector<Edge> edges_from(const json& j) {
    std::vector<Edge> edges;
    for (const auto& e : j) edges.push_back(edge_from_name(e.get<std::string>()));
    return edges;
}

std::shared_ptr<const Patch> surface_from(const json& j, int dim, const Overrides& ov,
                                          const std::shared_ptr<const SolidCone>& cone) {
    const std::string kind = j.at("kind").get<std::string>();
    const json params = j.value("params", json::object());
    const bool flip = j.value("orientation", std::string("outer")) == "inner";
    const std::vector<Edge> boundary =
        j.contains("boundary") ? edges_from(j.at("boundary")) : std::vector<Edge>{};

    if (kind == "sphere") {
        if (dim != 3) throw ValidationError("sphere surface needs ambient dimension 3");
        const Vec3 center = params.contains("center") ? vec_from(params.at("center"), 3) : Vec3{};
        const double radius = params.value("radius", 1.0);
        Domain dom;
        dom.rank = 2;
        dom.lo[0] = params.value("polar_min", 0.0);
        dom.hi[0] = params.value("polar_max", M_PI);
        dom.lo[1] = 0.0;
        dom.hi[1] = 2.0 * M_PI;
        dom.periodic[1] = true;
        auto chart = std::make_shared<SphereChart>(center, radius);
        return std::make_shared<Patch>(chart, dom, boundary, flip);
    }
    if (kind == "wulff" || kind == "wulff2d") {
        auto surface_body = body_from(params.at("body"), dim, ov);
        Domain dom;
        std::shared_ptr<const Chart> chart;
        if (kind == "wulff") {
            if (dim != 3) throw ValidationError("wulff surface needs ambient dimension 3");
            dom.rank = 2;
            dom.lo[0] = params.value("polar_min", 0.0);
            double polar_max = params.value("polar_max", M_PI);
            if (params.value("polar_max_auto_cone", false)) {
                // Axisymmetric body truncated by a circular cone: the normal
                // directions that land on the wall form a coordinate circle.
                if (!cone || cone->kind() != ConeKind::Circular)
                    throw ValidationError("polar_max_auto_cone needs a circular cone");
                if (surface_body->kind() != BodyKind::Ellipsoid)
                    throw ValidationError("polar_max_auto_cone needs an axisymmetric ellipsoid");
                const auto axes = params.at("body").at("params").at("semi_axes").get<std::vector<double>>();
                if (std::abs(axes[0] - axes[1]) > 0)
                    throw ValidationError("polar_max_auto_cone needs equal equatorial semi-axes");
                const double alpha = std::acos(dot(Vec3{0, 0, 1},
                                                   cone->wall_frame(1.0, 0.0).ruling));
                polar_max = std::atan((axes[2] * axes[2] / (axes[0] * axes[0])) * std::tan(alpha));
            }
            dom.hi[0] = polar_max;
            dom.lo[1] = 0.0;
            dom.hi[1] = 2.0 * M_PI;
            dom.periodic[1] = true;
            chart = std::make_shared<WulffChart>(surface_body);
        } else {
            if (dim != 2) throw ValidationError("wulff2d surface needs ambient dimension 2");
            dom.rank = 1;
            dom.lo[0] = params.value("angle_min", 0.0);
            dom.hi[0] = params.value("angle_max", 2.0 * M_PI);
            dom.periodic[0] = params.value("closed", true);
            if (params.value("angle_auto_wedge", false)) {
                // Normal angles whose boundary points land on the wedge rays:
                // the point of outer-normal angle s sits at azimuth
                // atan2(a2^2 sin s, a1^2 cos s), inverted here per ray.
                if (!cone || cone->kind() != ConeKind::PlanarWedge)
                    throw ValidationError("angle_auto_wedge needs a planar wedge");
                if (surface_body->kind() != BodyKind::Ellipsoid)
                    throw ValidationError("angle_auto_wedge needs an ellipse body");
                const auto axes = params.at("body").at("params").at("semi_axes").get<std::vector<double>>();
                auto normal_angle = [&](const Vec3& ray) {
                    return std::atan2(axes[0] * axes[0] * ray.y, axes[1] * axes[1] * ray.x);
                };
                dom.lo[0] = normal_angle(cone->ray_direction(0));
                dom.hi[0] = normal_angle(cone->ray_direction(1));
                dom.periodic[0] = false;
            }
            chart = std::make_shared<Wulff2DChart>(surface_body);
        }
        Patch p(chart, dom, boundary, flip);
        const double scale = params.value("scale", 1.0);
        const Vec3 center = params.contains("center") ? vec_from(params.at("center"), dim) : Vec3{};
        if (scale != 1.0 || norm2(center) != 0.0) p = p.transformed(scale, center);
        return std::make_shared<Patch>(std::move(p));
    }
    if (kind == "cap-in-cone") {
        if (dim != 3) throw ValidationError("cap-in-cone surface needs ambient dimension 3");
        if (!cone || cone->dim() != 3 || cone->kind() == ConeKind::PlanarWedge)
            throw ValidationError("cap-in-cone surface needs a 3D cone");
        Domain dom;
        dom.rank = 2;
        dom.lo[0] = 0.0;
        dom.hi[0] = 1.0;
        dom.lo[1] = 0.0;
        dom.hi[1] = 2.0 * M_PI;
        dom.periodic[1] = true;
        auto curve = std::make_shared<SphericalBaseCurve>(cone->base_curve());
        auto chart = std::make_shared<CapInConeChart>(curve, params.value("radius", 1.0));
        return std::make_shared<Patch>(chart, dom, boundary, flip);
    }
    if (kind == "graph-rect") {
        if (dim != 3) throw ValidationError("graph-rect surface needs ambient dimension 3");
        auto fn = std::make_shared<PolyTrigFn>();
        fn->c0 = params.value("c0", 0.0);
        fn->cx = params.value("cx", 0.0);
        fn->cy = params.value("cy", 0.0);
        fn->axx = params.value("axx", 0.0);
        fn->ayy = params.value("ayy", 0.0);
        fn->amp = params.value("amp", 0.0);
        fn->kx = params.value("kx", 1.0);
        fn->ky = params.value("ky", 1.0);
        Domain dom;
        dom.rank = 2;
        dom.lo[0] = params.value("x0", -1.0);
        dom.hi[0] = params.value("x1", 1.0);
        dom.lo[1] = params.value("y0", -1.0);
        dom.hi[1] = params.value("y1", 1.0);
        auto chart = std::make_shared<GraphChart>(fn);
        return std::make_shared<Patch>(chart, dom, boundary, flip);
    }
    if (kind == "graph-polar") {
        if (dim != 3) throw ValidationError("graph-polar surface needs ambient dimension 3");
        Domain dom;
        dom.rank = 2;
        dom.lo[0] = 0.0;
        dom.hi[0] = 1.0;
        dom.lo[1] = 0.0;
        dom.hi[1] = 2.0 * M_PI;
        dom.periodic[1] = true;
        auto chart = std::make_shared<PolarGraphChart>(params.value("base_radius", 1.0),
                                                       params.value("amp", 0.3),
                                                       params.value("tilt", 0.0));
        return std::make_shared<Patch>(chart, dom, boundary, flip);
    }
    if (kind == "circle") {
        if (dim != 2) throw ValidationError("circle surface needs ambient dimension 2");
        const Vec3 center = params.contains("center") ? vec_from(params.at("center"), 2) : Vec3{};
        Domain dom;
        dom.rank = 1;
        dom.lo[0] = params.value("angle_min", 0.0);
        dom.hi[0] = params.value("angle_max", 2.0 * M_PI);
        dom.periodic[0] = params.value("closed", false);
        auto chart = std::make_shared<CircleChart>(center, params.value("radius", 1.0));
        return std::make_shared<Patch>(chart, dom, boundary, flip);
    }
    throw ValidationError("scenario: unknown surface kind '" + kind + "'");
}

Expected expected_from(const json& j) {
    Expected e;
    e.check = j.at("check").get<std::string>();
    e.tol = j.value("tol", 0.0);
    e.expect = j.value("expect", true);
    e.verdict = j.value("verdict", std::string());
    if (j.contains("p0")) {
        e.point = vec_from(j.at("p0"), 3);
        e.has_point = true;
    }
    if (j.contains("lambda")) {
        e.lambda = j.at("lambda").get<double>();
        e.has_lambda = true;
    }
    e.lo = j.value("lo", 0.0);
    e.hi = j.value("hi", 0.0);
    e.threshold = j.value("threshold", 0.0);
    return e;
}

}  // namespace

Overrides Overrides::parse(const std::vector<std::string>& assignments) {
    Overrides ov;
    for (const std::string& a : assignments) {
        const auto eq = a.find('=');
        if (eq == std::string::npos) throw ValidationError("--set expects key=value, got '" + a + "'");
        const std::string key = a.substr(0, eq);
        const std::string val = a.substr(eq + 1);
        try {
            if (key == "grid")
                ov.grid = std::stoi(val);
            else if (key == "boundary_grid")
                ov.boundary_grid = std::stoi(val);
            else if (key == "fd_step")
                ov.fd_step = std::stod(val);
            else if (key == "amplitude")
                ov.amplitude = std::stod(val);
            else
                throw ValidationError("--set: unknown key '" + key +
                                      "' (allowed: grid, boundary_grid, fd_step, amplitude)");
        } catch (const std::invalid_argument&) {
            throw ValidationError("--set: cannot parse value for '" + key + "'");
        }
    }
    return ov;
}

Scenario scenario_from_json(const std::string& json_text, const Overrides& ov) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("scenario: JSON parse error: ") + e.what());
    }
    try {
        Scenario sc;
        sc.id = j.at("id").get<std::string>();
        sc.description = j.value("description", std::string());
        sc.dim = j.value("dim", 3);
        if (sc.dim != 2 && sc.dim != 3) throw ValidationError("scenario: dim must be 2 or 3");
        if (j.contains("cone")) sc.cone = cone_from(j.at("cone"), ov);
        sc.body = body_from(j.at("body"), sc.dim, ov);
        sc.patch = surface_from(j.at("surface"), sc.dim, ov, sc.cone);
        // Grid sizes live under the surface entry; a top-level "grid" is
        // accepted as well.
        const json* gj = nullptr;
        if (j.at("surface").contains("grid")) gj = &j.at("surface").at("grid");
        else if (j.contains("grid")) gj = &j.at("grid");
        if (gj) {
            sc.grid.interior = gj->value("interior", 48);
            sc.grid.boundary = gj->value("boundary", 96);
        }
        if (const char* env = std::getenv("WULFF_LAB_GRID")) {
            const int g = std::atoi(env);
            if (g > 0) sc.grid.interior = g;
        }
        if (ov.grid) sc.grid.interior = *ov.grid;
        if (ov.boundary_grid) sc.grid.boundary = *ov.boundary_grid;
        sc.fd_step = j.value("fd_step", 1e-3);
        if (ov.fd_step) sc.fd_step = *ov.fd_step;
        if (!(sc.fd_step >= 1e-4 && sc.fd_step <= 1e-2))
            throw ValidationError("scenario: fd_step must lie in [1e-4, 1e-2]");
        if (j.contains("expected"))
            for (const auto& e : j.at("expected")) sc.expected.push_back(expected_from(e));
        return sc;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("scenario: malformed document: ") + e.what());
    }
}

Scenario load_scenario(const std::string& dir, const std::string& id, const Overrides& ov) {
    const std::filesystem::path path = std::filesystem::path(dir) / (id + ".json");
    std::ifstream in(path);
    if (!in) throw UnknownScenarioError(id);
    std::stringstream ss;
    ss << in.rdbuf();
    Scenario sc = scenario_from_json(ss.str(), ov);
    if (sc.id != id)
        throw ValidationError("scenario file " + path.string() + " declares id '" + sc.id + "'");
    return sc;
}

std::vector<ScenarioInfo> list_scenarios(const std::string& dir) {
    std::vector<ScenarioInfo> out;
    if (!std::filesystem::is_directory(dir))
        throw ValidationError("scenario directory not found: " + dir);
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.path().extension() == ".json") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
        std::ifstream in(f);
        std::stringstream ss;
        ss << in.rdbuf();
        try {
            const json j = json::parse(ss.str());
            out.push_back({j.at("id").get<std::string>(), j.value("description", std::string())});
        } catch (const json::exception&) {
            throw ValidationError("scenario file " + f.string() + " is not valid JSON");
        }
    }
    std::sort(out.begin(), out.end(),
              [](const ScenarioInfo& a, const ScenarioInfo& b) { return a.id < b.id; });
    return out;
}

}  // namespace wulff
