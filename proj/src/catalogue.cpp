#include "immersion/catalogue.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <sstream>

#include "immersion/errors.hpp"
#include "immersion/jet.hpp"

namespace immersion {

namespace {

using Jet = ScalarJet2;
template <class T>
using Point4 = std::array<T, 4>;

// Surfaces are written once over a generic scalar so the same code yields
// plain positions (double) and exact second-order jets (ScalarJet2).

template <class T>
Point4<T> plane(const T& u, const T& v) {
    return {u, v, 0.0 * u, 0.0 * u};
}

template <class T>
Point4<T> stereographic_sphere(const T& u, const T& v, double R) {
    const T s = 1.0 + u * u + v * v;
    return {R * 2.0 * u / s, R * 2.0 * v / s, R * (1.0 - 2.0 / s), 0.0 * u};
}

template <class T>
Point4<T> clifford_torus(const T& u, const T& v) {
    using std::cos;
    using std::sin;
    const double c = 1.0 / std::sqrt(2.0);
    return {c * cos(u), c * sin(u), c * cos(v), c * sin(v)};
}

template <class T>
Point4<T> holomorphic_graph(const T& x, const T& y) {
    return {x, y, 0.5 * (x * x - y * y), x * y};
}

SurfaceJet to_surface_jet(const std::array<Jet, 4>& p) {
    Vec x(4), xu(4), xv(4), xuu(4), xuv(4), xvv(4);
    for (int k = 0; k < 4; ++k) {
        x[k] = p[k].value;
        xu[k] = p[k].dx;
        xv[k] = p[k].dy;
        xuu[k] = p[k].dxx;
        xuv[k] = p[k].dxy;
        xvv[k] = p[k].dyy;
    }
    return SurfaceJet(x, xu, xv, xuu, xuv, xvv);
}

Vec to_vec(const Point4<double>& p) { return (Vec(4) << p[0], p[1], p[2], p[3]).finished(); }

/// Frame of jet-valued vectors -> unit normals with first derivatives.
NormalFrame to_frame(const std::vector<Point4<Jet>>& normals) {
    NormalFrame f;
    std::vector<std::array<Vec, 2>> d;
    for (const auto& n : normals) {
        Vec v(4), du(4), dv(4);
        for (int k = 0; k < 4; ++k) {
            v[k] = n[k].value;
            du[k] = n[k].dx;
            dv[k] = n[k].dy;
        }
        f.vectors.push_back(v);
        d.push_back({du, dv});
    }
    f.derivs = std::move(d);
    return f;
}

Jet cjet(double c) { return Jet::constant(c); }

double parse_number(const std::map<std::string, std::string>& params, const std::string& key, double fallback) {
    auto it = params.find(key);
    if (it == params.end()) return fallback;
    const std::string& s = it->second;
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
        throw BadParameter("parameter " + key + "='" + s + "' is not a number");
    return v;
}

void reject_unknown(const std::map<std::string, std::string>& params, std::initializer_list<const char*> allowed,
                    const std::string& surface) {
    for (const auto& [k, _] : params) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || k == a;
        if (!ok) throw BadParameter("surface '" + surface + "' has no parameter '" + k + "'");
    }
}

Domain disc_domain(const std::map<std::string, std::string>& params) {
    const double r = parse_number(params, "domain_radius", 1.0);
    if (!(r > 0)) throw BadParameter("domain_radius must be positive");
    return {Domain::Kind::Disc, r};
}

std::vector<DirectionalCurvature> constant_oracle(std::vector<DirectionalCurvature> v) { return v; }

AnalyticSurface make_plane(const std::map<std::string, std::string>& params) {
    reject_unknown(params, {"domain_radius"}, "plane");
    AnalyticSurface s;
    s.name = "plane";
    s.params = params;
    s.domain = disc_domain(params);
    s.jet = [](double u, double v) { return to_surface_jet(plane(Jet::var_x(u), Jet::var_y(v))); };
    s.point = [](double u, double v) { return to_vec(plane(u, v)); };
    s.canonical_frame = [](double, double) {
        return to_frame({{cjet(0), cjet(0), cjet(1), cjet(0)}, {cjet(0), cjet(0), cjet(0), cjet(1)}});
    };
    s.oracle = [](double, double) { return constant_oracle({{0, 0, 0, 0}, {0, 0, 0, 0}}); };
    return s;
}

AnalyticSurface make_sphere(const std::map<std::string, std::string>& params) {
    reject_unknown(params, {"R", "domain_radius"}, "stereographic_sphere");
    const double R = parse_number(params, "R", 1.0);
    if (!(R > 0)) throw BadParameter("stereographic_sphere needs R > 0");
    AnalyticSurface s;
    s.name = "stereographic_sphere";
    s.params = params;
    s.domain = disc_domain(params);
    s.jet = [R](double u, double v) { return to_surface_jet(stereographic_sphere(Jet::var_x(u), Jet::var_y(v), R)); };
    s.point = [R](double u, double v) { return to_vec(stereographic_sphere(u, v, R)); };
    // Inward normal -X/R, and e4 spanning the rest of the normal space.
    s.canonical_frame = [R](double u, double v) {
        auto p = stereographic_sphere(Jet::var_x(u), Jet::var_y(v), R);
        Point4<Jet> n1;
        for (int k = 0; k < 4; ++k) n1[k] = (-1.0 / R) * p[k];
        return to_frame({n1, {cjet(0), cjet(0), cjet(0), cjet(1)}});
    };
    s.oracle = [R](double, double) {
        return constant_oracle({{1 / R, 1 / (R * R), 1 / R, 1 / R}, {0, 0, 0, 0}});
    };
    return s;
}

AnalyticSurface make_clifford(const std::map<std::string, std::string>& params) {
    reject_unknown(params, {}, "clifford_torus");
    AnalyticSurface s;
    s.name = "clifford_torus";
    s.params = params;
    s.domain = {Domain::Kind::PeriodicBox, 0.0};
    s.jet = [](double u, double v) { return to_surface_jet(clifford_torus(Jet::var_x(u), Jet::var_y(v))); };
    s.point = [](double u, double v) { return to_vec(clifford_torus(u, v)); };
    // N1 = X, N2 = (-cos u, -sin u, cos v, sin v)/sqrt(2).
    s.canonical_frame = [](double u, double v) {
        const Jet ju = Jet::var_x(u), jv = Jet::var_y(v);
        const double c = 1.0 / std::sqrt(2.0);
        Point4<Jet> n1 = clifford_torus(ju, jv);
        Point4<Jet> n2{-c * cos(ju), -c * sin(ju), c * cos(jv), c * sin(jv)};
        return to_frame({n1, n2});
    };
    s.oracle = [](double, double) { return constant_oracle({{-1, 1, -1, -1}, {0, -1, 1, -1}}); };
    return s;
}

/// Unit graph normals of Example-1 type, as jets in (x, y).
std::vector<Point4<Jet>> graph_normal_jets(const Jet& phi_x, const Jet& phi_y, const Jet& psi_x, const Jet& psi_y) {
    const Jet a = 1.0 / sqrt(1.0 + phi_x * phi_x + phi_y * phi_y);
    const Jet b = 1.0 / sqrt(1.0 + psi_x * psi_x + psi_y * psi_y);
    return {{-phi_x * a, -phi_y * a, a, cjet(0)}, {-psi_x * b, -psi_y * b, cjet(0), b}};
}

AnalyticSurface make_holomorphic(const std::map<std::string, std::string>& params) {
    reject_unknown(params, {"domain_radius"}, "holomorphic_graph");
    AnalyticSurface s;
    s.name = "holomorphic_graph";
    s.params = params;
    s.domain = disc_domain(params);
    s.jet = [](double u, double v) { return to_surface_jet(holomorphic_graph(Jet::var_x(u), Jet::var_y(v))); };
    s.point = [](double u, double v) { return to_vec(holomorphic_graph(u, v)); };
    // φ = (x²-y²)/2, ψ = xy: ∇φ = (x, -y), ∇ψ = (y, x); the graph normals are orthogonal.
    s.canonical_frame = [](double u, double v) {
        const Jet x = Jet::var_x(u), y = Jet::var_y(v);
        return to_frame(graph_normal_jets(x, -y, y, x));
    };
    s.oracle = [](double u, double v) {
        const double q = 1 + u * u + v * v;
        const double K = -1 / (q * q * q);
        const double k = 1 / (q * std::sqrt(q));
        return constant_oracle({{0, K, k, -k}, {0, K, k, -k}});
    };
    s.graph = std::make_pair(parse_expression("(x^2 - y^2)/2"), parse_expression("x*y"));
    return s;
}

AnalyticSurface make_custom_graph(const std::map<std::string, std::string>& params) {
    reject_unknown(params, {"phi", "psi", "domain_radius"}, "custom_graph");
    auto expr = [&](const char* key) {
        auto it = params.find(key);
        if (it == params.end()) throw BadParameter(std::string("custom_graph needs parameter ") + key);
        return parse_expression(it->second);
    };
    const ExprAst phi = expr("phi"), psi = expr("psi");
    AnalyticSurface s;
    s.name = "custom_graph";
    s.params = params;
    s.domain = disc_domain(params);
    s.jet = [phi, psi](double u, double v) { return graph_jet(phi, psi, u, v); };
    s.point = [phi, psi](double u, double v) {
        return (Vec(4) << u, v, eval(phi, u, v), eval(psi, u, v)).finished();
    };
    s.graph = std::make_pair(phi, psi);
    return s;
}

} // namespace

bool Domain::contains(double u, double v) const {
    if (kind == Kind::PeriodicBox) return std::isfinite(u) && std::isfinite(v);
    return u * u + v * v <= radius * radius;
}

std::string Domain::describe() const {
    if (kind == Kind::PeriodicBox) return "periodic box [0,2pi)^2";
    std::ostringstream os;
    os << "closed parameter disc of radius " << radius;
    return os.str();
}

std::vector<CatalogueEntry> catalogue_entries() {
    return {
        {"plane", {{"domain_radius", "1"}}, "closed parameter disc (domain_radius)", true, true},
        {"stereographic_sphere", {{"R", "1"}, {"domain_radius", "1"}}, "any bounded parameter disc (domain_radius)",
         true, true},
        {"clifford_torus", {}, "periodic box [0,2pi)^2", true, true},
        {"holomorphic_graph", {{"domain_radius", "1"}}, "closed parameter disc (domain_radius)", true, true},
    };
}

AnalyticSurface builtin_surface(const std::string& name, const std::map<std::string, std::string>& params) {
    if (name == "plane") return make_plane(params);
    if (name == "stereographic_sphere") return make_sphere(params);
    if (name == "clifford_torus") return make_clifford(params);
    if (name == "holomorphic_graph") return make_holomorphic(params);
    if (name == "custom_graph") return make_custom_graph(params);
    throw UnknownSurface("unknown surface '" + name + "'");
}

SurfaceJet graph_jet(const ExprAst& phi, const ExprAst& psi, double x, double y) {
    const ScalarJet2 f = eval_jet(phi, x, y);
    const ScalarJet2 g = eval_jet(psi, x, y);
    return SurfaceJet((Vec(4) << x, y, f.value, g.value).finished(), (Vec(4) << 1, 0, f.dx, g.dx).finished(),
                      (Vec(4) << 0, 1, f.dy, g.dy).finished(), (Vec(4) << 0, 0, f.dxx, g.dxx).finished(),
                      (Vec(4) << 0, 0, f.dxy, g.dxy).finished(), (Vec(4) << 0, 0, f.dyy, g.dyy).finished());
}

namespace {

struct Differences {
    Vec du, dv, duu, duv, dvv;
};

Differences central_differences(const PointEvaluator& f, double u, double v, double h, const Vec& center) {
    const Vec pu = f(u + h, v), mu = f(u - h, v), pv = f(u, v + h), mv = f(u, v - h);
    const Vec pp = f(u + h, v + h), pm = f(u + h, v - h), mp = f(u - h, v + h), mm = f(u - h, v - h);
    Differences d;
    d.du = (pu - mu) / (2 * h);
    d.dv = (pv - mv) / (2 * h);
    d.duu = (pu - 2 * center + mu) / (h * h);
    d.dvv = (pv - 2 * center + mv) / (h * h);
    d.duv = (pp - pm - mp + mm) / (4 * h * h);
    return d;
}

} // namespace

SurfaceJet finite_difference_jet(const PointEvaluator& f, double u, double v, const FiniteDifferenceOptions& opts) {
    const double h = opts.step;
    if (!(h > 0)) throw BadParameter("finite-difference step must be positive");
    if (opts.domain) {
        for (int i = -1; i <= 1; ++i)
            for (int j = -1; j <= 1; ++j)
                if (!opts.domain->contains(u + i * h, v + j * h)) {
                    std::ostringstream os;
                    os << "stencil point (" << u + i * h << ", " << v + j * h << ") of step " << h
                       << " leaves the " << opts.domain->describe();
                    throw StencilOutOfDomain(os.str());
                }
    }
    const Vec x = f(u, v);
    const Differences coarse = central_differences(f, u, v, h, x);
    if (!opts.richardson) return SurfaceJet(x, coarse.du, coarse.dv, coarse.duu, coarse.duv, coarse.dvv);
    const Differences fine = central_differences(f, u, v, h / 2, x);
    auto extrapolate = [](const Vec& a_fine, const Vec& a_coarse) -> Vec { return (4 * a_fine - a_coarse) / 3; };
    return SurfaceJet(x, extrapolate(fine.du, coarse.du), extrapolate(fine.dv, coarse.dv),
                      extrapolate(fine.duu, coarse.duu), extrapolate(fine.duv, coarse.duv),
                      extrapolate(fine.dvv, coarse.dvv));
}

} // namespace immersion
