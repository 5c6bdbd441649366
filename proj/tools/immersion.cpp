#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <immersion/catalogue.hpp>
#include <immersion/errors.hpp>
#include <immersion/estimates.hpp>
#include <immersion/frames.hpp>
#include <immersion/geometry.hpp>
#include <immersion/solver.hpp>

using namespace immersion;
using json = nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "0.1.0";

enum Exit { kOk = 0, kUsage = 2, kFrame = 3, kDegenerate = 4, kVerifyFailed = 5, kNotConverged = 6 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// parsing helpers

std::vector<double> parse_list(const std::string& text, std::size_t expected, const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError(what + ": '" + item + "' is not a number");
        }
    }
    if (expected && out.size() != expected)
        throw UsageError(what + ": expected " + std::to_string(expected) + " comma-separated numbers");
    return out;
}

/// "0.015625" or "1/64".
double parse_spacing(const std::string& text) {
    const auto slash = text.find('/');
    if (slash == std::string::npos) return parse_list(text, 1, "--grid-h")[0];
    const double a = parse_list(text.substr(0, slash), 1, "--grid-h")[0];
    const double b = parse_list(text.substr(slash + 1), 1, "--grid-h")[0];
    return a / b;
}

json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json vec_json(const Vec& v) {
    json a = json::array();
    for (Eigen::Index k = 0; k < v.size(); ++k) a.push_back(number(v[k]));
    return a;
}

json doubles_json(const std::vector<double>& v) {
    json a = json::array();
    for (double x : v) a.push_back(number(x));
    return a;
}

std::string csv_number(double x) {
    if (std::isnan(x)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

json tool_json() { return {{"name", "immersion"}, {"version", kVersion}}; }

void emit(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot write " + path);
    f << text;
}

/// For --format both the output path is a stem: PATH.json and PATH.csv.
void write_outputs(const std::string& format, const std::string& output, const json& doc, const std::string& csv) {
    const std::string text = doc.dump(2) + "\n";
    if (format == "json") {
        emit(text, output);
    } else if (format == "csv") {
        emit(csv, output);
    } else {
        if (output.empty()) throw UsageError("--format both needs --output PATH (writes PATH.json and PATH.csv)");
        emit(text, output + ".json");
        emit(csv, output + ".csv");
    }
}

// ---------------------------------------------------------------------------
// surface requests (analyze, verify)

struct SurfaceOptions {
    std::string surface;
    std::vector<std::string> params;
    std::optional<double> R;
    std::vector<std::string> graph;
    int grid = 65;
    double radius = 1.0;
    std::string frame;
    std::string anchors;
    double tnorm = 0.5;
    double tangle = 0.5;
    int axis = 1;
    std::optional<double> fd_step;
    std::optional<double> tol;
    std::string output;
    std::string format = "json";
};

void add_surface_options(CLI::App* cmd, SurfaceOptions& o) {
    cmd->add_option("--surface", o.surface, "Built-in surface name (see `catalogue`)");
    cmd->add_option("--param", o.params, "Surface parameter key=value (repeatable)");
    cmd->add_option("--R", o.R, "Sphere radius, shorthand for --param R=...");
    cmd->add_option("--graph", o.graph, "Graph component phi=<expr> or psi=<expr> (repeatable)");
    cmd->add_option("--grid", o.grid, "Odd grid resolution >= 9")->capture_default_str();
    cmd->add_option("--radius", o.radius, "Parameter disc radius sampled")->capture_default_str();
    cmd->add_option("--frame", o.frame, "Normal frame: canonical, graph or projection")
        ->check(CLI::IsMember({"canonical", "graph", "projection"}));
    cmd->add_option("--anchors", o.anchors, "Projection anchors as 1-based axis indices, e.g. 3,4");
    cmd->add_option("--tnorm", o.tnorm, "Minimum |N*|^2 accepted by the frame construction")->capture_default_str();
    cmd->add_option("--tangle", o.tangle, "Maximum |N1~.N2~| accepted by the frame construction")->capture_default_str();
    cmd->add_option("--axis", o.axis, "1-based coordinate axis for the Osserman angle")->capture_default_str();
    cmd->add_option("--frame-derivative-step", o.fd_step, "Central-difference step for frame derivatives");
    cmd->add_option("--tol", o.tol, "Tolerance");
    cmd->add_option("--output", o.output, "Output path (stem for --format both); stdout if omitted");
    cmd->add_option("--format", o.format, "json, csv or both")->check(CLI::IsMember({"json", "csv", "both"}))
        ->capture_default_str();
}

struct ResolvedSurface {
    AnalyticSurface surface;
    FrameField frame;
    std::string frame_name;
};

ResolvedSurface resolve_surface(const SurfaceOptions& o) {
    if (o.grid < 9 || o.grid % 2 == 0) throw UsageError("--grid must be odd and at least 9");
    if (!(o.radius > 0)) throw UsageError("--radius must be positive");
    if (o.axis < 1 || o.axis > 4) throw UsageError("--axis must be between 1 and 4");

    std::map<std::string, std::string> params;
    for (const std::string& p : o.params) {
        const auto eq = p.find('=');
        if (eq == std::string::npos) throw UsageError("--param expects key=value, got '" + p + "'");
        params[p.substr(0, eq)] = p.substr(eq + 1);
    }
    if (o.R) params["R"] = csv_number(*o.R);

    std::string name = o.surface;
    if (!o.graph.empty()) {
        if (!name.empty() && name != "custom_graph") throw UsageError("--graph and --surface are exclusive");
        name = "custom_graph";
        params.emplace("phi", "0");
        params.emplace("psi", "0");
        for (const std::string& g : o.graph) {
            const auto eq = g.find('=');
            const std::string key = eq == std::string::npos ? "" : g.substr(0, eq);
            if (key != "phi" && key != "psi") throw UsageError("--graph expects phi=<expr> or psi=<expr>");
            params[key] = g.substr(eq + 1);
        }
    }
    if (name.empty()) throw UsageError("one of --surface or --graph is required");

    ResolvedSurface r{builtin_surface(name, params), {}, o.frame};
    if (r.frame_name.empty())
        r.frame_name = r.surface.canonical_frame ? "canonical" : (r.surface.graph ? "graph" : "projection");
    if (r.frame_name == "canonical") {
        if (!r.surface.canonical_frame) throw UsageError(name + " has no canonical frame; use graph or projection");
        r.frame = *r.surface.canonical_frame;
        return r;
    }
    FrameRecipe recipe;
    recipe.kind = r.frame_name == "graph" ? FrameKind::GraphNormals : FrameKind::Projection;
    recipe.tnorm = o.tnorm;
    recipe.tangle = o.tangle;
    if (!o.anchors.empty())
        for (double a : parse_list(o.anchors, 0, "--anchors")) {
            if (a != std::floor(a) || a < 1 || a > 4) throw UsageError("--anchors takes axis indices 1..4");
            recipe.anchors.push_back(Vec::Unit(4, static_cast<Eigen::Index>(a) - 1));
        }
    recipe.validate(4);
    r.frame = make_frame_field(r.surface.jet, recipe);
    return r;
}

json request_json(const SurfaceOptions& o, const ResolvedSurface& r) {
    json params = json::object();
    for (const auto& [k, v] : r.surface.params) params[k] = v;
    json req = {{"surface", r.surface.name}, {"params", params},       {"grid", o.grid},
                {"radius", o.radius},        {"frame", r.frame_name}, {"axis", o.axis}};
    if (r.frame_name != "canonical") {
        req["tnorm"] = o.tnorm;
        req["tangle"] = o.tangle;
        req["anchors"] = o.anchors.empty() ? json("3,4") : json(o.anchors);
    }
    if (o.fd_step) req["frame_derivative_step"] = *o.fd_step;
    if (o.tol) req["tol"] = *o.tol;
    return req;
}

/// Per-node quantities shared by analyze and verify.
struct PointRecord {
    const GridNode* node = nullptr;
    double res_gauss = 0;
    double res_weingarten = 0;
    std::optional<double> res_mcs;  // conformal points only
    double identity = 0;            // worst relative error of the κ-H-K identities
};

double rel_err(double a, double b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

PointRecord evaluate_point(const GridNode& n, const FrameField& field, std::optional<double> fd_step) {
    PointRecord r;
    r.node = &n;
    const SecondForm L = second_fundamental_form(n.jet, n.frame);
    r.res_gauss = gauss_equation_residual(n.jet, n.frame, L, christoffel(n.jet));
    const NormalFrame f =
        n.frame.has_derivatives() && !fd_step ? n.frame : frame_field_derivatives(field, n.u, n.v, fd_step.value_or(1e-4));
    r.res_weingarten = weingarten_residual(n.jet, f, L, torsion_coefficients(f));
    std::vector<double> H;
    for (const auto& d : n.curvature.directions) {
        H.push_back(d.H);
        r.identity = std::max({r.identity, rel_err(d.kappa1 * d.kappa1 + d.kappa2 * d.kappa2, 4 * d.H * d.H - 2 * d.K),
                               rel_err(d.H, (d.kappa1 + d.kappa2) / 2), rel_err(d.K, d.kappa1 * d.kappa2)});
    }
    try {
        r.res_mcs = mean_curvature_system_residual(n.jet, n.frame, H);
    } catch (const NotConformal&) {
    }
    return r;
}

json point_json(const PointRecord& r) {
    const GridNode& n = *r.node;
    json dirs = json::array();
    for (const auto& d : n.curvature.directions)
        dirs.push_back({{"H", number(d.H)}, {"K", number(d.K)}, {"kappa1", number(d.kappa1)}, {"kappa2", number(d.kappa2)}});
    return {{"u", n.u},
            {"v", n.v},
            {"position", vec_json(n.jet.x)},
            {"W", number(n.metric.W)},
            {"conformality_defect", number(conformality_defect(n.metric).max())},
            {"directions", dirs},
            {"residuals",
             {{"gauss", number(r.res_gauss)},
              {"weingarten", number(r.res_weingarten)},
              {"mean_curvature_system", r.res_mcs ? number(*r.res_mcs) : json(nullptr)}}}};
}

std::string points_csv(const std::vector<PointRecord>& records) {
    std::string out = "u,v,x1,x2,x3,x4,W,conf_defect,H1,K1,kap11,kap12,H2,K2,kap21,kap22,res_gauss,res_weingarten,res_mcs\n";
    for (const PointRecord& r : records) {
        const GridNode& n = *r.node;
        std::vector<double> row = {n.u, n.v};
        for (Eigen::Index k = 0; k < 4; ++k) row.push_back(n.jet.x[k]);
        row.push_back(n.metric.W);
        row.push_back(conformality_defect(n.metric).max());
        for (const auto& d : n.curvature.directions) row.insert(row.end(), {d.H, d.K, d.kappa1, d.kappa2});
        row.insert(row.end(), {r.res_gauss, r.res_weingarten, r.res_mcs.value_or(std::nan(""))});
        for (std::size_t k = 0; k < row.size(); ++k) out += (k ? "," : "") + csv_number(row[k]);
        out += "\n";
    }
    return out;
}

std::vector<PointRecord> evaluate_grid(const GridSample& g, const FrameField& field, std::optional<double> fd_step) {
    std::vector<PointRecord> out;
    for (const GridNode& n : g.nodes())
        if (n.valid) out.push_back(evaluate_point(n, field, fd_step));
    return out;
}

json estimates_json(const EstimateReport& e) {
    return {{"omega", number(e.omega)},
            {"osserman",
             {{"margin", number(e.osserman.margin)},
              {"conformal_points", e.osserman.conformal_points},
              {"excluded_points", e.osserman.excluded_points}}},
            {"dirichlet_energy", number(e.dirichlet_energy)},
            {"geodesic_radius", number(e.geodesic_radius)},
            {"h0", number(e.h0)},
            {"h0_prescribed", e.h0_prescribed ? number(*e.h0_prescribed) : json(nullptr)},
            {"d0", number(e.d0)},
            {"w_min_over_r2", number(e.w_min_over_r2)},
            {"w_max_over_r2", number(e.w_max_over_r2)},
            {"harnack_c4_emp", number(e.harnack_c4_emp)},
            {"theta_emp", doubles_json(e.theta_emp)}};
}

// ---------------------------------------------------------------------------
// subcommands

int cmd_catalogue(const std::string& format) {
    const auto entries = catalogue_entries();
    if (format == "json") {
        json list = json::array();
        for (const CatalogueEntry& e : entries) {
            json params = json::array();
            for (const auto& [k, d] : e.parameters) params.push_back({{"name", k}, {"default", d}});
            list.push_back({{"name", e.name},
                            {"parameters", params},
                            {"domain", e.domain},
                            {"has_oracle", e.has_oracle},
                            {"has_canonical_frame", e.has_canonical_frame}});
        }
        std::cout << json{{"tool", tool_json()}, {"command", "catalogue"}, {"surfaces", list}}.dump(2) << "\n";
        return kOk;
    }
    for (const CatalogueEntry& e : entries) {
        std::string params;
        for (const auto& [k, d] : e.parameters) params += (params.empty() ? "" : ", ") + k + "=" + d;
        std::printf("%-22s domain: %-28s params: %-24s oracle: %-3s canonical frame: %s\n", e.name.c_str(),
                    e.domain.c_str(), params.empty() ? "-" : params.c_str(), e.has_oracle ? "yes" : "no",
                    e.has_canonical_frame ? "yes" : "no");
    }
    std::printf("custom_graph           graph (x, y, phi, psi) from --graph \"phi=<expr>\" --graph \"psi=<expr>\"\n");
    return kOk;
}

int cmd_analyze(const SurfaceOptions& o) {
    const ResolvedSurface r = resolve_surface(o);
    const GridSample g = sample_grid(r.surface.jet, r.frame, o.grid, o.radius);
    const std::vector<PointRecord> records = evaluate_grid(g, r.frame, o.fd_step);

    json doc = {{"tool", tool_json()}, {"command", "analyze"}, {"request", request_json(o, r)}};
    if (o.format != "csv") {
        const GridNode& c = g.center();
        doc["center"] = point_json(evaluate_point(c, r.frame, o.fd_step));
        doc["estimates"] = estimates_json(estimate_report(g, Vec::Unit(4, o.axis - 1)));
        json points = json::array();
        for (const PointRecord& p : records) points.push_back(point_json(p));
        doc["points"] = points;
    }
    write_outputs(o.format, o.output, doc, o.format == "json" ? "" : points_csv(records));
    return kOk;
}

int cmd_verify(const SurfaceOptions& o) {
    const double tol = o.tol.value_or(1e-8);
    const ResolvedSurface r = resolve_surface(o);
    const GridSample g = sample_grid(r.surface.jet, r.frame, o.grid, o.radius);
    const std::vector<PointRecord> records = evaluate_grid(g, r.frame, o.fd_step);

    struct Check {
        const char* name;
        std::function<std::optional<double>(const PointRecord&)> value;
    };
    const std::vector<Check> checks = {
        {"curvature_identities", [](const PointRecord& p) { return std::optional<double>(p.identity); }},
        {"gauss_equation", [](const PointRecord& p) { return std::optional<double>(p.res_gauss); }},
        {"weingarten_equation", [](const PointRecord& p) { return std::optional<double>(p.res_weingarten); }},
        {"mean_curvature_system", [](const PointRecord& p) { return p.res_mcs; }},
    };

    bool all = true;
    json results = json::array();
    for (const Check& c : checks) {
        double worst = 0;
        const GridNode* at = nullptr;
        std::size_t evaluated = 0;
        bool pass = true;
        for (const PointRecord& p : records) {
            const auto v = c.value(p);
            if (!v) continue;
            ++evaluated;
            if (!at || !(*v <= worst)) {
                worst = *v;
                at = p.node;
            }
            pass = pass && *v <= tol;
        }
        all = all && pass;
        std::fprintf(stderr, "%s  %-22s worst %.3e at (u, v) = (%.6g, %.6g) over %zu points\n", pass ? "PASS" : "FAIL",
                     c.name, worst, at ? at->u : 0.0, at ? at->v : 0.0, evaluated);
        results.push_back({{"name", c.name},
                           {"passed", pass},
                           {"worst", number(worst)},
                           {"at", at ? json{{"u", at->u}, {"v", at->v}} : json(nullptr)},
                           {"evaluated", evaluated}});
    }
    json doc = {{"tool", tool_json()},  {"command", "verify"}, {"request", request_json(o, r)},
                {"tolerance", tol},     {"passed", all},       {"checks", results}};
    if (!o.output.empty() || o.format != "json") write_outputs(o.format, o.output, doc, points_csv(records));
    return all ? kOk : kVerifyFailed;
}

struct SolveOptions {
    std::string hbar = "zero";
    std::string boundary = "holomorphic_graph";
    std::string grid_h = "1/32";
    SolverConfig cfg;
    std::string linear = "direct";
    std::string anchors;
    std::string output;
    std::string format = "both";
};

Prescription parse_hbar(const std::string& s) {
    if (s == "zero") return Prescription::zero();
    if (s.rfind("const:", 0) == 0) {
        const auto v = parse_list(s.substr(6), 4, "--hbar const");
        return Prescription::constant(Eigen::Vector4d(v[0], v[1], v[2], v[3]));
    }
    throw UsageError("--hbar expects zero or const:a,b,c,d");
}

BoundaryCurve parse_boundary(const std::string& s) {
    if (s == "holomorphic_graph") return BoundaryCurve::holomorphic_graph();
    if (s.rfind("affine:", 0) == 0) {
        const auto v = parse_list(s.substr(7), 6, "--boundary affine");
        return BoundaryCurve::affine({v[0], v[1], v[2], v[3], v[4], v[5]});
    }
    if (s.rfind("knots:", 0) == 0) {
        const std::string path = s.substr(6);
        std::ifstream f(path);
        if (!f) throw UsageError("cannot read knot file " + path);
        std::vector<std::pair<double, Vec>> knots;
        std::string line;
        while (std::getline(f, line)) {
            if (line.empty() || line[0] == '#') continue;
            const auto v = parse_list(line, 5, "knot line (theta,x1,x2,x3,x4)");
            knots.emplace_back(v[0], (Vec(4) << v[1], v[2], v[3], v[4]).finished());
        }
        return BoundaryCurve::from_knots(std::move(knots));
    }
    throw UsageError("--boundary expects holomorphic_graph, affine:a,b,c,d,e,f or knots:PATH");
}

json center_json(const CenterReport& c) {
    json dirs = json::array();
    for (const auto& d : c.curvature.directions)
        dirs.push_back({{"H", number(d.H)}, {"K", number(d.K)}, {"kappa1", number(d.kappa1)}, {"kappa2", number(d.kappa2)}});
    return {{"position", vec_json(c.position)},
            {"directions", dirs},
            {"H_laplacian", doubles_json(c.H_laplacian)},
            {"H_prescribed", doubles_json(c.H_prescribed)},
            {"conformality_defect", number(c.conformality.max())}};
}

int cmd_solve(SolveOptions o) {
    const double h = parse_spacing(o.grid_h);
    const DiscGrid grid = build_disc_grid(h);
    const Prescription p = parse_hbar(o.hbar);
    const BoundaryCurve g = parse_boundary(o.boundary);
    o.cfg.linear.method = o.linear == "sor" ? LinearSolverConfig::Method::SOR : LinearSolverConfig::Method::Direct;
    if (!o.anchors.empty())
        for (double a : parse_list(o.anchors, 0, "--anchors")) {
            if (a != std::floor(a) || a < 1 || a > 4) throw UsageError("--anchors takes axis indices 1..4");
            o.cfg.frame.anchors.push_back(Vec::Unit(4, static_cast<Eigen::Index>(a) - 1));
        }
    o.cfg.validate();
    o.cfg.frame.validate(4);

    const SolveResult r = mean_curvature_iterate(grid, p, g, o.cfg);
    const SolveReport& s = r.report;
    json report = {{"converged", s.converged},
                   {"status", s.status},
                   {"outer_iterations", s.outer_iterations},
                   {"linear_solves", s.linear_solves},
                   {"final_update", number(s.final_update)},
                   {"residual", number(s.residual)},
                   {"conformality", {{"max", number(s.conformality.max)}, {"mean", number(s.conformality.mean)}}},
                   {"center", s.center ? center_json(*s.center) : json(nullptr)},
                   {"update_history", doubles_json(s.update_history)}};
    json request = {{"hbar", p.description},   {"boundary", g.description()},   {"grid_h", h},
                    {"nodes", grid.size()},    {"tol", o.cfg.tol},              {"max_outer", o.cfg.max_outer},
                    {"damping", o.cfg.damping}, {"linear", o.linear},
                    {"tnorm", o.cfg.frame.tnorm}, {"tangle", o.cfg.frame.tangle},
                    {"anchors", o.anchors.empty() ? json("3,4") : json(o.anchors)}};
    const json doc = {{"tool", tool_json()}, {"command", "solve"}, {"request", request}, {"report", report}};

    std::string csv = "u,v,x1,x2,x3,x4\n";
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const DiscNode& n = grid.node(k);
        csv += csv_number(n.u) + "," + csv_number(n.v);
        for (Eigen::Index c = 0; c < 4; ++c) csv += "," + csv_number(r.field(static_cast<Eigen::Index>(k), c));
        csv += "\n";
    }
    if (o.format == "both" && o.output.empty())
        emit(doc.dump(2) + "\n", "");  // without a stem only the report goes to stdout
    else
        write_outputs(o.format, o.output, doc, csv);
    std::fprintf(stderr, "%s after %d outer iterations, residual %.3e\n", s.status.c_str(), s.outer_iterations,
                 s.residual);
    return s.converged ? kOk : kNotConverged;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Curvature analysis and prescribed mean curvature solving for immersed surfaces in R^4", "immersion"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::string catalogue_format = "text";
    CLI::App* cat = app.add_subcommand("catalogue", "List the built-in surfaces");
    cat->add_option("--format", catalogue_format, "text or json")->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();

    SurfaceOptions analyze_opts, verify_opts;
    CLI::App* analyze = app.add_subcommand("analyze", "Sample a surface: curvatures, residuals and estimate report");
    add_surface_options(analyze, analyze_opts);
    CLI::App* verify = app.add_subcommand("verify", "Check the structure equations and curvature identities on a grid");
    add_surface_options(verify, verify_opts);

    SolveOptions solve_opts;
    CLI::App* solve = app.add_subcommand("solve", "Solve the prescribed mean curvature system on the unit disc");
    solve->add_option("--hbar", solve_opts.hbar, "zero or const:a,b,c,d")->capture_default_str();
    solve->add_option("--boundary", solve_opts.boundary, "holomorphic_graph, affine:a,b,c,d,e,f or knots:PATH")
        ->capture_default_str();
    solve->add_option("--grid-h", solve_opts.grid_h, "Grid spacing, e.g. 1/64")->capture_default_str();
    solve->add_option("--tol", solve_opts.cfg.tol, "Update and residual tolerance")->capture_default_str();
    solve->add_option("--max-outer", solve_opts.cfg.max_outer, "Maximum outer iterations")->capture_default_str();
    solve->add_option("--damping", solve_opts.cfg.damping, "Picard damping in (0, 1]")->capture_default_str();
    solve->add_option("--divergence-window", solve_opts.cfg.divergence_window, "Consecutive growing updates tolerated")
        ->capture_default_str();
    solve->add_option("--linear", solve_opts.linear, "direct or sor")->check(CLI::IsMember({"direct", "sor"}))
        ->capture_default_str();
    solve->add_option("--sor-omega", solve_opts.cfg.linear.omega, "SOR relaxation")->capture_default_str();
    solve->add_option("--anchors", solve_opts.anchors, "Projection anchors as 1-based axis indices");
    solve->add_option("--tnorm", solve_opts.cfg.frame.tnorm, "Minimum |N*|^2")->capture_default_str();
    solve->add_option("--tangle", solve_opts.cfg.frame.tangle, "Maximum |N1~.N2~|")->capture_default_str();
    solve->add_option("--output", solve_opts.output, "Output path (stem for --format both)");
    solve->add_option("--format", solve_opts.format, "json, csv or both")
        ->check(CLI::IsMember({"json", "csv", "both"}))
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return kUsage;
    }

    try {
        if (*cat) return cmd_catalogue(catalogue_format);
        if (*analyze) return cmd_analyze(analyze_opts);
        if (*verify) return cmd_verify(verify_opts);
        if (*solve) return cmd_solve(solve_opts);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const InvalidRecipe& e) {
        std::cerr << "error: invalid frame recipe: " << e.what() << "\n";
        return kUsage;
    } catch (const FrameError& e) {
        std::cerr << "frame failure: " << e.what() << "\n";
        return kFrame;
    } catch (const DegenerateMetric& e) {
        std::cerr << "degenerate metric: " << e.what() << "\n";
        return kDegenerate;
    } catch (const Error& e) {
        // BadSpacing, BadParameter, UnknownSurface, SyntaxError, DomainError, ...
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
