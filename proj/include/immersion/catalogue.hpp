#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "immersion/expression.hpp"
#include "immersion/geometry.hpp"

namespace immersion {

using JetEvaluator = std::function<SurfaceJet(double u, double v)>;
using PointEvaluator = std::function<Vec(double u, double v)>;
using FrameField = std::function<NormalFrame(double u, double v)>;
/// Expected curvature per canonical frame direction at (u, v).
using CurvatureOracle = std::function<std::vector<DirectionalCurvature>(double u, double v)>;

struct Domain {
    enum class Kind { Disc, PeriodicBox };
    Kind kind = Kind::Disc;
    double radius = 1.0;  // Disc only

    bool contains(double u, double v) const;
    std::string describe() const;
};

struct AnalyticSurface {
    std::string name;
    std::map<std::string, std::string> params;
    Domain domain;
    JetEvaluator jet;
    PointEvaluator point;
    /// Orthonormal frame in closed form, derivatives included.
    std::optional<FrameField> canonical_frame;
    std::optional<CurvatureOracle> oracle;
    /// Set for graph surfaces (x, y, φ, ψ).
    std::optional<std::pair<ExprAst, ExprAst>> graph;
};

struct CatalogueEntry {
    std::string name;
    std::vector<std::pair<std::string, std::string>> parameters;  // name, default
    std::string domain;
    bool has_oracle = false;
    bool has_canonical_frame = false;
};

/// The analytic built-ins: plane, stereographic_sphere, clifford_torus, holomorphic_graph.
std::vector<CatalogueEntry> catalogue_entries();

/// name ∈ {plane, stereographic_sphere, clifford_torus, holomorphic_graph, custom_graph}.
/// Parameters are key/value strings: R, domain_radius, and for custom_graph phi and psi.
/// Throws UnknownSurface or BadParameter.
AnalyticSurface builtin_surface(const std::string& name, const std::map<std::string, std::string>& params = {});

/// Jet of X(x, y) = (x, y, φ(x, y), ψ(x, y)).
SurfaceJet graph_jet(const ExprAst& phi, const ExprAst& psi, double x, double y);

struct FiniteDifferenceOptions {
    double step = 1e-4;
    bool richardson = true;
    std::optional<Domain> domain;
};

/// Central differences; with richardson, steps h and h/2 are combined for O(h^4).
/// Throws StencilOutOfDomain if a stencil point leaves the domain.
SurfaceJet finite_difference_jet(const PointEvaluator& f, double u, double v, const FiniteDifferenceOptions& opts = {});

} // namespace immersion
