#pragma once

#include <array>
#include <vector>

#include "immersion/catalogue.hpp"
#include "immersion/geometry.hpp"
#include "immersion/jet.hpp"

namespace immersion {

enum class FrameKind {
    GraphNormals,  // graph normals (-φx,-φy,1,0), (-ψx,-ψy,0,1), then orthonormalized
    Projection,    // anchor vectors projected off the tangent plane, then orthonormalized
};

/// How to build a normal frame at a point. Anchors default to e3..en.
struct FrameRecipe {
    FrameKind kind = FrameKind::Projection;
    std::vector<Vec> anchors;  // empty -> e3..en
    double tnorm = 0.5;        // minimum |N*_k|^2
    double tangle = 0.5;       // maximum |Ñ_j·Ñ_k|
    /// Use the conformal-only projection formula and reject non-conformal jets.
    bool strict = false;

    /// Throws InvalidRecipe on bad thresholds or dependent anchors.
    void validate(Eigen::Index n) const;
    std::vector<Vec> resolved_anchors(Eigen::Index n) const;
};

/// N1 = (-φx,-φy,1,0)/sqrt(1+|∇φ|²), N2 = (-ψx,-ψy,0,1)/sqrt(1+|∇ψ|²). Unit, normal, not mutually orthogonal.
std::array<Vec, 2> graph_normals(const ScalarJet2& phi, const ScalarJet2& psi);

/// N*_k = a_k minus its tangential part. Non-strict mode falls back to the Gram-matrix
/// projector for non-conformal jets; strict mode throws NotConformal instead.
std::vector<Vec> projection_frame(const SurfaceJet& jet, const std::vector<Vec>& anchors, bool strict = false);

/// Thresholded Gram–Schmidt: Ñ_k = N*_k/|N*_k|, N1 = Ñ1, N2 = (Ñ2 - (N1·Ñ2)N1)/sqrt(1-(N1·Ñ2)²).
/// Throws NormBelowThreshold if |N*_k|² < tnorm, AngleThreshold if |Ñ_j·Ñ_k| > tangle.
NormalFrame orthonormalize(const std::vector<Vec>& raw, const FrameRecipe& recipe);

/// Frame at a single jet (no derivatives).
NormalFrame build_frame(const SurfaceJet& jet, const FrameRecipe& recipe);

/// Frame field over parameters from a jet evaluator and a fixed recipe.
FrameField make_frame_field(JetEvaluator jets, FrameRecipe recipe);

/// Frame at (u, v) with central-difference derivatives of step `step`.
NormalFrame frame_field_derivatives(const FrameField& field, double u, double v, double step);

} // namespace immersion
