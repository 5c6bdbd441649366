#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "immersion/frames.hpp"
#include "immersion/geometry.hpp"

namespace immersion {

/// Interior lattice node of the disc grid. Arms point E, W, N, S.
struct DiscNode {
    struct Arm {
        double fraction = 1.0;  // arm length / h, in (0, 1]
        int neighbor = -1;      // interior node index, or -1 when the arm ends on the circle
        double theta = 0.0;     // angle of the circle point when neighbor == -1
    };
    int i = 0, j = 0;
    double u = 0, v = 0;
    std::array<Arm, 4> arms;
};

enum ArmDirection { kEast = 0, kWest = 1, kNorth = 2, kSouth = 3 };

/// Lattice h·Z² ∩ {|w| < 1} with Shortley–Weller arm lengths to the circle.
class DiscGrid {
public:
    DiscGrid(double h, int half_extent, std::vector<DiscNode> nodes);

    double h() const { return h_; }
    std::size_t size() const { return nodes_.size(); }
    const DiscNode& node(std::size_t k) const { return nodes_[k]; }
    const std::vector<DiscNode>& nodes() const { return nodes_; }
    /// Node index of lattice point (i, j), or -1 if it is not interior.
    int find(int i, int j) const;
    int center() const { return find(0, 0); }
    double min_arm_fraction() const;

private:
    double h_;
    int half_extent_;
    std::vector<DiscNode> nodes_;
    std::vector<int> index_;
};

/// Throws BadSpacing unless 0 < h <= 1/8.
DiscGrid build_disc_grid(double h);

/// Dirichlet data on the unit circle, parametrized by angle.
class BoundaryCurve {
public:
    BoundaryCurve(std::function<Vec(double)> f, Eigen::Index dim, std::string description);

    Vec operator()(double theta) const { return f_(theta); }
    Eigen::Index dim() const { return dim_; }
    const std::string& description() const { return description_; }

    /// (u, v, (u²-v²)/2, uv) on the circle.
    static BoundaryCurve holomorphic_graph();
    /// (u, v, a u + b v + c, d u + e v + f) on the circle.
    static BoundaryCurve affine(const std::array<double, 6>& coef);
    /// Restriction of g(u, v) to the circle.
    static BoundaryCurve from_function(std::function<Vec(double u, double v)> g, Eigen::Index dim, std::string description);
    /// Closed (periodic) cubic spline through (theta, value) knots. Needs >= 3 distinct angles.
    static BoundaryCurve from_knots(std::vector<std::pair<double, Vec>> knots);

private:
    std::function<Vec(double)> f_;
    Eigen::Index dim_;
    std::string description_;
};

struct LinearSolverConfig {
    enum class Method { Direct, SOR };
    Method method = Method::Direct;
    double tol = 1e-12;     // SOR: sup-norm change per sweep, relative to the field scale
    int max_sweeps = 100000;
    double omega = 1.9;     // SOR relaxation
};

/// Shortley–Weller five-point Laplacian on a DiscGrid, applied componentwise.
class PoissonOperator {
public:
    explicit PoissonOperator(const DiscGrid& grid, LinearSolverConfig cfg = {});
    ~PoissonOperator();
    PoissonOperator(PoissonOperator&&) noexcept;
    PoissonOperator& operator=(PoissonOperator&&) noexcept;

    const DiscGrid& grid() const { return grid_; }

    /// Solves Δ_h U = rhs (rows: nodes, columns: components) with U = g on the circle.
    Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs, const BoundaryCurve& g) const;
    /// Δ_h U at every interior node, using g where arms end on the circle.
    Eigen::MatrixXd apply(const Eigen::MatrixXd& field, const BoundaryCurve& g) const;
    int solves() const { return solves_; }

private:
    struct Stencil {
        double center = 0;
        std::array<double, 4> arm{};
    };
    Eigen::MatrixXd boundary_load(const BoundaryCurve& g) const;

    DiscGrid grid_;
    LinearSolverConfig cfg_;
    std::vector<Stencil> stencils_;
    struct Factorization;
    std::unique_ptr<Factorization> lu_;
    mutable int solves_ = 0;
};

/// One-shot convenience wrapper around PoissonOperator.
Eigen::MatrixXd poisson_solve(const DiscGrid& grid, const Eigen::MatrixXd& rhs, const BoundaryCurve& g,
                              const LinearSolverConfig& cfg = {});

/// Prescribed mean curvature H(X, Z) = H̄(X)·Z.
struct Prescription {
    std::function<Eigen::Vector4d(const Eigen::Vector4d&)> hbar;
    bool identically_zero = false;
    std::optional<double> h0, h1, h2, alpha;  // reporting only
    std::string description;

    double H(const Eigen::Vector4d& X, const Eigen::Vector4d& Z) const { return hbar(X).dot(Z); }

    static Prescription zero();
    static Prescription constant(const Eigen::Vector4d& value);
};

struct SolverConfig {
    double tol = 1e-8;     // sup-norm update and residual threshold
    int max_outer = 200;
    double damping = 0.8;  // θ in X_{k+1} = (1-θ) X_k + θ solve(X_k)
    int divergence_window = 5;
    LinearSolverConfig linear;
    // Anchors e3, e4. Rim nodes of graph-like data sit at |N*|² ≈ 1/2, so the norm threshold is relaxed.
    FrameRecipe frame{FrameKind::Projection, {}, 0.25, 0.5, false};

    void validate() const;
};

struct ConformalitySummary {
    double max = 0;
    double mean = 0;
};

struct CenterReport {
    Vec position;
    NormalFrame frame;
    CurvatureData curvature;
    std::vector<double> H_laplacian;   // ΔX·N/(2W)
    std::vector<double> H_prescribed;  // H̄(X)·N
    ConformalityDefect conformality;
};

struct SolveReport {
    bool converged = false;
    std::string status;
    int outer_iterations = 0;
    int linear_solves = 0;
    double final_update = 0;
    double residual = 0;  // max |Δ_h X - RHS(X)| over interior nodes
    ConformalitySummary conformality;
    std::optional<CenterReport> center;
    std::vector<double> update_history;
};

struct SolveResult {
    Eigen::MatrixXd field;  // rows: grid nodes, columns: x1..x4
    SolveReport report;
};

/// Damped Picard iteration for Δ X = 2 H(X,N1) W N1 + 2 H(X,N2) W N2 with X = g on the circle.
/// Frame failures throw FrameFailure; non-convergence is flagged in the report.
SolveResult mean_curvature_iterate(const DiscGrid& grid, const Prescription& p, const BoundaryCurve& g,
                                   const SolverConfig& cfg = {});

/// Recomputes frames, W, H and the residual of the system from the field alone.
SolveReport residual_report(const Eigen::MatrixXd& field, const DiscGrid& grid, const Prescription& p,
                            const BoundaryCurve& g, const FrameRecipe& recipe = SolverConfig{}.frame);

/// Discrete first derivatives (nonuniform three-point) at every node; columns of the returned pair are components.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> discrete_gradient(const Eigen::MatrixXd& field, const DiscGrid& grid,
                                                              const BoundaryCurve& g);

/// Second-order jet at a node whose four diagonal neighbours are interior; nullopt otherwise.
std::optional<SurfaceJet> discrete_jet(const Eigen::MatrixXd& field, const DiscGrid& grid, const BoundaryCurve& g,
                                       int node);

} // namespace immersion
