#pragma once

#include <optional>
#include <vector>

#include "immersion/catalogue.hpp"
#include "immersion/geometry.hpp"

namespace immersion {

/// One lattice node of the sampled disc. Jets are expressed in normalized
/// parameters w = (u, v) / radius, so every grid covers the closed unit disc.
struct GridNode {
    int i = 0, j = 0;
    double u = 0, v = 0;    // surface parameters
    double wu = 0, wv = 0;  // normalized parameters in the closed unit disc
    bool valid = false;
    SurfaceJet jet;
    FirstForm metric;
    NormalFrame frame;
    CurvatureData curvature;
};

/// Uniform resolution x resolution lattice over [-1,1]^2 (normalized), masked to the closed unit disc.
class GridSample {
public:
    GridSample(int resolution, double radius, std::vector<GridNode> nodes);

    int resolution() const { return resolution_; }
    double radius() const { return radius_; }
    /// Lattice spacing in normalized parameters.
    double spacing() const { return 2.0 / (resolution_ - 1); }
    const GridNode& at(int i, int j) const { return nodes_[static_cast<std::size_t>(j) * resolution_ + i]; }
    bool valid(int i, int j) const;
    const GridNode& center() const { return at(resolution_ / 2, resolution_ / 2); }
    const std::vector<GridNode>& nodes() const { return nodes_; }
    std::size_t valid_count() const;

private:
    int resolution_;
    double radius_;
    std::vector<GridNode> nodes_;
};

/// Samples jets, frames and curvatures on an odd resolution grid over the parameter disc
/// of the given radius. Frame and metric errors propagate with the failing point in the message.
GridSample sample_grid(const JetEvaluator& jets, const FrameField& frames, int resolution, double radius = 1.0);

struct OssermanMargin {
    double margin = 0;  // min |∇x¹|² - W sin²ω over conformal points
    std::size_t conformal_points = 0;
    std::size_t excluded_points = 0;
};

struct EstimateReport {
    double omega = 0;
    OssermanMargin osserman;
    double dirichlet_energy = 0;
    double geodesic_radius = 0;
    double h0 = 0;
    std::optional<double> h0_prescribed;  // 2 sup|H̄| when a prescription is known
    double d0 = 0;
    double w_min_over_r2 = 0;
    double w_max_over_r2 = 0;
    double harnack_c4_emp = 0;
    std::vector<double> theta_emp;
};

/// min over the grid of the smallest angle between `axis` and any unit normal:
/// arccos of the length of the projection of axis onto the normal plane.
double osserman_angle(const GridSample& grid, const Vec& axis);

OssermanMargin osserman_inequality_margin(const GridSample& grid, double omega, const Vec& axis,
                                          double conf_eps = kConformalEpsilon);

/// ∬_B |∇X|² over the unit disc: trapezoid on interior cells, first-order Taylor
/// expansion integrated exactly over cells cut by the circle.
double dirichlet_energy(const GridSample& grid);

/// Dijkstra distance in the pullback metric from the centre to the circle.
/// connectivity is 8 or 16 (knight moves added). Upper bound of the true infimum.
double geodesic_radius(const GridSample& grid, int connectivity = 8);

/// (min, max) of W/r² over nodes with |w| <= 1/2.
std::pair<double, double> area_ratio_extrema(const GridSample& grid, double r);

/// min over node pairs in B_{1/2} with |w - w0| <= nu of [W(w0)/r²] / [W(w)/r²]^5.
double harnack_ratio_probe(const GridSample& grid, double r, double nu);

/// r² (κ1² + κ2²) - (h0 r)² at the centre, per normal direction.
std::vector<double> curvature_bound_report(const GridSample& grid, double r, double h0);

/// 2 max |H_Σ| over the grid and the frame directions.
double sup_mean_curvature(const GridSample& grid);

EstimateReport estimate_report(const GridSample& grid, const Vec& axis, double nu = 0.25,
                               std::optional<double> hbar_sup = std::nullopt);

} // namespace immersion
