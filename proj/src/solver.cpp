#include "immersion/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/SparseLU>

#include "immersion/errors.hpp"

namespace immersion {

// ---------------------------------------------------------------------------
// Grid

DiscGrid::DiscGrid(double h, int half_extent, std::vector<DiscNode> nodes)
    : h_(h), half_extent_(half_extent), nodes_(std::move(nodes)) {
    const int side = 2 * half_extent_ + 1;
    index_.assign(static_cast<std::size_t>(side) * side, -1);
    for (std::size_t k = 0; k < nodes_.size(); ++k)
        index_[static_cast<std::size_t>(nodes_[k].j + half_extent_) * side + (nodes_[k].i + half_extent_)] =
            static_cast<int>(k);
}

int DiscGrid::find(int i, int j) const {
    if (std::abs(i) > half_extent_ || std::abs(j) > half_extent_) return -1;
    const int side = 2 * half_extent_ + 1;
    return index_[static_cast<std::size_t>(j + half_extent_) * side + (i + half_extent_)];
}

double DiscGrid::min_arm_fraction() const {
    double m = 1.0;
    for (const DiscNode& n : nodes_)
        for (const auto& a : n.arms) m = std::min(m, a.fraction);
    return m;
}

DiscGrid build_disc_grid(double h) {
    if (!(h > 0 && h <= 0.125)) {
        std::ostringstream os;
        os << "grid spacing " << h << " outside (0, 1/8]";
        throw BadSpacing(os.str());
    }
    const int m = static_cast<int>(std::floor(1.0 / h)) + 1;
    std::vector<DiscNode> nodes;
    for (int j = -m; j <= m; ++j)
        for (int i = -m; i <= m; ++i) {
            const double x = i * h, y = j * h;
            if (x * x + y * y < 1.0) nodes.push_back({i, j, x, y, {}});
        }
    DiscGrid shell(h, m, nodes);

    auto clamp_fraction = [](double f) { return std::clamp(f, 1e-12, 1.0); };
    for (DiscNode& n : nodes) {
        const double x = n.u, y = n.v;
        const double sx = std::sqrt(std::max(0.0, 1 - y * y));  // circle crossing along the row
        const double sy = std::sqrt(std::max(0.0, 1 - x * x));  // along the column
        auto arm = [&](int di, int dj, double fraction_to_circle, double bx, double by) {
            DiscNode::Arm a;
            const int k = shell.find(n.i + di, n.j + dj);
            if (k >= 0) {
                a.neighbor = k;
                a.fraction = 1.0;
            } else {
                a.fraction = clamp_fraction(fraction_to_circle);
                a.theta = std::atan2(by, bx);
            }
            return a;
        };
        n.arms[kEast] = arm(1, 0, (sx - x) / h, sx, y);
        n.arms[kWest] = arm(-1, 0, (x + sx) / h, -sx, y);
        n.arms[kNorth] = arm(0, 1, (sy - y) / h, x, sy);
        n.arms[kSouth] = arm(0, -1, (y + sy) / h, x, -sy);
    }
    return DiscGrid(h, m, std::move(nodes));
}

// ---------------------------------------------------------------------------
// Boundary data

BoundaryCurve::BoundaryCurve(std::function<Vec(double)> f, Eigen::Index dim, std::string description)
    : f_(std::move(f)), dim_(dim), description_(std::move(description)) {}

BoundaryCurve BoundaryCurve::from_function(std::function<Vec(double, double)> g, Eigen::Index dim,
                                           std::string description) {
    return BoundaryCurve([g = std::move(g)](double t) { return g(std::cos(t), std::sin(t)); }, dim,
                         std::move(description));
}

BoundaryCurve BoundaryCurve::holomorphic_graph() {
    return from_function(
        [](double u, double v) { return (Vec(4) << u, v, 0.5 * (u * u - v * v), u * v).finished(); }, 4,
        "holomorphic_graph");
}

BoundaryCurve BoundaryCurve::affine(const std::array<double, 6>& c) {
    std::ostringstream os;
    os << "affine:" << c[0] << "," << c[1] << "," << c[2] << "," << c[3] << "," << c[4] << "," << c[5];
    return from_function(
        [c](double u, double v) {
            return (Vec(4) << u, v, c[0] * u + c[1] * v + c[2], c[3] * u + c[4] * v + c[5]).finished();
        },
        4, os.str());
}

BoundaryCurve BoundaryCurve::from_knots(std::vector<std::pair<double, Vec>> knots) {
    constexpr double period = 2 * std::numbers::pi;
    if (knots.size() < 3) throw BadParameter("closed spline needs at least 3 knots");
    const Eigen::Index dim = knots.front().second.size();
    for (auto& [t, y] : knots) {
        if (y.size() != dim) throw BadParameter("boundary knots have different dimensions");
        t = std::fmod(t, period);
        if (t < 0) t += period;
    }
    std::sort(knots.begin(), knots.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    const std::size_t n = knots.size();
    std::vector<double> t(n), step(n);
    Eigen::MatrixXd y(n, dim);
    for (std::size_t k = 0; k < n; ++k) {
        t[k] = knots[k].first;
        y.row(k) = knots[k].second.transpose();
    }
    for (std::size_t k = 0; k < n; ++k) {
        step[k] = (k + 1 < n ? t[k + 1] : t[0] + period) - t[k];
        if (!(step[k] > 1e-12)) throw BadParameter("boundary knots must have distinct angles");
    }
    // Periodic system for the second derivatives M_k.
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd b(n, dim);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t prev = (k + n - 1) % n, next = (k + 1) % n;
        A(k, prev) += step[prev];
        A(k, k) += 2 * (step[prev] + step[k]);
        A(k, next) += step[k];
        b.row(k) = 6 * ((y.row(next) - y.row(k)) / step[k] - (y.row(k) - y.row(prev)) / step[prev]);
    }
    const Eigen::MatrixXd M = A.partialPivLu().solve(b);
    auto eval = [t, step, y, M, n](double theta) -> Vec {
        double s = std::fmod(theta - t[0], period);
        if (s < 0) s += period;
        s += t[0];
        std::size_t k = static_cast<std::size_t>(std::upper_bound(t.begin(), t.end(), s) - t.begin());
        k = k == 0 ? n - 1 : k - 1;
        const std::size_t next = (k + 1) % n;
        const double hk = step[k];
        const double a = t[k] + hk - s, c = s - t[k];
        const Eigen::RowVectorXd r = M.row(k) * (a * a * a) / (6 * hk) + M.row(next) * (c * c * c) / (6 * hk) +
                                     (y.row(k) / hk - M.row(k) * hk / 6) * a +
                                     (y.row(next) / hk - M.row(next) * hk / 6) * c;
        return r.transpose();
    };
    std::ostringstream os;
    os << "knots(" << n << ")";
    return BoundaryCurve(eval, dim, os.str());
}

// ---------------------------------------------------------------------------
// Poisson operator

struct PoissonOperator::Factorization {
    Eigen::SparseMatrix<double> A;
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
};

PoissonOperator::PoissonOperator(const DiscGrid& grid, LinearSolverConfig cfg) : grid_(grid), cfg_(cfg) {
    const double h = grid_.h();
    stencils_.resize(grid_.size());
    std::vector<Eigen::Triplet<double>> triplets;
    for (std::size_t k = 0; k < grid_.size(); ++k) {
        const DiscNode& n = grid_.node(k);
        Stencil& s = stencils_[k];
        for (int axis = 0; axis < 2; ++axis) {
            const int plus = axis == 0 ? kEast : kNorth, minus = axis == 0 ? kWest : kSouth;
            const double a = n.arms[plus].fraction * h, b = n.arms[minus].fraction * h;
            s.arm[plus] = 2 / (a * (a + b));
            s.arm[minus] = 2 / (b * (a + b));
            s.center -= 2 / (a * b);
        }
        triplets.emplace_back(static_cast<int>(k), static_cast<int>(k), s.center);
        for (int d = 0; d < 4; ++d)
            if (n.arms[d].neighbor >= 0) triplets.emplace_back(static_cast<int>(k), n.arms[d].neighbor, s.arm[d]);
    }
    if (cfg_.method == LinearSolverConfig::Method::Direct) {
        lu_ = std::make_unique<Factorization>();
        lu_->A.resize(static_cast<int>(grid_.size()), static_cast<int>(grid_.size()));
        lu_->A.setFromTriplets(triplets.begin(), triplets.end());
        lu_->A.makeCompressed();
        lu_->lu.compute(lu_->A);
        if (lu_->lu.info() != Eigen::Success) throw LinearSolveDiverged("sparse LU factorization failed");
    }
}

PoissonOperator::~PoissonOperator() = default;
PoissonOperator::PoissonOperator(PoissonOperator&&) noexcept = default;
PoissonOperator& PoissonOperator::operator=(PoissonOperator&&) noexcept = default;

Eigen::MatrixXd PoissonOperator::boundary_load(const BoundaryCurve& g) const {
    Eigen::MatrixXd load = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(grid_.size()), g.dim());
    for (std::size_t k = 0; k < grid_.size(); ++k) {
        const DiscNode& n = grid_.node(k);
        for (int d = 0; d < 4; ++d)
            if (n.arms[d].neighbor < 0) load.row(static_cast<Eigen::Index>(k)) += stencils_[k].arm[d] * g(n.arms[d].theta).transpose();
    }
    return load;
}

Eigen::MatrixXd PoissonOperator::apply(const Eigen::MatrixXd& field, const BoundaryCurve& g) const {
    Eigen::MatrixXd out = boundary_load(g);
    for (std::size_t k = 0; k < grid_.size(); ++k) {
        const DiscNode& n = grid_.node(k);
        const auto r = static_cast<Eigen::Index>(k);
        out.row(r) += stencils_[k].center * field.row(r);
        for (int d = 0; d < 4; ++d)
            if (n.arms[d].neighbor >= 0) out.row(r) += stencils_[k].arm[d] * field.row(n.arms[d].neighbor);
    }
    return out;
}

Eigen::MatrixXd PoissonOperator::solve(const Eigen::MatrixXd& rhs, const BoundaryCurve& g) const {
    if (rhs.rows() != static_cast<Eigen::Index>(grid_.size()) || rhs.cols() != g.dim())
        throw std::invalid_argument("right-hand side shape does not match grid and boundary data");
    if (!rhs.allFinite()) throw LinearSolveDiverged("right-hand side is not finite");
    ++solves_;
    const Eigen::MatrixXd b = rhs - boundary_load(g);
    if (cfg_.method == LinearSolverConfig::Method::Direct) {
        Eigen::MatrixXd U = lu_->lu.solve(b);
        if (lu_->lu.info() != Eigen::Success || !U.allFinite()) throw LinearSolveDiverged("sparse LU solve failed");
        return U;
    }
    // Successive over-relaxation, lexicographic order.
    Eigen::MatrixXd U = Eigen::MatrixXd::Zero(b.rows(), b.cols());
    for (int sweep = 0; sweep < cfg_.max_sweeps; ++sweep) {
        double change = 0;
        for (std::size_t k = 0; k < grid_.size(); ++k) {
            const DiscNode& n = grid_.node(k);
            const auto r = static_cast<Eigen::Index>(k);
            Eigen::RowVectorXd acc = b.row(r);
            for (int d = 0; d < 4; ++d)
                if (n.arms[d].neighbor >= 0) acc -= stencils_[k].arm[d] * U.row(n.arms[d].neighbor);
            const Eigen::RowVectorXd delta = cfg_.omega * (acc / stencils_[k].center - U.row(r));
            U.row(r) += delta;
            change = std::max(change, delta.cwiseAbs().maxCoeff());
        }
        if (!std::isfinite(change)) break;
        if (change <= cfg_.tol * std::max(1.0, U.cwiseAbs().maxCoeff())) return U;
    }
    throw LinearSolveDiverged("SOR did not reach tolerance within " + std::to_string(cfg_.max_sweeps) + " sweeps");
}

Eigen::MatrixXd poisson_solve(const DiscGrid& grid, const Eigen::MatrixXd& rhs, const BoundaryCurve& g,
                              const LinearSolverConfig& cfg) {
    return PoissonOperator(grid, cfg).solve(rhs, g);
}

// ---------------------------------------------------------------------------
// Prescription and configuration

Prescription Prescription::zero() {
    Prescription p;
    p.hbar = [](const Eigen::Vector4d&) { return Eigen::Vector4d::Zero().eval(); };
    p.identically_zero = true;
    p.h0 = 0.0;
    p.description = "zero";
    return p;
}

Prescription Prescription::constant(const Eigen::Vector4d& value) {
    if (value.isZero(0)) return zero();
    Prescription p;
    p.hbar = [value](const Eigen::Vector4d&) { return value; };
    p.h0 = 2 * value.norm();
    std::ostringstream os;
    os << "const:" << value[0] << "," << value[1] << "," << value[2] << "," << value[3];
    p.description = os.str();
    return p;
}

void SolverConfig::validate() const {
    if (!(tol > 0)) throw BadParameter("solver tolerance must be positive");
    if (!(damping > 0 && damping <= 1)) throw BadParameter("damping must lie in (0, 1]");
    if (max_outer < 1) throw BadParameter("max_outer must be at least 1");
    if (divergence_window < 1) throw BadParameter("divergence window must be at least 1");
}

// ---------------------------------------------------------------------------
// Discrete derivatives

namespace {

struct ArmValues {
    // values[k][d]: field value at the end of arm d of node k.
    std::vector<std::array<Eigen::RowVectorXd, 4>> values;
};

ArmValues arm_values(const Eigen::MatrixXd& field, const DiscGrid& grid, const BoundaryCurve& g) {
    ArmValues av;
    av.values.resize(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const DiscNode& n = grid.node(k);
        for (int d = 0; d < 4; ++d)
            av.values[k][d] = n.arms[d].neighbor >= 0 ? Eigen::RowVectorXd(field.row(n.arms[d].neighbor))
                                                      : Eigen::RowVectorXd(g(n.arms[d].theta).transpose());
    }
    return av;
}

// Three-point first derivative on arms a (forward) and b (backward); exact for quadratics.
Eigen::RowVectorXd first_derivative(const Eigen::RowVectorXd& fwd, const Eigen::RowVectorXd& mid,
                                    const Eigen::RowVectorXd& bwd, double a, double b) {
    return (b * b * (fwd - mid) + a * a * (mid - bwd)) / (a * b * (a + b));
}

Eigen::RowVectorXd second_derivative(const Eigen::RowVectorXd& fwd, const Eigen::RowVectorXd& mid,
                                     const Eigen::RowVectorXd& bwd, double a, double b) {
    return 2 / (a + b) * ((fwd - mid) / a - (mid - bwd) / b);
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> gradient_from(const Eigen::MatrixXd& field, const DiscGrid& grid,
                                                          const ArmValues& av) {
    Eigen::MatrixXd gx(field.rows(), field.cols()), gy(field.rows(), field.cols());
    const double h = grid.h();
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const DiscNode& n = grid.node(k);
        const auto r = static_cast<Eigen::Index>(k);
        gx.row(r) = first_derivative(av.values[k][kEast], field.row(r), av.values[k][kWest],
                                     n.arms[kEast].fraction * h, n.arms[kWest].fraction * h);
        gy.row(r) = first_derivative(av.values[k][kNorth], field.row(r), av.values[k][kSouth],
                                     n.arms[kNorth].fraction * h, n.arms[kSouth].fraction * h);
    }
    return {gx, gy};
}

SurfaceJet first_order_jet(const Eigen::MatrixXd& field, const Eigen::MatrixXd& gx, const Eigen::MatrixXd& gy,
                           Eigen::Index r) {
    const Eigen::Index n = field.cols();
    return SurfaceJet(field.row(r).transpose(), gx.row(r).transpose(), gy.row(r).transpose(), Vec::Zero(n),
                      Vec::Zero(n), Vec::Zero(n));
}

std::string where(const DiscNode& n) {
    std::ostringstream os;
    os << "node (" << n.u << ", " << n.v << ")";
    return os.str();
}

struct Assembly {
    Eigen::MatrixXd rhs;
    ConformalitySummary conformality;
};

/// RHS 2 Σ H(X, N_Σ) W N_Σ at every node. Frame errors are rethrown as FrameFailure(iteration).
Assembly assemble_rhs(const Eigen::MatrixXd& field, const DiscGrid& grid, const BoundaryCurve& g,
                      const Prescription& p, const FrameRecipe& recipe, int iteration, bool need_frames) {
    const ArmValues av = arm_values(field, grid, g);
    const auto [gx, gy] = gradient_from(field, grid, av);
    Assembly out;
    out.rhs = Eigen::MatrixXd::Zero(field.rows(), field.cols());
    double sum = 0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const auto r = static_cast<Eigen::Index>(k);
        const SurfaceJet jet = first_order_jet(field, gx, gy, r);
        FirstForm I;
        try {
            I = first_fundamental_form(jet);
        } catch (const DegenerateMetric& e) {
            throw DegenerateMetric("iteration " + std::to_string(iteration) + ", " + where(grid.node(k)) + ": " + e.what());
        }
        const double defect = conformality_defect(I).max();
        out.conformality.max = std::max(out.conformality.max, defect);
        sum += defect;
        if (!need_frames) continue;
        NormalFrame frame;
        try {
            frame = build_frame(jet, recipe);
        } catch (const FrameError& e) {
            throw FrameFailure(iteration, where(grid.node(k)) + ": " + e.what());
        }
        const Eigen::Vector4d X = field.row(r).transpose();
        Vec acc = Vec::Zero(field.cols());
        for (const Vec& N : frame.vectors) acc += 2 * p.H(X, N) * I.W * N;
        out.rhs.row(r) = acc.transpose();
    }
    out.conformality.mean = grid.size() ? sum / static_cast<double>(grid.size()) : 0.0;
    return out;
}

} // namespace

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> discrete_gradient(const Eigen::MatrixXd& field, const DiscGrid& grid,
                                                              const BoundaryCurve& g) {
    return gradient_from(field, grid, arm_values(field, grid, g));
}

std::optional<SurfaceJet> discrete_jet(const Eigen::MatrixXd& field, const DiscGrid& grid, const BoundaryCurve& g,
                                       int node) {
    const DiscNode& n = grid.node(static_cast<std::size_t>(node));
    const int diag[4] = {grid.find(n.i + 1, n.j + 1), grid.find(n.i + 1, n.j - 1), grid.find(n.i - 1, n.j + 1),
                         grid.find(n.i - 1, n.j - 1)};
    for (int d : diag)
        if (d < 0) return std::nullopt;
    for (const auto& a : n.arms)
        if (a.neighbor < 0) return std::nullopt;
    const double h = grid.h();
    auto row = [&](int k) -> Eigen::RowVectorXd { return field.row(k); };
    const Eigen::RowVectorXd P = row(node);
    const Eigen::RowVectorXd E = row(n.arms[kEast].neighbor), W = row(n.arms[kWest].neighbor);
    const Eigen::RowVectorXd Nn = row(n.arms[kNorth].neighbor), S = row(n.arms[kSouth].neighbor);
    (void)g;
    const Eigen::RowVectorXd xu = first_derivative(E, P, W, h, h);
    const Eigen::RowVectorXd xv = first_derivative(Nn, P, S, h, h);
    const Eigen::RowVectorXd xuu = second_derivative(E, P, W, h, h);
    const Eigen::RowVectorXd xvv = second_derivative(Nn, P, S, h, h);
    const Eigen::RowVectorXd xuv = (row(diag[0]) - row(diag[1]) - row(diag[2]) + row(diag[3])) / (4 * h * h);
    return SurfaceJet(P.transpose(), xu.transpose(), xv.transpose(), xuu.transpose(), xuv.transpose(), xvv.transpose());
}

// ---------------------------------------------------------------------------
// Residual report and fixed-point iteration

namespace {

SolveReport report_with(const PoissonOperator& op, const Eigen::MatrixXd& field, const Prescription& p,
                        const BoundaryCurve& g, const FrameRecipe& recipe) {
    const DiscGrid& grid = op.grid();
    const Assembly a = assemble_rhs(field, grid, g, p, recipe, 0, !p.identically_zero);
    SolveReport rep;
    rep.residual = (op.apply(field, g) - a.rhs).cwiseAbs().maxCoeff();
    rep.conformality = a.conformality;
    const int c = grid.center();
    if (c >= 0) {
        if (auto jet = discrete_jet(field, grid, g, c)) {
            CenterReport cr;
            cr.position = jet->x;
            cr.frame = build_frame(*jet, recipe);
            cr.curvature = curvature(*jet, cr.frame);
            cr.H_laplacian = laplacian_mean_curvature(*jet, cr.frame);
            const Eigen::Vector4d X = jet->x.head<4>();
            for (const Vec& N : cr.frame.vectors) cr.H_prescribed.push_back(p.H(X, N));
            cr.conformality = conformality_defect(first_fundamental_form(*jet));
            rep.center = std::move(cr);
        }
    }
    return rep;
}

void check_inputs(const BoundaryCurve& g, const Prescription& p) {
    if (g.dim() != 4) throw BadParameter("mean curvature system is posed in R^4; boundary data must have 4 components");
    if (!p.hbar) throw BadParameter("prescription has no H-bar field");
}

} // namespace

SolveReport residual_report(const Eigen::MatrixXd& field, const DiscGrid& grid, const Prescription& p,
                            const BoundaryCurve& g, const FrameRecipe& recipe) {
    check_inputs(g, p);
    if (field.rows() != static_cast<Eigen::Index>(grid.size()) || field.cols() != 4)
        throw std::invalid_argument("field shape does not match grid");
    return report_with(PoissonOperator(grid), field, p, g, recipe);
}

SolveResult mean_curvature_iterate(const DiscGrid& grid, const Prescription& p, const BoundaryCurve& g,
                                   const SolverConfig& cfg) {
    cfg.validate();
    check_inputs(g, p);
    const PoissonOperator op(grid, cfg.linear);
    const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(grid.size()), 4);

    // Initial iterate: harmonic extension of the boundary data.
    Eigen::MatrixXd X = op.solve(zero, g);
    SolveResult result;
    SolveReport iter;

    if (p.identically_zero) {
        // The right-hand side vanishes for every iterate: the harmonic extension is the fixed point.
        iter.converged = true;
        iter.status = "converged";
        iter.outer_iterations = 1;
        iter.update_history = {0.0};
    } else {
        Eigen::MatrixXd rhs = assemble_rhs(X, grid, g, p, cfg.frame, 0, true).rhs;
        Eigen::MatrixXd best = X;
        double best_residual = std::numeric_limits<double>::infinity();
        double previous = std::numeric_limits<double>::infinity();
        int growth = 0;
        iter.status = "max_outer reached";
        for (int k = 1; k <= cfg.max_outer; ++k) {
            const Eigen::MatrixXd S = op.solve(rhs, g);
            const Eigen::MatrixXd next = (1 - cfg.damping) * X + cfg.damping * S;
            const double update = (next - X).cwiseAbs().maxCoeff();
            X = next;
            rhs = assemble_rhs(X, grid, g, p, cfg.frame, k, true).rhs;
            const double residual = (op.apply(X, g) - rhs).cwiseAbs().maxCoeff();
            iter.outer_iterations = k;
            iter.update_history.push_back(update);
            if (residual < best_residual) {
                best_residual = residual;
                best = X;
            }
            if (update <= cfg.tol && residual <= cfg.tol) {
                iter.converged = true;
                iter.status = "converged";
                break;
            }
            growth = update > previous ? growth + 1 : 0;
            previous = update;
            if (growth >= cfg.divergence_window) {
                iter.status = "diverging: update grew for " + std::to_string(growth) + " consecutive iterations";
                break;
            }
        }
        if (!iter.converged) X = best;
    }

    SolveReport rep = report_with(op, X, p, g, cfg.frame);
    rep.converged = iter.converged;
    rep.status = iter.status;
    rep.outer_iterations = iter.outer_iterations;
    rep.update_history = std::move(iter.update_history);
    rep.final_update = rep.update_history.empty() ? 0.0 : rep.update_history.back();
    rep.linear_solves = op.solves();
    result.field = std::move(X);
    result.report = std::move(rep);
    return result;
}

} // namespace immersion
