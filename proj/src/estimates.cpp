#include "immersion/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "immersion/errors.hpp"

namespace immersion {

GridSample::GridSample(int resolution, double radius, std::vector<GridNode> nodes)
    : resolution_(resolution), radius_(radius), nodes_(std::move(nodes)) {
    if (static_cast<std::size_t>(resolution) * resolution != nodes_.size())
        throw std::invalid_argument("grid node count does not match resolution");
}

bool GridSample::valid(int i, int j) const {
    return i >= 0 && j >= 0 && i < resolution_ && j < resolution_ && at(i, j).valid;
}

std::size_t GridSample::valid_count() const {
    return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const GridNode& n) { return n.valid; }));
}

namespace {

template <class E>
[[noreturn]] void rethrow_at(const E& e, double u, double v) {
    std::ostringstream os;
    os << "at (u, v) = (" << u << ", " << v << "): " << e.what();
    throw E(os.str());
}

} // namespace

GridSample sample_grid(const JetEvaluator& jets, const FrameField& frames, int resolution, double radius) {
    if (resolution < 3 || resolution % 2 == 0) throw BadParameter("grid resolution must be odd and >= 3");
    if (!(radius > 0)) throw BadParameter("grid radius must be positive");
    const double s = 2.0 / (resolution - 1);
    const int half = resolution / 2;
    std::vector<GridNode> nodes(static_cast<std::size_t>(resolution) * resolution);
    for (int j = 0; j < resolution; ++j)
        for (int i = 0; i < resolution; ++i) {
            GridNode& n = nodes[static_cast<std::size_t>(j) * resolution + i];
            n.i = i;
            n.j = j;
            // Integer offsets from the centre keep the centre and the axes exact.
            n.wu = (i - half) * s;
            n.wv = (j - half) * s;
            n.u = radius * n.wu;
            n.v = radius * n.wv;
            n.valid = n.wu * n.wu + n.wv * n.wv <= 1.0 + 1e-12;
            if (!n.valid) continue;
            try {
                n.jet = jets(n.u, n.v).rescaled(radius);
                n.metric = first_fundamental_form(n.jet);
                n.frame = frames(n.u, n.v);
                if (n.frame.derivs)
                    for (auto& d : *n.frame.derivs) {
                        d[0] *= radius;
                        d[1] *= radius;
                    }
                n.curvature = curvature(n.jet, n.frame);
            } catch (const NormBelowThreshold& e) {
                rethrow_at(e, n.u, n.v);
            } catch (const AngleThreshold& e) {
                rethrow_at(e, n.u, n.v);
            } catch (const InvalidRecipe& e) {
                rethrow_at(e, n.u, n.v);
            } catch (const DegenerateMetric& e) {
                rethrow_at(e, n.u, n.v);
            } catch (const FrameMismatch& e) {
                rethrow_at(e, n.u, n.v);
            } catch (const NotConformal& e) {
                rethrow_at(e, n.u, n.v);
            } catch (const DomainError& e) {
                rethrow_at(e, n.u, n.v);
            }
        }
    return GridSample(resolution, radius, std::move(nodes));
}

namespace {

void require_nonempty(const GridSample& grid) {
    if (grid.valid_count() == 0) throw EmptyGrid("grid has no valid points");
}

double normal_projection_length(const NormalFrame& frame, const Vec& axis) {
    double acc = 0;
    for (const Vec& N : frame.vectors) {
        const double c = axis.dot(N);
        acc += c * c;
    }
    return std::sqrt(acc);
}

} // namespace

double osserman_angle(const GridSample& grid, const Vec& axis) {
    require_nonempty(grid);
    const Vec a = axis.normalized();
    double omega = std::numbers::pi / 2;
    for (const GridNode& n : grid.nodes()) {
        if (!n.valid) continue;
        const double p = std::min(1.0, normal_projection_length(n.frame, a));
        omega = std::min(omega, std::acos(p));
    }
    return omega;
}

OssermanMargin osserman_inequality_margin(const GridSample& grid, double omega, const Vec& axis, double conf_eps) {
    require_nonempty(grid);
    const Vec a = axis.normalized();
    const double s2 = std::sin(omega) * std::sin(omega);
    OssermanMargin m;
    m.margin = std::numeric_limits<double>::infinity();
    for (const GridNode& n : grid.nodes()) {
        if (!n.valid) continue;
        if (conformality_defect(n.metric).max() > conf_eps) {
            ++m.excluded_points;
            continue;
        }
        ++m.conformal_points;
        const double gu = a.dot(n.jet.xu), gv = a.dot(n.jet.xv);
        m.margin = std::min(m.margin, gu * gu + gv * gv - n.metric.W * s2);
    }
    return m;
}

namespace {

struct CellMoments {
    double area = 0, mx = 0, my = 0;
};

/// Area and first moments of [x0,x1] x [y0,y1] ∩ unit disc.
CellMoments clipped_cell_moments(double x0, double x1, double y0, double y1) {
    std::vector<double> cuts{x0, x1};
    for (double y : {y0, y1})
        if (std::abs(y) < 1) {
            const double c = std::sqrt(1 - y * y);
            cuts.push_back(c);
            cuts.push_back(-c);
        }
    cuts.push_back(1);
    cuts.push_back(-1);
    std::sort(cuts.begin(), cuts.end());

    auto segment = [&](double x, double& lo, double& hi) {
        const double s = std::sqrt(std::max(0.0, 1 - x * x));
        lo = std::max(y0, -s);
        hi = std::min(y1, s);
        return hi > lo;
    };
    using boost::math::quadrature::gauss_kronrod;
    CellMoments m;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double a = std::max(cuts[k], x0), b = std::min(cuts[k + 1], x1);
        if (!(b > a)) continue;
        m.area += gauss_kronrod<double, 31>::integrate(
            [&](double x) {
                double lo, hi;
                return segment(x, lo, hi) ? hi - lo : 0.0;
            },
            a, b, 12, 1e-13);
        m.mx += gauss_kronrod<double, 31>::integrate(
            [&](double x) {
                double lo, hi;
                return segment(x, lo, hi) ? x * (hi - lo) : 0.0;
            },
            a, b, 12, 1e-13);
        m.my += gauss_kronrod<double, 31>::integrate(
            [&](double x) {
                double lo, hi;
                return segment(x, lo, hi) ? 0.5 * (hi * hi - lo * lo) : 0.0;
            },
            a, b, 12, 1e-13);
    }
    return m;
}

double energy_density(const SurfaceJet& j) { return j.xu.squaredNorm() + j.xv.squaredNorm(); }

Eigen::Vector2d energy_gradient(const SurfaceJet& j) {
    return {2 * (j.xu.dot(j.xuu) + j.xv.dot(j.xuv)), 2 * (j.xu.dot(j.xuv) + j.xv.dot(j.xvv))};
}

bool strictly_inside(const GridNode& n) { return n.wu * n.wu + n.wv * n.wv <= 1.0 + 1e-12; }

} // namespace

double dirichlet_energy(const GridSample& grid) {
    require_nonempty(grid);
    const int N = grid.resolution();
    const double s = grid.spacing();
    double total = 0;
    for (int j = 0; j + 1 < N; ++j)
        for (int i = 0; i + 1 < N; ++i) {
            const GridNode* corners[4] = {&grid.at(i, j), &grid.at(i + 1, j), &grid.at(i, j + 1), &grid.at(i + 1, j + 1)};
            int inside = 0;
            for (const GridNode* c : corners) inside += c->valid && strictly_inside(*c);
            const double x0 = corners[0]->wu, y0 = corners[0]->wv;
            const double x1 = x0 + s, y1 = y0 + s;
            if (inside == 4) {
                double acc = 0;
                for (const GridNode* c : corners) acc += energy_density(c->jet);
                total += 0.25 * s * s * acc;
                continue;
            }
            // Nearest corner distance to the disc: skip cells that miss it entirely.
            const double cx = std::clamp(0.0, x0, x1), cy = std::clamp(0.0, y0, y1);
            if (cx * cx + cy * cy >= 1) continue;
            const CellMoments m = clipped_cell_moments(x0, x1, y0, y1);
            if (m.area <= 0) continue;
            std::vector<const GridNode*> anchors;
            for (const GridNode* c : corners)
                if (c->valid) anchors.push_back(c);
            if (anchors.empty()) {
                // Cell touched only along an edge: borrow the nearest valid node.
                double best = std::numeric_limits<double>::infinity();
                const GridNode* pick = nullptr;
                for (int dj = -1; dj <= 2; ++dj)
                    for (int di = -1; di <= 2; ++di) {
                        if (!grid.valid(i + di, j + dj)) continue;
                        const GridNode& n = grid.at(i + di, j + dj);
                        const double d = std::hypot(n.wu - m.mx / m.area, n.wv - m.my / m.area);
                        if (d < best) {
                            best = d;
                            pick = &n;
                        }
                    }
                if (!pick) continue;
                anchors.push_back(pick);
            }
            double acc = 0;
            for (const GridNode* c : anchors) {
                const Eigen::Vector2d g = energy_gradient(c->jet);
                acc += energy_density(c->jet) * m.area + g[0] * (m.mx - c->wu * m.area) + g[1] * (m.my - c->wv * m.area);
            }
            total += acc / anchors.size();
        }
    return total;
}

namespace {

bool on_ring(const GridSample& grid, const GridNode& n) {
    static constexpr int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
    for (int k = 0; k < 4; ++k)
        if (!grid.valid(n.i + di[k], n.j + dj[k])) return true;
    return false;
}

double metric_length(const FirstForm& a, const FirstForm& b, double du, double dv) {
    const double h11 = 0.5 * (a.h11 + b.h11), h12 = 0.5 * (a.h12 + b.h12), h22 = 0.5 * (a.h22 + b.h22);
    return std::sqrt(h11 * du * du + 2 * h12 * du * dv + h22 * dv * dv);
}

} // namespace

double geodesic_radius(const GridSample& grid, int connectivity) {
    if (connectivity != 8 && connectivity != 16) throw BadParameter("connectivity must be 8 or 16");
    const GridNode& c = grid.center();
    if (!c.valid) throw EmptyGrid("grid centre is not a valid point");
    std::vector<std::pair<int, int>> moves{{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
    if (connectivity == 16)
        for (auto m : std::vector<std::pair<int, int>>{{1, 2}, {2, 1}, {-1, 2}, {-2, 1}, {1, -2}, {2, -1}, {-1, -2}, {-2, -1}})
            moves.push_back(m);

    const int N = grid.resolution();
    const double s = grid.spacing();
    std::vector<double> dist(static_cast<std::size_t>(N) * N, std::numeric_limits<double>::infinity());
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    const int start = c.j * N + c.i;
    dist[start] = 0;
    queue.push({0.0, start});
    while (!queue.empty()) {
        auto [d, idx] = queue.top();
        queue.pop();
        if (d > dist[idx]) continue;
        const int i = idx % N, j = idx / N;
        const GridNode& a = grid.at(i, j);
        for (auto [di, dj] : moves) {
            if (!grid.valid(i + di, j + dj)) continue;
            const GridNode& b = grid.at(i + di, j + dj);
            const double nd = d + metric_length(a.metric, b.metric, di * s, dj * s);
            const int bidx = (j + dj) * N + (i + di);
            if (nd < dist[bidx]) {
                dist[bidx] = nd;
                queue.push({nd, bidx});
            }
        }
    }

    double best = std::numeric_limits<double>::infinity();
    for (const GridNode& n : grid.nodes()) {
        if (!n.valid) continue;
        const double d = dist[static_cast<std::size_t>(n.j) * N + n.i];
        if (!std::isfinite(d)) throw DisconnectedMask("valid grid point unreachable from the centre");
        if (!on_ring(grid, n)) continue;
        const double rho = std::hypot(n.wu, n.wv);
        const double gap = std::max(0.0, 1 - rho);
        const double tail = rho > 0 ? metric_length(n.metric, n.metric, gap * n.wu / rho, gap * n.wv / rho) : 0.0;
        best = std::min(best, d + tail);
    }
    if (!std::isfinite(best)) throw DisconnectedMask("no boundary point reachable from the centre");
    return best;
}

std::pair<double, double> area_ratio_extrema(const GridSample& grid, double r) {
    if (!(r > 0)) throw BadParameter("r must be positive");
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const GridNode& n : grid.nodes()) {
        if (!n.valid || n.wu * n.wu + n.wv * n.wv > 0.25 + 1e-12) continue;
        const double q = n.metric.W / (r * r);
        lo = std::min(lo, q);
        hi = std::max(hi, q);
    }
    if (!std::isfinite(lo)) throw EmptyGrid("no grid points in the half disc");
    return {lo, hi};
}

double harnack_ratio_probe(const GridSample& grid, double r, double nu) {
    if (!(nu > 0 && nu <= 0.25)) throw BadParameter("nu must lie in (0, 1/4]");
    if (!(r > 0)) throw BadParameter("r must be positive");
    std::vector<const GridNode*> half;
    for (const GridNode& n : grid.nodes())
        if (n.valid && n.wu * n.wu + n.wv * n.wv <= 0.25 + 1e-12) half.push_back(&n);
    if (half.empty()) throw EmptyGrid("no grid points in the half disc");
    const int reach = static_cast<int>(std::floor(nu / grid.spacing() + 1e-9));
    const double r2 = r * r;
    double best = std::numeric_limits<double>::infinity();
    for (const GridNode* a : half) {
        const double qa = a->metric.W / r2;
        double qmax = 0;
        for (int dj = -reach; dj <= reach; ++dj)
            for (int di = -reach; di <= reach; ++di) {
                if (!grid.valid(a->i + di, a->j + dj)) continue;
                const GridNode& b = grid.at(a->i + di, a->j + dj);
                if (b.wu * b.wu + b.wv * b.wv > 0.25 + 1e-12) continue;
                if (std::hypot(b.wu - a->wu, b.wv - a->wv) > nu + 1e-12) continue;
                qmax = std::max(qmax, b.metric.W / r2);
            }
        best = std::min(best, qa / std::pow(qmax, 5));
    }
    return best;
}

std::vector<double> curvature_bound_report(const GridSample& grid, double r, double h0) {
    const GridNode& c = grid.center();
    if (!c.valid) throw EmptyGrid("grid centre is not a valid point");
    std::vector<double> theta;
    for (const DirectionalCurvature& d : c.curvature.directions)
        theta.push_back(r * r * (d.kappa1 * d.kappa1 + d.kappa2 * d.kappa2) - (h0 * r) * (h0 * r));
    return theta;
}

double sup_mean_curvature(const GridSample& grid) {
    require_nonempty(grid);
    double m = 0;
    for (const GridNode& n : grid.nodes())
        if (n.valid)
            for (const DirectionalCurvature& d : n.curvature.directions) m = std::max(m, std::abs(d.H));
    return 2 * m;
}

EstimateReport estimate_report(const GridSample& grid, const Vec& axis, double nu, std::optional<double> hbar_sup) {
    EstimateReport rep;
    rep.omega = osserman_angle(grid, axis);
    rep.osserman = osserman_inequality_margin(grid, rep.omega, axis);
    rep.dirichlet_energy = dirichlet_energy(grid);
    rep.geodesic_radius = geodesic_radius(grid);
    rep.h0 = sup_mean_curvature(grid);
    if (hbar_sup) rep.h0_prescribed = 2 * *hbar_sup;
    const double r = rep.geodesic_radius;
    rep.d0 = rep.dirichlet_energy / (r * r);
    std::tie(rep.w_min_over_r2, rep.w_max_over_r2) = area_ratio_extrema(grid, r);
    rep.harnack_c4_emp = harnack_ratio_probe(grid, r, nu);
    rep.theta_emp = curvature_bound_report(grid, r, rep.h0);
    return rep;
}

} // namespace immersion
