#include "immersion/frames.hpp"

#include <cmath>
#include <sstream>

#include "immersion/errors.hpp"

namespace immersion {

void FrameRecipe::validate(Eigen::Index n) const {
    if (!(tnorm > 0 && tnorm < 1)) throw InvalidRecipe("norm threshold must lie in (0,1)");
    if (!(tangle > 0 && tangle < 1)) throw InvalidRecipe("angle threshold must lie in (0,1)");
    const auto a = resolved_anchors(n);
    if (static_cast<Eigen::Index>(a.size()) != n - 2) throw InvalidRecipe("need exactly n-2 anchor vectors");
    Eigen::MatrixXd A(n, a.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k].size() != n) throw InvalidRecipe("anchor has wrong dimension");
        A.col(k) = a[k];
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    if (lu.rank() < static_cast<Eigen::Index>(a.size())) throw InvalidRecipe("anchor vectors are linearly dependent");
}

std::vector<Vec> FrameRecipe::resolved_anchors(Eigen::Index n) const {
    if (!anchors.empty()) {
        std::vector<Vec> out;
        for (const Vec& a : anchors) {
            const double len = a.norm();
            if (!(len > 0)) throw InvalidRecipe("zero anchor vector");
            out.push_back(a / len);
        }
        return out;
    }
    std::vector<Vec> out;
    for (Eigen::Index k = 2; k < n; ++k) out.push_back(Vec::Unit(n, k));
    return out;
}

std::array<Vec, 2> graph_normals(const ScalarJet2& phi, const ScalarJet2& psi) {
    const double a = 1.0 / std::sqrt(1 + phi.dx * phi.dx + phi.dy * phi.dy);
    const double b = 1.0 / std::sqrt(1 + psi.dx * psi.dx + psi.dy * psi.dy);
    return {(Vec(4) << -phi.dx * a, -phi.dy * a, a, 0).finished(),
            (Vec(4) << -psi.dx * b, -psi.dy * b, 0, b).finished()};
}

std::vector<Vec> projection_frame(const SurfaceJet& jet, const std::vector<Vec>& anchors, bool strict) {
    const FirstForm I = first_fundamental_form(jet);
    const ConformalityDefect d = conformality_defect(I);
    const bool conformal = d.max() <= kConformalEpsilon;
    if (strict && !conformal) {
        std::ostringstream os;
        os << "projection frame in strict mode needs conformal parameters, defect " << d.max();
        throw NotConformal(os.str());
    }
    std::vector<Vec> out;
    out.reserve(anchors.size());
    for (const Vec& a : anchors) {
        if (conformal) {
            out.push_back(a - (a.dot(jet.xu) / I.h11) * jet.xu - (a.dot(jet.xv) / I.h22) * jet.xv);
        } else {
            // Tangential part X_T h^{-1} X_T^t a.
            const double bu = a.dot(jet.xu), bv = a.dot(jet.xv);
            const double cu = I.hinv11 * bu + I.hinv12 * bv;
            const double cv = I.hinv12 * bu + I.hinv22 * bv;
            out.push_back(a - cu * jet.xu - cv * jet.xv);
        }
    }
    return out;
}

NormalFrame orthonormalize(const std::vector<Vec>& raw, const FrameRecipe& recipe) {
    std::vector<Vec> unit;
    unit.reserve(raw.size());
    for (std::size_t k = 0; k < raw.size(); ++k) {
        const double n2 = raw[k].squaredNorm();
        if (n2 < recipe.tnorm) {
            std::ostringstream os;
            os << "|N*_" << k + 1 << "|^2 = " << n2 << " below threshold " << recipe.tnorm;
            throw NormBelowThreshold(os.str());
        }
        unit.push_back(raw[k] / std::sqrt(n2));
    }
    for (std::size_t j = 0; j < unit.size(); ++j)
        for (std::size_t k = j + 1; k < unit.size(); ++k) {
            const double c = std::abs(unit[j].dot(unit[k]));
            if (c > recipe.tangle) {
                std::ostringstream os;
                os << "|N~_" << j + 1 << "·N~_" << k + 1 << "| = " << c << " above threshold " << recipe.tangle;
                throw AngleThreshold(os.str());
            }
        }

    NormalFrame frame;
    if (unit.size() == 2) {
        const Vec& n1 = unit[0];
        const double c = n1.dot(unit[1]);
        frame.vectors = {n1, (unit[1] - c * n1) / std::sqrt(1 - c * c)};
        return frame;
    }
    // General codimension: modified Gram–Schmidt on the normalized vectors.
    for (const Vec& v : unit) {
        Vec w = v;
        for (const Vec& q : frame.vectors) w -= q.dot(w) * q;
        const double len = w.norm();
        if (len * len < 1 - recipe.tangle * recipe.tangle) {
            std::ostringstream os;
            os << "normal " << frame.vectors.size() + 1 << " retains only " << len
               << " of its length after Gram-Schmidt";
            throw AngleThreshold(os.str());
        }
        frame.vectors.push_back(w / len);
    }
    return frame;
}

NormalFrame build_frame(const SurfaceJet& jet, const FrameRecipe& recipe) {
    const Eigen::Index n = jet.dim();
    switch (recipe.kind) {
    case FrameKind::GraphNormals: {
        if (n != 4) throw InvalidRecipe("graph normals are defined for graphs in R^4");
        if (std::abs(jet.xu[0] - 1) > 1e-14 || std::abs(jet.xu[1]) > 1e-14 || std::abs(jet.xv[0]) > 1e-14 ||
            std::abs(jet.xv[1] - 1) > 1e-14)
            throw InvalidRecipe("graph normals need a jet in graph parameters (x, y, phi, psi)");
        const ScalarJet2 phi{jet.x[2], jet.xu[2], jet.xv[2], 0, 0, 0};
        const ScalarJet2 psi{jet.x[3], jet.xu[3], jet.xv[3], 0, 0, 0};
        const auto g = graph_normals(phi, psi);
        return orthonormalize({g[0], g[1]}, recipe);
    }
    case FrameKind::Projection:
        return orthonormalize(projection_frame(jet, recipe.resolved_anchors(n), recipe.strict), recipe);
    }
    throw InvalidRecipe("unknown frame kind");
}

FrameField make_frame_field(JetEvaluator jets, FrameRecipe recipe) {
    return [jets = std::move(jets), recipe = std::move(recipe)](double u, double v) {
        return build_frame(jets(u, v), recipe);
    };
}

NormalFrame frame_field_derivatives(const FrameField& field, double u, double v, double step) {
    if (!(step > 0)) throw BadParameter("frame derivative step must be positive");
    NormalFrame center = field(u, v);
    const NormalFrame pu = field(u + step, v), mu = field(u - step, v);
    const NormalFrame pv = field(u, v + step), mv = field(u, v - step);
    std::vector<std::array<Vec, 2>> d;
    for (std::size_t k = 0; k < center.size(); ++k)
        d.push_back({(pu.vectors[k] - mu.vectors[k]) / (2 * step), (pv.vectors[k] - mv.vectors[k]) / (2 * step)});
    center.derivs = std::move(d);
    return center;
}

} // namespace immersion
