#include "immersion/geometry.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "immersion/errors.hpp"

namespace immersion {

SurfaceJet::SurfaceJet(Vec x_, Vec xu_, Vec xv_, Vec xuu_, Vec xuv_, Vec xvv_)
    : x(std::move(x_)), xu(std::move(xu_)), xv(std::move(xv_)), xuu(std::move(xuu_)), xuv(std::move(xuv_)),
      xvv(std::move(xvv_)) {
    const auto n = x.size();
    if (n < 3) throw std::invalid_argument("surface jet needs ambient dimension >= 3");
    if (xu.size() != n || xv.size() != n || xuu.size() != n || xuv.size() != n || xvv.size() != n)
        throw std::invalid_argument("surface jet vectors have different lengths");
}

SurfaceJet SurfaceJet::rescaled(double s) const {
    return SurfaceJet(x, s * xu, s * xv, s * s * xuu, s * s * xuv, s * s * xvv);
}

FirstForm first_fundamental_form(const SurfaceJet& jet, double rank_eps) {
    FirstForm f;
    f.h11 = jet.xu.dot(jet.xu);
    f.h12 = jet.xu.dot(jet.xv);
    f.h22 = jet.xv.dot(jet.xv);
    const double det = f.det();
    if (!(det > rank_eps * rank_eps)) {
        std::ostringstream os;
        os << "degenerate metric: h11*h22 - h12^2 = " << det << " (rank of [xu|xv] < 2)";
        throw DegenerateMetric(os.str());
    }
    f.W = std::sqrt(det);
    f.hinv11 = f.h22 / det;
    f.hinv12 = -f.h12 / det;
    f.hinv22 = f.h11 / det;
    return f;
}

ConformalityDefect conformality_defect(const FirstForm& form) {
    return {std::abs(form.h11 - form.h22) / form.W, std::abs(form.h12) / form.W};
}

SecondForm second_fundamental_form(const SurfaceJet& jet, const NormalFrame& frame) {
    const double root_w = std::sqrt(first_fundamental_form(jet).W);
    SecondForm out;
    out.L.reserve(frame.size());
    for (std::size_t s = 0; s < frame.size(); ++s) {
        const Vec& N = frame.vectors[s];
        if (N.size() != jet.dim()) throw FrameMismatch("frame vector has wrong dimension");
        const double tu = std::abs(N.dot(jet.xu)), tv = std::abs(N.dot(jet.xv));
        if (tu > kFrameNormalityTolerance * root_w || tv > kFrameNormalityTolerance * root_w) {
            std::ostringstream os;
            os << "frame vector " << s + 1 << " is not normal: |N·xu| = " << tu << ", |N·xv| = " << tv;
            throw FrameMismatch(os.str());
        }
        out.L.push_back({jet.xuu.dot(N), jet.xuv.dot(N), jet.xvv.dot(N)});
    }
    return out;
}

std::vector<double> mean_curvature(const SecondForm& L, const FirstForm& I) {
    std::vector<double> H;
    H.reserve(L.L.size());
    for (const Sym2& l : L.L) H.push_back((l.a11 * I.h22 - 2 * l.a12 * I.h12 + l.a22 * I.h11) / (2 * I.det()));
    return H;
}

std::vector<double> gauss_curvature(const SecondForm& L, const FirstForm& I) {
    std::vector<double> K;
    K.reserve(L.L.size());
    for (const Sym2& l : L.L) K.push_back((l.a11 * l.a22 - l.a12 * l.a12) / I.det());
    return K;
}

namespace {

// Inverse square root of a symmetric positive definite 2x2 matrix:
// sqrt(A) = (A + sqrt(det) I) / sqrt(trace + 2 sqrt(det)).
Eigen::Matrix2d inverse_sqrt_spd(const Eigen::Matrix2d& A) {
    const double s = std::sqrt(A.determinant());
    const double t = std::sqrt(A.trace() + 2 * s);
    const Eigen::Matrix2d root = (A + s * Eigen::Matrix2d::Identity()) / t;
    // root is symmetric 2x2; invert in closed form.
    const double d = root(0, 0) * root(1, 1) - root(0, 1) * root(0, 1);
    Eigen::Matrix2d inv;
    inv << root(1, 1), -root(0, 1), -root(0, 1), root(0, 0);
    return inv / d;
}

std::pair<double, double> symmetric_eigenvalues(double a, double b, double d) {
    const double mean = 0.5 * (a + d);
    const double half_diff = 0.5 * (a - d);
    const double radius = std::hypot(half_diff, b);
    return {mean + radius, mean - radius};
}

} // namespace

std::vector<std::pair<double, double>> principal_curvatures(const SecondForm& L, const FirstForm& I) {
    const Eigen::Matrix2d S = inverse_sqrt_spd(I.matrix());
    std::vector<std::pair<double, double>> out;
    out.reserve(L.L.size());
    for (const Sym2& l : L.L) {
        Eigen::Matrix2d Lm;
        Lm << l.a11, l.a12, l.a12, l.a22;
        const Eigen::Matrix2d M = S * Lm * S;
        out.push_back(symmetric_eigenvalues(M(0, 0), 0.5 * (M(0, 1) + M(1, 0)), M(1, 1)));
    }
    return out;
}

CurvatureData curvature(const SurfaceJet& jet, const NormalFrame& frame) {
    const FirstForm I = first_fundamental_form(jet);
    const SecondForm L = second_fundamental_form(jet, frame);
    const auto H = mean_curvature(L, I);
    const auto K = gauss_curvature(L, I);
    const auto kappa = principal_curvatures(L, I);
    CurvatureData out;
    for (std::size_t s = 0; s < L.L.size(); ++s) out.directions.push_back({H[s], K[s], kappa[s].first, kappa[s].second});
    return out;
}

ChristoffelSymbols christoffel(const SurfaceJet& jet) {
    const FirstForm I = first_fundamental_form(jet);
    // dh[i][j][k] = ∂_k h_ij = X_{ik}·X_j + X_i·X_{jk}
    double dh[2][2][2];
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) dh[i][j][k] = jet.d2(i, k).dot(jet.d1(j)) + jet.d1(i).dot(jet.d2(j, k));

    ChristoffelSymbols g;
    for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                double acc = 0;
                for (int l = 0; l < 2; ++l) acc += I.hinv(k, l) * (dh[j][l][i] + dh[l][i][j] - dh[i][j][l]);
                g.gamma[k][i][j] = 0.5 * acc;
            }
    return g;
}

TorsionCoefficients torsion_coefficients(const NormalFrame& frame) {
    if (!frame.has_derivatives()) throw MissingDerivatives("torsion coefficients need frame derivatives");
    const std::size_t m = frame.size();
    TorsionCoefficients t;
    t.count = m;
    t.values.assign(m * m * 2, 0.0);
    for (std::size_t s = 0; s < m; ++s)
        for (std::size_t r = 0; r < m; ++r) {
            if (s == r) continue;
            for (int i = 0; i < 2; ++i) t(s, r, i) = (*frame.derivs)[s][i].dot(frame.vectors[r]);
        }
    return t;
}

double weingarten_residual(const SurfaceJet& jet, const NormalFrame& frame, const SecondForm& L,
                           const TorsionCoefficients& sigma) {
    if (!frame.has_derivatives()) throw MissingDerivatives("Weingarten residual needs frame derivatives");
    const FirstForm I = first_fundamental_form(jet);
    double worst = 0;
    for (std::size_t s = 0; s < frame.size(); ++s)
        for (int i = 0; i < 2; ++i) {
            Vec r = (*frame.derivs)[s][i];
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k) r += L.L[s](i, j) * I.hinv(j, k) * jet.d1(k);
            for (std::size_t t = 0; t < frame.size(); ++t) r -= sigma(s, t, i) * frame.vectors[t];
            worst = std::max(worst, r.norm());
        }
    return worst / std::sqrt(I.W);
}

double gauss_equation_residual(const SurfaceJet& jet, const NormalFrame& frame, const SecondForm& L,
                               const ChristoffelSymbols& gamma) {
    const FirstForm I = first_fundamental_form(jet);
    double worst = 0;
    for (int i = 0; i < 2; ++i)
        for (int j = i; j < 2; ++j) {
            Vec r = jet.d2(i, j);
            for (int k = 0; k < 2; ++k) r -= gamma.gamma[k][i][j] * jet.d1(k);
            for (std::size_t s = 0; s < frame.size(); ++s) r -= L.L[s](i, j) * frame.vectors[s];
            worst = std::max(worst, r.norm());
        }
    return worst / std::sqrt(I.W);
}

namespace {

FirstForm require_conformal(const SurfaceJet& jet, double conf_eps) {
    const FirstForm I = first_fundamental_form(jet);
    const ConformalityDefect d = conformality_defect(I);
    if (d.max() > conf_eps) {
        std::ostringstream os;
        os << "parameters not conformal: defect (" << d.diagonal << ", " << d.offdiag << ") exceeds " << conf_eps;
        throw NotConformal(os.str());
    }
    return I;
}

} // namespace

double mean_curvature_system_residual(const SurfaceJet& jet, const NormalFrame& frame, const std::vector<double>& H,
                                      double conf_eps) {
    const FirstForm I = require_conformal(jet, conf_eps);
    Vec r = jet.xuu + jet.xvv;
    for (std::size_t s = 0; s < frame.size(); ++s) r -= 2 * H.at(s) * I.W * frame.vectors[s];
    return r.norm() / I.W;
}

StructureCheck structure_condition_ratio(const SurfaceJet& jet, const std::vector<double>& H, double conf_eps) {
    require_conformal(jet, conf_eps);
    StructureCheck c;
    c.ratio = (jet.xuu + jet.xvv).norm() / (jet.xu.squaredNorm() + jet.xv.squaredNorm());
    for (double h : H) c.h0 += std::abs(h);
    return c;
}

std::vector<double> laplacian_mean_curvature(const SurfaceJet& jet, const NormalFrame& frame) {
    const FirstForm I = first_fundamental_form(jet);
    const Vec lap = jet.xuu + jet.xvv;
    std::vector<double> H;
    for (const Vec& N : frame.vectors) H.push_back(lap.dot(N) / (2 * I.W));
    return H;
}

std::vector<double> conformal_gauss_curvature(const SurfaceJet& jet, const NormalFrame& frame) {
    const FirstForm I = first_fundamental_form(jet);
    std::vector<double> K;
    for (const Vec& N : frame.vectors) {
        const double a = jet.xuu.dot(N), b = jet.xuv.dot(N), c = jet.xvv.dot(N);
        K.push_back((a * c - b * b) / (I.W * I.W));
    }
    return K;
}

} // namespace immersion
