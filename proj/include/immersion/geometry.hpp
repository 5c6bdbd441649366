#pragma once

#include <array>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace immersion {

using Vec = Eigen::VectorXd;

inline constexpr double kRankEpsilon = 1e-12;
inline constexpr double kConformalEpsilon = 1e-6;
/// |N·X_{u^i}| / sqrt(W) above which a frame is rejected as not normal.
inline constexpr double kFrameNormalityTolerance = 1e-8;

/// Position and first/second parameter derivatives of X: B -> R^n at one point.
struct SurfaceJet {
    Vec x, xu, xv, xuu, xuv, xvv;

    SurfaceJet() = default;
    SurfaceJet(Vec x_, Vec xu_, Vec xv_, Vec xuu_, Vec xuv_, Vec xvv_);

    Eigen::Index dim() const { return x.size(); }
    const Vec& d1(int i) const { return i == 0 ? xu : xv; }
    const Vec& d2(int i, int j) const { return i + j == 0 ? xuu : (i + j == 1 ? xuv : xvv); }

    /// Same point in parameters w = (u, v) / scale, i.e. derivatives multiplied by scale^k.
    SurfaceJet rescaled(double scale) const;
};

/// First fundamental form h_ij = X_{u^i}·X_{u^j}, its inverse h^ij and W = sqrt(det).
struct FirstForm {
    double h11 = 0, h12 = 0, h22 = 0;
    double W = 0;
    double hinv11 = 0, hinv12 = 0, hinv22 = 0;

    double det() const { return h11 * h22 - h12 * h12; }
    double h(int i, int j) const { return i + j == 0 ? h11 : (i + j == 1 ? h12 : h22); }
    double hinv(int i, int j) const { return i + j == 0 ? hinv11 : (i + j == 1 ? hinv12 : hinv22); }
    Eigen::Matrix2d matrix() const { return (Eigen::Matrix2d() << h11, h12, h12, h22).finished(); }
};

/// n-2 orthonormal normals, optionally with their u- and v-derivatives.
struct NormalFrame {
    std::vector<Vec> vectors;
    std::optional<std::vector<std::array<Vec, 2>>> derivs;

    std::size_t size() const { return vectors.size(); }
    bool has_derivatives() const { return derivs.has_value(); }
};

/// Symmetric 2x2 coefficients, the off-diagonal stored once.
struct Sym2 {
    double a11 = 0, a12 = 0, a22 = 0;
    double operator()(int i, int j) const { return i + j == 0 ? a11 : (i + j == 1 ? a12 : a22); }
};

/// L_{Σ,ij} = X_{u^iu^j}·N_Σ for every normal index Σ.
struct SecondForm {
    std::vector<Sym2> L;
};

struct DirectionalCurvature {
    double H = 0;       // mean curvature
    double K = 0;       // Gauss curvature
    double kappa1 = 0;  // principal curvatures, kappa1 >= kappa2
    double kappa2 = 0;
};

struct CurvatureData {
    std::vector<DirectionalCurvature> directions;
};

/// gamma[k][i][j] = Γ^k_ij, symmetric in (i, j).
struct ChristoffelSymbols {
    std::array<std::array<std::array<double, 2>, 2>, 2> gamma{};
};

/// sigma(S, T, i) = N_{S,u^i}·N_T for S != T, zero on the diagonal.
struct TorsionCoefficients {
    std::size_t count = 0;
    std::vector<double> values;  // count*count*2

    double operator()(std::size_t s, std::size_t t, int i) const { return values[(s * count + t) * 2 + i]; }
    double& operator()(std::size_t s, std::size_t t, int i) { return values[(s * count + t) * 2 + i]; }
};

struct ConformalityDefect {
    double diagonal = 0;  // |h11 - h22| / W
    double offdiag = 0;   // |h12| / W
    double max() const { return std::max(diagonal, offdiag); }
};

struct StructureCheck {
    double ratio = 0;  // |ΔX| / |∇X|^2
    double h0 = 0;     // Σ|H_Σ|, the bound the ratio is compared against
};

FirstForm first_fundamental_form(const SurfaceJet& jet, double rank_eps = kRankEpsilon);
ConformalityDefect conformality_defect(const FirstForm& form);

/// Throws FrameMismatch if a frame vector is not normal to the jet.
SecondForm second_fundamental_form(const SurfaceJet& jet, const NormalFrame& frame);

/// 1/2 trace of the shape operator L_ij h^jk, per normal direction.
std::vector<double> mean_curvature(const SecondForm& L, const FirstForm& I);
std::vector<double> gauss_curvature(const SecondForm& L, const FirstForm& I);
/// Eigenvalues of I^{-1/2} L I^{-1/2}, descending.
std::vector<std::pair<double, double>> principal_curvatures(const SecondForm& L, const FirstForm& I);

/// H, K and principal curvatures for every frame direction in one call.
CurvatureData curvature(const SurfaceJet& jet, const NormalFrame& frame);

/// Metric derivatives taken exactly from the jet.
ChristoffelSymbols christoffel(const SurfaceJet& jet);

TorsionCoefficients torsion_coefficients(const NormalFrame& frame);

/// max_{Σ,i} |N_{Σ,u^i} + L_{Σ,ij} h^jk X_{u^k} - σ^Θ_{Σ,i} N_Θ| / sqrt(W).
double weingarten_residual(const SurfaceJet& jet, const NormalFrame& frame, const SecondForm& L,
                           const TorsionCoefficients& sigma);

/// max_{i,j} |X_{u^iu^j} - Γ^k_ij X_{u^k} - Σ L_{Σ,ij} N_Σ| / sqrt(W).
double gauss_equation_residual(const SurfaceJet& jet, const NormalFrame& frame, const SecondForm& L,
                               const ChristoffelSymbols& gamma);

/// |ΔX - 2 Σ H_Σ W N_Σ| / W; throws NotConformal unless conformal to conf_eps.
double mean_curvature_system_residual(const SurfaceJet& jet, const NormalFrame& frame, const std::vector<double>& H,
                                      double conf_eps = kConformalEpsilon);

/// Throws NotConformal unless conformal to conf_eps.
StructureCheck structure_condition_ratio(const SurfaceJet& jet, const std::vector<double>& H,
                                         double conf_eps = kConformalEpsilon);

/// ΔX·N_Σ / (2W): the mean curvature as read off the Laplacian in conformal parameters.
std::vector<double> laplacian_mean_curvature(const SurfaceJet& jet, const NormalFrame& frame);

/// ((X_uu·N)(X_vv·N) - (X_uv·N)^2) / W^2, the Gauss curvature in conformal parameters.
std::vector<double> conformal_gauss_curvature(const SurfaceJet& jet, const NormalFrame& frame);

} // namespace immersion
