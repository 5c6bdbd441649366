#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <immersion/catalogue.hpp>
#include <immersion/errors.hpp>
#include <immersion/frames.hpp>
#include <immersion/geometry.hpp>

#include "support.hpp"

using namespace immersion;
using testing::v4;

namespace {

NormalFrame e34() {
    NormalFrame f;
    f.vectors = {Vec::Unit(4, 2), Vec::Unit(4, 3)};
    return f;
}

NormalFrame with_zero_derivs(NormalFrame f) {
    std::vector<std::array<Vec, 2>> d(f.size(), {Vec::Zero(4), Vec::Zero(4)});
    f.derivs = d;
    return f;
}

} // namespace

TEST_CASE("first_fundamental_form") {
    const FirstForm p = first_fundamental_form(testing::plane_jet(0.3, -0.2));
    CHECK(p.h11 == 1);
    CHECK(p.h12 == 0);
    CHECK(p.h22 == 1);
    CHECK(p.W == 1);

    const FirstForm c = first_fundamental_form(testing::clifford_jet(0, 0));
    CHECK(c.h11 == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(c.h22 == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(c.h12 == 0);
    CHECK(c.W == doctest::Approx(0.5).epsilon(1e-15));

    const FirstForm g = first_fundamental_form(testing::holomorphic_jet(1, 1));
    CHECK(g.h11 == 3);
    CHECK(g.h22 == 3);
    CHECK(g.h12 == 0);
    CHECK(g.W == 3);
    CHECK(g.W == std::sqrt(g.h11 * g.h22 - g.h12 * g.h12));
}

TEST_CASE("first_fundamental_form: inverse and degeneracy") {
    const SurfaceJet j(v4(0, 0, 0, 0), v4(1, 2, 0.5, 0), v4(-0.3, 1, 0, 2), v4(0, 0, 0, 0), v4(0, 0, 0, 0),
                       v4(0, 0, 0, 0));
    const FirstForm I = first_fundamental_form(j);
    const Eigen::Matrix2d inv = (Eigen::Matrix2d() << I.hinv11, I.hinv12, I.hinv12, I.hinv22).finished();
    CHECK((I.matrix() * inv - Eigen::Matrix2d::Identity()).norm() < 1e-12);

    const SurfaceJet flat(v4(0, 0, 0, 0), v4(1, 0, 0, 0), v4(2, 0, 0, 0), v4(0, 0, 0, 0), v4(0, 0, 0, 0),
                          v4(0, 0, 0, 0));
    CHECK_THROWS_AS(first_fundamental_form(flat), DegenerateMetric);
    const SurfaceJet tiny(v4(0, 0, 0, 0), v4(1e-7, 0, 0, 0), v4(0, 1e-6, 0, 0), v4(0, 0, 0, 0), v4(0, 0, 0, 0),
                          v4(0, 0, 0, 0));
    CHECK_THROWS_AS(first_fundamental_form(tiny), DegenerateMetric);
}

TEST_CASE("conformality_defect") {
    const ConformalityDefect p = conformality_defect(first_fundamental_form(testing::plane_jet(0, 0)));
    CHECK(p.diagonal == 0);
    CHECK(p.offdiag == 0);

    const AnalyticSurface s = builtin_surface("stereographic_sphere", {{"R", "1.7"}});
    std::mt19937_64 rng(7);
    for (int k = 0; k < 50; ++k) {
        const auto [u, v] = testing::disc_point(rng, 1.0);
        CHECK(conformality_defect(first_fundamental_form(s.jet(u, v))).max() <= 1e-12);
    }

    // X = (x, y, x², 0) at (1, 0): h11 = 5, h22 = 1.
    const SurfaceJet g(v4(1, 0, 1, 0), v4(1, 0, 2, 0), v4(0, 1, 0, 0), v4(0, 0, 2, 0), v4(0, 0, 0, 0), v4(0, 0, 0, 0));
    const ConformalityDefect d = conformality_defect(first_fundamental_form(g));
    CHECK(d.diagonal == doctest::Approx(4 / std::sqrt(5.0)).epsilon(1e-15));
    CHECK(d.offdiag == 0);
}

TEST_CASE("second_fundamental_form") {
    const SecondForm p = second_fundamental_form(testing::plane_jet(0.1, 0.2), e34());
    for (const Sym2& l : p.L) CHECK((l.a11 == 0 && l.a12 == 0 && l.a22 == 0));

    const SecondForm c = second_fundamental_form(testing::clifford_jet(0, 0), testing::clifford_frame(0, 0, false));
    CHECK(c.L[0].a11 == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(c.L[0].a22 == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(c.L[0].a12 == 0);

    const SecondForm g = second_fundamental_form(testing::holomorphic_jet(0, 0), e34());
    CHECK(g.L[0].a11 == 1);
    CHECK(g.L[0].a22 == -1);
    CHECK(g.L[0].a12 == 0);
    CHECK(g.L[1].a12 == 1);

    NormalFrame bad;
    bad.vectors = {Vec::Unit(4, 0), Vec::Unit(4, 3)};
    CHECK_THROWS_AS(second_fundamental_form(testing::plane_jet(0, 0), bad), FrameMismatch);
    NormalFrame nearly = e34();
    nearly.vectors[0] = (Vec::Unit(4, 2) + 1e-6 * Vec::Unit(4, 0)).normalized();
    CHECK_THROWS_AS(second_fundamental_form(testing::plane_jet(0, 0), nearly), FrameMismatch);
}

TEST_CASE("mean, Gauss and principal curvatures: analytic oracles") {
    const SurfaceJet pj = testing::plane_jet(0.2, 0.4);
    const CurvatureData p = curvature(pj, e34());
    for (const auto& d : p.directions) {
        CHECK(d.H == 0);
        CHECK(d.K == 0);
        CHECK(d.kappa1 == 0);
        CHECK(d.kappa2 == 0);
    }

    for (double u : {0.0, 0.7, 2.1})
        for (double v : {0.0, -1.3, 4.0}) {
            const CurvatureData c = curvature(testing::clifford_jet(u, v), testing::clifford_frame(u, v, false));
            CHECK(std::abs(c.directions[0].H + 1) < 1e-14);
            CHECK(std::abs(c.directions[1].H) < 1e-14);
            CHECK(std::abs(c.directions[0].K - 1) < 1e-14);
            CHECK(std::abs(c.directions[1].K + 1) < 1e-14);
            CHECK(std::abs(c.directions[0].kappa1 + 1) < 1e-7);  // double eigenvalue: sqrt of rounding
            CHECK(std::abs(c.directions[0].kappa2 + 1) < 1e-7);
            CHECK(std::abs(c.directions[1].kappa1 - 1) < 1e-14);
            CHECK(std::abs(c.directions[1].kappa2 + 1) < 1e-14);
        }

    // Sphere of radius R: H1 = 1/R with the inward normal, H2 = 0 for e4.
    for (double R : {0.5, 2.0, 3.0}) {
        const AnalyticSurface s = builtin_surface("stereographic_sphere", {{"R", std::to_string(R)}});
        const SurfaceJet j = s.jet(0.3, -0.4);
        const Vec X = j.x;
        NormalFrame f;
        f.vectors = {-X / X.norm(), Vec::Unit(4, 3)};
        const CurvatureData c = curvature(j, f);
        CHECK(testing::rel_err(c.directions[0].H, 1 / R) < 1e-12);
        CHECK(testing::rel_err(c.directions[0].K, 1 / (R * R)) < 1e-12);
        CHECK(std::abs(c.directions[1].H) < 1e-14);
        CHECK(std::abs(c.directions[1].K) < 1e-14);
    }

    const CurvatureData g = curvature(testing::holomorphic_jet(0, 0), e34());
    CHECK(g.directions[0].K == -1);
    CHECK(g.directions[1].K == -1);
    CHECK(g.directions[0].H == 0);
    CHECK(g.directions[1].H == 0);
}

TEST_CASE("mean curvature uses the trace of the shape operator on a non-conformal jet") {
    // X = (x, y, x², 0) at (1, 0): h = diag(5, 1), L11 = 2/sqrt(5) on the unit normal, trace/2 = (2/sqrt(5))/(2*5).
    const SurfaceJet g(v4(1, 0, 1, 0), v4(1, 0, 2, 0), v4(0, 1, 0, 0), v4(0, 0, 2, 0), v4(0, 0, 0, 0), v4(0, 0, 0, 0));
    NormalFrame f;
    f.vectors = {v4(-2, 0, 1, 0) / std::sqrt(5.0), Vec::Unit(4, 3)};
    const auto H = mean_curvature(second_fundamental_form(g, f), first_fundamental_form(g));
    CHECK(H[0] == doctest::Approx(1 / (5 * std::sqrt(5.0))).epsilon(1e-14));
    const auto k = principal_curvatures(second_fundamental_form(g, f), first_fundamental_form(g));
    CHECK(k[0].first == doctest::Approx(2 / (5 * std::sqrt(5.0))).epsilon(1e-14));
    CHECK(k[0].second == 0);
}

TEST_CASE("christoffel symbols") {
    const ChristoffelSymbols p = christoffel(testing::plane_jet(0, 0));
    const ChristoffelSymbols c = christoffel(testing::clifford_jet(0.4, 1.1));
    for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                CHECK(p.gamma[k][i][j] == 0);
                CHECK(std::abs(c.gamma[k][i][j]) < 1e-15);
            }
    const ChristoffelSymbols g = christoffel(testing::holomorphic_jet(1, 0));
    CHECK(g.gamma[0][0][0] == doctest::Approx(0.5).epsilon(1e-15));

    // W = 1 + x² + y² (conformal): Γ^1_11 = x/W, Γ^2_11 = -y/W, Γ^1_12 = y/W, Γ^2_12 = x/W.
    const double x = 0.3, y = -0.7, W = 1 + x * x + y * y;
    const ChristoffelSymbols h = christoffel(testing::holomorphic_jet(x, y));
    CHECK(h.gamma[0][0][0] == doctest::Approx(x / W).epsilon(1e-14));
    CHECK(h.gamma[1][0][0] == doctest::Approx(-y / W).epsilon(1e-14));
    CHECK(h.gamma[0][0][1] == doctest::Approx(y / W).epsilon(1e-14));
    CHECK(h.gamma[1][0][1] == doctest::Approx(x / W).epsilon(1e-14));
    for (int k = 0; k < 2; ++k) CHECK(h.gamma[k][0][1] == h.gamma[k][1][0]);
}

TEST_CASE("torsion coefficients") {
    CHECK_THROWS_AS(torsion_coefficients(e34()), MissingDerivatives);
    const TorsionCoefficients p = torsion_coefficients(with_zero_derivs(e34()));
    for (double s : p.values) CHECK(s == 0);

    const TorsionCoefficients c = torsion_coefficients(testing::clifford_frame(0.3, 0.8, true));
    for (double s : c.values) CHECK(std::abs(s) < 1e-15);

    // φ = x², ψ = 0 at the origin: N1 = (-2x, 0, 1, 0)/sqrt(1+4x²), N2 = e4.
    NormalFrame g;
    g.vectors = {Vec::Unit(4, 2), Vec::Unit(4, 3)};
    g.derivs = std::vector<std::array<Vec, 2>>{{v4(-2, 0, 0, 0), Vec::Zero(4)}, {Vec::Zero(4), Vec::Zero(4)}};
    const TorsionCoefficients t = torsion_coefficients(g);
    for (double s : t.values) CHECK(s == 0);

    // Rotating frame: N1 = (cos t, sin t) in the normal plane, t = u.
    NormalFrame r;
    r.vectors = {Vec::Unit(4, 2), Vec::Unit(4, 3)};
    r.derivs = std::vector<std::array<Vec, 2>>{{Vec::Unit(4, 3), Vec::Zero(4)}, {-Vec::Unit(4, 2), Vec::Zero(4)}};
    const TorsionCoefficients q = torsion_coefficients(r);
    CHECK(q(0, 1, 0) == 1);
    CHECK(q(1, 0, 0) == -1);
    CHECK(q(0, 0, 0) == 0);
}

TEST_CASE("Weingarten and Gauss residuals") {
    const SurfaceJet pj = testing::plane_jet(0.1, 0.1);
    const NormalFrame pf = with_zero_derivs(e34());
    const SecondForm pL = second_fundamental_form(pj, pf);
    CHECK(weingarten_residual(pj, pf, pL, torsion_coefficients(pf)) == 0);
    CHECK(gauss_equation_residual(pj, pf, pL, christoffel(pj)) == 0);

    const SurfaceJet cj = testing::clifford_jet(0.5, -0.25);
    const NormalFrame cf = testing::clifford_frame(0.5, -0.25, true);
    const SecondForm cL = second_fundamental_form(cj, cf);
    CHECK(weingarten_residual(cj, cf, cL, torsion_coefficients(cf)) <= 1e-12);
    CHECK(gauss_equation_residual(cj, cf, cL, christoffel(cj)) <= 1e-12);

    const AnalyticSurface cl = builtin_surface("clifford_torus");
    const FrameField field = [](double u, double v) { return testing::clifford_frame(u, v, false); };
    const NormalFrame fd = frame_field_derivatives(field, 0.5, -0.25, 1e-4);
    CHECK(weingarten_residual(cj, fd, cL, torsion_coefficients(fd)) <= 1e-7);

    const AnalyticSurface hg = builtin_surface("holomorphic_graph");
    std::mt19937_64 rng(11);
    for (int k = 0; k < 20; ++k) {
        const auto [x, y] = testing::disc_point(rng, 1.0);
        const SurfaceJet j = hg.jet(x, y);
        const NormalFrame f = (*hg.canonical_frame)(x, y);
        CHECK(gauss_equation_residual(j, f, second_fundamental_form(j, f), christoffel(j)) <= 1e-10);
    }
}

TEST_CASE("mean curvature system residual and structure ratio") {
    const SurfaceJet pj = testing::plane_jet(0, 0);
    CHECK(mean_curvature_system_residual(pj, e34(), {0, 0}) == 0);
    CHECK(structure_condition_ratio(pj, {0, 0}).ratio == 0);

    const SurfaceJet cj = testing::clifford_jet(1.0, 2.0);
    const NormalFrame cf = testing::clifford_frame(1.0, 2.0, false);
    CHECK(mean_curvature_system_residual(cj, cf, {-1, 0}) <= 1e-12);
    const StructureCheck sc = structure_condition_ratio(cj, {-1, 0});
    CHECK(sc.ratio == doctest::Approx(1).epsilon(1e-14));
    CHECK(sc.ratio <= sc.h0 + 1e-14);

    const SurfaceJet hj = testing::holomorphic_jet(0.4, 0.3);
    const NormalFrame hf = build_frame(hj, FrameRecipe{});
    CHECK(mean_curvature_system_residual(hj, hf, {0, 0}) <= 1e-12);

    const AnalyticSurface s = builtin_surface("stereographic_sphere", {{"R", "2"}});
    const SurfaceJet sj = s.jet(-0.2, 0.6);
    CHECK(structure_condition_ratio(sj, {0.5, 0}).ratio == doctest::Approx(0.5).epsilon(1e-12));

    const SurfaceJet g(v4(1, 0, 1, 0), v4(1, 0, 2, 0), v4(0, 1, 0, 0), v4(0, 0, 2, 0), v4(0, 0, 0, 0), v4(0, 0, 0, 0));
    NormalFrame gf;
    gf.vectors = {v4(-2, 0, 1, 0) / std::sqrt(5.0), Vec::Unit(4, 3)};
    CHECK_THROWS_AS(mean_curvature_system_residual(g, gf, {0, 0}), NotConformal);
    CHECK_THROWS_AS(structure_condition_ratio(g, {0, 0}), NotConformal);
}

TEST_CASE("property: curvature identities on random jets and frames") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> N(0, 1);
    auto rnd = [&] { return v4(N(rng), N(rng), N(rng), N(rng)); };
    for (int k = 0; k < 200; ++k) {
        const SurfaceJet j(rnd(), rnd(), rnd(), rnd(), rnd(), rnd());
        NormalFrame f;
        try {
            f = build_frame(j, FrameRecipe{});
        } catch (const FrameError&) {
            continue;
        }
        const SecondForm L = second_fundamental_form(j, f);
        const FirstForm I = first_fundamental_form(j);
        const auto H = mean_curvature(L, I);
        const auto K = gauss_curvature(L, I);
        const auto kap = principal_curvatures(L, I);
        for (std::size_t s = 0; s < 2; ++s) {
            const auto [k1, k2] = kap[s];
            CHECK(k1 >= k2);
            CHECK(testing::rel_err((k1 + k2) / 2, H[s]) <= 1e-10);
            CHECK(testing::rel_err(k1 * k2, K[s]) <= 1e-10);
            CHECK(testing::rel_err(k1 * k1 + k2 * k2, 4 * H[s] * H[s] - 2 * K[s]) <= 1e-10);
        }

        // Rotating the frame in the normal plane leaves H1²+H2² and K1+K2 unchanged.
        const double t = N(rng);
        NormalFrame r;
        r.vectors = {std::cos(t) * f.vectors[0] + std::sin(t) * f.vectors[1],
                     -std::sin(t) * f.vectors[0] + std::cos(t) * f.vectors[1]};
        const SecondForm Lr = second_fundamental_form(j, r);
        const auto Hr = mean_curvature(Lr, I);
        const auto Kr = gauss_curvature(Lr, I);
        CHECK(testing::rel_err(H[0] * H[0] + H[1] * H[1], Hr[0] * Hr[0] + Hr[1] * Hr[1]) <= 1e-8);
        CHECK(testing::rel_err(K[0] + K[1], Kr[0] + Kr[1]) <= 1e-8);
    }
}

TEST_CASE("property: Laplacian forms of H and K at conformal points") {
    std::mt19937_64 rng(5);
    for (const char* name : {"stereographic_sphere", "holomorphic_graph", "plane"}) {
        const AnalyticSurface s = builtin_surface(name);
        for (int k = 0; k < 50; ++k) {
            const auto [u, v] = testing::disc_point(rng, 1.0);
            const SurfaceJet j = s.jet(u, v);
            const NormalFrame f = (*s.canonical_frame)(u, v);
            const CurvatureData c = curvature(j, f);
            const auto Hl = laplacian_mean_curvature(j, f);
            const auto Kc = conformal_gauss_curvature(j, f);
            for (std::size_t d = 0; d < f.size(); ++d) {
                CHECK(testing::rel_err(c.directions[d].H, Hl[d]) <= 1e-8);
                CHECK(testing::rel_err(c.directions[d].K, Kc[d]) <= 1e-8);
            }
        }
    }
}
