#include <cmath>

#include <gtest/gtest.h>

#include "hinv/distributions.hpp"
#include "hinv/errors.hpp"
#include "hinv/invariance.hpp"
#include "hinv/models.hpp"
#include "hinv/operators.hpp"
#include "hinv/spde.hpp"

namespace hinv {
namespace {

SpdeModel zero_spde(const TruncationScheme& s, Profile profile) {
  return make_spde_model(s, {CoefficientVector(s)}, {{CoefficientVector(s)}}, std::move(profile));
}

CoefficientVector gaussian_state(const TruncationScheme& s, double center) {
  return OrbitMap(Profile::gaussian(1), s)(Point::Constant(1, center));
}

TEST(SpdeModel, SchemeMismatchThrows) {
  const TruncationScheme s(1, 10);
  EXPECT_THROW(make_spde_model(s, {CoefficientVector(TruncationScheme(1, 9))}, {}, Profile::delta(1)), SchemeMismatch);
  const auto m = zero_spde(s, Profile::delta(1));
  EXPECT_THROW(spde_drift(m, CoefficientVector(TruncationScheme(1, 11))), SchemeMismatch);
}

TEST(SpdeDrift, ZeroStateGivesZero) {
  const auto m = builtin_spde("gaussian-profile-spde", 30);
  const CoefficientVector y(m.scheme);
  EXPECT_EQ(spde_drift(m, y).coefficients().cwiseAbs().maxCoeff(), 0.0);
  for (const auto& a : spde_diffusion(m, y)) EXPECT_EQ(a.coefficients().cwiseAbs().maxCoeff(), 0.0);
}

TEST(SpdeDrift, PureTransportTerm) {
  const TruncationScheme s(1, 30);
  const auto y = gaussian_state(s, 0.2);
  const auto b = (1.0 / dual_pair(y, y)) * y;
  const auto m = make_spde_model(s, {b}, {{CoefficientVector(s)}}, Profile::gaussian(1));
  const auto expected = -1.0 * derivative_matrix(0, s).apply(y);
  EXPECT_LE((spde_drift(m, y) - expected).coefficients().cwiseAbs().maxCoeff(), 1e-14);
}

TEST(SpdeDiffusion, SingleModeAndHomogeneity) {
  const TruncationScheme s(1, 30);
  const auto y = gaussian_state(s, -0.3);
  const auto sigma = project_function([](const Point& x) { return std::exp(-x.squaredNorm()); }, s);
  const auto m = make_spde_model(s, {CoefficientVector(s)}, {{sigma}}, Profile::gaussian(1));
  const double c = dual_pair(sigma, y);
  const auto a = spde_diffusion(m, y);
  ASSERT_EQ(a.size(), 1u);
  EXPECT_LE((a[0] + c * derivative_matrix(0, s).apply(y)).coefficients().cwiseAbs().maxCoeff(), 1e-14);
  const auto a2 = spde_diffusion(m, 2.0 * y);
  EXPECT_LE((a2[0] - 4.0 * a[0]).coefficients().cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_TRUE(a2[0].coefficients().allFinite());
}

TEST(SpdeDrift, DeltaStatePairsToPointValues) {
  const auto m = builtin_spde("delta-profile-spde", 60);
  for (double x : {-1.5, -0.4, 0.0, 0.9, 2.0}) {
    const auto y = delta_coefficients(Point::Constant(1, x), m.scheme);
    EXPECT_NEAR(drift_pairings(m, y)[0], builtin_spde_drift(x), 1e-4);
    EXPECT_NEAR(diffusion_pairings(m, y)(0, 0), builtin_spde_volatility(x), 1e-4);
  }
}

TEST(Galerkin, ZeroCoefficientsKeepStateConstant) {
  const TruncationScheme s(1, 20);
  const auto m = zero_spde(s, Profile::gaussian(1));
  const auto y0 = gaussian_state(s, 0.1);
  const auto t = galerkin_integrate(m, y0, 0.01, coupled_increments(1, 50, 1, 0.01));
  ASSERT_EQ(t.states.size(), 51u);
  for (const auto& y : t.states) EXPECT_EQ(y.coefficients(), y0.coefficients());
}

TEST(Galerkin, PureTransportMatchesTranslation) {
  const TruncationScheme s(1, 40);
  const double speed = 0.8, horizon = 0.5;
  const auto one = polynomial_coefficients(Polynomial::affine(1.0, Eigen::VectorXd::Zero(1)), s);
  const auto y0 = gaussian_state(s, 0.0);
  const auto b = (speed / dual_pair(one, y0)) * one;
  const auto m = make_spde_model(s, {b}, {{CoefficientVector(s)}}, Profile::gaussian(1));
  const auto exact = translation_operator(Point::Constant(1, speed * horizon), s).apply(y0);
  auto error = [&](double dt) {
    const auto t = galerkin_integrate(m, y0, dt, Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(step_count(horizon, dt)), 1));
    return norm_p(t.states.back() - exact, 0.0);
  };
  const double e1 = error(1e-3), e2 = error(5e-4);
  EXPECT_LE(e1, 1e-3);
  EXPECT_NEAR(e1 / e2, 2.0, 0.2);
}

TEST(Galerkin, CommonNoiseIsBitExact) {
  const auto m = builtin_spde("gaussian-profile-spde", 30);
  const auto y0 = OrbitMap(m.profile, m.scheme)(Point::Zero(1));
  const auto w = coupled_increments(8, 100, 1, 1e-2);
  const auto a = galerkin_integrate(m, y0, 1e-2, w);
  const auto b = galerkin_integrate(m, y0, 1e-2, w);
  for (std::size_t k = 0; k < a.states.size(); ++k) ASSERT_EQ(a.states[k].coefficients(), b.states[k].coefficients());
}

TEST(Galerkin, BlowUpIsReported) {
  const TruncationScheme s(1, 20);
  const auto y0 = gaussian_state(s, 0.0);
  const auto b = (1e6 / dual_pair(y0, y0)) * y0;
  const auto m = make_spde_model(s, {b}, {{CoefficientVector(s)}}, Profile::gaussian(1));
  EXPECT_THROW(galerkin_integrate(m, y0, 1.0, Eigen::MatrixXd::Zero(400, 1)), BlowUp);
}

TEST(OrbitMap, DerivativesMatchFiniteDifferences) {
  for (const auto& profile : {Profile::gaussian(1, 0.8, 1.5), Profile::delta(1)}) {
    const OrbitMap psi(profile, TruncationScheme(1, 30));
    const Point x = Point::Constant(1, 0.35);
    const double h = 1e-5;
    const Eigen::VectorXd fd = ((psi(x + Point::Constant(1, h)) - psi(x - Point::Constant(1, h))).coefficients()) / (2 * h);
    EXPECT_LE((psi.differential(x).col(0) - fd).cwiseAbs().maxCoeff(), 1e-7) << profile.name;
    const Eigen::VectorXd fd2 =
        (psi.differential(x + Point::Constant(1, h)) - psi.differential(x - Point::Constant(1, h))).col(0) / (2 * h);
    EXPECT_LE((psi.second(x).col(0) - fd2).cwiseAbs().maxCoeff(), 1e-6) << profile.name;
  }
}

TEST(OrbitMap, DeltaOrbitIsShiftedDelta) {
  const TruncationScheme s(2, 10);
  const Point x = (Point(2) << 0.2, -0.7).finished();
  EXPECT_EQ(OrbitMap(Profile::delta(2), s)(x).coefficients(), delta_coefficients(x, s).coefficients());
}

TEST(InducedSde, DeltaProfileReproducesPointwiseCoefficients) {
  const auto m = builtin_spde("delta-profile-spde", 60);
  const OrbitMap psi(m.profile, m.scheme);
  const auto sde = induced_sde(m, psi);
  for (double x : {-1.0, 0.0, 0.5, 1.7}) {
    const Point p = Point::Constant(1, x);
    EXPECT_NEAR(sde.drift(p)[0], builtin_spde_drift(x), 1e-4);
    EXPECT_NEAR(sde.diffusion(p)(0, 0), builtin_spde_volatility(x), 1e-4);
  }
}

TEST(TranslatedProfile, ZeroCoefficientsKeepProfile) {
  const TruncationScheme s(1, 20);
  const auto m = zero_spde(s, Profile::gaussian(1));
  const OrbitMap psi(m.profile, s);
  const auto run = translated_profile_solution(m, psi, Point::Zero(1), 0.01, coupled_increments(2, 30, 1, 0.01));
  for (const auto& y : run.states.states) EXPECT_EQ(y.coefficients(), psi(Point::Zero(1)).coefficients());
}

TEST(TranslatedProfile, StatesStayOnOrbit) {
  const auto m = builtin_spde("gaussian-profile-spde", 60);
  const OrbitMap psi(m.profile, m.scheme);
  const auto run = translated_profile_solution(m, psi, Point::Zero(1), 1e-2, coupled_increments(3, 100, 1, 1e-2));
  std::vector<Eigen::VectorXd> visited;
  for (std::size_t k = 0; k < run.driver.states.size(); k += 10) {
    EXPECT_EQ(run.states.states[k].coefficients(), psi(run.driver.states[k]).coefficients());
    visited.push_back(run.driver.states[k]);
  }
  const auto c = check_chart(spde_chart_fields(m), psi.chart(), visited, 1e-4);
  EXPECT_TRUE(c.diffusion.passed) << c.diffusion.max_abs;
  EXPECT_TRUE(c.drift.passed) << c.drift.max_abs;
}

TEST(TranslatedProfile, DriftConsistency) {
  const auto m = builtin_spde("gaussian-profile-spde", 60);
  const OrbitMap psi(m.profile, m.scheme);
  const auto sde = induced_sde(m, psi);
  for (double x : {-1.0, 0.0, 0.8}) {
    const Point p = Point::Constant(1, x);
    const double b = sde.drift(p)[0];
    const double s = sde.diffusion(p)(0, 0);
    const Eigen::VectorXd expected = psi.differential(p).col(0) * b + 0.5 * psi.second(p).col(0) * s * s;
    EXPECT_LE((spde_drift(m, psi(p)).coefficients() - expected).norm(), 1e-4);
  }
}

TEST(TranslatedProfile, OneStepResidualIsFirstOrder) {
  const auto m = builtin_spde("gaussian-profile-spde", 60);
  const OrbitMap psi(m.profile, m.scheme);
  const auto sde = induced_sde(m, psi);
  const Point x = Point::Constant(1, 0.3);
  const auto y = psi(x);
  const auto drift = spde_drift(m, y);
  const auto diffusion = spde_diffusion(m, y)[0];
  auto mean_residual = [&](double dt) {
    const Eigen::MatrixXd w = coupled_increments(12, 400, 1, dt);
    double total = 0.0;
    for (Eigen::Index k = 0; k < w.rows(); ++k) {
      const Point next = x + sde.drift(x) * dt + sde.diffusion(x).col(0) * w(k, 0);
      total += norm_p(psi(next) - y - dt * drift - w(k, 0) * diffusion, -1.0);
    }
    return total / static_cast<double>(w.rows());
  };
  const double ratio = mean_residual(1e-2) / mean_residual(5e-3);
  EXPECT_GE(ratio, 1.5);
  EXPECT_LE(ratio, 2.5);
}

TEST(CompareTrajectories, BasicProperties) {
  const auto m = builtin_spde("gaussian-profile-spde", 30);
  const auto y0 = OrbitMap(m.profile, m.scheme)(Point::Zero(1));
  const auto a = galerkin_integrate(m, y0, 1e-2, coupled_increments(1, 20, 1, 1e-2));
  const auto b = galerkin_integrate(m, y0, 1e-2, coupled_increments(2, 20, 1, 1e-2));
  for (double d : compare_trajectories(a, a, 0.0)) EXPECT_EQ(d, 0.0);
  const auto ab = compare_trajectories(a, b, 0.0);
  const auto ba = compare_trajectories(b, a, 0.0);
  EXPECT_EQ(ab.front(), 0.0);
  for (std::size_t k = 1; k < ab.size(); ++k) {
    EXPECT_GT(ab[k], 0.0);
    EXPECT_EQ(ab[k], ba[k]);
  }
  const auto shorter = galerkin_integrate(m, y0, 1e-2, coupled_increments(1, 10, 1, 1e-2));
  EXPECT_THROW(compare_trajectories(a, shorter, 0.0), std::invalid_argument);
}

TEST(CommonNoise, SmallStepsReduceDistance) {
  const auto m = builtin_spde("gaussian-profile-spde", 40);
  const OrbitMap psi(m.profile, m.scheme);
  const auto rows = common_noise_comparison(m, psi, Point::Zero(1), 0.5, {5e-3, 1e-2}, 4, 77);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_LT(rows[0].mean_sup_distance, rows[1].mean_sup_distance);
  EXPECT_GE(rows[0].truncation_floor, 0.0);
  EXPECT_EQ(rows[0].paths, 4u);
}

TEST(NormIndex, Defaults) {
  EXPECT_EQ(default_norm_index(Profile::delta(1)), -1.0);
  EXPECT_EQ(default_norm_index(Profile::gaussian(1)), 0.0);
}

}  // namespace
}  // namespace hinv
