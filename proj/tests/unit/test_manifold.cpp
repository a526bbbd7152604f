#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "hinv/errors.hpp"
#include "hinv/manifold.hpp"
#include "hinv/models.hpp"
#include "support/oracles.hpp"

namespace hinv {
namespace {

ScalarField squared_norm_field(bool analytic) {
  ScalarField g;
  g.value = [](const Point& x) { return x.squaredNorm() - 1.0; };
  if (analytic) {
    g.gradient = [](const Point& x) { return Eigen::VectorXd(2.0 * x); };
    g.hessian = [](const Point& x) { return Eigen::MatrixXd(2.0 * Eigen::MatrixXd::Identity(x.size(), x.size())); };
  }
  return g;
}

SdeModel wavy_model() {
  SdeModel m;
  m.dimension = 3;
  m.noise_count = 2;
  m.drift = [](const Point& x) { return Eigen::VectorXd(x.array().sin()); };
  m.diffusion = [](const Point& x) {
    Eigen::MatrixXd s(3, 2);
    s << std::sin(x[1]) * x[2], x[0] * x[0],
         std::exp(-x[0]), std::cos(x[0] * x[1]),
         x[1] * x[2], 1.0 + x[2] * x[2] * x[2];
    return s;
  };
  m.name = "wavy";
  return m;
}

std::vector<Eigen::MatrixXd> wavy_jacobians(const Point& x) {
  Eigen::MatrixXd j0(3, 3), j1(3, 3);
  j0 << 0.0, std::cos(x[1]) * x[2], std::sin(x[1]),
        -std::exp(-x[0]), 0.0, 0.0,
        0.0, x[2], x[1];
  j1 << 2.0 * x[0], 0.0, 0.0,
        -std::sin(x[0] * x[1]) * x[1], -std::sin(x[0] * x[1]) * x[0], 0.0,
        0.0, 0.0, 3.0 * x[2] * x[2];
  return {j0, j1};
}

TEST(TangentProjector, SphereAtPole) {
  const auto p = tangent_projector(sphere_manifold(3), Point::Unit(3, 0));
  Eigen::Matrix3d expected = Eigen::Matrix3d::Identity();
  expected(0, 0) = 0.0;
  EXPECT_LE((p - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(TangentProjector, HyperplaneIsConstant) {
  const Eigen::Vector3d eta(1.0, -2.0, 0.5);
  const auto m = hyperplane_manifold(eta, 0.3);
  const Eigen::Matrix3d expected = Eigen::Matrix3d::Identity() - eta * eta.transpose() / eta.squaredNorm();
  for (const Eigen::Vector3d x : {Eigen::Vector3d(0.0, 0.0, 0.6), Eigen::Vector3d(5.0, 2.0, 0.6)}) {
    EXPECT_LE((tangent_projector(m, x) - expected).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(TangentProjector, IdempotentSymmetricRankOnSamples) {
  const auto torus = torus_manifold(2.0, 0.5);
  const auto sample = sample_by_projection(torus, 40, 5, Point::Zero(3), 2.0);
  ASSERT_GE(sample.points.size(), 30u);
  validate_sample(torus, sample);
  for (const auto& x : sample.points) {
    const auto p = tangent_projector(torus, x);
    EXPECT_LE((p * p - p).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LE((p - p.transpose()).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_NEAR(p.trace(), 2.0, 1e-10);
  }
}

TEST(TangentProjector, RandomFullRankConstraints) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    LevelSetManifold m;
    m.ambient_dim = 5;
    for (int k = 0; k < 2; ++k) {
      const Eigen::VectorXd a = testing::random_vector(rng, 5);
      ScalarField f;
      f.value = [a](const Point& x) { return a.dot(x) + 0.1 * std::pow(x[0], 3); };
      f.gradient = [a](const Point& x) {
        Eigen::VectorXd g = a;
        g[0] += 0.3 * x[0] * x[0];
        return g;
      };
      f.hessian = [](const Point& x) {
        Eigen::MatrixXd h = Eigen::MatrixXd::Zero(5, 5);
        h(0, 0) = 0.6 * x[0];
        return h;
      };
      m.constraints.push_back(f);
    }
    EXPECT_NEAR(tangent_projector(m, testing::random_vector(rng, 5)).trace(), 3.0, 1e-10);
  }
}

TEST(TangentProjector, RankDeficiencyThrows) {
  LevelSetManifold m;
  m.ambient_dim = 2;
  ScalarField f;
  f.value = [](const Point& x) { return x[0]; };
  f.gradient = [](const Point&) { return Eigen::Vector2d(1.0, 0.0).eval(); };
  f.hessian = [](const Point&) { return Eigen::MatrixXd::Zero(2, 2).eval(); };
  m.constraints = {f, f};
  EXPECT_THROW(tangent_projector(m, Point::Zero(2)), RankDeficiency);
}

TEST(Generator, SphereUnderStroockModel) {
  const auto model = stroock_sphere_model(3);
  const auto sample = sample_sphere(3, 100, 31);
  for (bool analytic : {true, false}) {
    const auto g = squared_norm_field(analytic);
    const double tol = analytic ? 1e-10 : 1e-5;
    for (const auto& x : sample.points) {
      EXPECT_LE(std::abs(apply_generator(model, g, x)), tol);
      EXPECT_LE(apply_first_order(model, g, x).cwiseAbs().maxCoeff(), tol);
    }
  }
}

TEST(Generator, TrivialCases) {
  ScalarField constant;
  constant.value = [](const Point&) { return 4.0; };
  const Point x = (Point(3) << 0.3, -0.1, 0.9).finished();
  EXPECT_NEAR(apply_generator(stroock_sphere_model(3), constant, x), 0.0, 1e-7);

  ScalarField x1;
  x1.value = [](const Point& y) { return y[0]; };
  x1.gradient = [](const Point& y) { return Eigen::VectorXd(Eigen::VectorXd::Unit(y.size(), 0)); };
  x1.hessian = [](const Point& y) { return Eigen::MatrixXd(Eigen::MatrixXd::Zero(y.size(), y.size())); };
  EXPECT_EQ(apply_generator(constant_drift_model(3), x1, x), 1.0);
}

TEST(Stratonovich, ConstantDiffusionHasNoCorrection) {
  const auto c = stratonovich_correction(ornstein_uhlenbeck_model(3, 1.0, 0.7), Point::Constant(3, 0.4));
  EXPECT_LE(c.cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Stratonovich, StroockClosedForm) {
  const auto model = stroock_sphere_model(3);
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const Point x = testing::random_vector(rng, 3);
    const Eigen::VectorXd expected = -0.5 * (3.0 + 1.0 - 2.0 * x.squaredNorm()) * x;
    EXPECT_LE((stratonovich_correction(model, x) - expected).cwiseAbs().maxCoeff(), 1e-10);
  }
  for (const auto& x : sample_sphere(3, 20, 42).points) {
    EXPECT_LE((stratonovich_correction(model, x) + x).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LE(corrected_drift(model, x).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Stratonovich, FiniteDifferenceJacobiansMatchAnalytic) {
  auto fd_model = wavy_model();
  auto analytic_model = fd_model;
  analytic_model.diffusion_jacobians = wavy_jacobians;
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 20; ++trial) {
    const Point x = testing::random_vector(rng, 3);
    const auto a = diffusion_jacobians(analytic_model, x);
    const auto f = diffusion_jacobians(fd_model, x);
    for (std::size_t j = 0; j < 2; ++j) EXPECT_LE((a[j] - f[j]).cwiseAbs().maxCoeff(), 1e-6);
    EXPECT_LE((stratonovich_correction(analytic_model, x) - stratonovich_correction(fd_model, x)).cwiseAbs().maxCoeff(),
              1e-6);
  }
}

TEST(FiniteDifferences, HessianAccuracy) {
  const auto f = [](const Point& x) { return std::sin(x[0]) * std::exp(x[1]) + x[0] * x[0] * x[1]; };
  const Point x = (Point(2) << 0.7, -0.3).finished();
  Eigen::Matrix2d expected;
  expected << -std::sin(0.7) * std::exp(-0.3) + 2.0 * (-0.3), std::cos(0.7) * std::exp(-0.3) + 2.0 * 0.7,
      std::cos(0.7) * std::exp(-0.3) + 2.0 * 0.7, std::sin(0.7) * std::exp(-0.3);
  EXPECT_LE((fd_hessian(f, x) - expected).cwiseAbs().maxCoeff(), 1e-6);
  const Eigen::Vector2d grad(std::cos(0.7) * std::exp(-0.3) + 2.0 * 0.7 * (-0.3),
                             std::sin(0.7) * std::exp(-0.3) + 0.49);
  EXPECT_LE((fd_gradient(f, x) - grad).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Sampling, SphereSampleIsFeasibleAndSeeded) {
  const auto a = sample_sphere(4, 50, 3, 2.0);
  const auto b = sample_sphere(4, 50, 3, 2.0);
  ASSERT_EQ(a.points.size(), 50u);
  for (std::size_t i = 0; i < 50; ++i) {
    EXPECT_NEAR(a.points[i].norm(), 2.0, 1e-14);
    EXPECT_EQ(a.points[i], b.points[i]);
  }
  EXPECT_NO_THROW(validate_sample(sphere_manifold(4, 2.0), a));
}

TEST(Sampling, ValidateRejectsInfeasiblePoint) {
  PointSample s;
  s.points = {Point::Unit(3, 0), Point::Constant(3, 1.0)};
  EXPECT_THROW(validate_sample(sphere_manifold(3), s), std::invalid_argument);
}

TEST(Sampling, NewtonProjectionReachesTorus) {
  const auto torus = torus_manifold(2.0, 0.5);
  const auto projected = newton_project(torus, (Point(3) << 2.3, 0.2, 0.3).finished());
  ASSERT_TRUE(projected.has_value());
  EXPECT_LE(std::abs(torus.value(*projected)[0]), 1e-12);
  EXPECT_FALSE(newton_project(torus, Point::Zero(3)).has_value());
}

TEST(Sampling, ParametrizationOfSphere) {
  const auto chart = spherical_chart();
  const auto s = sample_by_parametrization(chart, {Eigen::Vector2d(0.5, 1.0), Eigen::Vector2d(2.0, -0.3)});
  ASSERT_EQ(s.points.size(), 2u);
  for (const auto& x : s.points) EXPECT_NEAR(x.norm(), 1.0, 1e-15);
}

TEST(Chart, SecondDerivativesMatchFiniteDifferences) {
  const auto chart = spherical_chart();
  const Eigen::Vector2d x(0.8, 2.1);
  const Eigen::MatrixXd d = chart.differential(x);
  const Eigen::MatrixXd fd = fd_jacobian([&](const Point& y) { return chart.map(y); }, x);
  EXPECT_LE((d - fd).cwiseAbs().maxCoeff(), 1e-9);
  const Eigen::MatrixXd second = chart.second(x);
  for (int i = 0; i < 2; ++i) {
    const Eigen::MatrixXd fd2 = fd_jacobian([&](const Point& y) { return Eigen::VectorXd(chart.differential(y).col(i)); }, x);
    for (int k = 0; k < 2; ++k) EXPECT_LE((second.col(i * 2 + k) - fd2.col(k)).cwiseAbs().maxCoeff(), 1e-8);
  }
}

}  // namespace
}  // namespace hinv
