#include <cmath>
#include <random>

#include <gtest/gtest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "hinv/distributions.hpp"
#include "hinv/expm.hpp"
#include "hinv/operators.hpp"
#include "hinv/sobolev.hpp"
#include "support/oracles.hpp"

namespace hinv {
namespace {

using testing::hermite_oracle;

CoefficientVector gaussian_profile(const TruncationScheme& s, double center = 0.0) {
  return project_function([center](const Point& x) { return std::exp(-0.5 * (x.array() - center).square().sum()); }, s);
}

TEST(DerivativeMatrix, LowModes) {
  const TruncationScheme s(1, 5);
  const auto d = derivative_matrix(0, s);
  const auto d0 = d.apply(CoefficientVector::unit(s, MultiIndex({0})));
  Eigen::VectorXd e0 = Eigen::VectorXd::Zero(6);
  e0[1] = -std::sqrt(0.5);
  EXPECT_LE((d0.coefficients() - e0).cwiseAbs().maxCoeff(), 1e-15);
  const auto d1 = d.apply(CoefficientVector::unit(s, MultiIndex({1})));
  Eigen::VectorXd e1 = Eigen::VectorXd::Zero(6);
  e1[0] = std::sqrt(0.5);
  e1[2] = -1.0;
  EXPECT_LE((d1.coefficients() - e1).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(MultiplicationMatrix, LowModesAndSymmetry) {
  const TruncationScheme s(1, 5);
  const auto m = multiplication_matrix(0, s);
  EXPECT_NEAR(m.entries(1, 0), std::sqrt(0.5), 1e-15);
  EXPECT_EQ(m.entries.col(0).cwiseAbs().sum(), m.entries(1, 0));
  EXPECT_EQ((m.entries - m.entries.transpose()).cwiseAbs().maxCoeff(), 0.0);
  const auto m2 = multiplication_matrix(1, TruncationScheme(3, 6));
  EXPECT_EQ((m2.entries - m2.entries.transpose()).cwiseAbs().maxCoeff(), 0.0);
}

TEST(OperatorMatrices, MatchQuadratureOracle) {
  const int k_max = 30;
  const TruncationScheme s(1, k_max);
  const auto d = derivative_matrix(0, s);
  const auto m = multiplication_matrix(0, s);
  for (unsigned k = 0; k <= static_cast<unsigned>(k_max); ++k) {
    for (unsigned j = 0; j <= static_cast<unsigned>(k_max); ++j) {
      const double dkj = testing::trapezoid(
          [&](double x) { return testing::hermite_derivative_oracle(k, x) * hermite_oracle(j, x); });
      const double mkj = testing::trapezoid([&](double x) { return x * hermite_oracle(k, x) * hermite_oracle(j, x); });
      ASSERT_NEAR(d.entries(j, k), dkj, 1e-9) << k << "," << j;
      ASSERT_NEAR(m.entries(j, k), mkj, 1e-9) << k << "," << j;
    }
  }
}

TEST(OperatorMatrices, BandedSparsityPattern) {
  const TruncationScheme s(2, 8);
  for (int axis = 0; axis < 2; ++axis) {
    for (const auto& op : {derivative_matrix(axis, s), multiplication_matrix(axis, s)}) {
      ASSERT_EQ(op.entries.rows(), static_cast<Eigen::Index>(s.size()));
      ASSERT_EQ(op.entries.cols(), op.entries.rows());
      for (std::size_t c = 0; c < s.size(); ++c) {
        for (std::size_t r = 0; r < s.size(); ++r) {
          const auto& from = s.index(c);
          const auto& to = s.index(r);
          const bool neighbour = from[1 - axis] == to[1 - axis] && std::abs(from[axis] - to[axis]) == 1;
          if (!neighbour) ASSERT_EQ(op.entries(r, c), 0.0);
          else ASSERT_NE(op.entries(r, c), 0.0);
        }
      }
    }
  }
}

TEST(OperatorMatrices, DerivativeOfProjectedFunction) {
  const TruncationScheme s(1, 40);
  const auto f = gaussian_profile(s, 0.3);
  const auto df = project_function([](const Point& x) { return -(x[0] - 0.3) * std::exp(-0.5 * std::pow(x[0] - 0.3, 2)); }, s);
  EXPECT_LE(restrict_to_degree(derivative_matrix(0, s).apply(f) - df, 30).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(HermiteOperatorMatrix, DiagonalAwayFromBoundary) {
  for (int d = 1; d <= 2; ++d) {
    const TruncationScheme s(d, 10);
    const auto h = hermite_operator_matrix(s);
    for (std::size_t r = 0; r < s.size(); ++r) {
      if (s.index(r).total_degree() > 8) continue;
      for (std::size_t c = 0; c < s.size(); ++c) {
        const double expected = r == c ? 2.0 * s.index(r).total_degree() + d : 0.0;
        ASSERT_NEAR(h.entries(r, c), expected, 1e-12) << r << "," << c;
      }
    }
  }
}

TEST(HermiteOperatorMatrix, AgreesWithDiagonalOperator) {
  const TruncationScheme s(1, 20);
  const auto h = hermite_operator_matrix(s);
  std::mt19937_64 rng(11);
  Eigen::VectorXd c = testing::random_vector(rng, 21);
  c.tail(2).setZero();
  const CoefficientVector v(s, c);
  const auto lhs = h.apply(v);
  const auto rhs = apply_hermite_operator(v, 1);
  EXPECT_LE(restrict_to_degree(lhs - rhs, 18).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(OperatorMatrices, AntiDuality) {
  std::mt19937_64 rng(12);
  const TruncationScheme s(2, 12);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd a = testing::random_vector(rng, static_cast<Eigen::Index>(s.size()));
    Eigen::VectorXd b = testing::random_vector(rng, static_cast<Eigen::Index>(s.size()));
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s.index(i).total_degree() > 10) a[static_cast<Eigen::Index>(i)] = b[static_cast<Eigen::Index>(i)] = 0.0;
    }
    const CoefficientVector u(s, a), v(s, b);
    for (int axis = 0; axis < 2; ++axis) {
      const auto d = derivative_matrix(axis, s);
      EXPECT_NEAR(dual_pair(d.apply(u), v), -dual_pair(u, d.apply(v)), 1e-9);
    }
  }
}

TEST(MatrixExponential, MatchesEigenAndTaylor) {
  std::mt19937_64 rng(13);
  for (int n : {1, 4, 12}) {
    for (double scale : {1e-3, 0.5, 3.0, 40.0}) {
      Eigen::MatrixXd a(n, n);
      for (Eigen::Index c = 0; c < n; ++c) a.col(c) = testing::random_vector(rng, n, scale / std::sqrt(n));
      const Eigen::MatrixXd expected = a.exp();
      const Eigen::MatrixXd got = matrix_exponential(a);
      EXPECT_LE((got - expected).norm(), 1e-11 * expected.norm() * std::max(1.0, scale)) << n << " " << scale;
    }
  }
  Eigen::MatrixXd small = 1e-2 * Eigen::MatrixXd::Random(5, 5);
  Eigen::MatrixXd taylor = Eigen::MatrixXd::Identity(5, 5), term = taylor;
  for (int k = 1; k < 20; ++k) {
    term = term * small / k;
    taylor += term;
  }
  EXPECT_LE((matrix_exponential(small) - taylor).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LE((matrix_exponential(Eigen::MatrixXd::Zero(3, 3)) - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff(),
            1e-15);
}

TEST(MatrixExponential, DiagonalAndNilpotent) {
  Eigen::MatrixXd diag = Eigen::Vector3d(-2.0, 0.5, 7.0).asDiagonal();
  const Eigen::MatrixXd e = matrix_exponential(diag);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(e(i, i) / std::exp(diag(i, i)), 1.0, 1e-13);
  Eigen::Matrix2d n;
  n << 0.0, 3.0, 0.0, 0.0;
  const Eigen::MatrixXd en = matrix_exponential(n);
  EXPECT_NEAR(en(0, 1), 3.0, 1e-14);
  EXPECT_NEAR(en(0, 0), 1.0, 1e-15);
}

TEST(Translation, ZeroShiftIsIdentity) {
  const TruncationScheme s(2, 6);
  const auto t = translation_operator(Point::Zero(2), s);
  EXPECT_LE((t.entries - Eigen::MatrixXd::Identity(t.entries.rows(), t.entries.cols())).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Translation, GroupLawOnGaussianProfile) {
  const TruncationScheme s(1, 60);
  const auto v = gaussian_profile(s);
  for (double x : {-0.5, -0.2, 0.3, 0.5}) {
    for (double y : {-0.4, 0.1, 0.5}) {
      const auto composed = translation_operator(Point::Constant(1, x), s)
                                .apply(translation_operator(Point::Constant(1, y), s).apply(v));
      const auto direct = translation_operator(Point::Constant(1, x + y), s).apply(v);
      EXPECT_LE(norm_p(composed - direct, 0.0) / norm_p(direct, 0.0), 1e-6) << x << " " << y;
    }
  }
}

TEST(Translation, ShiftsGaussianProfile) {
  const TruncationScheme s(1, 60);
  const auto shifted = translation_operator(Point::Constant(1, 0.4), s).apply(gaussian_profile(s));
  EXPECT_LE(norm_p(shifted - gaussian_profile(s, 0.4), 0.0), 1e-8);
}

double commutator_defect(const TruncationScheme& s, const Point& shift, int interior_degree) {
  const auto t = translation_operator(shift, s);
  double worst = 0.0;
  for (int axis = 0; axis < s.dimension(); ++axis) {
    const auto d = derivative_matrix(axis, s);
    const Eigen::MatrixXd defect = t.entries * d.entries - d.entries * t.entries;
    for (std::size_t r = 0; r < s.size(); ++r) {
      for (std::size_t c = 0; c < s.size(); ++c) {
        if (s.index(r).total_degree() > interior_degree || s.index(c).total_degree() > interior_degree) continue;
        worst = std::max(worst, std::abs(defect(r, c)));
      }
    }
  }
  return worst;
}

TEST(Translation, CommutesWithDerivative) {
  EXPECT_LE(commutator_defect(TruncationScheme(1, 30), Point::Constant(1, 0.4), 26), 1e-8);
  EXPECT_LE(commutator_defect(TruncationScheme(1, 14), Point::Constant(1, -0.7), 10), 1e-8);
  // In d = 2 the total-degree boundary reaches further into the interior.
  EXPECT_LE(commutator_defect(TruncationScheme(2, 14), (Point(2) << 0.3, -0.2).finished(), 6), 1e-8);
}

TEST(Translation, DeltaConvergesToShiftedDelta) {
  const TruncationScheme s(1, 80);
  const auto shifted = translation_operator(Point::Constant(1, 0.3), s).apply(delta_coefficients(Point::Zero(1), s));
  const auto exact = delta_coefficients(Point::Constant(1, 0.3), s);
  const Eigen::VectorXd diff = restrict_to_degree(shifted - exact, 70);
  const Eigen::VectorXd w = sobolev_weights(s, -0.5);
  EXPECT_LE(std::sqrt(w.dot(diff.cwiseAbs2())), 1e-3);
}

TEST(GeneratorResidual, FirstOrderInStep) {
  const TruncationScheme s(1, 60);
  const auto v = gaussian_profile(s);
  const double r1 = generator_residual(v, 0, 1e-2);
  const double r2 = generator_residual(v, 0, 5e-3);
  EXPECT_GE(r1 / r2, 1.7);
  EXPECT_LE(r1 / r2, 2.3);
}

TEST(GeneratorResidual, ZeroVectorAndZeroStep) {
  const TruncationScheme s(1, 10);
  EXPECT_EQ(generator_residual(CoefficientVector(s), 0, 1e-3), 0.0);
  EXPECT_THROW(generator_residual(CoefficientVector(s), 0, 0.0), std::invalid_argument);
}

TEST(GeneratorResidual, LinearFunctionOnInteriorDegrees) {
  const TruncationScheme s(1, 40);
  const auto v = polynomial_coefficients(Polynomial::affine(0.0, Eigen::VectorXd::Ones(1)), s);
  const double h = 1e-3;
  const auto residual = (1.0 / h) * (translation_operator(Point::Constant(1, h), s).apply(v) - v) +
                        derivative_matrix(0, s).apply(v);
  EXPECT_LE(norm_p(CoefficientVector(s, restrict_to_degree(residual, 36)), 0.0), 1e-4);
  // The top two degrees carry the truncation boundary.
  EXPECT_NEAR(generator_residual(v, 0, h), norm_p(residual, 0.0), 1e-12);
}

}  // namespace
}  // namespace hinv
