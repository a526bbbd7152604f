#include "hinv/operators.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "hinv/expm.hpp"

namespace hinv {

namespace {

void check_axis(int axis, const TruncationScheme& scheme, const char* where) {
  if (axis < 0 || axis >= scheme.dimension()) {
    throw std::invalid_argument(std::string(where) + ": axis " + std::to_string(axis) +
                                " outside [0, " + std::to_string(scheme.dimension()) + ")");
  }
}

// Ladder operator pair: D = (a - a^+)/sqrt2, M = (a + a^+)/sqrt2 in one axis.
Eigen::MatrixXd ladder_matrix(int axis, const TruncationScheme& scheme, double raise_sign) {
  const auto n = static_cast<Eigen::Index>(scheme.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  std::vector<int> target;
  for (Eigen::Index col = 0; col < n; ++col) {
    const MultiIndex& idx = scheme.index(static_cast<std::size_t>(col));
    const double k = idx[static_cast<std::size_t>(axis)];
    target = idx.entries();
    if (k > 0) {
      target[static_cast<std::size_t>(axis)] -= 1;
      m(scheme.position(target), col) = std::sqrt(k / 2.0);
      target[static_cast<std::size_t>(axis)] += 1;
    }
    target[static_cast<std::size_t>(axis)] += 1;
    const auto up = scheme.position(target);
    if (up >= 0) m(up, col) = raise_sign * std::sqrt((k + 1.0) / 2.0);
  }
  return m;
}

}  // namespace

CoefficientVector OperatorMatrix::apply(const CoefficientVector& v) const {
  require_same_scheme(scheme, v.scheme(), "OperatorMatrix::apply");
  return CoefficientVector(scheme, entries * v.coefficients());
}

OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b) {
  require_same_scheme(a.scheme, b.scheme, "OperatorMatrix composition");
  return OperatorMatrix{a.scheme, a.entries * b.entries, OperatorKind::composite, -1, {}};
}

OperatorMatrix derivative_matrix(int axis, const TruncationScheme& scheme) {
  check_axis(axis, scheme, "derivative_matrix");
  return OperatorMatrix{scheme, ladder_matrix(axis, scheme, -1.0), OperatorKind::derivative, axis, {}};
}

OperatorMatrix multiplication_matrix(int axis, const TruncationScheme& scheme) {
  check_axis(axis, scheme, "multiplication_matrix");
  return OperatorMatrix{scheme, ladder_matrix(axis, scheme, 1.0), OperatorKind::multiplication, axis,
                        {}};
}

OperatorMatrix hermite_operator_matrix(const TruncationScheme& scheme) {
  const auto n = static_cast<Eigen::Index>(scheme.size());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < scheme.dimension(); ++i) {
    const Eigen::MatrixXd m = ladder_matrix(i, scheme, 1.0);
    const Eigen::MatrixXd d = ladder_matrix(i, scheme, -1.0);
    h += m * m - d * d;
  }
  return OperatorMatrix{scheme, std::move(h), OperatorKind::hermite, -1, {}};
}

OperatorMatrix translation_operator(const Point& shift, const TruncationScheme& scheme) {
  if (shift.size() != scheme.dimension()) {
    throw std::invalid_argument("translation_operator: shift dimension mismatch");
  }
  const auto n = static_cast<Eigen::Index>(scheme.size());
  Eigen::MatrixXd generator = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < scheme.dimension(); ++i) {
    if (shift[i] != 0.0) generator -= shift[i] * ladder_matrix(i, scheme, -1.0);
  }
  return OperatorMatrix{scheme, matrix_exponential(generator), OperatorKind::translation, -1, shift};
}

double generator_residual(const CoefficientVector& v, int axis, double h, RegularityIndex p) {
  if (h == 0.0) throw std::invalid_argument("generator_residual: step must be nonzero");
  const auto& scheme = v.scheme();
  check_axis(axis, scheme, "generator_residual");
  Point shift = Point::Zero(scheme.dimension());
  shift[axis] = h;
  const CoefficientVector moved = translation_operator(shift, scheme).apply(v);
  CoefficientVector residual = (1.0 / h) * (moved - v);
  residual += derivative_matrix(axis, scheme).apply(v);
  return norm_p(residual, p);
}

Eigen::VectorXd restrict_to_degree(const CoefficientVector& v, int max_degree) {
  Eigen::VectorXd out = v.coefficients();
  const auto& scheme = v.scheme();
  for (std::size_t i = 0; i < scheme.size(); ++i) {
    if (scheme.index(i).total_degree() > max_degree) out[static_cast<Eigen::Index>(i)] = 0.0;
  }
  return out;
}

}  // namespace hinv
