#pragma once

#include <vector>

#include "hinv/sobolev.hpp"

namespace hinv {

/// c_n = h_n(x), the coefficients of the Dirac distribution at x.
CoefficientVector delta_coefficients(const Point& x, const TruncationScheme& scheme);

struct Atom {
  double weight;
  Point location;
};

/// sum_i w_i delta_{x_i}. Throws std::invalid_argument for an empty list.
CoefficientVector atomic_measure_coefficients(const std::vector<Atom>& atoms,
                                              const TruncationScheme& scheme);

/// Shifts every atom by `shift` and rebuilds the coefficients exactly.
std::vector<Atom> translate_atoms(std::vector<Atom> atoms, const Point& shift);

/// Polynomial sum_k a_k x^{m_k} in d variables.
struct Polynomial {
  struct Term {
    double coefficient;
    MultiIndex exponent;
  };

  int dimension = 1;
  std::vector<Term> terms;

  int degree() const;
  double operator()(const Point& x) const;

  /// a + <slope, x>.
  static Polynomial affine(double constant, const Eigen::VectorXd& slope);
};

inline constexpr int kMaxPolynomialDegree = 3;

/// Exact projection of a polynomial of degree <= 3; throws
/// std::invalid_argument above the cap.
CoefficientVector polynomial_coefficients(const Polynomial& poly, const TruncationScheme& scheme);

/// Gauss-Hermite rule in which polynomial * h_n integrands are exact
/// (weight exp(-|x|^2 / 2)).
QuadratureRule polynomial_rule(const TruncationScheme& scheme);

}  // namespace hinv
