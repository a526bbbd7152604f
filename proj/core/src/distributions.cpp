#include "hinv/distributions.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hinv {

CoefficientVector delta_coefficients(const Point& x, const TruncationScheme& scheme) {
  return CoefficientVector(scheme, basis_values(scheme, x));
}

CoefficientVector atomic_measure_coefficients(const std::vector<Atom>& atoms,
                                              const TruncationScheme& scheme) {
  if (atoms.empty()) throw std::invalid_argument("atomic_measure_coefficients: no atoms");
  Eigen::VectorXd c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(scheme.size()));
  for (const auto& atom : atoms) c += atom.weight * basis_values(scheme, atom.location);
  return CoefficientVector(scheme, std::move(c));
}

std::vector<Atom> translate_atoms(std::vector<Atom> atoms, const Point& shift) {
  for (auto& atom : atoms) atom.location += shift;
  return atoms;
}

int Polynomial::degree() const {
  int deg = 0;
  for (const auto& t : terms) {
    if (t.coefficient != 0.0) deg = std::max(deg, t.exponent.total_degree());
  }
  return deg;
}

double Polynomial::operator()(const Point& x) const {
  double value = 0.0;
  for (const auto& t : terms) {
    double monomial = t.coefficient;
    for (std::size_t i = 0; i < t.exponent.dimension(); ++i) {
      monomial *= std::pow(x[static_cast<Eigen::Index>(i)], t.exponent[i]);
    }
    value += monomial;
  }
  return value;
}

Polynomial Polynomial::affine(double constant, const Eigen::VectorXd& slope) {
  const int d = static_cast<int>(slope.size());
  Polynomial p;
  p.dimension = d;
  p.terms.push_back({constant, MultiIndex(std::vector<int>(static_cast<std::size_t>(d), 0))});
  for (int i = 0; i < d; ++i) {
    std::vector<int> e(static_cast<std::size_t>(d), 0);
    e[static_cast<std::size_t>(i)] = 1;
    p.terms.push_back({slope[i], MultiIndex(std::move(e))});
  }
  return p;
}

QuadratureRule polynomial_rule(const TruncationScheme& scheme) {
  // polynomial(deg <= 3) * H_n(x) exp(-x^2/2) is exact once 2N - 1 >= K + 3.
  return gauss_hermite_rule(default_quadrature_order(scheme), scheme.dimension(), std::numbers::sqrt2);
}

CoefficientVector polynomial_coefficients(const Polynomial& poly, const TruncationScheme& scheme) {
  if (poly.dimension != scheme.dimension()) {
    throw std::invalid_argument("polynomial_coefficients: dimension mismatch");
  }
  if (poly.degree() > kMaxPolynomialDegree) {
    throw std::invalid_argument("polynomial_coefficients: degree " + std::to_string(poly.degree()) +
                                " exceeds cap " + std::to_string(kMaxPolynomialDegree));
  }
  return project_function([&poly](const Point& x) { return poly(x); }, scheme, polynomial_rule(scheme));
}

}  // namespace hinv
