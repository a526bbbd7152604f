#include "hinv/sobolev.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "hinv/errors.hpp"

namespace hinv {

CoefficientVector::CoefficientVector(TruncationScheme scheme)
    : scheme_(std::move(scheme)),
      coefficients_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(scheme_.size()))) {}

CoefficientVector::CoefficientVector(TruncationScheme scheme, Eigen::VectorXd coefficients,
                                     std::optional<double> regularity_label)
    : scheme_(std::move(scheme)),
      coefficients_(std::move(coefficients)),
      regularity_label_(regularity_label) {
  if (coefficients_.size() != static_cast<Eigen::Index>(scheme_.size())) {
    throw std::invalid_argument("CoefficientVector: expected " + std::to_string(scheme_.size()) +
                                " coefficients, got " + std::to_string(coefficients_.size()));
  }
  if (!coefficients_.allFinite()) throw NumericFailure("CoefficientVector: non-finite coefficient");
}

CoefficientVector CoefficientVector::unit(const TruncationScheme& scheme, const MultiIndex& n) {
  const auto pos = scheme.position(n);
  if (pos < 0) throw std::invalid_argument("CoefficientVector::unit: index outside truncation");
  CoefficientVector v(scheme);
  v.coefficients_[pos] = 1.0;
  return v;
}

double CoefficientVector::coefficient(const MultiIndex& n) const {
  const auto pos = scheme_.position(n);
  return pos < 0 ? 0.0 : coefficients_[pos];
}

CoefficientVector& CoefficientVector::operator+=(const CoefficientVector& other) {
  require_same_scheme(scheme_, other.scheme_, "CoefficientVector::operator+=");
  coefficients_ += other.coefficients_;
  return *this;
}

CoefficientVector& CoefficientVector::operator-=(const CoefficientVector& other) {
  require_same_scheme(scheme_, other.scheme_, "CoefficientVector::operator-=");
  coefficients_ -= other.coefficients_;
  return *this;
}

CoefficientVector& CoefficientVector::operator*=(double s) {
  coefficients_ *= s;
  return *this;
}

void require_same_scheme(const TruncationScheme& a, const TruncationScheme& b, const char* where) {
  if (!(a == b)) {
    throw SchemeMismatch(std::string(where) + ": scheme (d=" + std::to_string(a.dimension()) +
                         ", K=" + std::to_string(a.max_degree()) + ") vs (d=" +
                         std::to_string(b.dimension()) + ", K=" + std::to_string(b.max_degree()) + ")");
  }
}

Eigen::VectorXd sobolev_weights(const TruncationScheme& scheme, RegularityIndex p) {
  Eigen::VectorXd w(static_cast<Eigen::Index>(scheme.size()));
  const int d = scheme.dimension();
  for (std::size_t i = 0; i < scheme.size(); ++i) {
    w[static_cast<Eigen::Index>(i)] = std::pow(2.0 * scheme.index(i).total_degree() + d, 2.0 * p.p);
  }
  return w;
}

double norm_p(const CoefficientVector& v, RegularityIndex p) {
  const Eigen::VectorXd w = sobolev_weights(v.scheme(), p);
  return std::sqrt((w.array() * v.coefficients().array().square()).sum());
}

double dual_pair(const CoefficientVector& u, const CoefficientVector& v) {
  require_same_scheme(u.scheme(), v.scheme(), "dual_pair");
  return u.coefficients().dot(v.coefficients());
}

CoefficientVector apply_hermite_operator(const CoefficientVector& v, int l) {
  const auto& scheme = v.scheme();
  Eigen::VectorXd c = v.coefficients();
  for (std::size_t i = 0; i < scheme.size(); ++i) {
    c[static_cast<Eigen::Index>(i)] *=
        std::pow(2.0 * scheme.index(i).total_degree() + scheme.dimension(), l);
  }
  return CoefficientVector(scheme, std::move(c));
}

double evaluate(const CoefficientVector& v, const Point& x) {
  return reconstruct(v.scheme(), v.coefficients(), x);
}

double embedding_constant(const TruncationScheme& scheme, RegularityIndex p,
                          std::span<const Point> grid) {
  const Eigen::VectorXd w = sobolev_weights(scheme, RegularityIndex(-p.p));
  double worst = 0.0;
  for (const auto& x : grid) {
    const Eigen::VectorXd h = basis_values(scheme, x);
    worst = std::max(worst, std::sqrt((w.array() * h.array().square()).sum()));
  }
  return worst;
}

CoefficientVector project_function(const ScalarFunction& f, const TruncationScheme& scheme,
                                   const QuadratureRule& rule) {
  return CoefficientVector(scheme, project_coefficients(f, scheme, rule));
}

CoefficientVector project_function(const ScalarFunction& f, const TruncationScheme& scheme) {
  return project_function(f, scheme, default_rule(scheme));
}

}  // namespace hinv
