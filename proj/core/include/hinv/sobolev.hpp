#pragma once

#include <optional>
#include <span>

#include <Eigen/Dense>

#include "hinv/hermite.hpp"

namespace hinv {

/// Index p of the Hermite-Sobolev scale S_p(R^d).
struct RegularityIndex {
  double p = 0.0;

  constexpr RegularityIndex() = default;
  constexpr RegularityIndex(double value) : p(value) {}  // NOLINT(google-explicit-constructor)
};

/// Truncated Hermite expansion of a tempered distribution: coefficient c_n
/// stands for <Phi, h_n>, stored in graded lexicographic basis order.
///
/// `regularity_label` is advisory metadata only; every truncated vector lies
/// in every S_p and norms are computed for any p on demand.
class CoefficientVector {
 public:
  /// Zero vector.
  explicit CoefficientVector(TruncationScheme scheme);

  /// Throws std::invalid_argument on length mismatch and NumericFailure on
  /// non-finite entries.
  CoefficientVector(TruncationScheme scheme, Eigen::VectorXd coefficients,
                    std::optional<double> regularity_label = std::nullopt);

  static CoefficientVector unit(const TruncationScheme& scheme, const MultiIndex& n);

  const TruncationScheme& scheme() const { return scheme_; }
  const Eigen::VectorXd& coefficients() const { return coefficients_; }
  std::size_t size() const { return static_cast<std::size_t>(coefficients_.size()); }
  double operator[](std::size_t i) const { return coefficients_[static_cast<Eigen::Index>(i)]; }
  double coefficient(const MultiIndex& n) const;

  std::optional<double> regularity_label() const { return regularity_label_; }
  void set_regularity_label(std::optional<double> p) { regularity_label_ = p; }

  CoefficientVector& operator+=(const CoefficientVector& other);
  CoefficientVector& operator-=(const CoefficientVector& other);
  CoefficientVector& operator*=(double s);

  friend CoefficientVector operator+(CoefficientVector a, const CoefficientVector& b) { return a += b; }
  friend CoefficientVector operator-(CoefficientVector a, const CoefficientVector& b) { return a -= b; }
  friend CoefficientVector operator*(double s, CoefficientVector a) { return a *= s; }

 private:
  TruncationScheme scheme_;
  Eigen::VectorXd coefficients_;
  std::optional<double> regularity_label_;
};

/// Throws SchemeMismatch unless both schemes are identical.
void require_same_scheme(const TruncationScheme& a, const TruncationScheme& b, const char* where);

/// Graded weights (2|n| + d)^{2p} in basis order.
Eigen::VectorXd sobolev_weights(const TruncationScheme& scheme, RegularityIndex p);

/// ||v||_p = sqrt( sum_n (2|n| + d)^{2p} c_n^2 ).
double norm_p(const CoefficientVector& v, RegularityIndex p);

/// Coefficient-space realization of the S_{-p} x S_p dual pairing.
/// Throws SchemeMismatch when the vectors use different truncations.
double dual_pair(const CoefficientVector& u, const CoefficientVector& v);

/// c_n -> (2|n| + d)^l c_n; negative l applies the inverse.
CoefficientVector apply_hermite_operator(const CoefficientVector& v, int l);

/// sum_n c_n h_n(x).
double evaluate(const CoefficientVector& v, const Point& x);

/// Smallest C with sup_{x in grid} |sum_n c_n h_n(x)| <= C ||v||_p for every
/// v in the truncated space: max over the grid of
/// sqrt( sum_n (2|n| + d)^{-2p} h_n(x)^2 ).
double embedding_constant(const TruncationScheme& scheme, RegularityIndex p,
                          std::span<const Point> grid);

/// L^2 projection of a function onto the truncated basis.
CoefficientVector project_function(const ScalarFunction& f, const TruncationScheme& scheme,
                                   const QuadratureRule& rule);
CoefficientVector project_function(const ScalarFunction& f, const TruncationScheme& scheme);

}  // namespace hinv
