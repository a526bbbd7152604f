#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

namespace hinv {

using Point = Eigen::VectorXd;

/// Multi-index n in N_0^d.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> entries);

  std::size_t dimension() const { return entries_.size(); }
  int total_degree() const { return total_degree_; }
  int operator[](std::size_t i) const { return entries_[i]; }
  const std::vector<int>& entries() const { return entries_; }

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::vector<int> entries_;
  int total_degree_ = 0;
};

/// Total-degree truncation: all multi-indices in d variables with |n| <= K.
///
/// The basis is enumerated once in graded lexicographic order and shared
/// between copies of the scheme.
class TruncationScheme {
 public:
  TruncationScheme(int dimension, int max_degree);

  int dimension() const { return dimension_; }
  int max_degree() const { return max_degree_; }
  std::size_t size() const { return basis_->indices.size(); }

  const std::vector<MultiIndex>& basis() const { return basis_->indices; }
  const MultiIndex& index(std::size_t position) const { return basis_->indices[position]; }

  /// Position of `n` in the basis, or -1 when |n| > K.
  std::ptrdiff_t position(const MultiIndex& n) const;
  std::ptrdiff_t position(std::span<const int> entries) const;

  friend bool operator==(const TruncationScheme& a, const TruncationScheme& b) {
    return a.dimension_ == b.dimension_ && a.max_degree_ == b.max_degree_;
  }

 private:
  struct Basis {
    std::vector<MultiIndex> indices;
    std::unordered_map<std::uint64_t, std::size_t> lookup;
  };

  std::uint64_t key(std::span<const int> entries) const;

  int dimension_;
  int max_degree_;
  std::shared_ptr<const Basis> basis_;
};

/// Graded lexicographic enumeration of the multi-indices retained by `scheme`.
std::vector<MultiIndex> enumerate_basis(const TruncationScheme& scheme);

/// h_0(t), ..., h_K(t) for the L^2(R)-orthonormal Hermite functions.
///
/// Uses the three-term recurrence in function normalization, which stays
/// bounded by 1 in absolute value and never overflows.
Eigen::VectorXd hermite_functions(int max_degree, double t);

/// h_0'(t), ..., h_K'(t) from the ladder identity
/// h_k' = sqrt(k/2) h_{k-1} - sqrt((k+1)/2) h_{k+1}.
Eigen::VectorXd hermite_function_derivatives(int max_degree, double t);

/// h_n(x) = prod_i h_{n_i}(x_i).
double eval_hermite(const MultiIndex& n, const Point& x);

/// Values h_n(x) for every n of the scheme, in basis order.
Eigen::VectorXd basis_values(const TruncationScheme& scheme, const Point& x);

/// Tensor-product Gauss-Hermite rule for integrals over R^d with respect to
/// Lebesgue measure: integral g(x) dx ~ sum_i weights[i] * g(nodes.col(i)).
///
/// With scale s the rule is exact for g(x) = p(x) exp(-|x|^2 / s^2) where p
/// has degree <= 2*order - 1 in each coordinate.
struct QuadratureRule {
  Eigen::MatrixXd nodes;  // d x N
  Eigen::VectorXd weights;

  int dimension() const { return static_cast<int>(nodes.rows()); }
  std::size_t size() const { return static_cast<std::size_t>(weights.size()); }
};

inline constexpr std::size_t kMaxQuadratureNodes = 1'000'000;

/// Golub-Welsch nodes polished by Newton iteration on h_order.
/// Throws std::invalid_argument when order^dimension exceeds kMaxQuadratureNodes.
QuadratureRule gauss_hermite_rule(int order, int dimension, double scale = 1.0);

/// Per-axis order used by project_function when no rule is supplied.
inline int default_quadrature_order(const TruncationScheme& scheme) {
  return 2 * scheme.max_degree() + 16;
}

QuadratureRule default_rule(const TruncationScheme& scheme);

using ScalarFunction = std::function<double(const Point&)>;

/// Coefficients <f, h_n> for all retained n, integrated with `rule`.
/// Throws NumericFailure when any coefficient is not finite.
Eigen::VectorXd project_coefficients(const ScalarFunction& f, const TruncationScheme& scheme,
                                     const QuadratureRule& rule);

/// sum_n c_n h_n(x).
double reconstruct(const TruncationScheme& scheme, const Eigen::VectorXd& coefficients,
                   const Point& x);

/// Hermite-function values at every node of a rule, cached for repeated
/// projections on the same scheme (rows = basis, cols = nodes).
class NodalBasis {
 public:
  NodalBasis(const TruncationScheme& scheme, QuadratureRule rule);

  const TruncationScheme& scheme() const { return scheme_; }
  const QuadratureRule& rule() const { return rule_; }

  /// Projection of nodal samples g(node_i) onto the basis.
  Eigen::VectorXd project(const Eigen::VectorXd& samples) const;

 private:
  TruncationScheme scheme_;
  QuadratureRule rule_;
  Eigen::MatrixXd weighted_values_;
};

}  // namespace hinv
