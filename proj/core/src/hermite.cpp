#include "hinv/hermite.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "hinv/errors.hpp"

namespace hinv {

MultiIndex::MultiIndex(std::vector<int> entries) : entries_(std::move(entries)) {
  for (int e : entries_) {
    if (e < 0) throw std::invalid_argument("MultiIndex: negative entry");
    total_degree_ += e;
  }
}

namespace {

void append_degree(int dimension, int degree, std::vector<int>& prefix,
                   std::vector<MultiIndex>& out) {
  const int axis = static_cast<int>(prefix.size());
  if (axis == dimension - 1) {
    prefix.push_back(degree);
    out.emplace_back(prefix);
    prefix.pop_back();
    return;
  }
  for (int first = degree; first >= 0; --first) {
    prefix.push_back(first);
    append_degree(dimension, degree - first, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

TruncationScheme::TruncationScheme(int dimension, int max_degree)
    : dimension_(dimension), max_degree_(max_degree) {
  if (dimension < 1) throw std::invalid_argument("TruncationScheme: dimension must be >= 1");
  if (max_degree < 0) throw std::invalid_argument("TruncationScheme: max_degree must be >= 0");
  const double key_bits = dimension * std::log2(static_cast<double>(max_degree) + 1.0);
  if (key_bits >= 63.0) throw std::invalid_argument("TruncationScheme: too many index combinations");

  auto basis = std::make_shared<Basis>();
  std::vector<int> prefix;
  prefix.reserve(static_cast<std::size_t>(dimension));
  for (int k = 0; k <= max_degree; ++k) append_degree(dimension, k, prefix, basis->indices);
  basis->lookup.reserve(basis->indices.size());
  basis_ = basis;  // key() only needs dimension_/max_degree_
  for (std::size_t i = 0; i < basis->indices.size(); ++i) {
    basis->lookup.emplace(key(basis->indices[i].entries()), i);
  }
}

std::uint64_t TruncationScheme::key(std::span<const int> entries) const {
  std::uint64_t k = 0;
  const auto base = static_cast<std::uint64_t>(max_degree_) + 1;
  for (auto it = entries.rbegin(); it != entries.rend(); ++it) {
    k = k * base + static_cast<std::uint64_t>(*it);
  }
  return k;
}

std::ptrdiff_t TruncationScheme::position(std::span<const int> entries) const {
  if (static_cast<int>(entries.size()) != dimension_) {
    throw std::invalid_argument("TruncationScheme::position: dimension mismatch");
  }
  int total = 0;
  for (int e : entries) {
    if (e < 0) return -1;
    total += e;
  }
  if (total > max_degree_) return -1;
  auto it = basis_->lookup.find(key(entries));
  return it == basis_->lookup.end() ? -1 : static_cast<std::ptrdiff_t>(it->second);
}

std::ptrdiff_t TruncationScheme::position(const MultiIndex& n) const {
  return position(std::span<const int>(n.entries()));
}

std::vector<MultiIndex> enumerate_basis(const TruncationScheme& scheme) { return scheme.basis(); }

Eigen::VectorXd hermite_functions(int max_degree, double t) {
  Eigen::VectorXd h(max_degree + 1);
  h[0] = std::exp(-0.5 * t * t) / std::sqrt(std::sqrt(std::numbers::pi));
  if (max_degree >= 1) h[1] = std::numbers::sqrt2 * t * h[0];
  for (int k = 1; k < max_degree; ++k) {
    const double kk = k;
    h[k + 1] = std::sqrt(2.0 / (kk + 1.0)) * t * h[k] - std::sqrt(kk / (kk + 1.0)) * h[k - 1];
  }
  return h;
}

Eigen::VectorXd hermite_function_derivatives(int max_degree, double t) {
  const Eigen::VectorXd h = hermite_functions(max_degree + 1, t);
  Eigen::VectorXd dh(max_degree + 1);
  for (int k = 0; k <= max_degree; ++k) {
    const double kk = k;
    dh[k] = -std::sqrt((kk + 1.0) / 2.0) * h[k + 1];
    if (k > 0) dh[k] += std::sqrt(kk / 2.0) * h[k - 1];
  }
  return dh;
}

double eval_hermite(const MultiIndex& n, const Point& x) {
  if (static_cast<Eigen::Index>(n.dimension()) != x.size()) {
    throw std::invalid_argument("eval_hermite: dimension mismatch");
  }
  double value = 1.0;
  for (std::size_t i = 0; i < n.dimension(); ++i) {
    value *= hermite_functions(n[i], x[static_cast<Eigen::Index>(i)])[n[i]];
  }
  return value;
}

namespace {

// Per-axis tables h_k(x_i), k <= K, as columns.
Eigen::MatrixXd axis_tables(int max_degree, const Point& x) {
  Eigen::MatrixXd tables(max_degree + 1, x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) tables.col(i) = hermite_functions(max_degree, x[i]);
  return tables;
}

void fill_basis_values(const TruncationScheme& scheme, const Eigen::MatrixXd& tables,
                       Eigen::Ref<Eigen::VectorXd> out) {
  const auto& basis = scheme.basis();
  for (std::size_t b = 0; b < basis.size(); ++b) {
    double v = 1.0;
    for (int i = 0; i < scheme.dimension(); ++i) v *= tables(basis[b][static_cast<std::size_t>(i)], i);
    out[static_cast<Eigen::Index>(b)] = v;
  }
}

}  // namespace

Eigen::VectorXd basis_values(const TruncationScheme& scheme, const Point& x) {
  if (x.size() != scheme.dimension()) throw std::invalid_argument("basis_values: dimension mismatch");
  Eigen::VectorXd out(static_cast<Eigen::Index>(scheme.size()));
  fill_basis_values(scheme, axis_tables(scheme.max_degree(), x), out);
  return out;
}

QuadratureRule gauss_hermite_rule(int order, int dimension, double scale) {
  if (order < 1) throw std::invalid_argument("gauss_hermite_rule: order must be >= 1");
  if (dimension < 1) throw std::invalid_argument("gauss_hermite_rule: dimension must be >= 1");
  if (!(scale > 0.0)) throw std::invalid_argument("gauss_hermite_rule: scale must be positive");
  const double total = std::pow(static_cast<double>(order), dimension);
  if (total > static_cast<double>(kMaxQuadratureNodes)) {
    throw std::invalid_argument("gauss_hermite_rule: " + std::to_string(order) + "^" +
                                std::to_string(dimension) + " nodes exceeds the size guard");
  }

  // Jacobi matrix of the monic Hermite recurrence for weight exp(-x^2).
  Eigen::VectorXd x(order);
  if (order == 1) {
    x[0] = 0.0;
  } else {
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(order);
    Eigen::VectorXd sub(order - 1);
    for (int k = 1; k < order; ++k) sub[k - 1] = std::sqrt(0.5 * k);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    x = solver.eigenvalues();
  }

  const double root_two_n = std::sqrt(2.0 * order);
  Eigen::VectorXd w(order);
  for (int i = 0; i < order; ++i) {
    for (int it = 0; it < 4; ++it) {
      const Eigen::VectorXd h = hermite_functions(order, x[i]);
      const double slope = root_two_n * h[order - 1] - x[i] * h[order];
      if (slope == 0.0) break;
      const double step = h[order] / slope;
      x[i] -= step;
      if (std::abs(step) < 1e-16 * (1.0 + std::abs(x[i]))) break;
    }
  }
  std::sort(x.begin(), x.end());
  for (int i = 0; i < order / 2; ++i) {
    const double m = 0.5 * (x[order - 1 - i] - x[i]);
    x[i] = -m;
    x[order - 1 - i] = m;
  }
  if (order % 2 == 1) x[order / 2] = 0.0;
  // Christoffel numbers times exp(x^2): 1 / sum_{k<N} h_k(x)^2.
  for (int i = 0; i < order; ++i) {
    w[i] = 1.0 / hermite_functions(order - 1, x[i]).squaredNorm();
  }
  for (int i = 0; i < order / 2; ++i) {
    const double m = 0.5 * (w[i] + w[order - 1 - i]);
    w[i] = m;
    w[order - 1 - i] = m;
  }

  const auto n_total = static_cast<Eigen::Index>(std::llround(total));
  QuadratureRule rule;
  rule.nodes.resize(dimension, n_total);
  rule.weights.resize(n_total);
  std::vector<int> digit(static_cast<std::size_t>(dimension), 0);
  for (Eigen::Index p = 0; p < n_total; ++p) {
    double weight = 1.0;
    for (int a = 0; a < dimension; ++a) {
      const int k = digit[static_cast<std::size_t>(a)];
      rule.nodes(a, p) = scale * x[k];
      weight *= scale * w[k];
    }
    rule.weights[p] = weight;
    for (int a = 0; a < dimension; ++a) {
      if (++digit[static_cast<std::size_t>(a)] < order) break;
      digit[static_cast<std::size_t>(a)] = 0;
    }
  }
  return rule;
}

QuadratureRule default_rule(const TruncationScheme& scheme) {
  return gauss_hermite_rule(default_quadrature_order(scheme), scheme.dimension());
}

Eigen::VectorXd project_coefficients(const ScalarFunction& f, const TruncationScheme& scheme,
                                     const QuadratureRule& rule) {
  if (rule.dimension() != scheme.dimension()) {
    throw std::invalid_argument("project_coefficients: rule and scheme dimensions differ");
  }
  const auto n = static_cast<Eigen::Index>(scheme.size());
  Eigen::VectorXd coefficients = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd values(n);
  for (Eigen::Index p = 0; p < rule.nodes.cols(); ++p) {
    const Point x = rule.nodes.col(p);
    const double fx = f(x);
    if (fx == 0.0) continue;
    fill_basis_values(scheme, axis_tables(scheme.max_degree(), x), values);
    coefficients.noalias() += (rule.weights[p] * fx) * values;
  }
  if (!coefficients.allFinite()) {
    throw NumericFailure("project_coefficients: non-finite quadrature result");
  }
  return coefficients;
}

double reconstruct(const TruncationScheme& scheme, const Eigen::VectorXd& coefficients,
                   const Point& x) {
  if (coefficients.size() != static_cast<Eigen::Index>(scheme.size())) {
    throw std::invalid_argument("reconstruct: coefficient length does not match scheme");
  }
  return coefficients.dot(basis_values(scheme, x));
}

NodalBasis::NodalBasis(const TruncationScheme& scheme, QuadratureRule rule)
    : scheme_(scheme), rule_(std::move(rule)) {
  if (rule_.dimension() != scheme_.dimension()) {
    throw std::invalid_argument("NodalBasis: rule and scheme dimensions differ");
  }
  weighted_values_.resize(static_cast<Eigen::Index>(scheme_.size()), rule_.nodes.cols());
  for (Eigen::Index p = 0; p < rule_.nodes.cols(); ++p) {
    const Point x = rule_.nodes.col(p);
    fill_basis_values(scheme_, axis_tables(scheme_.max_degree(), x), weighted_values_.col(p));
    weighted_values_.col(p) *= rule_.weights[p];
  }
}

Eigen::VectorXd NodalBasis::project(const Eigen::VectorXd& samples) const {
  if (samples.size() != weighted_values_.cols()) {
    throw std::invalid_argument("NodalBasis::project: expected one sample per node");
  }
  Eigen::VectorXd c = weighted_values_ * samples;
  if (!c.allFinite()) throw NumericFailure("NodalBasis::project: non-finite quadrature result");
  return c;
}

}  // namespace hinv
