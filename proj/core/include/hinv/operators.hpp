#pragma once

#include <Eigen/Dense>

#include "hinv/sobolev.hpp"

namespace hinv {

enum class OperatorKind { derivative, multiplication, hermite, translation, composite };

/// A linear operator on a truncated coefficient space, stored densely.
///
/// Column n holds the coefficients of the operator applied to h_n; targets
/// outside the truncation are dropped (Galerkin projection).
struct OperatorMatrix {
  TruncationScheme scheme;
  Eigen::MatrixXd entries;
  OperatorKind kind = OperatorKind::composite;
  int axis = -1;             // derivative / multiplication
  Eigen::VectorXd shift;     // translation

  CoefficientVector apply(const CoefficientVector& v) const;
};

/// Composition (a then b is b * a). Throws SchemeMismatch.
OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b);

/// Matrix of d/dx_axis (axis is 0-based) from
/// d h_k = sqrt(k/2) h_{k-1} - sqrt((k+1)/2) h_{k+1}.
OperatorMatrix derivative_matrix(int axis, const TruncationScheme& scheme);

/// Matrix of x_axis * (.) from x h_k = sqrt((k+1)/2) h_{k+1} + sqrt(k/2) h_{k-1}.
OperatorMatrix multiplication_matrix(int axis, const TruncationScheme& scheme);

/// sum_i (M_i^2 - D_i^2) built from the truncated matrices. Equals
/// diag(2|n| + d) away from the top two degrees.
OperatorMatrix hermite_operator_matrix(const TruncationScheme& scheme);

/// tau_x = exp(-sum_i x_i D_i), the translation by x.
OperatorMatrix translation_operator(const Point& shift, const TruncationScheme& scheme);

/// ||(tau_{h e_axis} v - v)/h + D_axis v||_p. Throws std::invalid_argument for h == 0.
double generator_residual(const CoefficientVector& v, int axis, double h,
                          RegularityIndex p = RegularityIndex(0.0));

/// Coefficients with every entry of degree above max_degree set to zero.
Eigen::VectorXd restrict_to_degree(const CoefficientVector& v, int max_degree);

}  // namespace hinv
