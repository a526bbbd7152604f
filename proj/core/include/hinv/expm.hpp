#pragma once

#include <Eigen/Dense>

namespace hinv {

/// exp(A) by scaling and squaring with the fixed [13/13] Pade approximant.
///
/// A is scaled by 2^-s so that ||A||_1 2^-s <= 5.37 (the order-13 backward
/// error bound for double precision), exponentiated, and squared s times.
Eigen::MatrixXd matrix_exponential(const Eigen::MatrixXd& a);

}  // namespace hinv
