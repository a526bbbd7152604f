#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hinv/hermite.hpp"

namespace hinv {

using VectorField = std::function<Eigen::VectorXd(const Point&)>;
/// Returns the d x r matrix whose column j is sigma^j(x).
using DiffusionField = std::function<Eigen::MatrixXd(const Point&)>;
/// Returns the r Jacobians D sigma^j(x), each d x d.
using DiffusionJacobians = std::function<std::vector<Eigen::MatrixXd>(const Point&)>;

/// dX = b(X) dt + sum_{j < r} sigma^j(X) dW^j with r driving Wiener processes.
///
/// The noise count r is a truncation of the countable family of driving
/// Wiener processes; the discarded tail is model error owned by the caller.
struct SdeModel {
  int dimension = 0;
  int noise_count = 0;
  VectorField drift;
  DiffusionField diffusion;
  DiffusionJacobians diffusion_jacobians;  // optional
  std::string name;

  bool has_jacobians() const { return static_cast<bool>(diffusion_jacobians); }
  void validate() const;
};

/// One simulated path: states[k] at times[k], increments row k drives step k.
struct Trajectory {
  Eigen::VectorXd times;
  std::vector<Point> states;
  Eigen::MatrixXd increments;  // steps x r
  std::uint64_t seed = 0;
  std::uint64_t path = 0;

  std::size_t steps() const { return states.empty() ? 0 : states.size() - 1; }
};

/// Number of Euler steps for horizon T: round(T / dt). Throws unless
/// dt > 0 and T >= dt.
std::size_t step_count(double horizon, double dt);

/// steps x r matrix of i.i.d. N(0, dt) Wiener increments, a pure function of
/// (seed, path).
Eigen::MatrixXd coupled_increments(std::uint64_t seed, std::size_t steps, int noise_count, double dt,
                                   std::uint64_t path = 0);

/// Sums consecutive blocks of `factor` rows: the increments of the same
/// Brownian path on a grid `factor` times coarser.
Eigen::MatrixXd coarsen_increments(const Eigen::MatrixXd& fine, std::size_t factor);

/// X_{k+1} = X_k + b(X_k) dt + sum_j sigma^j(X_k) dW_k^j with the given
/// increments. Throws BlowUp on a non-finite state.
Trajectory euler_maruyama(const SdeModel& model, const Point& x0, double dt,
                          const Eigen::MatrixXd& increments);

/// Draws increments from (seed, path) and integrates up to T.
Trajectory euler_maruyama(const SdeModel& model, const Point& x0, double horizon, double dt,
                          std::uint64_t seed, std::uint64_t path = 0);

/// Trajectory as CSV rows "t,x_1,...,x_d" in full precision.
std::string trajectory_csv(const Trajectory& trajectory);

}  // namespace hinv
