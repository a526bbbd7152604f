#include "hinv/sde.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "hinv/errors.hpp"
#include "hinv/rng.hpp"

namespace hinv {

void SdeModel::validate() const {
  if (dimension < 1) throw std::invalid_argument("SdeModel: dimension must be >= 1");
  if (noise_count < 0) throw std::invalid_argument("SdeModel: noise_count must be >= 0");
  if (!drift) throw std::invalid_argument("SdeModel: drift is not set");
  if (noise_count > 0 && !diffusion) throw std::invalid_argument("SdeModel: diffusion is not set");
}

std::size_t step_count(double horizon, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("step size must be positive");
  if (!(horizon >= dt)) throw std::invalid_argument("horizon must be at least one step");
  return static_cast<std::size_t>(std::llround(horizon / dt));
}

Eigen::MatrixXd coupled_increments(std::uint64_t seed, std::size_t steps, int noise_count, double dt,
                                   std::uint64_t path) {
  if (!(dt > 0.0)) throw std::invalid_argument("coupled_increments: dt must be positive");
  const CounterNormal normal(seed);
  const double scale = std::sqrt(dt);
  Eigen::MatrixXd dw(static_cast<Eigen::Index>(steps), noise_count);
  for (std::size_t k = 0; k < steps; ++k) {
    for (int j = 0; j < noise_count; ++j) {
      dw(static_cast<Eigen::Index>(k), j) = scale * normal(path, k, static_cast<std::uint64_t>(j));
    }
  }
  return dw;
}

Eigen::MatrixXd coarsen_increments(const Eigen::MatrixXd& fine, std::size_t factor) {
  if (factor == 0) throw std::invalid_argument("coarsen_increments: factor must be positive");
  const auto f = static_cast<Eigen::Index>(factor);
  if (fine.rows() % f != 0) {
    throw std::invalid_argument("coarsen_increments: step count not divisible by factor");
  }
  Eigen::MatrixXd coarse(fine.rows() / f, fine.cols());
  for (Eigen::Index k = 0; k < coarse.rows(); ++k) coarse.row(k) = fine.middleRows(k * f, f).colwise().sum();
  return coarse;
}

Trajectory euler_maruyama(const SdeModel& model, const Point& x0, double dt,
                          const Eigen::MatrixXd& increments) {
  model.validate();
  if (x0.size() != model.dimension) throw std::invalid_argument("euler_maruyama: x0 dimension mismatch");
  if (!(dt > 0.0)) throw std::invalid_argument("euler_maruyama: dt must be positive");
  if (increments.cols() != model.noise_count) {
    throw std::invalid_argument("euler_maruyama: increment columns must equal noise_count");
  }
  const auto steps = static_cast<std::size_t>(increments.rows());
  Trajectory out;
  out.times.resize(static_cast<Eigen::Index>(steps + 1));
  out.states.reserve(steps + 1);
  out.increments = increments;
  out.states.push_back(x0);
  out.times[0] = 0.0;

  Point x = x0;
  for (std::size_t k = 0; k < steps; ++k) {
    Point next = x + dt * model.drift(x);
    if (model.noise_count > 0) {
      next.noalias() += model.diffusion(x) * increments.row(static_cast<Eigen::Index>(k)).transpose();
    }
    if (!next.allFinite()) throw BlowUp("euler_maruyama: non-finite state", k + 1);
    x = std::move(next);
    out.states.push_back(x);
    out.times[static_cast<Eigen::Index>(k + 1)] = static_cast<double>(k + 1) * dt;
  }
  return out;
}

Trajectory euler_maruyama(const SdeModel& model, const Point& x0, double horizon, double dt,
                          std::uint64_t seed, std::uint64_t path) {
  const std::size_t steps = step_count(horizon, dt);
  Trajectory t = euler_maruyama(model, x0, dt, coupled_increments(seed, steps, model.noise_count, dt, path));
  t.seed = seed;
  t.path = path;
  return t;
}

std::string trajectory_csv(const Trajectory& trajectory) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  os << "t";
  const auto d = trajectory.states.empty() ? 0 : trajectory.states.front().size();
  for (Eigen::Index i = 0; i < d; ++i) os << ",x_" << (i + 1);
  os << '\n';
  for (std::size_t k = 0; k < trajectory.states.size(); ++k) {
    os << trajectory.times[static_cast<Eigen::Index>(k)];
    for (Eigen::Index i = 0; i < d; ++i) os << ',' << trajectory.states[k][i];
    os << '\n';
  }
  return os.str();
}

}  // namespace hinv
