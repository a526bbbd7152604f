#include "hinv/spde.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "hinv/errors.hpp"
#include "hinv/operators.hpp"

namespace hinv {

Profile Profile::delta(int dimension) {
  Profile p;
  p.kind = Kind::delta;
  p.dimension = dimension;
  p.name = "delta";
  return p;
}

Profile Profile::gaussian(int dimension, double width, double amplitude) {
  Profile p;
  p.kind = Kind::smooth;
  p.dimension = dimension;
  p.name = "gaussian";
  const double inv = 1.0 / (width * width);
  p.value = [=](const Point& y) { return amplitude * std::exp(-0.5 * inv * y.squaredNorm()); };
  p.gradient = [=](const Point& y) -> Eigen::VectorXd {
    return (-inv * amplitude * std::exp(-0.5 * inv * y.squaredNorm())) * y;
  };
  p.hessian = [=](const Point& y) -> Eigen::MatrixXd {
    const double g = amplitude * std::exp(-0.5 * inv * y.squaredNorm());
    const auto n = y.size();
    return g * (inv * inv * y * y.transpose() - inv * Eigen::MatrixXd::Identity(n, n));
  };
  return p;
}

OrbitMap::OrbitMap(Profile profile, const TruncationScheme& scheme)
    : profile_(std::move(profile)), scheme_(scheme) {
  if (profile_.dimension != scheme_.dimension()) {
    throw std::invalid_argument("OrbitMap: profile and scheme dimensions differ");
  }
  if (profile_.kind == Profile::Kind::smooth) {
    if (!profile_.value || !profile_.gradient || !profile_.hessian) {
      throw std::invalid_argument("OrbitMap: smooth profiles need value, gradient and hessian");
    }
    nodal_ = std::make_shared<const NodalBasis>(scheme_, default_rule(scheme_));
  }
}

Eigen::VectorXd OrbitMap::project_shifted(const std::function<double(const Point&)>& g,
                                          const Point& x) const {
  const auto& nodes = nodal_->rule().nodes;
  Eigen::VectorXd samples(nodes.cols());
  for (Eigen::Index p = 0; p < nodes.cols(); ++p) samples[p] = g(nodes.col(p) - x);
  return nodal_->project(samples);
}

namespace {

// Per-axis tables of h_k, h_k' and h_k'' at x (columns = axes).
struct AxisTables {
  Eigen::MatrixXd h, dh, d2h;
};

AxisTables axis_tables_with_derivatives(int max_degree, const Point& x) {
  AxisTables t;
  const auto d = x.size();
  t.h.resize(max_degree + 1, d);
  t.dh.resize(max_degree + 1, d);
  t.d2h.resize(max_degree + 1, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    t.h.col(i) = hermite_functions(max_degree, x[i]);
    t.dh.col(i) = hermite_function_derivatives(max_degree, x[i]);
    for (int k = 0; k <= max_degree; ++k) {
      t.d2h(k, i) = (x[i] * x[i] - (2.0 * k + 1.0)) * t.h(k, i);
    }
  }
  return t;
}

}  // namespace

CoefficientVector OrbitMap::operator()(const Point& x) const {
  if (x.size() != scheme_.dimension()) throw std::invalid_argument("OrbitMap: point dimension mismatch");
  if (profile_.kind == Profile::Kind::delta) return CoefficientVector(scheme_, basis_values(scheme_, x));
  return CoefficientVector(scheme_, project_shifted(profile_.value, x));
}

Eigen::MatrixXd OrbitMap::differential(const Point& x) const {
  const int d = scheme_.dimension();
  const auto s = static_cast<Eigen::Index>(scheme_.size());
  Eigen::MatrixXd out(s, d);
  if (profile_.kind == Profile::Kind::delta) {
    const AxisTables t = axis_tables_with_derivatives(scheme_.max_degree(), x);
    for (Eigen::Index b = 0; b < s; ++b) {
      const MultiIndex& n = scheme_.index(static_cast<std::size_t>(b));
      for (int i = 0; i < d; ++i) {
        double v = 1.0;
        for (int a = 0; a < d; ++a) {
          const int k = n[static_cast<std::size_t>(a)];
          v *= (a == i) ? t.dh(k, a) : t.h(k, a);
        }
        out(b, i) = v;
      }
    }
    return out;
  }
  for (int i = 0; i < d; ++i) {
    out.col(i) = -project_shifted([this, i](const Point& y) { return profile_.gradient(y)[i]; }, x);
  }
  return out;
}

Eigen::MatrixXd OrbitMap::second(const Point& x) const {
  const int d = scheme_.dimension();
  const auto s = static_cast<Eigen::Index>(scheme_.size());
  Eigen::MatrixXd out(s, d * d);
  if (profile_.kind == Profile::Kind::delta) {
    const AxisTables t = axis_tables_with_derivatives(scheme_.max_degree(), x);
    for (Eigen::Index b = 0; b < s; ++b) {
      const MultiIndex& n = scheme_.index(static_cast<std::size_t>(b));
      for (int i = 0; i < d; ++i) {
        for (int k = 0; k < d; ++k) {
          double v = 1.0;
          for (int a = 0; a < d; ++a) {
            const int deg = n[static_cast<std::size_t>(a)];
            const int order = (a == i) + (a == k);
            v *= order == 0 ? t.h(deg, a) : order == 1 ? t.dh(deg, a) : t.d2h(deg, a);
          }
          out(b, i * d + k) = v;
        }
      }
    }
    return out;
  }
  for (int i = 0; i < d; ++i) {
    for (int k = 0; k < d; ++k) {
      if (k < i) {
        out.col(i * d + k) = out.col(k * d + i);
        continue;
      }
      out.col(i * d + k) = project_shifted([this, i, k](const Point& y) { return profile_.hessian(y)(i, k); }, x);
    }
  }
  return out;
}

ChartManifold OrbitMap::chart() const {
  ChartManifold c;
  c.chart_dim = scheme_.dimension();
  c.ambient_dim = static_cast<int>(scheme_.size());
  c.name = "orbit-" + profile_.name;
  auto self = std::make_shared<const OrbitMap>(*this);
  c.map = [self](const Eigen::VectorXd& x) -> Eigen::VectorXd { return (*self)(x).coefficients(); };
  c.differential = [self](const Eigen::VectorXd& x) { return self->differential(x); };
  c.second = [self](const Eigen::VectorXd& x) { return self->second(x); };
  return c;
}

SpdeModel make_spde_model(const TruncationScheme& scheme, std::vector<CoefficientVector> drift_coeffs,
                          std::vector<std::vector<CoefficientVector>> diffusion_coeffs, Profile profile) {
  const int d = scheme.dimension();
  if (static_cast<int>(drift_coeffs.size()) != d) {
    throw std::invalid_argument("make_spde_model: need one drift coefficient per axis");
  }
  for (const auto& b : drift_coeffs) require_same_scheme(scheme, b.scheme(), "make_spde_model");
  for (const auto& sj : diffusion_coeffs) {
    if (static_cast<int>(sj.size()) != d) {
      throw std::invalid_argument("make_spde_model: need d components per diffusion column");
    }
    for (const auto& s : sj) require_same_scheme(scheme, s.scheme(), "make_spde_model");
  }
  if (profile.dimension != d) throw std::invalid_argument("make_spde_model: profile dimension mismatch");

  SpdeModel m{scheme, std::move(drift_coeffs), std::move(diffusion_coeffs), std::move(profile), {}, {}};
  for (int i = 0; i < d; ++i) m.derivative.push_back(derivative_matrix(i, scheme).entries);
  for (int i = 0; i < d; ++i) {
    for (int k = 0; k < d; ++k) m.second_derivative.push_back(m.derivative[static_cast<std::size_t>(i)] * m.derivative[static_cast<std::size_t>(k)]);
  }
  return m;
}

SpdeModel make_spde_model(const TruncationScheme& scheme, const std::vector<ScalarFunction>& drift,
                          const std::vector<std::vector<ScalarFunction>>& diffusion, Profile profile) {
  const QuadratureRule rule = default_rule(scheme);
  std::vector<CoefficientVector> b;
  for (const auto& f : drift) b.push_back(project_function(f, scheme, rule));
  std::vector<std::vector<CoefficientVector>> sigma;
  for (const auto& column : diffusion) {
    auto& out = sigma.emplace_back();
    for (const auto& f : column) out.push_back(project_function(f, scheme, rule));
  }
  return make_spde_model(scheme, std::move(b), std::move(sigma), std::move(profile));
}

Eigen::VectorXd drift_pairings(const SpdeModel& m, const CoefficientVector& y) {
  Eigen::VectorXd beta(m.dimension());
  for (int i = 0; i < m.dimension(); ++i) beta[i] = dual_pair(m.drift_coeffs[static_cast<std::size_t>(i)], y);
  return beta;
}

Eigen::MatrixXd diffusion_pairings(const SpdeModel& m, const CoefficientVector& y) {
  Eigen::MatrixXd s(m.dimension(), m.noise_count());
  for (int j = 0; j < m.noise_count(); ++j) {
    for (int i = 0; i < m.dimension(); ++i) {
      s(i, j) = dual_pair(m.diffusion_coeffs[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)], y);
    }
  }
  return s;
}

CoefficientVector spde_drift(const SpdeModel& m, const CoefficientVector& y) {
  require_same_scheme(m.scheme, y.scheme(), "spde_drift");
  const int d = m.dimension();
  const Eigen::MatrixXd s = diffusion_pairings(m, y);
  const Eigen::MatrixXd q = s * s.transpose();
  const Eigen::VectorXd beta = drift_pairings(m, y);
  const Eigen::VectorXd& c = y.coefficients();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(c.size());
  for (int i = 0; i < d; ++i) {
    for (int k = 0; k < d; ++k) {
      if (q(i, k) != 0.0) out.noalias() += (0.5 * q(i, k)) * (m.second_derivative[static_cast<std::size_t>(i * d + k)] * c);
    }
    if (beta[i] != 0.0) out.noalias() -= beta[i] * (m.derivative[static_cast<std::size_t>(i)] * c);
  }
  return CoefficientVector(m.scheme, std::move(out));
}

std::vector<CoefficientVector> spde_diffusion(const SpdeModel& m, const CoefficientVector& y) {
  require_same_scheme(m.scheme, y.scheme(), "spde_diffusion");
  const Eigen::MatrixXd s = diffusion_pairings(m, y);
  std::vector<Eigen::VectorXd> dy;
  for (int i = 0; i < m.dimension(); ++i) dy.push_back(m.derivative[static_cast<std::size_t>(i)] * y.coefficients());
  std::vector<CoefficientVector> out;
  for (int j = 0; j < m.noise_count(); ++j) {
    Eigen::VectorXd a = Eigen::VectorXd::Zero(y.coefficients().size());
    for (int i = 0; i < m.dimension(); ++i) a -= s(i, j) * dy[static_cast<std::size_t>(i)];
    out.emplace_back(m.scheme, std::move(a));
  }
  return out;
}

double default_norm_index(const Profile& profile) {
  return profile.kind == Profile::Kind::delta ? -1.0 : 0.0;
}

CoefficientVector galerkin_step(const SpdeModel& m, const CoefficientVector& y, double dt,
                                const Eigen::VectorXd& dw) {
  if (dw.size() != m.noise_count()) throw std::invalid_argument("galerkin_step: increment size mismatch");
  Eigen::VectorXd next = y.coefficients() + dt * spde_drift(m, y).coefficients();
  const auto a = spde_diffusion(m, y);
  for (int j = 0; j < m.noise_count(); ++j) next += dw[j] * a[static_cast<std::size_t>(j)].coefficients();
  if (!next.allFinite()) throw NumericFailure("galerkin_step: non-finite state");
  return CoefficientVector(m.scheme, std::move(next));
}

SpdeTrajectory galerkin_integrate(const SpdeModel& m, const CoefficientVector& y0, double dt,
                                  const Eigen::MatrixXd& increments) {
  require_same_scheme(m.scheme, y0.scheme(), "galerkin_integrate");
  if (!(dt > 0.0)) throw std::invalid_argument("galerkin_integrate: dt must be positive");
  if (increments.cols() != m.noise_count()) {
    throw std::invalid_argument("galerkin_integrate: increment columns must equal noise count");
  }
  const auto steps = static_cast<std::size_t>(increments.rows());
  SpdeTrajectory out;
  out.norm_index = default_norm_index(m.profile);
  out.times.resize(static_cast<Eigen::Index>(steps + 1));
  out.times[0] = 0.0;
  out.states.reserve(steps + 1);
  out.states.push_back(y0);
  for (std::size_t k = 0; k < steps; ++k) {
    try {
      out.states.push_back(galerkin_step(m, out.states.back(), dt, increments.row(static_cast<Eigen::Index>(k)).transpose()));
    } catch (const NumericFailure&) {
      throw BlowUp("galerkin_integrate: non-finite coefficient state", k + 1);
    }
    out.times[static_cast<Eigen::Index>(k + 1)] = static_cast<double>(k + 1) * dt;
  }
  return out;
}

SdeModel induced_sde(const SpdeModel& m, const OrbitMap& orbit) {
  require_same_scheme(m.scheme, orbit.scheme(), "induced_sde");
  auto model = std::make_shared<const SpdeModel>(m);
  auto psi = std::make_shared<const OrbitMap>(orbit);
  SdeModel sde;
  sde.dimension = m.dimension();
  sde.noise_count = m.noise_count();
  sde.name = "induced-" + m.profile.name;
  sde.drift = [model, psi](const Point& x) { return drift_pairings(*model, (*psi)(x)); };
  sde.diffusion = [model, psi](const Point& x) { return diffusion_pairings(*model, (*psi)(x)); };
  return sde;
}

TranslatedProfileRun translated_profile_solution(const SpdeModel& m, const OrbitMap& orbit,
                                                 const Point& x0, double dt,
                                                 const Eigen::MatrixXd& increments) {
  TranslatedProfileRun run;
  run.driver = euler_maruyama(induced_sde(m, orbit), x0, dt, increments);
  run.states.times = run.driver.times;
  run.states.norm_index = default_norm_index(m.profile);
  run.states.states.reserve(run.driver.states.size());
  for (const auto& x : run.driver.states) run.states.states.push_back(orbit(x));
  return run;
}

std::vector<double> compare_trajectories(const SpdeTrajectory& a, const SpdeTrajectory& b, double p) {
  if (a.states.size() != b.states.size() || a.times.size() != b.times.size() ||
      (a.times - b.times).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + a.times.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("compare_trajectories: time grids differ");
  }
  std::vector<double> out(a.states.size());
  for (std::size_t k = 0; k < a.states.size(); ++k) out[k] = norm_p(a.states[k] - b.states[k], p);
  return out;
}

ChartFields spde_chart_fields(const SpdeModel& m) {
  auto model = std::make_shared<const SpdeModel>(m);
  ChartFields f;
  f.noise_count = m.noise_count();
  f.drift = [model](const Point& y) -> Eigen::VectorXd {
    return spde_drift(*model, CoefficientVector(model->scheme, y)).coefficients();
  };
  f.diffusion = [model](const Point& y) -> Eigen::MatrixXd {
    const auto a = spde_diffusion(*model, CoefficientVector(model->scheme, y));
    Eigen::MatrixXd out(y.size(), model->noise_count());
    for (int j = 0; j < model->noise_count(); ++j) out.col(j) = a[static_cast<std::size_t>(j)].coefficients();
    return out;
  };
  return f;
}

std::vector<CommonNoiseRow> common_noise_comparison(const SpdeModel& m, const OrbitMap& orbit,
                                                    const Point& x0, double horizon,
                                                    const std::vector<double>& dts, std::size_t paths,
                                                    std::uint64_t seed, double p, int floor_extra_degrees) {
  if (dts.empty() || paths == 0) throw std::invalid_argument("common_noise_comparison: empty experiment");
  const double finest = *std::min_element(dts.begin(), dts.end());
  const std::size_t fine_steps = step_count(horizon, finest);
  std::vector<std::size_t> factors;
  for (double dt : dts) {
    const auto f = static_cast<std::size_t>(std::llround(dt / finest));
    if (f == 0 || std::abs(dt / finest - static_cast<double>(f)) > 1e-9 * dt / finest || fine_steps % f != 0) {
      throw std::invalid_argument("common_noise_comparison: step sizes must be integer multiples of the smallest");
    }
    factors.push_back(f);
  }

  const TruncationScheme extended(m.scheme.dimension(), m.scheme.max_degree() + floor_extra_degrees);
  const OrbitMap wide(orbit.profile(), extended);
  auto tail_mass = [&](const Point& x) {
    CoefficientVector full = wide(x);
    Eigen::VectorXd c = full.coefficients();
    for (std::size_t i = 0; i < extended.size(); ++i) {
      if (extended.index(i).total_degree() <= m.scheme.max_degree()) c[static_cast<Eigen::Index>(i)] = 0.0;
    }
    return norm_p(CoefficientVector(extended, std::move(c)), p);
  };

  std::vector<CommonNoiseRow> rows(dts.size());
  for (std::size_t i = 0; i < dts.size(); ++i) rows[i] = {dts[i], 0.0, 0.0, paths};
  for (std::size_t path = 0; path < paths; ++path) {
    const Eigen::MatrixXd fine = coupled_increments(seed, fine_steps, m.noise_count(), finest, path);
    for (std::size_t i = 0; i < dts.size(); ++i) {
      const Eigen::MatrixXd inc = factors[i] == 1 ? fine : coarsen_increments(fine, factors[i]);
      const double dt = static_cast<double>(factors[i]) * finest;
      const auto tp = translated_profile_solution(m, orbit, x0, dt, inc);
      const auto gal = galerkin_integrate(m, tp.states.states.front(), dt, inc);
      const auto dist = compare_trajectories(gal, tp.states, p);
      rows[i].mean_sup_distance += *std::max_element(dist.begin(), dist.end());
      const std::size_t stride = std::max<std::size_t>(1, tp.driver.states.size() / 50);
      for (std::size_t k = 0; k < tp.driver.states.size(); k += stride) {
        rows[i].truncation_floor = std::max(rows[i].truncation_floor, tail_mass(tp.driver.states[k]));
      }
    }
  }
  for (auto& row : rows) row.mean_sup_distance /= static_cast<double>(paths);
  return rows;
}

std::string distance_csv(const Eigen::VectorXd& times, const std::vector<double>& distances) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << "t,distance\n";
  for (std::size_t k = 0; k < distances.size(); ++k) os << times[static_cast<Eigen::Index>(k)] << ',' << distances[k] << '\n';
  return os.str();
}

}  // namespace hinv
