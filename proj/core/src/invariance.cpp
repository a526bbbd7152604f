#include "hinv/invariance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hinv/errors.hpp"

namespace hinv {

InvarianceReport make_report(std::string condition, std::vector<double> residuals,
                             const std::vector<Point>& points, double tolerance,
                             std::optional<std::uint64_t> seed) {
  InvarianceReport r;
  r.condition = std::move(condition);
  r.tolerance = tolerance;
  r.n_points = residuals.size();
  r.seed = seed;
  double sum = 0.0;
  for (std::size_t i = 0; i < residuals.size(); ++i) {
    double v = std::abs(residuals[i]);
    if (!std::isfinite(v)) v = std::numeric_limits<double>::infinity();
    residuals[i] = v;
    sum += v;
    if (i == 0 || v > r.max_abs) {
      r.max_abs = v;
      r.worst_index = i;
    }
  }
  r.mean_abs = residuals.empty() ? 0.0 : sum / static_cast<double>(residuals.size());
  if (!points.empty() && r.worst_index < points.size()) r.worst_point = points[r.worst_index];
  r.residuals = std::move(residuals);
  r.passed = r.max_abs <= tolerance;
  return r;
}

bool all_passed(const std::vector<InvarianceReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.passed; });
}

double default_tolerance(const SdeModel& model, const LevelSetManifold& m) {
  (void)model;  // the level-set conditions only differentiate f
  return m.analytic() ? kAnalyticTolerance : kFiniteDifferenceTolerance;
}

namespace {

void require_dims(const SdeModel& model, const LevelSetManifold& m) {
  model.validate();
  if (model.dimension != m.ambient_dim) throw std::invalid_argument("model and manifold dimensions differ");
}

constexpr const char* kRankNote =
    "Df(x) rank verified at sampled points only; surjectivity on all of N is not checked";

}  // namespace

std::vector<InvarianceReport> check_levelset(const SdeModel& model, const LevelSetManifold& m,
                                             const PointSample& sample, double tolerance) {
  require_dims(model, m);
  validate_sample(m, sample);
  const auto& pts = sample.points;
  std::vector<double> gen(pts.size()), first(pts.size());
  std::vector<std::size_t> flagged;
  for (std::size_t p = 0; p < pts.size(); ++p) {
    try {
      (void)tangent_projector(m, pts[p]);
    } catch (const RankDeficiency&) {
      flagged.push_back(p);
      gen[p] = first[p] = std::numeric_limits<double>::infinity();
      continue;
    }
    double g = 0.0, a = 0.0;
    for (const auto& fk : m.constraints) {
      g = std::max(g, std::abs(apply_generator(model, fk, pts[p])));
      const Eigen::VectorXd af = apply_first_order(model, fk, pts[p]);
      if (af.size() > 0) a = std::max(a, af.cwiseAbs().maxCoeff());
    }
    gen[p] = g;
    first[p] = a;
  }
  std::vector<InvarianceReport> out;
  out.push_back(make_report("levelset-generator", std::move(gen), pts, tolerance, sample.seed));
  out.push_back(make_report("levelset-first-order", std::move(first), pts, tolerance, sample.seed));
  for (auto& r : out) {
    r.flagged_points = flagged;
    r.note = kRankNote;
  }
  return out;
}

std::vector<InvarianceReport> check_sphere(const SdeModel& model, const PointSample& sample,
                                           double tolerance) {
  model.validate();
  const auto& pts = sample.points;
  std::vector<double> drift(pts.size()), diff(pts.size());
  for (std::size_t p = 0; p < pts.size(); ++p) {
    const Point& x = pts[p];
    if (x.size() != model.dimension) throw std::invalid_argument("check_sphere: point dimension mismatch");
    double trace = 0.0;
    double worst = 0.0;
    if (model.noise_count > 0) {
      const Eigen::MatrixXd s = model.diffusion(x);
      trace = s.squaredNorm();
      worst = (s.transpose() * x).cwiseAbs().maxCoeff();
    }
    drift[p] = x.dot(model.drift(x)) + 0.5 * trace;
    diff[p] = worst;
  }
  std::vector<InvarianceReport> out;
  out.push_back(make_report("sphere-drift", std::move(drift), pts, tolerance, sample.seed));
  out.push_back(make_report("sphere-diffusion", std::move(diff), pts, tolerance, sample.seed));
  return out;
}

InvarianceReport check_tangency(const VectorField& field, const LevelSetManifold& m,
                                const PointSample& sample, double tolerance, const std::string& condition) {
  validate_sample(m, sample);
  const auto& pts = sample.points;
  std::vector<double> res(pts.size());
  std::vector<std::size_t> flagged;
  for (std::size_t p = 0; p < pts.size(); ++p) {
    try {
      const Eigen::MatrixXd proj = tangent_projector(m, pts[p]);
      const Eigen::VectorXd v = field(pts[p]);
      res[p] = (v - proj * v).norm();
    } catch (const RankDeficiency&) {
      flagged.push_back(p);
      res[p] = std::numeric_limits<double>::infinity();
    }
  }
  auto r = make_report(condition, std::move(res), pts, tolerance, sample.seed);
  r.flagged_points = std::move(flagged);
  return r;
}

InvarianceReport check_simultaneous(const VectorField& field, const LevelSetManifold& m,
                                    const PointSample& sample, double radius, double tolerance) {
  if (!(radius > 0.0)) throw std::invalid_argument("check_simultaneous: radius must be positive");
  validate_sample(m, sample);
  const auto& pts = sample.points;
  std::vector<Eigen::MatrixXd> normal_part(pts.size());
  std::vector<std::size_t> flagged;
  for (std::size_t p = 0; p < pts.size(); ++p) {
    try {
      const Eigen::MatrixXd proj = tangent_projector(m, pts[p]);
      normal_part[p] = Eigen::MatrixXd::Identity(proj.rows(), proj.cols()) - proj;
    } catch (const RankDeficiency&) {
      flagged.push_back(p);
    }
  }
  std::vector<double> res(pts.size(), 0.0);
  for (std::size_t y = 0; y < pts.size(); ++y) {
    if (normal_part[y].size() == 0) {
      res[y] = std::numeric_limits<double>::infinity();
      continue;
    }
    const Eigen::VectorXd v = field(pts[y]);
    for (std::size_t z = 0; z < pts.size(); ++z) {
      if ((pts[z] - pts[y]).norm() > radius) continue;
      if (normal_part[z].size() == 0) {
        res[y] = std::numeric_limits<double>::infinity();
        break;
      }
      res[y] = std::max(res[y], (normal_part[z] * v).norm());
    }
  }
  auto r = make_report("simultaneous", std::move(res), pts, tolerance, sample.seed);
  r.flagged_points = std::move(flagged);
  r.note = "neighborhood radius " + std::to_string(radius) + " is a user parameter";
  return r;
}

std::vector<InvarianceReport> check_stratonovich_route(const SdeModel& model, const LevelSetManifold& m,
                                                       const PointSample& sample, double tolerance) {
  require_dims(model, m);
  std::vector<InvarianceReport> out;
  for (int j = 0; j < model.noise_count; ++j) {
    VectorField column = [&model, j](const Point& x) -> Eigen::VectorXd { return model.diffusion(x).col(j); };
    out.push_back(check_tangency(column, m, sample, tolerance, "tangency-sigma-" + std::to_string(j)));
  }
  out.push_back(check_tangency([&model](const Point& x) { return corrected_drift(model, x); }, m, sample,
                               tolerance, "tangency-stratonovich-drift"));
  return out;
}

ChartFields chart_fields(const SdeModel& model) {
  model.validate();
  ChartFields f;
  f.drift = model.drift;
  f.noise_count = model.noise_count;
  if (model.noise_count > 0) {
    f.diffusion = model.diffusion;
  } else {
    const int d = model.dimension;
    f.diffusion = [d](const Point&) -> Eigen::MatrixXd { return Eigen::MatrixXd(d, 0); };
  }
  return f;
}

ChartCheck check_chart(const ChartFields& fields, const ChartManifold& chart,
                       const std::vector<Eigen::VectorXd>& parameters, double tolerance) {
  const int m = chart.chart_dim;
  const int r = fields.noise_count;
  ChartCheck out;
  std::vector<double> res_a(parameters.size()), res_l(parameters.size());
  std::vector<Point> images;
  images.reserve(parameters.size());
  for (std::size_t p = 0; p < parameters.size(); ++p) {
    const Eigen::VectorXd& u = parameters[p];
    const Eigen::VectorXd y = chart.map(u);
    images.push_back(y);
    const Eigen::MatrixXd dphi = chart.differential(u);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(dphi, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (sv.size() < m || !(sv[m - 1] > kMinChartConditioning * sv[0])) {
      throw RankDeficiency("check_chart: chart differential is not injective at parameter point " +
                           std::to_string(p));
    }
    Eigen::MatrixXd a(m, r);
    double worst_a = 0.0;
    const Eigen::MatrixXd big_a = r > 0 ? fields.diffusion(y) : Eigen::MatrixXd(y.size(), 0);
    for (int j = 0; j < r; ++j) {
      a.col(j) = svd.solve(big_a.col(j));
      worst_a = std::max(worst_a, (big_a.col(j) - dphi * a.col(j)).norm());
    }
    Eigen::VectorXd rem = fields.drift(y);
    for (int j = 0; j < r; ++j) rem -= 0.5 * chart.second_along(u, a.col(j), a.col(j));
    const Eigen::VectorXd ell = svd.solve(rem);
    res_a[p] = worst_a;
    res_l[p] = (rem - dphi * ell).norm();
    out.local_diffusion.push_back(std::move(a));
    out.local_drift.push_back(ell);
  }
  out.diffusion = make_report("chart-diffusion", std::move(res_a), images, tolerance);
  out.drift = make_report("chart-drift", std::move(res_l), images, tolerance);
  // Report parameter-space locations: ambient images may live in coefficient space.
  if (!parameters.empty()) {
    out.diffusion.worst_point = parameters[out.diffusion.worst_index];
    out.drift.worst_point = parameters[out.drift.worst_index];
  }
  return out;
}

std::vector<DeviationRow> empirical_invariance(const SdeModel& model, const LevelSetManifold& m,
                                               const Point& x0, double horizon,
                                               const std::vector<double>& dts, std::size_t paths,
                                               std::uint64_t seed) {
  require_dims(model, m);
  if (dts.empty()) throw std::invalid_argument("empirical_invariance: no step sizes");
  if (paths == 0) throw std::invalid_argument("empirical_invariance: need at least one path");
  if (m.value(x0).cwiseAbs().maxCoeff() > kProjectedFeasibilityTol) {
    throw std::invalid_argument("empirical_invariance: x0 is not on the manifold");
  }
  const double finest = *std::min_element(dts.begin(), dts.end());
  const std::size_t fine_steps = step_count(horizon, finest);
  std::vector<std::size_t> factors;
  for (double dt : dts) {
    const double ratio = dt / finest;
    const auto f = static_cast<std::size_t>(std::llround(ratio));
    if (f == 0 || std::abs(ratio - static_cast<double>(f)) > 1e-9 * ratio || fine_steps % f != 0) {
      throw std::invalid_argument("empirical_invariance: step sizes must be integer multiples of the smallest");
    }
    factors.push_back(f);
  }

  std::vector<DeviationRow> rows(dts.size());
  for (std::size_t i = 0; i < dts.size(); ++i) rows[i] = {dts[i], 0.0, paths};
  for (std::size_t path = 0; path < paths; ++path) {
    const Eigen::MatrixXd fine = coupled_increments(seed, fine_steps, model.noise_count, finest, path);
    for (std::size_t i = 0; i < dts.size(); ++i) {
      const Eigen::MatrixXd inc = factors[i] == 1 ? fine : coarsen_increments(fine, factors[i]);
      const Trajectory t = euler_maruyama(model, x0, static_cast<double>(factors[i]) * finest, inc);
      double worst = 0.0;
      for (const auto& x : t.states) worst = std::max(worst, m.value(x).norm());
      rows[i].deviation += worst;
    }
  }
  for (auto& row : rows) row.deviation /= static_cast<double>(paths);
  return rows;
}

}  // namespace hinv
