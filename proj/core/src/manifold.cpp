#include "hinv/manifold.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "hinv/errors.hpp"
#include "hinv/rng.hpp"

namespace hinv {

double fd_step(const Point& x) {
  return std::cbrt(std::numeric_limits<double>::epsilon()) * (1.0 + x.norm());
}

namespace {

double second_difference_step(const Point& x) {
  return std::pow(std::numeric_limits<double>::epsilon(), 0.25) * (1.0 + x.norm());
}

}  // namespace

Eigen::VectorXd fd_gradient(const std::function<double(const Point&)>& f, const Point& x) {
  const double h = fd_step(x);
  Eigen::VectorXd g(x.size());
  Point xp = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    xp[i] = x[i] + h;
    const double up = f(xp);
    xp[i] = x[i] - h;
    const double down = f(xp);
    xp[i] = x[i];
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

Eigen::MatrixXd fd_hessian(const std::function<double(const Point&)>& f, const Point& x) {
  const double h = second_difference_step(x);
  const Eigen::Index d = x.size();
  Eigen::MatrixXd hess(d, d);
  const double f0 = f(x);
  Point xp = x;
  for (Eigen::Index i = 0; i < d; ++i) {
    xp[i] = x[i] + h;
    const double up = f(xp);
    xp[i] = x[i] - h;
    const double down = f(xp);
    xp[i] = x[i];
    hess(i, i) = (up - 2.0 * f0 + down) / (h * h);
    for (Eigen::Index k = 0; k < i; ++k) {
      auto eval = [&](double si, double sk) {
        Point y = x;
        y[i] += si * h;
        y[k] += sk * h;
        return f(y);
      };
      const double v = (eval(1, 1) - eval(1, -1) - eval(-1, 1) + eval(-1, -1)) / (4.0 * h * h);
      hess(i, k) = v;
      hess(k, i) = v;
    }
  }
  return hess;
}

Eigen::MatrixXd fd_jacobian(const VectorField& f, const Point& x) {
  const double h = fd_step(x);
  Point xp = x;
  Eigen::MatrixXd jac;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    xp[i] = x[i] + h;
    const Eigen::VectorXd up = f(xp);
    xp[i] = x[i] - h;
    const Eigen::VectorXd down = f(xp);
    xp[i] = x[i];
    if (i == 0) jac.resize(up.size(), x.size());
    jac.col(i) = (up - down) / (2.0 * h);
  }
  return jac;
}

Eigen::VectorXd ScalarField::grad(const Point& x) const {
  return gradient ? gradient(x) : fd_gradient(value, x);
}

Eigen::MatrixXd ScalarField::hess(const Point& x) const {
  if (hessian) return hessian(x);
  if (gradient) {
    Eigen::MatrixXd j = fd_jacobian(gradient, x);
    return 0.5 * (j + j.transpose());
  }
  return fd_hessian(value, x);
}

bool LevelSetManifold::analytic() const {
  for (const auto& c : constraints) {
    if (!c.analytic()) return false;
  }
  return true;
}

Eigen::VectorXd LevelSetManifold::value(const Point& x) const {
  Eigen::VectorXd v(codim());
  for (int k = 0; k < codim(); ++k) v[k] = constraints[static_cast<std::size_t>(k)](x);
  return v;
}

Eigen::MatrixXd LevelSetManifold::jacobian(const Point& x) const {
  Eigen::MatrixXd j(codim(), ambient_dim);
  for (int k = 0; k < codim(); ++k) j.row(k) = constraints[static_cast<std::size_t>(k)].grad(x).transpose();
  return j;
}

Eigen::VectorXd ChartManifold::second_along(const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                                            const Eigen::VectorXd& v) const {
  const Eigen::MatrixXd s = second(x);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(s.rows());
  for (int i = 0; i < chart_dim; ++i) {
    for (int k = 0; k < chart_dim; ++k) out += (u[i] * v[k]) * s.col(i * chart_dim + k);
  }
  return out;
}

void validate_sample(const LevelSetManifold& m, const PointSample& sample) {
  for (std::size_t i = 0; i < sample.points.size(); ++i) {
    const double violation = m.value(sample.points[i]).cwiseAbs().maxCoeff();
    if (!(violation <= sample.feasibility_tol)) {
      throw std::invalid_argument("sample point " + std::to_string(i) + " violates |f| <= " +
                                  std::to_string(sample.feasibility_tol));
    }
  }
}

Eigen::MatrixXd tangent_projector(const LevelSetManifold& m, const Point& x, double max_condition) {
  const Eigen::MatrixXd df = m.jacobian(x);
  const Eigen::MatrixXd gram = df * df.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > max_condition) {
    throw RankDeficiency("tangent_projector: Df(x) Df(x)^T is singular or ill-conditioned");
  }
  const Eigen::Index d = df.cols();
  return Eigen::MatrixXd::Identity(d, d) - df.transpose() * gram.ldlt().solve(df);
}

double second_order_part(const SdeModel& model, const ScalarField& g, const Point& x) {
  if (model.noise_count == 0) return 0.0;
  const Eigen::MatrixXd s = model.diffusion(x);
  return 0.5 * ((s * s.transpose()).cwiseProduct(g.hess(x))).sum();
}

double apply_generator(const SdeModel& model, const ScalarField& g, const Point& x) {
  return model.drift(x).dot(g.grad(x)) + second_order_part(model, g, x);
}

Eigen::VectorXd apply_first_order(const SdeModel& model, const ScalarField& g, const Point& x) {
  if (model.noise_count == 0) return Eigen::VectorXd(0);
  return model.diffusion(x).transpose() * g.grad(x);
}

std::vector<Eigen::MatrixXd> diffusion_jacobians(const SdeModel& model, const Point& x) {
  if (model.has_jacobians()) return model.diffusion_jacobians(x);
  std::vector<Eigen::MatrixXd> out;
  out.reserve(static_cast<std::size_t>(model.noise_count));
  for (int j = 0; j < model.noise_count; ++j) {
    out.push_back(fd_jacobian([&model, j](const Point& y) -> Eigen::VectorXd { return model.diffusion(y).col(j); }, x));
  }
  return out;
}

Eigen::VectorXd stratonovich_correction(const SdeModel& model, const Point& x) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(model.dimension);
  if (model.noise_count == 0) return c;
  const Eigen::MatrixXd s = model.diffusion(x);
  const auto jac = diffusion_jacobians(model, x);
  for (int j = 0; j < model.noise_count; ++j) c += jac[static_cast<std::size_t>(j)] * s.col(j);
  return 0.5 * c;
}

Eigen::VectorXd corrected_drift(const SdeModel& model, const Point& x) {
  return model.drift(x) - stratonovich_correction(model, x);
}

VectorField corrected_drift_field(SdeModel model) {
  return [model = std::move(model)](const Point& x) { return corrected_drift(model, x); };
}

std::optional<Point> newton_project(const LevelSetManifold& m, Point x, double tol, int max_iterations) {
  for (int it = 0; it < max_iterations; ++it) {
    const Eigen::VectorXd f = m.value(x);
    if (!f.allFinite()) return std::nullopt;
    if (f.cwiseAbs().maxCoeff() <= tol) return x;
    const Eigen::MatrixXd df = m.jacobian(x);
    const Eigen::MatrixXd gram = df * df.transpose();
    Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
    if (ldlt.info() != Eigen::Success || !(ldlt.vectorD().cwiseAbs().minCoeff() > 0.0)) return std::nullopt;
    x -= df.transpose() * ldlt.solve(f);
  }
  if (m.value(x).cwiseAbs().maxCoeff() <= tol) return x;
  return std::nullopt;
}

PointSample sample_sphere(int dimension, std::size_t count, std::uint64_t seed, double radius) {
  const CounterNormal normal(seed);
  PointSample sample;
  sample.seed = seed;
  sample.feasibility_tol = kAnalyticFeasibilityTol;
  sample.points.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Point x(dimension);
    for (int a = 0; a < dimension; ++a) x[a] = normal(i, 0, static_cast<std::uint64_t>(a));
    sample.points.push_back(radius * x / x.norm());
  }
  return sample;
}

PointSample sample_by_projection(const LevelSetManifold& m, std::size_t count, std::uint64_t seed,
                                 const Point& center, double scale, double feasibility_tol) {
  const CounterNormal normal(seed);
  PointSample sample;
  sample.seed = seed;
  sample.feasibility_tol = feasibility_tol;
  // Bounded number of proposals so an unreachable level set cannot hang.
  const std::size_t max_proposals = 100 * count + 100;
  for (std::size_t i = 0; i < max_proposals && sample.points.size() < count; ++i) {
    Point x(m.ambient_dim);
    for (int a = 0; a < m.ambient_dim; ++a) x[a] = center[a] + scale * normal(i, 1, static_cast<std::uint64_t>(a));
    if (auto p = newton_project(m, x, 1e-2 * feasibility_tol)) sample.points.push_back(*p);
  }
  return sample;
}

PointSample sample_by_parametrization(const ChartManifold& chart,
                                      const std::vector<Eigen::VectorXd>& parameters,
                                      double feasibility_tol) {
  PointSample sample;
  sample.feasibility_tol = feasibility_tol;
  sample.points.reserve(parameters.size());
  for (const auto& u : parameters) sample.points.push_back(chart.map(u));
  return sample;
}

LevelSetManifold sphere_manifold(int dimension, double radius) {
  ScalarField f;
  const double r2 = radius * radius;
  f.value = [r2](const Point& x) { return x.squaredNorm() - r2; };
  f.gradient = [](const Point& x) -> Eigen::VectorXd { return 2.0 * x; };
  f.hessian = [](const Point& x) -> Eigen::MatrixXd {
    return 2.0 * Eigen::MatrixXd::Identity(x.size(), x.size());
  };
  return LevelSetManifold{dimension, {f}, "sphere"};
}

LevelSetManifold hyperplane_manifold(const Eigen::VectorXd& normal, double offset) {
  ScalarField f;
  f.value = [normal, offset](const Point& x) { return x.dot(normal) - offset; };
  f.gradient = [normal](const Point&) -> Eigen::VectorXd { return normal; };
  f.hessian = [](const Point& x) -> Eigen::MatrixXd {
    return Eigen::MatrixXd::Zero(x.size(), x.size());
  };
  return LevelSetManifold{static_cast<int>(normal.size()), {f}, "hyperplane"};
}

LevelSetManifold torus_manifold(double major_radius, double minor_radius) {
  const double big = major_radius;
  const double small2 = minor_radius * minor_radius;
  ScalarField f;
  f.value = [big, small2](const Point& x) {
    const double rho = std::hypot(x[0], x[1]);
    return (rho - big) * (rho - big) + x[2] * x[2] - small2;
  };
  f.gradient = [big](const Point& x) -> Eigen::VectorXd {
    const double rho = std::hypot(x[0], x[1]);
    Eigen::VectorXd g(3);
    g << 2.0 * (rho - big) * x[0] / rho, 2.0 * (rho - big) * x[1] / rho, 2.0 * x[2];
    return g;
  };
  f.hessian = [big](const Point& x) -> Eigen::MatrixXd {
    const double rho = std::hypot(x[0], x[1]);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(3, 3);
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        const double xab = x[a] * x[b];
        h(a, b) = 2.0 * (xab / (rho * rho) + (rho - big) * ((a == b ? 1.0 : 0.0) / rho - xab / (rho * rho * rho)));
      }
    }
    h(2, 2) = 2.0;
    return h;
  };
  return LevelSetManifold{3, {f}, "torus-levelset"};
}

ChartManifold spherical_chart() {
  ChartManifold c;
  c.chart_dim = 2;
  c.ambient_dim = 3;
  c.name = "spherical-coordinates";
  c.map = [](const Eigen::VectorXd& u) -> Eigen::VectorXd {
    Eigen::VectorXd x(3);
    x << std::sin(u[0]) * std::cos(u[1]), std::sin(u[0]) * std::sin(u[1]), std::cos(u[0]);
    return x;
  };
  c.differential = [](const Eigen::VectorXd& u) -> Eigen::MatrixXd {
    const double st = std::sin(u[0]), ct = std::cos(u[0]), sp = std::sin(u[1]), cp = std::cos(u[1]);
    Eigen::MatrixXd j(3, 2);
    j << ct * cp, -st * sp,
         ct * sp, st * cp,
         -st, 0.0;
    return j;
  };
  c.second = [](const Eigen::VectorXd& u) -> Eigen::MatrixXd {
    const double st = std::sin(u[0]), ct = std::cos(u[0]), sp = std::sin(u[1]), cp = std::cos(u[1]);
    Eigen::MatrixXd s(3, 4);
    // columns: (th,th), (th,ph), (ph,th), (ph,ph)
    s.col(0) << -st * cp, -st * sp, -ct;
    s.col(1) << -ct * sp, ct * cp, 0.0;
    s.col(2) = s.col(1);
    s.col(3) << -st * cp, -st * sp, 0.0;
    return s;
  };
  return c;
}

ChartManifold identity_chart(int dimension) {
  ChartManifold c;
  c.chart_dim = dimension;
  c.ambient_dim = dimension;
  c.name = "identity";
  c.map = [](const Eigen::VectorXd& u) -> Eigen::VectorXd { return u; };
  c.differential = [dimension](const Eigen::VectorXd&) -> Eigen::MatrixXd {
    return Eigen::MatrixXd::Identity(dimension, dimension);
  };
  c.second = [dimension](const Eigen::VectorXd&) -> Eigen::MatrixXd {
    return Eigen::MatrixXd::Zero(dimension, dimension * dimension);
  };
  return c;
}

}  // namespace hinv
