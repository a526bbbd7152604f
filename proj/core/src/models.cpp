#include "hinv/models.hpp"

#include <cmath>
#include <stdexcept>

namespace hinv {

namespace {

Eigen::MatrixXd stroock_sigma(const Point& x) {
  const auto d = x.size();
  return Eigen::MatrixXd::Identity(d, d) - x * x.transpose();
}

std::vector<Eigen::MatrixXd> stroock_jacobians(const Point& x) {
  const auto d = x.size();
  std::vector<Eigen::MatrixXd> out;
  out.reserve(static_cast<std::size_t>(d));
  for (Eigen::Index j = 0; j < d; ++j) {
    // d_i sigma^j = -delta_ij x - x_j e_i
    Eigen::MatrixXd jac = -x[j] * Eigen::MatrixXd::Identity(d, d);
    jac.col(j) -= x;
    out.push_back(std::move(jac));
  }
  return out;
}

std::vector<Eigen::MatrixXd> zero_jacobians(int d, int r) {
  return std::vector<Eigen::MatrixXd>(static_cast<std::size_t>(r), Eigen::MatrixXd::Zero(d, d));
}

}  // namespace

SdeModel stroock_sphere_model(int dimension) {
  SdeModel m;
  m.dimension = dimension;
  m.noise_count = dimension;
  m.name = "stroock-sphere";
  const double c = 0.5 * (dimension - 1);
  m.drift = [c](const Point& x) -> Eigen::VectorXd { return -c * x; };
  m.diffusion = stroock_sigma;
  m.diffusion_jacobians = stroock_jacobians;
  return m;
}

SdeModel stroock_diffusion_only_model(int dimension) {
  SdeModel m = stroock_sphere_model(dimension);
  m.name = "stroock-diffusion-only";
  m.drift = [](const Point& x) -> Eigen::VectorXd { return Eigen::VectorXd::Zero(x.size()); };
  return m;
}

SdeModel ornstein_uhlenbeck_model(int dimension, double theta, double volatility) {
  SdeModel m;
  m.dimension = dimension;
  m.noise_count = dimension;
  m.name = "ornstein-uhlenbeck";
  m.drift = [theta](const Point& x) -> Eigen::VectorXd { return -theta * x; };
  m.diffusion = [volatility](const Point& x) -> Eigen::MatrixXd {
    return volatility * Eigen::MatrixXd::Identity(x.size(), x.size());
  };
  m.diffusion_jacobians = [dimension](const Point&) { return zero_jacobians(dimension, dimension); };
  return m;
}

SdeModel hyperplane_tangent_model(int dimension) {
  SdeModel m;
  m.dimension = dimension;
  m.noise_count = dimension - 1;
  m.name = "hyperplane-tangent";
  m.drift = [](const Point& x) -> Eigen::VectorXd {
    Eigen::VectorXd b = -x;
    b[x.size() - 1] = 0.0;
    return b;
  };
  m.diffusion = [dimension](const Point&) -> Eigen::MatrixXd {
    return Eigen::MatrixXd::Identity(dimension, dimension - 1);
  };
  m.diffusion_jacobians = [dimension](const Point&) { return zero_jacobians(dimension, dimension - 1); };
  return m;
}

SdeModel radial_drift_model(int dimension) {
  SdeModel m;
  m.dimension = dimension;
  m.noise_count = 0;
  m.name = "radial-drift";
  m.drift = [](const Point& x) -> Eigen::VectorXd { return x; };
  m.diffusion_jacobians = [](const Point&) { return std::vector<Eigen::MatrixXd>{}; };
  return m;
}

SdeModel constant_drift_model(int dimension) {
  SdeModel m;
  m.dimension = dimension;
  m.noise_count = 0;
  m.name = "constant-drift";
  m.drift = [](const Point& x) -> Eigen::VectorXd { return Eigen::VectorXd::Unit(x.size(), 0); };
  m.diffusion_jacobians = [](const Point&) { return std::vector<Eigen::MatrixXd>{}; };
  return m;
}

SdeModel zero_model(int dimension, int noise_count) {
  SdeModel m;
  m.dimension = dimension;
  m.noise_count = noise_count;
  m.name = "zero";
  m.drift = [](const Point& x) -> Eigen::VectorXd { return Eigen::VectorXd::Zero(x.size()); };
  m.diffusion = [noise_count](const Point& x) -> Eigen::MatrixXd {
    return Eigen::MatrixXd::Zero(x.size(), noise_count);
  };
  m.diffusion_jacobians = [dimension, noise_count](const Point&) { return zero_jacobians(dimension, noise_count); };
  return m;
}

namespace {

std::vector<Eigen::Matrix3d> so3_generators() {
  Eigen::Matrix3d a, b, c;
  a << 0, 0, 0, 0, 0, -1, 0, 1, 0;
  b << 0, 0, 1, 0, 0, 0, -1, 0, 0;
  c << 0, -1, 0, 1, 0, 0, 0, 0, 0;
  return {a, b, c};
}

}  // namespace

SdeModel rotation_sphere_model() {
  const auto gens = so3_generators();
  Eigen::Matrix3d sum_sq = Eigen::Matrix3d::Zero();
  for (const auto& g : gens) sum_sq += g * g;
  SdeModel m;
  m.dimension = 3;
  m.noise_count = 3;
  m.name = "rotation-sphere";
  m.drift = [sum_sq](const Point& x) -> Eigen::VectorXd { return 0.5 * sum_sq * x; };
  m.diffusion = [gens](const Point& x) -> Eigen::MatrixXd {
    Eigen::MatrixXd s(3, 3);
    for (int j = 0; j < 3; ++j) s.col(j) = gens[static_cast<std::size_t>(j)] * x;
    return s;
  };
  m.diffusion_jacobians = [gens](const Point&) {
    return std::vector<Eigen::MatrixXd>(gens.begin(), gens.end());
  };
  return m;
}

SdeModel tangent_flow_model(int dimension) {
  SdeModel m;
  m.dimension = dimension;
  m.noise_count = 0;
  m.name = "tangent-flow";
  m.drift = [](const Point& x) -> Eigen::VectorXd { return Eigen::VectorXd::Unit(x.size(), 0) - x[0] * x; };
  m.diffusion_jacobians = [](const Point&) { return std::vector<Eigen::MatrixXd>{}; };
  return m;
}

namespace {

int dimension_param(const ModelParameters& params, int fallback) {
  auto it = params.find("d");
  if (it == params.end()) return fallback;
  const int d = static_cast<int>(it->second);
  if (d < 1 || static_cast<double>(d) != it->second) throw std::invalid_argument("model parameter d must be a positive integer");
  return d;
}

Point north_pole(int d) { return Eigen::VectorXd::Unit(d, d - 1); }

}  // namespace

BuiltinSde builtin_sde(const std::string& name, const ModelParameters& params) {
  if (name == "stroock-sphere") {
    const int d = dimension_param(params, 3);
    return {stroock_sphere_model(d), sphere_manifold(d), north_pole(d)};
  }
  if (name == "radial-drift-sphere") {
    const int d = dimension_param(params, 3);
    return {radial_drift_model(d), sphere_manifold(d), north_pole(d)};
  }
  if (name == "ornstein-uhlenbeck") {
    const int d = dimension_param(params, 1);
    const double theta = params.contains("theta") ? params.at("theta") : 1.0;
    const double vol = params.contains("sigma") ? params.at("sigma") : 1.0;
    return {ornstein_uhlenbeck_model(d, theta, vol), std::nullopt, Point::Zero(d)};
  }
  if (name == "hyperplane-tangent") {
    const int d = dimension_param(params, 3);
    if (d < 2) throw std::invalid_argument("hyperplane-tangent needs d >= 2");
    return {hyperplane_tangent_model(d), hyperplane_manifold(Eigen::VectorXd::Unit(d, d - 1)), Point::Zero(d)};
  }
  if (name == "rotation-sphere") {
    return {rotation_sphere_model(), sphere_manifold(3), north_pole(3)};
  }
  throw std::out_of_range("unknown built-in SDE model '" + name + "'");
}

std::vector<std::string> builtin_sde_names() {
  return {"stroock-sphere", "radial-drift-sphere", "ornstein-uhlenbeck", "hyperplane-tangent",
          "rotation-sphere"};
}

double builtin_spde_drift(double y) { return -0.4 * y * std::exp(-y * y / 8.0); }
double builtin_spde_volatility(double y) { return 0.6 * std::exp(-y * y / 8.0); }

SpdeModel builtin_spde(const std::string& name, int max_degree) {
  const TruncationScheme scheme(1, max_degree);
  std::vector<ScalarFunction> b{[](const Point& y) { return builtin_spde_drift(y[0]); }};
  std::vector<std::vector<ScalarFunction>> sigma{{[](const Point& y) { return builtin_spde_volatility(y[0]); }}};
  if (name == "delta-profile-spde") return make_spde_model(scheme, b, sigma, Profile::delta(1));
  if (name == "gaussian-profile-spde") return make_spde_model(scheme, b, sigma, Profile::gaussian(1));
  throw std::out_of_range("unknown built-in SPDE model '" + name + "'");
}

std::vector<std::string> builtin_spde_names() { return {"delta-profile-spde", "gaussian-profile-spde"}; }

}  // namespace hinv
