#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hinv/sde.hpp"

namespace hinv {

/// Scalar function with optional analytic derivatives. Missing derivatives
/// are replaced by central finite differences.
///
/// Callables must be safe to call concurrently.
struct ScalarField {
  std::function<double(const Point&)> value;
  std::function<Eigen::VectorXd(const Point&)> gradient;  // optional
  std::function<Eigen::MatrixXd(const Point&)> hessian;   // optional

  bool analytic() const { return static_cast<bool>(gradient) && static_cast<bool>(hessian); }
  double operator()(const Point& x) const { return value(x); }
  Eigen::VectorXd grad(const Point& x) const;
  Eigen::MatrixXd hess(const Point& x) const;
};

/// Central-difference step cbrt(eps) * (1 + |x|).
double fd_step(const Point& x);

Eigen::VectorXd fd_gradient(const std::function<double(const Point&)>& f, const Point& x);
/// Second differences with step eps^(1/4) * (1 + |x|).
Eigen::MatrixXd fd_hessian(const std::function<double(const Point&)>& f, const Point& x);
/// Jacobian of a vector field, columns = partial derivatives.
Eigen::MatrixXd fd_jacobian(const VectorField& f, const Point& x);

/// N = { x : f(x) = 0 } with f = (f_1, ..., f_n) : R^d -> R^n.
struct LevelSetManifold {
  int ambient_dim = 0;
  std::vector<ScalarField> constraints;
  std::string name;

  int codim() const { return static_cast<int>(constraints.size()); }
  bool analytic() const;
  Eigen::VectorXd value(const Point& x) const;
  Eigen::MatrixXd jacobian(const Point& x) const;  // n x d
};

/// Local parametrization phi : V subset R^m -> R^D. `second` returns a
/// D x (m*m) matrix whose column i*m + k is d^2 phi / dx_i dx_k.
struct ChartManifold {
  int chart_dim = 0;
  int ambient_dim = 0;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> map;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> differential;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> second;
  std::string name;

  /// d^2 phi(x)(u, v).
  Eigen::VectorXd second_along(const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                               const Eigen::VectorXd& v) const;
};

struct PointSample {
  std::vector<Point> points;
  double feasibility_tol = 1e-10;
  std::optional<std::uint64_t> seed;
};

inline constexpr double kAnalyticFeasibilityTol = 1e-10;
inline constexpr double kProjectedFeasibilityTol = 1e-6;
inline constexpr double kMaxProjectorCondition = 1e12;

/// Throws std::invalid_argument naming the first point with |f(x)| > tol.
void validate_sample(const LevelSetManifold& m, const PointSample& sample);

/// P = I - Df^T (Df Df^T)^{-1} Df, the orthogonal projector onto ker Df(x).
/// Throws RankDeficiency when cond(Df Df^T) exceeds `max_condition`.
Eigen::MatrixXd tangent_projector(const LevelSetManifold& m, const Point& x,
                                  double max_condition = kMaxProjectorCondition);

/// (L g)(x) = sum_i b_i d_i g + 1/2 sum_ij (sigma sigma^T)_ij d_ij g.
double apply_generator(const SdeModel& model, const ScalarField& g, const Point& x);
/// The second-order part 1/2 sum_ij (sigma sigma^T)_ij d_ij g alone.
double second_order_part(const SdeModel& model, const ScalarField& g, const Point& x);
/// (A^j g)(x) = sum_i sigma^j_i d_i g for j < r.
Eigen::VectorXd apply_first_order(const SdeModel& model, const ScalarField& g, const Point& x);

/// D sigma^j(x), analytic when the model provides Jacobians.
std::vector<Eigen::MatrixXd> diffusion_jacobians(const SdeModel& model, const Point& x);

/// 1/2 sum_j D sigma^j(x) sigma^j(x).
Eigen::VectorXd stratonovich_correction(const SdeModel& model, const Point& x);
/// c(x) = b(x) - 1/2 sum_j D sigma^j(x) sigma^j(x).
Eigen::VectorXd corrected_drift(const SdeModel& model, const Point& x);
VectorField corrected_drift_field(SdeModel model);

/// Gauss-Newton projection onto the level set; nullopt after 50 iterations
/// without reaching `tol`, or on a singular Jacobian.
std::optional<Point> newton_project(const LevelSetManifold& m, Point x, double tol = 1e-12,
                                    int max_iterations = 50);

/// Normalized Gaussian vectors scaled to `radius`.
PointSample sample_sphere(int dimension, std::size_t count, std::uint64_t seed, double radius = 1.0);

/// Ambient Gaussian proposals center + scale * N(0, I) projected with
/// newton_project; rejected proposals are skipped.
PointSample sample_by_projection(const LevelSetManifold& m, std::size_t count, std::uint64_t seed,
                                 const Point& center, double scale, double feasibility_tol = kProjectedFeasibilityTol);

/// Images of parameter points under a chart.
PointSample sample_by_parametrization(const ChartManifold& chart,
                                      const std::vector<Eigen::VectorXd>& parameters,
                                      double feasibility_tol = kAnalyticFeasibilityTol);

LevelSetManifold sphere_manifold(int dimension, double radius = 1.0);
/// { x : <x, normal> - offset = 0 }.
LevelSetManifold hyperplane_manifold(const Eigen::VectorXd& normal, double offset = 0.0);
/// Torus in R^3 with major radius R about the x_3 axis and minor radius r.
LevelSetManifold torus_manifold(double major_radius, double minor_radius);

/// (theta, phi) -> (sin th cos ph, sin th sin ph, cos th) on the unit sphere.
ChartManifold spherical_chart();

/// phi(x) = x on R^d.
ChartManifold identity_chart(int dimension);

}  // namespace hinv
