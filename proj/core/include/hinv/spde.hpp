#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hinv/invariance.hpp"
#include "hinv/manifold.hpp"
#include "hinv/sde.hpp"
#include "hinv/sobolev.hpp"

namespace hinv {

/// Profile Phi whose translates tau_x Phi form the invariant submanifold:
/// either the Dirac distribution at 0 or a smooth function with analytic
/// first and second derivatives.
struct Profile {
  enum class Kind { delta, smooth };

  Kind kind = Kind::delta;
  int dimension = 1;
  std::function<double(const Point&)> value;
  std::function<Eigen::VectorXd(const Point&)> gradient;
  std::function<Eigen::MatrixXd(const Point&)> hessian;
  std::string name;

  static Profile delta(int dimension);
  /// amplitude * exp(-|y|^2 / (2 width^2)).
  static Profile gaussian(int dimension, double width = 1.0, double amplitude = 1.0);
};

/// The orbit map psi(x) = tau_x Phi in coefficient space with its first and
/// second derivatives: d psi(x) v = -sum_i v_i d_i tau_x Phi.
///
/// Smooth profiles are shifted then projected (no accumulated
/// matrix-exponential error); delta profiles use h_n(x) directly.
class OrbitMap {
 public:
  OrbitMap(Profile profile, const TruncationScheme& scheme);

  const TruncationScheme& scheme() const { return scheme_; }
  const Profile& profile() const { return profile_; }

  CoefficientVector operator()(const Point& x) const;
  Eigen::MatrixXd differential(const Point& x) const;  // S x d
  Eigen::MatrixXd second(const Point& x) const;        // S x d*d

  ChartManifold chart() const;

 private:
  Eigen::VectorXd project_shifted(const std::function<double(const Point&)>& g, const Point& x) const;

  Profile profile_;
  TruncationScheme scheme_;
  std::shared_ptr<const NodalBasis> nodal_;
};

/// Coefficient-space SPDE with
///   L(y)   = 1/2 sum_{i,k} (<sigma,y><sigma,y>^T)_{ik} d_ik y - sum_i <b_i,y> d_i y
///   A^j(y) = -sum_i <sigma_i^j, y> d_i y.
struct SpdeModel {
  TruncationScheme scheme;
  std::vector<CoefficientVector> drift_coeffs;                   // b_i, i < d
  std::vector<std::vector<CoefficientVector>> diffusion_coeffs;  // sigma^j_i: [j][i]
  Profile profile;
  std::vector<Eigen::MatrixXd> derivative;         // D_i
  std::vector<Eigen::MatrixXd> second_derivative;  // D_i D_k at i*d + k

  int dimension() const { return scheme.dimension(); }
  int noise_count() const { return static_cast<int>(diffusion_coeffs.size()); }
};

/// Validates that every coefficient vector shares `scheme` (SchemeMismatch)
/// and precomputes the derivative matrices.
SpdeModel make_spde_model(const TruncationScheme& scheme, std::vector<CoefficientVector> drift_coeffs,
                          std::vector<std::vector<CoefficientVector>> diffusion_coeffs, Profile profile);

/// Projects b_i and sigma^j_i given as functions.
SpdeModel make_spde_model(const TruncationScheme& scheme, const std::vector<ScalarFunction>& drift,
                          const std::vector<std::vector<ScalarFunction>>& diffusion, Profile profile);

/// (<b_i, y>)_i.
Eigen::VectorXd drift_pairings(const SpdeModel& m, const CoefficientVector& y);
/// d x r matrix, column j = (<sigma^j_i, y>)_i.
Eigen::MatrixXd diffusion_pairings(const SpdeModel& m, const CoefficientVector& y);

CoefficientVector spde_drift(const SpdeModel& m, const CoefficientVector& y);
std::vector<CoefficientVector> spde_diffusion(const SpdeModel& m, const CoefficientVector& y);

/// Coefficient states on a time grid.
struct SpdeTrajectory {
  Eigen::VectorXd times;
  std::vector<CoefficientVector> states;
  double norm_index = 0.0;  // p used when reporting norms
  std::uint64_t seed = 0;
  std::uint64_t path = 0;
};

/// Regularity at which trajectories of this profile are reported:
/// p = -1 for delta profiles, p = 0 for smooth ones.
double default_norm_index(const Profile& profile);

/// y + L(y) dt + sum_j A^j(y) dW^j.
CoefficientVector galerkin_step(const SpdeModel& m, const CoefficientVector& y, double dt,
                                const Eigen::VectorXd& dw);

/// Euler-Maruyama in coefficient space. Throws BlowUp on a non-finite state.
SpdeTrajectory galerkin_integrate(const SpdeModel& m, const CoefficientVector& y0, double dt,
                                  const Eigen::MatrixXd& increments);

/// The R^d-valued SDE with b(x) = <b, tau_x Phi> and sigma^j(x) = <sigma^j, tau_x Phi>.
SdeModel induced_sde(const SpdeModel& m, const OrbitMap& orbit);

struct TranslatedProfileRun {
  Trajectory driver;       // X
  SpdeTrajectory states;   // Y_t = tau_{X_t} Phi
};

/// Integrates the induced SDE with the given increments and maps every state
/// through the orbit map.
TranslatedProfileRun translated_profile_solution(const SpdeModel& m, const OrbitMap& orbit,
                                                 const Point& x0, double dt,
                                                 const Eigen::MatrixXd& increments);

/// Per-time S_p distance. Throws std::invalid_argument on grid mismatch and
/// SchemeMismatch on differing truncations.
std::vector<double> compare_trajectories(const SpdeTrajectory& a, const SpdeTrajectory& b, double p);

/// ChartFields for the SPDE on coefficient space, for check_chart.
ChartFields spde_chart_fields(const SpdeModel& m);

struct CommonNoiseRow {
  double dt = 0.0;
  double mean_sup_distance = 0.0;  // mean over paths of sup_t ||Y^gal_t - Y^tp_t||_p
  double truncation_floor = 0.0;   // max over visited x of the tail mass beyond degree K
  std::size_t paths = 0;
};

/// Couples the Galerkin and translated-profile integrators through the same
/// Brownian increments for each dt (integer multiples of the smallest).
std::vector<CommonNoiseRow> common_noise_comparison(const SpdeModel& m, const OrbitMap& orbit,
                                                    const Point& x0, double horizon,
                                                    const std::vector<double>& dts, std::size_t paths,
                                                    std::uint64_t seed, double p = 0.0,
                                                    int floor_extra_degrees = 20);

/// Comparison series as CSV rows "t,distance".
std::string distance_csv(const Eigen::VectorXd& times, const std::vector<double>& distances);

}  // namespace hinv
