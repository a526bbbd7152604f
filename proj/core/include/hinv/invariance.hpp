#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hinv/manifold.hpp"
#include "hinv/sde.hpp"

namespace hinv {

inline constexpr double kAnalyticTolerance = 1e-8;
inline constexpr double kFiniteDifferenceTolerance = 1e-5;

/// Residual statistics of one invariance condition over a point sample.
/// `passed` is always `max_abs <= tolerance`; flagged points carry an
/// infinite residual so they can never pass silently.
struct InvarianceReport {
  std::string condition;
  std::vector<double> residuals;
  double max_abs = 0.0;
  double mean_abs = 0.0;
  double tolerance = 0.0;
  bool passed = true;
  std::size_t worst_index = 0;
  Point worst_point;
  std::size_t n_points = 0;
  std::optional<std::uint64_t> seed;
  std::vector<std::size_t> flagged_points;
  std::string note;
};

InvarianceReport make_report(std::string condition, std::vector<double> residuals,
                             const std::vector<Point>& points, double tolerance,
                             std::optional<std::uint64_t> seed = std::nullopt);

bool all_passed(const std::vector<InvarianceReport>& reports);

/// 1e-8 when the manifold and model supply analytic derivatives, 1e-5 otherwise.
double default_tolerance(const SdeModel& model, const LevelSetManifold& m);

/// Level-set criterion: residuals max_k |L f_k(x)| ("levelset-generator")
/// and max_{j,k} |A^j f_k(x)| ("levelset-first-order").
std::vector<InvarianceReport> check_levelset(const SdeModel& model, const LevelSetManifold& m,
                                             const PointSample& sample, double tolerance);

/// Unit-sphere criterion: <x, b> + 1/2 tr(sigma sigma^T) ("sphere-drift") and
/// max_j |<x, sigma^j>| ("sphere-diffusion").
std::vector<InvarianceReport> check_sphere(const SdeModel& model, const PointSample& sample,
                                           double tolerance);

/// ||(I - P(x)) field(x)|| at every sample point.
InvarianceReport check_tangency(const VectorField& field, const LevelSetManifold& m,
                                const PointSample& sample, double tolerance,
                                const std::string& condition = "tangency");

/// For each base point y: max over sample points z with |z - y| <= radius of
/// ||(I - P(z)) field(y)||. The radius is a free parameter.
InvarianceReport check_simultaneous(const VectorField& field, const LevelSetManifold& m,
                                    const PointSample& sample, double radius, double tolerance);

/// Tangency of every sigma^j and of the corrected drift c = b - 1/2 sum D sigma^j sigma^j.
std::vector<InvarianceReport> check_stratonovich_route(const SdeModel& model, const LevelSetManifold& m,
                                                       const PointSample& sample, double tolerance);

/// Drift and diffusion columns on the ambient space of a chart (R^d for an
/// SDE, coefficient space for an SPDE).
struct ChartFields {
  VectorField drift;
  DiffusionField diffusion;
  int noise_count = 0;
};

ChartFields chart_fields(const SdeModel& model);

struct ChartCheck {
  InvarianceReport diffusion;  // max_j ||A^j - dphi a^j||
  InvarianceReport drift;      // ||R - dphi l||
  std::vector<Eigen::MatrixXd> local_diffusion;  // m x r per point
  std::vector<Eigen::VectorXd> local_drift;      // l per point
};

inline constexpr double kMinChartConditioning = 1e-10;

/// Local-coordinate criterion: a^j = dphi^+ A^j(phi(x)) and
/// l = dphi^+ (L(phi(x)) - 1/2 sum_j d^2 phi(x)(a^j, a^j)), with the
/// residuals of both least-squares fits. Throws RankDeficiency when
/// sigma_min(dphi) / sigma_max(dphi) < kMinChartConditioning.
ChartCheck check_chart(const ChartFields& fields, const ChartManifold& chart,
                       const std::vector<Eigen::VectorXd>& parameters, double tolerance);

struct DeviationRow {
  double dt = 0.0;
  double deviation = 0.0;  // mean over paths of max_t |f(X_t)|
  std::size_t paths = 0;
};

/// Simulates `paths` Euler-Maruyama paths from x0 for every step size. All
/// step sizes share one Brownian path per sample (increments on the finest
/// grid, summed for coarser ones), so each dt must be an integer multiple of
/// the smallest.
std::vector<DeviationRow> empirical_invariance(const SdeModel& model, const LevelSetManifold& m,
                                               const Point& x0, double horizon,
                                               const std::vector<double>& dts, std::size_t paths,
                                               std::uint64_t seed);

}  // namespace hinv
