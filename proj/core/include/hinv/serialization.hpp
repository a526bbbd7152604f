#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "hinv/invariance.hpp"
#include "hinv/sde.hpp"
#include "hinv/sobolev.hpp"
#include "hinv/spde.hpp"

namespace hinv {

/// {"dimension", "max_degree", "order": "graded-lex", "coefficients": [...]}
/// plus "regularity_label" when set. Doubles round-trip exactly.
std::string to_json(const CoefficientVector& v);
CoefficientVector coefficient_vector_from_json(std::string_view text);

/// {"condition", "tolerance", "max_abs", "mean_abs", "n_points", "verdict",
///  "worst_point", ...}. Infinite residuals are written as null.
std::string to_json(const InvarianceReport& r);
std::string to_json(const std::vector<InvarianceReport>& reports);

/// {"seed", "path", "times", "states", "increments"}.
std::string to_json(const Trajectory& t);

/// Scheme header plus per-time coefficient arrays.
std::string to_json(const SpdeTrajectory& t);
SpdeTrajectory spde_trajectory_from_json(std::string_view text);

}  // namespace hinv
