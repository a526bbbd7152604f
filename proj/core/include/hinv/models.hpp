#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hinv/manifold.hpp"
#include "hinv/sde.hpp"
#include "hinv/spde.hpp"

namespace hinv {

/// Ito form of Stroock's spherical Brownian motion:
/// dX = -(d-1)/2 X dt + (I - X X^T) dW, with analytic Jacobians.
SdeModel stroock_sphere_model(int dimension);

/// Same diffusion without the Ito drift (the Stratonovich drift, read as Ito).
SdeModel stroock_diffusion_only_model(int dimension);

/// dX = -theta X dt + s dW.
SdeModel ornstein_uhlenbeck_model(int dimension, double theta = 1.0, double volatility = 1.0);

/// OU dynamics inside { x_d = 0 }: b = -P x, sigma^j = e_j for j < d - 1.
SdeModel hyperplane_tangent_model(int dimension);

/// b(x) = x, no noise.
SdeModel radial_drift_model(int dimension);

/// b(x) = e_1, no noise.
SdeModel constant_drift_model(int dimension);

/// b = 0 with `noise_count` zero columns.
SdeModel zero_model(int dimension, int noise_count = 0);

/// Rotational Brownian motion on S^2: sigma^j(x) = A_j x for the standard
/// so(3) generators, b = 1/2 sum_j A_j^2 x.
SdeModel rotation_sphere_model();

/// b(x) = tangent analytic flow e_1 - x_1 x with no noise.
SdeModel tangent_flow_model(int dimension);

/// A built-in SDE with its natural manifold and start point.
struct BuiltinSde {
  SdeModel model;
  std::optional<LevelSetManifold> manifold;
  Point x0;
};

using ModelParameters = std::map<std::string, double>;

/// Registry lookup. Names: stroock-sphere, radial-drift-sphere,
/// ornstein-uhlenbeck, hyperplane-tangent, rotation-sphere. Parameter "d"
/// sets the dimension. Throws std::out_of_range on unknown names.
BuiltinSde builtin_sde(const std::string& name, const ModelParameters& params = {});

std::vector<std::string> builtin_sde_names();

/// Pointwise coefficients shared by the SPDE built-ins (d = 1, r = 1):
/// b(y) = -0.4 y exp(-y^2/8), sigma(y) = 0.6 exp(-y^2/8).
double builtin_spde_drift(double y);
double builtin_spde_volatility(double y);

/// SPDE built-ins: "delta-profile-spde" and "gaussian-profile-spde".
SpdeModel builtin_spde(const std::string& name, int max_degree);

std::vector<std::string> builtin_spde_names();

}  // namespace hinv
