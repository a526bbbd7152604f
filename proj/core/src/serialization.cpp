#include "hinv/serialization.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace hinv {

using nlohmann::json;

namespace {

json vector_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Eigen::VectorXd vector_from(const json& a) {
  if (!a.is_array()) throw std::invalid_argument("expected a JSON array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) v[static_cast<Eigen::Index>(i)] = a[i].get<double>();
  return v;
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

TruncationScheme scheme_from(const json& j) {
  if (j.contains("order") && j.at("order") != "graded-lex") {
    throw std::invalid_argument("unsupported basis order '" + j.at("order").get<std::string>() + "'");
  }
  return TruncationScheme(j.at("dimension").get<int>(), j.at("max_degree").get<int>());
}

json report_json(const InvarianceReport& r) {
  json j;
  j["condition"] = r.condition;
  j["tolerance"] = r.tolerance;
  j["max_abs"] = finite_or_null(r.max_abs);
  j["mean_abs"] = finite_or_null(r.mean_abs);
  j["n_points"] = r.n_points;
  j["verdict"] = r.passed ? "pass" : "fail";
  j["worst_point"] = vector_json(r.worst_point);
  j["worst_index"] = r.worst_index;
  if (r.seed) j["seed"] = *r.seed;
  if (!r.flagged_points.empty()) j["flagged_points"] = r.flagged_points;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

}  // namespace

std::string to_json(const CoefficientVector& v) {
  json j;
  j["dimension"] = v.scheme().dimension();
  j["max_degree"] = v.scheme().max_degree();
  j["order"] = "graded-lex";
  j["coefficients"] = vector_json(v.coefficients());
  if (v.regularity_label()) j["regularity_label"] = *v.regularity_label();
  return j.dump(2);
}

CoefficientVector coefficient_vector_from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    std::optional<double> label;
    if (j.contains("regularity_label")) label = j.at("regularity_label").get<double>();
    return CoefficientVector(scheme_from(j), vector_from(j.at("coefficients")), label);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed coefficient JSON: ") + e.what());
  }
}

std::string to_json(const InvarianceReport& r) { return report_json(r).dump(2); }

std::string to_json(const std::vector<InvarianceReport>& reports) {
  json a = json::array();
  for (const auto& r : reports) a.push_back(report_json(r));
  return a.dump(2);
}

std::string to_json(const Trajectory& t) {
  json j;
  j["seed"] = t.seed;
  j["path"] = t.path;
  j["times"] = vector_json(t.times);
  json states = json::array();
  for (const auto& x : t.states) states.push_back(vector_json(x));
  j["states"] = std::move(states);
  json inc = json::array();
  for (Eigen::Index k = 0; k < t.increments.rows(); ++k) inc.push_back(vector_json(t.increments.row(k).transpose()));
  j["increments"] = std::move(inc);
  return j.dump();
}

std::string to_json(const SpdeTrajectory& t) {
  json j;
  const auto& scheme = t.states.empty() ? TruncationScheme(1, 0) : t.states.front().scheme();
  j["dimension"] = scheme.dimension();
  j["max_degree"] = scheme.max_degree();
  j["order"] = "graded-lex";
  j["norm_index"] = t.norm_index;
  j["seed"] = t.seed;
  j["path"] = t.path;
  j["times"] = vector_json(t.times);
  json states = json::array();
  for (const auto& s : t.states) states.push_back(vector_json(s.coefficients()));
  j["states"] = std::move(states);
  return j.dump();
}

SpdeTrajectory spde_trajectory_from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    const TruncationScheme scheme = scheme_from(j);
    SpdeTrajectory t;
    t.norm_index = j.value("norm_index", 0.0);
    t.seed = j.value("seed", std::uint64_t{0});
    t.path = j.value("path", std::uint64_t{0});
    t.times = vector_from(j.at("times"));
    for (const auto& s : j.at("states")) t.states.emplace_back(scheme, vector_from(s));
    if (static_cast<Eigen::Index>(t.states.size()) != t.times.size()) {
      throw std::invalid_argument("SPDE trajectory JSON: times and states lengths differ");
    }
    return t;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed SPDE trajectory JSON: ") + e.what());
  }
}

}  // namespace hinv
