#include <cmath>
#include <random>

#include <gtest/gtest.h>
#include <json.hpp>

#include "hinv/invariance.hpp"
#include "hinv/models.hpp"
#include "hinv/serialization.hpp"
#include "hinv/spde.hpp"
#include "support/oracles.hpp"

namespace hinv {
namespace {

using nlohmann::json;

TEST(CoefficientJson, RoundTripIsExact) {
  std::mt19937_64 rng(3);
  const TruncationScheme s(2, 7);
  const CoefficientVector v(s, testing::random_vector(rng, static_cast<Eigen::Index>(s.size()), 1e-3), -0.5);
  const std::string text = to_json(v);
  const auto j = json::parse(text);
  EXPECT_EQ(j.at("dimension"), 2);
  EXPECT_EQ(j.at("max_degree"), 7);
  EXPECT_EQ(j.at("order"), "graded-lex");
  EXPECT_EQ(j.at("coefficients").size(), s.size());
  EXPECT_EQ(j.at("regularity_label"), -0.5);
  const auto back = coefficient_vector_from_json(text);
  EXPECT_EQ(back.scheme(), s);
  EXPECT_EQ(back.coefficients(), v.coefficients());
  EXPECT_EQ(back.regularity_label(), -0.5);
}

TEST(CoefficientJson, RejectsMalformedInput) {
  EXPECT_THROW(coefficient_vector_from_json("{"), std::invalid_argument);
  EXPECT_THROW(coefficient_vector_from_json(R"({"dimension":1,"max_degree":2,"order":"box","coefficients":[0,0,0]})"),
               std::invalid_argument);
  EXPECT_THROW(coefficient_vector_from_json(R"({"dimension":1,"max_degree":2,"order":"graded-lex","coefficients":[0,0]})"),
               std::invalid_argument);
}

TEST(ReportJson, Fields) {
  const auto reports = check_sphere(radial_drift_model(3), sample_sphere(3, 10, 4), 1e-8);
  const auto j = json::parse(to_json(reports[0]));
  EXPECT_EQ(j.at("condition"), "sphere-drift");
  EXPECT_EQ(j.at("verdict"), "fail");
  EXPECT_EQ(j.at("n_points"), 10);
  EXPECT_EQ(j.at("tolerance"), 1e-8);
  EXPECT_EQ(j.at("worst_point").size(), 3u);
  EXPECT_EQ(j.at("seed"), 4);
  EXPECT_DOUBLE_EQ(j.at("max_abs").get<double>(), reports[0].max_abs);
  const auto all = json::parse(to_json(reports));
  ASSERT_TRUE(all.is_array());
  EXPECT_EQ(all.size(), 2u);
}

TEST(ReportJson, InfiniteResidualIsNull) {
  const auto r = make_report("c", {INFINITY}, {Point::Zero(2)}, 1.0);
  const auto j = json::parse(to_json(r));
  EXPECT_TRUE(j.at("max_abs").is_null());
  EXPECT_EQ(j.at("verdict"), "fail");
}

TEST(TrajectoryJson, Fields) {
  const auto t = euler_maruyama(stroock_sphere_model(3), Point::Unit(3, 2), 0.05, 0.01, 11, 2);
  const auto j = json::parse(to_json(t));
  EXPECT_EQ(j.at("seed"), 11);
  EXPECT_EQ(j.at("path"), 2);
  EXPECT_EQ(j.at("times").size(), 6u);
  EXPECT_EQ(j.at("states").size(), 6u);
  EXPECT_EQ(j.at("increments").size(), 5u);
  EXPECT_EQ(j.at("states")[3][1].get<double>(), t.states[3][1]);
}

TEST(SpdeTrajectoryJson, RoundTrip) {
  const auto m = builtin_spde("gaussian-profile-spde", 12);
  const auto y0 = OrbitMap(m.profile, m.scheme)(Point::Zero(1));
  auto t = galerkin_integrate(m, y0, 0.1, coupled_increments(5, 4, 1, 0.1));
  t.seed = 5;
  const auto back = spde_trajectory_from_json(to_json(t));
  ASSERT_EQ(back.states.size(), t.states.size());
  EXPECT_EQ(back.times, t.times);
  EXPECT_EQ(back.seed, 5u);
  EXPECT_EQ(back.norm_index, t.norm_index);
  for (std::size_t k = 0; k < t.states.size(); ++k) EXPECT_EQ(back.states[k].coefficients(), t.states[k].coefficients());
  EXPECT_THROW(spde_trajectory_from_json("[]"), std::invalid_argument);
}

TEST(DistanceCsv, Rows) {
  Eigen::VectorXd times(2);
  times << 0.0, 0.5;
  EXPECT_EQ(distance_csv(times, {0.0, 0.125}), "t,distance\n0,0\n0.5,0.125\n");
}

}  // namespace
}  // namespace hinv
