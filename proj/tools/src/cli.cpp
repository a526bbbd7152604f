#include "hinv/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hinv/distributions.hpp"
#include "hinv/errors.hpp"
#include "hinv/hermite.hpp"
#include "hinv/invariance.hpp"
#include "hinv/manifold.hpp"
#include "hinv/models.hpp"
#include "hinv/serialization.hpp"
#include "hinv/sobolev.hpp"
#include "hinv/spde.hpp"

namespace hinv::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct VerdictFailure {};

/// "name key=value key=value" as used by --model and --function.
struct Spec {
  std::string name;
  std::map<std::string, double> params;
};

Spec parse_spec(const std::string& text) {
  std::istringstream in(text);
  Spec spec;
  in >> spec.name;
  if (spec.name.empty()) throw UsageError("empty model/function name");
  std::string token;
  while (in >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("expected key=value, got '" + token + "'");
    try {
      std::size_t used = 0;
      const double v = std::stod(token.substr(eq + 1), &used);
      if (used != token.size() - eq - 1) throw std::invalid_argument(token);
      spec.params[token.substr(0, eq)] = v;
    } catch (const std::logic_error&) {
      throw UsageError("parameter '" + token + "' is not numeric");
    }
  }
  return spec;
}

double param(const Spec& s, const std::string& key, double fallback) {
  const auto it = s.params.find(key);
  return it == s.params.end() ? fallback : it->second;
}

json defaults_for(const std::string& command) {
  json c = {{"seed", 1}, {"out", "hinv-run"}};
  if (command == "transform") {
    c.update({{"function", "gaussian"}, {"dimension", 1}, {"max_degree", 20},
              {"grid", {{"min", -5.0}, {"max", 5.0}, {"step", 0.25}}}});
  } else if (command == "check-invariance") {
    c.update({{"model", "stroock-sphere d=3"}, {"points", 100}, {"tolerance", nullptr}});
  } else if (command == "simulate-sde") {
    c.update({{"model", "stroock-sphere d=3"}, {"dt", 1e-3}, {"horizon", 1.0}, {"paths", 1}});
  } else if (command == "simulate-spde") {
    c.update({{"model", "gaussian-profile-spde"}, {"max_degree", 40}, {"dt", 1e-3}, {"horizon", 1.0},
              {"paths", 1}, {"x0", 0.0}, {"norm_index", nullptr}});
  } else if (command == "compare") {
    c.update({{"model", "gaussian-profile-spde"}, {"max_degree", 60}, {"dt", 2e-3}, {"levels", 2},
              {"horizon", 1.0}, {"paths", 50}, {"x0", 0.0}, {"norm_index", 0.0}});
  } else if (command == "report") {
    c.update({{"input", nullptr}});
  }
  return c;
}

/// Top-level scalars apply to every subcommand; a table named after the
/// subcommand overrides them.
json merge_config(const std::string& command, const json& file) {
  json c = defaults_for(command);
  if (!file.is_object()) throw UsageError("config root must be a table");
  for (const auto& [key, value] : file.items()) {
    if (value.is_object() && key != "grid") continue;
    if (c.contains(key)) c[key] = value;
  }
  if (file.contains(command)) {
    if (!file.at(command).is_object()) throw UsageError("config section '" + command + "' must be a table");
    for (const auto& [key, value] : file.at(command).items()) {
      if (!c.contains(key)) throw UsageError("unknown key '" + key + "' in config section '" + command + "'");
      c[key] = value;
    }
  }
  return c;
}

template <class T>
T get(const json& c, const char* key) {
  try {
    return c.at(key).get<T>();
  } catch (const json::exception& e) {
    throw UsageError(std::string("config key '") + key + "': " + e.what());
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

class RunDirectory {
 public:
  RunDirectory(const std::string& command, const std::vector<std::string>& args, const json& config)
      : dir_(get<std::string>(config, "out")) {
    fs::create_directories(dir_);
    manifest_ = {{"tool", "hinv"},
                 {"version", HINV_VERSION},
                 {"subcommand", command},
                 {"arguments", args},
                 {"config", config},
                 {"seeds", json::array()},
                 {"outputs", json::array()},
                 {"environment",
                  {{"compiler", __VERSION__},
                   {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                 std::to_string(EIGEN_MINOR_VERSION)},
                   {"cxx_standard", __cplusplus}}}};
  }

  void add_seed(std::uint64_t seed) { manifest_["seeds"].push_back(seed); }

  void write(const std::string& name, const std::string& content) {
    std::ofstream f(dir_ / name, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + (dir_ / name).string());
    f << content;
    manifest_["outputs"].push_back(name);
  }

  void finish(const std::string& status) {
    manifest_["status"] = status;
    std::ofstream f(dir_ / "manifest.json", std::ios::binary);
    f << dump(manifest_);
  }

  const fs::path& path() const { return dir_; }

 private:
  fs::path dir_;
  json manifest_;
};

std::string full_precision(double v) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return os.str();
}

// ---------------------------------------------------------------------------

struct NamedFunction {
  std::function<double(const Point&)> f;
  bool is_delta = false;
  Point delta_at;
};

NamedFunction smooth(std::function<double(const Point&)> f) { return {std::move(f), false, Point()}; }

NamedFunction named_function(const Spec& s, int dimension) {
  if (s.name == "gaussian") {
    const double width = param(s, "width", 1.0), center = param(s, "center", 0.0);
    return smooth([=](const Point& x) { return std::exp(-(x.array() - center).square().sum() / (2.0 * width * width)); });
  }
  if (s.name == "sech") {
    return smooth([](const Point& x) {
      double v = 1.0;
      for (Eigen::Index i = 0; i < x.size(); ++i) v /= std::cosh(x[i]);
      return v;
    });
  }
  if (s.name == "hermite") {
    const int n = static_cast<int>(param(s, "n", 0.0));
    if (n < 0) throw UsageError("hermite: n must be >= 0");
    std::vector<int> index(static_cast<std::size_t>(dimension), 0);
    index[0] = n;
    const MultiIndex mi(index);
    return smooth([mi](const Point& x) { return eval_hermite(mi, x); });
  }
  if (s.name == "delta") {
    NamedFunction d;
    d.is_delta = true;
    d.delta_at = Point::Constant(dimension, param(s, "x", 0.0));
    return d;
  }
  throw UsageError("unknown function '" + s.name + "' (gaussian, sech, hermite, delta)");
}

int run_transform(const json& c, RunDirectory& run, std::ostream& out) {
  const int d = get<int>(c, "dimension");
  const TruncationScheme scheme(d, get<int>(c, "max_degree"));
  const auto fn = named_function(parse_spec(get<std::string>(c, "function")), d);
  const CoefficientVector v = fn.is_delta ? delta_coefficients(fn.delta_at, scheme) : project_function(fn.f, scheme);
  run.write("coefficients.json", to_json(v));

  const json& g = c.at("grid");
  const double lo = get<double>(g, "min"), hi = get<double>(g, "max"), step = get<double>(g, "step");
  if (!(step > 0.0) || hi < lo) throw UsageError("grid needs min <= max and step > 0");
  if (!fn.is_delta) {
    std::ostringstream csv;
    csv << "x,f,reconstruction,abs_error\n";
    double worst = 0.0;
    const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
    for (long i = 0; i <= n; ++i) {
      Point x = Point::Zero(d);
      x[0] = lo + static_cast<double>(i) * step;
      const double f = fn.f(x), r = evaluate(v, x);
      worst = std::max(worst, std::abs(f - r));
      csv << full_precision(x[0]) << ',' << full_precision(f) << ',' << full_precision(r) << ','
          << full_precision(std::abs(f - r)) << '\n';
    }
    run.write("reconstruction.csv", csv.str());
    out << "transform: " << v.size() << " coefficients, max reconstruction error " << full_precision(worst)
        << " on the grid\n";
  } else {
    out << "transform: " << v.size() << " delta coefficients\n";
  }
  return kSuccess;
}

int run_check_invariance(const json& c, RunDirectory& run, std::ostream& out) {
  const Spec spec = parse_spec(get<std::string>(c, "model"));
  const BuiltinSde builtin = builtin_sde(spec.name, spec.params);
  if (!builtin.manifold) throw UsageError("model '" + spec.name + "' has no built-in manifold to check");
  const auto& m = *builtin.manifold;
  const auto seed = get<std::uint64_t>(c, "seed");
  const auto count = get<std::size_t>(c, "points");
  run.add_seed(seed);

  const bool sphere = m.name == "sphere";
  const PointSample sample = sphere ? sample_sphere(m.ambient_dim, count, seed)
                                    : sample_by_projection(m, count, seed, builtin.x0, 1.0, kAnalyticFeasibilityTol);
  const double tol = c.at("tolerance").is_null() ? default_tolerance(builtin.model, m) : get<double>(c, "tolerance");

  std::vector<InvarianceReport> reports = check_levelset(builtin.model, m, sample, tol);
  if (sphere) {
    for (auto& r : check_sphere(builtin.model, sample, tol)) reports.push_back(std::move(r));
  }
  for (auto& r : check_stratonovich_route(builtin.model, m, sample, tol)) reports.push_back(std::move(r));
  run.write("report.json", to_json(reports));

  // Ito criteria decide the verdict; the Stratonovich route is informational
  // when the drift is not itself tangent.
  const std::size_t ito_count = reports.size() - 2;
  bool passed = true;
  for (std::size_t i = 0; i < ito_count; ++i) passed = passed && reports[i].passed;
  for (const auto& r : reports) {
    out << std::left << std::setw(30) << r.condition << (r.passed ? "pass" : "fail") << "  max_abs "
        << full_precision(r.max_abs) << "  tol " << full_precision(r.tolerance) << '\n';
  }
  out << "verdict: " << (passed ? "pass" : "fail") << '\n';
  if (!passed) throw VerdictFailure{};
  return kSuccess;
}

int run_simulate_sde(const json& c, RunDirectory& run, std::ostream& out) {
  const Spec spec = parse_spec(get<std::string>(c, "model"));
  const BuiltinSde builtin = builtin_sde(spec.name, spec.params);
  const auto seed = get<std::uint64_t>(c, "seed");
  const auto paths = get<std::size_t>(c, "paths");
  const double dt = get<double>(c, "dt"), horizon = get<double>(c, "horizon");
  run.add_seed(seed);
  json summary = json::array();
  for (std::size_t p = 0; p < paths; ++p) {
    const auto t = euler_maruyama(builtin.model, builtin.x0, horizon, dt, seed, p);
    std::ostringstream name;
    name << "trajectory_" << std::setw(4) << std::setfill('0') << p;
    run.write(name.str() + ".csv", trajectory_csv(t));
    json row = {{"path", p}, {"final_state", std::vector<double>(t.states.back().data(), t.states.back().data() + t.states.back().size())}};
    if (builtin.manifold) {
      double dev = 0.0;
      for (const auto& x : t.states) dev = std::max(dev, builtin.manifold->value(x).cwiseAbs().maxCoeff());
      row["max_constraint_deviation"] = dev;
    }
    summary.push_back(row);
  }
  run.write("summary.json", dump(summary));
  out << "simulate-sde: " << paths << " path(s) of " << builtin.model.name << " written to " << run.path().string()
      << '\n';
  return kSuccess;
}

int run_simulate_spde(const json& c, RunDirectory& run, std::ostream& out) {
  const SpdeModel m = builtin_spde(get<std::string>(c, "model"), get<int>(c, "max_degree"));
  const OrbitMap psi(m.profile, m.scheme);
  const auto seed = get<std::uint64_t>(c, "seed");
  const auto paths = get<std::size_t>(c, "paths");
  const double dt = get<double>(c, "dt"), horizon = get<double>(c, "horizon");
  const double p = c.at("norm_index").is_null() ? default_norm_index(m.profile) : get<double>(c, "norm_index");
  const Point x0 = Point::Constant(1, get<double>(c, "x0"));
  run.add_seed(seed);
  const std::size_t steps = step_count(horizon, dt);
  for (std::size_t path = 0; path < paths; ++path) {
    const Eigen::MatrixXd w = coupled_increments(seed, steps, m.noise_count(), dt, path);
    auto galerkin = galerkin_integrate(m, psi(x0), dt, w);
    auto translated = translated_profile_solution(m, psi, x0, dt, w).states;
    for (auto* t : {&galerkin, &translated}) {
      t->norm_index = p;
      t->seed = seed;
      t->path = path;
    }
    std::ostringstream suffix;
    suffix << '_' << std::setw(4) << std::setfill('0') << path;
    run.write("galerkin" + suffix.str() + ".json", to_json(galerkin));
    run.write("translated" + suffix.str() + ".json", to_json(translated));
    run.write("distance" + suffix.str() + ".csv", distance_csv(galerkin.times, compare_trajectories(galerkin, translated, p)));
  }
  out << "simulate-spde: " << paths << " path(s), K=" << m.scheme.max_degree() << ", norms at p=" << p << '\n';
  return kSuccess;
}

int run_compare(const json& c, RunDirectory& run, std::ostream& out) {
  const SpdeModel m = builtin_spde(get<std::string>(c, "model"), get<int>(c, "max_degree"));
  const OrbitMap psi(m.profile, m.scheme);
  const auto seed = get<std::uint64_t>(c, "seed");
  const int levels = get<int>(c, "levels");
  if (levels < 1) throw UsageError("levels must be >= 1");
  std::vector<double> dts;
  double dt = get<double>(c, "dt");
  for (int l = 0; l < levels; ++l, dt /= 2.0) dts.push_back(dt);
  run.add_seed(seed);
  const auto rows = common_noise_comparison(m, psi, Point::Constant(1, get<double>(c, "x0")), get<double>(c, "horizon"),
                                            dts, get<std::size_t>(c, "paths"), seed, get<double>(c, "norm_index"));
  std::ostringstream csv;
  csv << "dt,mean_sup_distance,truncation_floor,paths\n";
  json j = json::array();
  for (const auto& r : rows) {
    csv << full_precision(r.dt) << ',' << full_precision(r.mean_sup_distance) << ',' << full_precision(r.truncation_floor)
        << ',' << r.paths << '\n';
    j.push_back({{"dt", r.dt}, {"mean_sup_distance", r.mean_sup_distance}, {"truncation_floor", r.truncation_floor}, {"paths", r.paths}});
    out << "dt " << full_precision(r.dt) << "  mean sup distance " << full_precision(r.mean_sup_distance)
        << "  floor " << full_precision(r.truncation_floor) << '\n';
  }
  run.write("comparison.csv", csv.str());
  run.write("comparison.json", dump(j));
  return kSuccess;
}

// ---------------------------------------------------------------------------

void render(const json& j, const std::string& label, std::ostream& out) {
  out << "== " << label << '\n';
  if (j.is_array() && !j.empty() && j.front().contains("condition")) {
    for (const auto& r : j) {
      out << std::left << std::setw(30) << r.at("condition").get<std::string>() << r.at("verdict").get<std::string>()
          << "  max_abs " << (r.at("max_abs").is_null() ? std::string("inf") : full_precision(r.at("max_abs").get<double>()))
          << "  points " << r.at("n_points") << '\n';
    }
  } else if (j.is_array() && !j.empty() && j.front().contains("mean_sup_distance")) {
    for (const auto& r : j) {
      out << "dt " << full_precision(r.at("dt").get<double>()) << "  mean sup distance "
          << full_precision(r.at("mean_sup_distance").get<double>()) << "  floor "
          << full_precision(r.at("truncation_floor").get<double>()) << '\n';
    }
  } else if (j.is_object() && j.contains("coefficients") && j.contains("order")) {
    out << "d=" << j.at("dimension") << " K=" << j.at("max_degree") << " order " << j.at("order").get<std::string>()
        << ", " << j.at("coefficients").size() << " coefficients\n";
    const auto& cs = j.at("coefficients");
    for (std::size_t i = 0; i < std::min<std::size_t>(cs.size(), 8); ++i) out << "  c[" << i << "] = " << full_precision(cs[i].get<double>()) << '\n';
  } else if (j.is_object() && j.contains("subcommand")) {
    out << "hinv " << j.at("version").get<std::string>() << " " << j.at("subcommand").get<std::string>() << ", status "
        << j.value("status", std::string("unknown")) << ", seeds " << j.at("seeds").dump() << '\n';
  } else {
    out << j.dump(2) << '\n';
  }
}

int run_report(const json& c, std::ostream& out) {
  if (c.at("input").is_null()) throw UsageError("report needs --input PATH (run directory or JSON file)");
  const fs::path input = get<std::string>(c, "input");
  std::vector<fs::path> files;
  if (fs::is_directory(input)) {
    for (const auto& entry : fs::directory_iterator(input)) {
      if (entry.path().extension() == ".json") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
  } else if (fs::exists(input)) {
    files.push_back(input);
  } else {
    throw UsageError("no such file or directory: " + input.string());
  }
  for (const auto& f : files) {
    std::ifstream in(f);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      throw UsageError("malformed JSON in " + f.string() + ": " + e.what());
    }
    render(j, f.filename().string(), out);
  }
  return kSuccess;
}

// ---------------------------------------------------------------------------

struct Flags {
  std::string config, out, model, function, input;
  std::optional<std::uint64_t> seed;
  std::optional<double> dt, tolerance;
  std::optional<std::size_t> paths;
  std::optional<int> max_degree;
  bool show_config = false;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON config file")->check(CLI::ExistingFile);
  sub->add_option("--out", f.out, "run directory");
  sub->add_option("--seed", f.seed, "random seed");
  sub->add_flag("--show-config", f.show_config, "print the effective configuration and exit");
}

json apply_flags(const std::string& command, const Flags& f) {
  json file = json::object();
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    try {
      file = json::parse(in, nullptr, true, true);
    } catch (const json::exception& e) {
      throw UsageError("malformed config " + f.config + ": " + e.what());
    }
  }
  json c = merge_config(command, file);
  auto set = [&](const char* key, const json& value) {
    if (!c.contains(key)) throw UsageError(std::string("--") + key + " does not apply to " + command);
    c[key] = value;
  };
  if (!f.out.empty()) set("out", f.out);
  if (f.seed) set("seed", *f.seed);
  if (f.dt) set("dt", *f.dt);
  if (f.tolerance) set("tolerance", *f.tolerance);
  if (f.paths) set("paths", *f.paths);
  if (f.max_degree) set("max_degree", *f.max_degree);
  if (!f.model.empty()) set("model", f.model);
  if (!f.function.empty()) set("function", f.function);
  if (!f.input.empty()) set("input", f.input);
  return c;
}

}  // namespace

int run_subcommand(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hermite-Sobolev spaces and stochastic invariance toolkit", "hinv"};
  app.require_subcommand(1);
  app.set_version_flag("--version", HINV_VERSION);
  Flags flags;

  auto* transform = app.add_subcommand("transform", "Hermite coefficients of a built-in function");
  add_common(transform, flags);
  transform->add_option("--function", flags.function, "gaussian|sech|hermite n=K|delta x=X, with key=value params");
  transform->add_option("--max-degree", flags.max_degree, "truncation degree K");

  auto* check = app.add_subcommand("check-invariance", "Invariance criteria for a built-in SDE and manifold");
  add_common(check, flags);
  check->add_option("--model", flags.model, "built-in model, e.g. \"stroock-sphere d=3\"");
  check->add_option("--tolerance", flags.tolerance, "residual tolerance");

  auto* sde = app.add_subcommand("simulate-sde", "Euler-Maruyama paths of a built-in SDE");
  add_common(sde, flags);
  sde->add_option("--model", flags.model, "built-in model");
  sde->add_option("--dt", flags.dt, "step size");
  sde->add_option("--paths", flags.paths, "number of paths");

  auto* spde = app.add_subcommand("simulate-spde", "Galerkin and translated-profile SPDE paths");
  add_common(spde, flags);
  spde->add_option("--model", flags.model, "delta-profile-spde|gaussian-profile-spde");
  spde->add_option("--dt", flags.dt, "step size");
  spde->add_option("--paths", flags.paths, "number of paths");
  spde->add_option("--max-degree", flags.max_degree, "truncation degree K");

  auto* compare = app.add_subcommand("compare", "Common-noise Galerkin vs translated-profile comparison");
  add_common(compare, flags);
  compare->add_option("--model", flags.model, "delta-profile-spde|gaussian-profile-spde");
  compare->add_option("--dt", flags.dt, "coarsest step size");
  compare->add_option("--paths", flags.paths, "number of paths");
  compare->add_option("--max-degree", flags.max_degree, "truncation degree K");

  auto* report = app.add_subcommand("report", "Re-render persisted JSON outputs");
  add_common(report, flags);
  report->add_option("--input", flags.input, "run directory or JSON file");

  std::vector<const char*> argv{"hinv"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  const CLI::App* chosen = app.get_subcommands().front();
  const std::string command = chosen->get_name();
  std::unique_ptr<RunDirectory> run;
  try {
    const json config = apply_flags(command, flags);
    if (flags.show_config) {
      out << dump(config);
      return kSuccess;
    }
    if (command == "report") return run_report(config, out);
    run = std::make_unique<RunDirectory>(command, args, config);
    int code = kSuccess;
    if (command == "transform") code = run_transform(config, *run, out);
    else if (command == "check-invariance") code = run_check_invariance(config, *run, out);
    else if (command == "simulate-sde") code = run_simulate_sde(config, *run, out);
    else if (command == "simulate-spde") code = run_simulate_spde(config, *run, out);
    else if (command == "compare") code = run_compare(config, *run, out);
    run->finish("success");
    return code;
  } catch (const VerdictFailure&) {
    if (run) run->finish("verdict-failure");
    return kVerdictFailure;
  } catch (const UsageError& e) {
    err << "hinv " << command << ": " << e.what() << '\n';
    return kUsageError;
  } catch (const std::out_of_range& e) {
    err << "hinv " << command << ": " << e.what() << '\n';
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    err << "hinv " << command << ": " << e.what() << '\n';
    return kUsageError;
  } catch (const NumericFailure& e) {
    if (run) run->finish("numeric-failure");
    err << "hinv " << command << ": numeric failure: " << e.what() << '\n';
    return kNumericFailure;
  } catch (const RankDeficiency& e) {
    if (run) run->finish("numeric-failure");
    err << "hinv " << command << ": numeric failure: " << e.what() << '\n';
    return kNumericFailure;
  } catch (const std::exception& e) {
    err << "hinv " << command << ": " << e.what() << '\n';
    return kNumericFailure;
  }
}

}  // namespace hinv::cli
