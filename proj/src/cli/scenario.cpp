#include "geocache/cli/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "geocache/error.hpp"

namespace geocache::cli {
namespace {

using nlohmann::json;

[[noreturn]] void field_error(const std::string& path, const std::string& what) {
  fail(Errc::parse_error, "field " + (path.empty() ? std::string("/") : path) + ": " + what);
}

// Typed access to one JSON object with path-aware diagnostics. Every key
// read is remembered so leftovers can be reported as unknown fields.
class ObjectReader {
 public:
  ObjectReader(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) field_error(path_, "expected an object");
  }

  bool has(const std::string& key) const { return node_.contains(key) && !node_[key].is_null(); }
  std::string child(const std::string& key) const { return path_ + "/" + key; }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    if (!has(key)) field_error(child(key), "is required");
    return node_[key];
  }

  double number(const std::string& key) {
    const auto& v = raw(key);
    if (!v.is_number()) field_error(child(key), "expected a number");
    return v.get<double>();
  }
  double number(const std::string& key, double fallback) {
    return has(key) ? number(key) : (seen_.insert(key), fallback);
  }
  std::optional<double> optional_number(const std::string& key) {
    seen_.insert(key);
    if (!has(key)) return std::nullopt;
    return number(key);
  }

  std::uint64_t count(const std::string& key) {
    const auto& v = raw(key);
    if (!v.is_number_integer() || (v.is_number_integer() && v.get<std::int64_t>() < 0)) {
      field_error(child(key), "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }
  std::uint64_t count(const std::string& key, std::uint64_t fallback) {
    return has(key) ? count(key) : (seen_.insert(key), fallback);
  }

  bool flag(const std::string& key, bool fallback) {
    seen_.insert(key);
    if (!has(key)) return fallback;
    if (!node_[key].is_boolean()) field_error(child(key), "expected true or false");
    return node_[key].get<bool>();
  }

  std::string text(const std::string& key) {
    const auto& v = raw(key);
    if (!v.is_string()) field_error(child(key), "expected a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const std::string& key) {
    const auto& v = raw(key);
    if (!v.is_array()) field_error(child(key), "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) field_error(child(key) + "/" + std::to_string(i), "expected a number");
      out.push_back(v[i].get<double>());
    }
    return out;
  }

  void finish() const {
    for (const auto& item : node_.items()) {
      if (!seen_.count(item.key())) field_error(child(item.key()), "unknown field");
    }
  }

 private:
  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

void require_positive(double value, const std::string& path) {
  if (!std::isfinite(value) || value <= 0.0) field_error(path, "must be positive");
}

PopularitySpec read_popularity(const json& node, const std::string& path) {
  ObjectReader r(node, path);
  PopularitySpec spec;
  if (r.has("zipf") == r.has("weights")) {
    field_error(path, "give exactly one of \"zipf\" or \"weights\"");
  }
  if (r.has("zipf")) {
    ObjectReader z(r.raw("zipf"), r.child("zipf"));
    ZipfSpec zipf{z.count("library_size"), z.number("exponent")};
    z.finish();
    if (zipf.library_size == 0) field_error(z.child("library_size"), "must be at least 1");
    if (!(zipf.exponent >= 0.0)) field_error(z.child("exponent"), "must be >= 0");
    spec = zipf;
  } else {
    WeightsSpec weights{r.numbers("weights"), r.flag("sort", false)};
    spec = weights;
  }
  r.finish();
  return spec;
}

CoverageSpec read_coverage(const json& node, const std::string& path) {
  ObjectReader r(node, path);
  CoverageSpec spec;
  const std::string model = r.text("model");
  if (model == "sinr") {
    spec.model = CoverageSpec::Model::sinr;
    auto& s = spec.sinr;
    s.sinr_threshold = r.number("sinr_threshold", s.sinr_threshold);
    s.bs_intensity = r.number("bs_intensity", s.bs_intensity);
    s.pathloss_exponent = r.number("pathloss_exponent", s.pathloss_exponent);
    s.pathloss_constant = r.number("pathloss_constant", s.pathloss_constant);
    s.noise_power = r.number("noise_power", s.noise_power);
    s.shadowing_moment = r.number("shadowing_moment", s.shadowing_moment);
    s.quadrature_points = r.count("quadrature_points", s.quadrature_points);
    s.qmc_seed = r.count("qmc_seed", s.qmc_seed);
    s.dimension_cap = r.count("dimension_cap", s.dimension_cap);
    try {
      s.validate();
    } catch (const Error& e) {
      field_error(path, e.what());
    }
  } else if (model == "boolean") {
    spec.model = CoverageSpec::Model::boolean;
    auto& b = spec.boolean;
    b.bs_intensity = r.number("bs_intensity", b.bs_intensity);
    b.coverage_radius = r.optional_number("coverage_radius");
    b.threshold = r.optional_number("threshold");
    b.pathloss_exponent = r.number("pathloss_exponent", b.pathloss_exponent);
    b.pathloss_constant = r.number("pathloss_constant", b.pathloss_constant);
    b.truncation = r.count("truncation", b.truncation);
    require_positive(b.bs_intensity, r.child("bs_intensity"));
    if (b.coverage_radius.has_value() == b.threshold.has_value()) {
      field_error(path, "give exactly one of \"coverage_radius\" or \"threshold\"");
    }
    if (b.coverage_radius) require_positive(*b.coverage_radius, r.child("coverage_radius"));
    if (b.threshold) require_positive(*b.threshold, r.child("threshold"));
    require_positive(b.pathloss_exponent, r.child("pathloss_exponent"));
    require_positive(b.pathloss_constant, r.child("pathloss_constant"));
    if (b.truncation == 0) field_error(r.child("truncation"), "must be at least 1");
  } else if (model == "pmf") {
    spec.model = CoverageSpec::Model::pmf;
    spec.pmf = r.numbers("pmf");
  } else if (model == "2net") {
    spec.model = CoverageSpec::Model::two_network;
    const auto& nets = r.raw("networks");
    if (!nets.is_array() || nets.size() != 2) {
      field_error(r.child("networks"), "expected an array of two coverage specs");
    }
    for (std::size_t i = 0; i < 2; ++i) {
      spec.networks.push_back(read_coverage(nets[i], r.child("networks") + "/" + std::to_string(i)));
    }
  } else {
    field_error(r.child("model"), "expected one of \"sinr\", \"boolean\", \"pmf\", \"2net\"");
  }
  r.finish();
  return spec;
}

SimulationSpec read_simulation(const json& node, const std::string& path) {
  ObjectReader r(node, path);
  SimulationSpec s;
  s.replications = r.count("replications", s.replications);
  s.seed = r.count("seed", s.seed);
  s.window_radius = r.optional_number("window_radius");
  s.shadowing_sigma_db = r.optional_number("shadowing_sigma_db");
  s.threads = r.count("threads", s.threads);
  if (r.has("policy")) {
    const auto& p = r.raw("policy");
    if (p.is_array()) {
      s.policy = SimulationSpec::Policy::explicit_list;
      s.explicit_policy = r.numbers("policy");
    } else if (p.is_string() && p.get<std::string>() == "optimal") {
      s.policy = SimulationSpec::Policy::optimal;
    } else if (p.is_string() && p.get<std::string>() == "mpc") {
      s.policy = SimulationSpec::Policy::mpc;
    } else {
      field_error(r.child("policy"), "expected \"optimal\", \"mpc\" or an array of b_j");
    }
  }
  r.finish();
  if (s.replications == 0) field_error(r.child("replications"), "must be at least 1");
  if (s.threads == 0) field_error(r.child("threads"), "must be at least 1");
  if (s.window_radius) require_positive(*s.window_radius, r.child("window_radius"));
  if (s.shadowing_sigma_db && !(*s.shadowing_sigma_db >= 0.0)) {
    field_error(r.child("shadowing_sigma_db"), "must be >= 0");
  }
  return s;
}

SweepSpec read_sweep(const json& node, const std::string& path) {
  ObjectReader r(node, path);
  SweepSpec s;
  const std::string variable = r.text("variable");
  if (variable == "T") {
    s.variable = SweepSpec::Variable::threshold;
  } else if (variable == "p1_over_p2") {
    s.variable = SweepSpec::Variable::p1_over_p2;
    s.min = 1e-2;
    s.max = 1e2;
    s.points = 50;
  } else {
    field_error(r.child("variable"), "expected \"T\" or \"p1_over_p2\"");
  }
  s.min = r.number("min", s.min);
  s.max = r.number("max", s.max);
  s.points = r.count("points", s.points);
  if (r.has("spacing")) {
    const std::string spacing = r.text("spacing");
    if (spacing != "log" && spacing != "linear") {
      field_error(r.child("spacing"), "expected \"log\" or \"linear\"");
    }
    s.log_spacing = spacing == "log";
  } else {
    r.flag("spacing", true);
  }
  s.include_policy = r.flag("include_policy", s.include_policy);
  s.bandwidth_hz = r.number("bandwidth_hz", s.bandwidth_hz);
  s.analytic_max_coverage = r.count("analytic_max_coverage", s.analytic_max_coverage);
  if (r.has("a1")) s.a1 = r.numbers("a1");
  else r.flag("a1", false);
  s.p0 = r.number("p0", s.p0);
  r.finish();

  require_positive(s.min, r.child("min"));
  require_positive(s.max, r.child("max"));
  if (s.max < s.min) field_error(path, "max must not be below min");
  if (s.points == 0) field_error(r.child("points"), "must be at least 1");
  require_positive(s.bandwidth_hz, r.child("bandwidth_hz"));
  if (!(s.p0 >= 0.0 && s.p0 < 1.0)) field_error(r.child("p0"), "must lie in [0, 1)");
  for (std::size_t i = 0; i < s.a1.size(); ++i) {
    if (!(s.a1[i] >= 0.5 && s.a1[i] <= 1.0)) {
      field_error(r.child("a1") + "/" + std::to_string(i), "must lie in [0.5, 1]");
    }
  }
  return s;
}

json coverage_to_json(const CoverageSpec& spec) {
  switch (spec.model) {
    case CoverageSpec::Model::sinr: {
      const auto& s = spec.sinr;
      return {{"model", "sinr"},
              {"sinr_threshold", s.sinr_threshold},
              {"bs_intensity", s.bs_intensity},
              {"pathloss_exponent", s.pathloss_exponent},
              {"pathloss_constant", s.pathloss_constant},
              {"noise_power", s.noise_power},
              {"shadowing_moment", s.shadowing_moment},
              {"quadrature_points", s.quadrature_points},
              {"qmc_seed", s.qmc_seed},
              {"dimension_cap", s.dimension_cap}};
    }
    case CoverageSpec::Model::boolean: {
      const auto& b = spec.boolean;
      json out{{"model", "boolean"},
               {"bs_intensity", b.bs_intensity},
               {"pathloss_exponent", b.pathloss_exponent},
               {"pathloss_constant", b.pathloss_constant},
               {"truncation", b.truncation}};
      if (b.coverage_radius) out["coverage_radius"] = *b.coverage_radius;
      if (b.threshold) out["threshold"] = *b.threshold;
      return out;
    }
    case CoverageSpec::Model::pmf:
      return {{"model", "pmf"}, {"pmf", spec.pmf}};
    case CoverageSpec::Model::two_network:
      return {{"model", "2net"},
              {"networks", {coverage_to_json(spec.networks[0]), coverage_to_json(spec.networks[1])}}};
  }
  return {};
}

}  // namespace

Scenario scenario_from_json(const json& doc) {
  ObjectReader r(doc, "");
  const std::string schema = r.text("schema");
  if (schema != kSchema) {
    field_error("/schema", "unsupported schema \"" + schema + "\", expected \"" +
                               std::string(kSchema) + "\"");
  }
  Scenario s;
  if (r.has("sweep")) s.sweep = read_sweep(r.raw("sweep"), "/sweep");
  else r.flag("sweep", false);
  if (r.has("popularity")) s.popularity = read_popularity(r.raw("popularity"), "/popularity");
  else r.flag("popularity", false);
  if (r.has("coverage")) s.coverage = read_coverage(r.raw("coverage"), "/coverage");
  else r.flag("coverage", false);

  s.cache_size = r.count("cache_size", 1);
  if (s.cache_size == 0) field_error("/cache_size", "must be at least 1");

  if (r.has("solver")) {
    ObjectReader sr(r.raw("solver"), "/solver");
    s.solver.outer_tolerance = sr.number("outer_tolerance", s.solver.outer_tolerance);
    s.solver.inner_tolerance = sr.number("inner_tolerance", s.solver.inner_tolerance);
    sr.finish();
    require_positive(s.solver.outer_tolerance, "/solver/outer_tolerance");
    require_positive(s.solver.inner_tolerance, "/solver/inner_tolerance");
  } else {
    r.flag("solver", false);
  }
  if (r.has("simulation")) s.simulation = read_simulation(r.raw("simulation"), "/simulation");
  else r.flag("simulation", false);
  r.finish();
  return s;
}

Scenario parse_scenario(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // Byte offsets are 1-based and point just past the offending character.
    const std::size_t offset = e.byte == 0 ? 0 : std::min<std::size_t>(e.byte - 1, text.size());
    const auto prefix = text.substr(0, offset);
    const std::size_t line = 1 + static_cast<std::size_t>(std::count(prefix.begin(), prefix.end(), '\n'));
    const auto last_newline = prefix.rfind('\n');
    const std::size_t column = last_newline == std::string_view::npos ? offset + 1 : offset - last_newline;
    std::string detail = e.what();
    if (const auto at = detail.find("column"); at != std::string::npos) {
      if (const auto colon = detail.find(": ", at); colon != std::string::npos) {
        detail = detail.substr(colon + 2);
      }
    }
    fail(Errc::parse_error, "syntax error at line " + std::to_string(line) + ", column " +
                                std::to_string(column) + ": " + detail);
  }
  return scenario_from_json(doc);
}

json scenario_to_json(const Scenario& s) {
  json doc{{"schema", kSchema}, {"cache_size", s.cache_size}};
  if (s.popularity) {
    if (const auto* z = std::get_if<ZipfSpec>(&*s.popularity)) {
      doc["popularity"] = {{"zipf", {{"library_size", z->library_size}, {"exponent", z->exponent}}}};
    } else {
      const auto& w = std::get<WeightsSpec>(*s.popularity);
      doc["popularity"] = {{"weights", w.weights}, {"sort", w.sort}};
    }
  }
  if (s.coverage) doc["coverage"] = coverage_to_json(*s.coverage);
  doc["solver"] = {{"outer_tolerance", s.solver.outer_tolerance},
                   {"inner_tolerance", s.solver.inner_tolerance}};
  if (s.simulation) {
    const auto& sim = *s.simulation;
    json out{{"replications", sim.replications}, {"seed", sim.seed}, {"threads", sim.threads}};
    if (sim.window_radius) out["window_radius"] = *sim.window_radius;
    if (sim.shadowing_sigma_db) out["shadowing_sigma_db"] = *sim.shadowing_sigma_db;
    switch (sim.policy) {
      case SimulationSpec::Policy::optimal:
        out["policy"] = "optimal";
        break;
      case SimulationSpec::Policy::mpc:
        out["policy"] = "mpc";
        break;
      case SimulationSpec::Policy::explicit_list:
        out["policy"] = sim.explicit_policy;
        break;
    }
    doc["simulation"] = out;
  }
  if (s.sweep) {
    const auto& sw = *s.sweep;
    doc["sweep"] = {{"variable", sw.variable == SweepSpec::Variable::threshold ? "T" : "p1_over_p2"},
                    {"min", sw.min},
                    {"max", sw.max},
                    {"points", sw.points},
                    {"spacing", sw.log_spacing ? "log" : "linear"},
                    {"include_policy", sw.include_policy},
                    {"bandwidth_hz", sw.bandwidth_hz},
                    {"analytic_max_coverage", sw.analytic_max_coverage},
                    {"a1", sw.a1},
                    {"p0", sw.p0}};
  }
  return doc;
}

std::pair<std::vector<double>, std::vector<std::size_t>> sort_by_popularity(
    std::span<const double> weights) {
  std::vector<std::size_t> order(weights.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return weights[i] > weights[j]; });
  std::vector<double> sorted(weights.size());
  for (std::size_t r = 0; r < order.size(); ++r) sorted[r] = weights[order[r]];
  return {std::move(sorted), std::move(order)};
}

RankedPopularity build_popularity(const PopularitySpec& spec) {
  if (const auto* z = std::get_if<ZipfSpec>(&spec)) {
    return {PopularityDistribution::zipf(z->library_size, z->exponent), {}};
  }
  const auto& w = std::get<WeightsSpec>(spec);
  if (!w.sort) return {PopularityDistribution::from_weights(w.weights), {}};
  auto [sorted, order] = sort_by_popularity(w.weights);
  return {PopularityDistribution::from_weights(sorted), std::move(order)};
}

BooleanModelParams boolean_params(const BooleanSpec& spec, std::optional<double> threshold) {
  if (threshold && !spec.threshold) {
    fail(Errc::invalid_argument,
         "a threshold sweep needs the Boolean model given by \"threshold\", not a radius");
  }
  if (spec.threshold) {
    return BooleanModelParams::from_threshold(spec.bs_intensity, threshold.value_or(*spec.threshold),
                                              spec.pathloss_exponent, spec.pathloss_constant,
                                              spec.truncation);
  }
  BooleanModelParams params;
  params.bs_intensity = spec.bs_intensity;
  params.coverage_radius = *spec.coverage_radius;
  params.truncation = spec.truncation;
  return params;
}

CoverageDistribution build_coverage(const CoverageSpec& spec, std::optional<double> threshold) {
  switch (spec.model) {
    case CoverageSpec::Model::sinr: {
      SinrModelParams params = spec.sinr;
      if (threshold) params.sinr_threshold = *threshold;
      return sinr_coverage(params);
    }
    case CoverageSpec::Model::boolean:
      return boolean_coverage(boolean_params(spec.boolean, threshold));
    case CoverageSpec::Model::pmf:
      if (threshold) fail(Errc::invalid_argument, "an explicit pmf cannot be swept over T");
      return CoverageDistribution::from_pmf(spec.pmf);
    case CoverageSpec::Model::two_network:
      return convolve(build_coverage(spec.networks[0], threshold),
                      build_coverage(spec.networks[1], threshold));
  }
  fail(Errc::invalid_argument, "unknown coverage model");
}

bool needs_simulation(const CoverageSpec& spec, double threshold, std::size_t max_coverage) {
  switch (spec.model) {
    case CoverageSpec::Model::sinr:
      return max_coverage_count(threshold) > max_coverage;
    case CoverageSpec::Model::two_network:
      return needs_simulation(spec.networks[0], threshold, max_coverage) ||
             needs_simulation(spec.networks[1], threshold, max_coverage);
    default:
      return false;
  }
}

std::vector<double> sweep_grid(const SweepSpec& sweep) {
  std::vector<double> grid(sweep.points);
  if (sweep.points == 1) {
    grid[0] = sweep.min;
    return grid;
  }
  const double steps = static_cast<double>(sweep.points - 1);
  for (std::size_t i = 0; i < sweep.points; ++i) {
    const double t = static_cast<double>(i) / steps;
    grid[i] = sweep.log_spacing
                  ? std::exp(std::log(sweep.min) + t * (std::log(sweep.max) - std::log(sweep.min)))
                  : sweep.min + t * (sweep.max - sweep.min);
  }
  grid.front() = sweep.min;
  grid.back() = sweep.max;
  return grid;
}

}  // namespace geocache::cli
