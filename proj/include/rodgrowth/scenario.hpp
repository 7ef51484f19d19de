#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rodgrowth/energy.hpp"
#include "rodgrowth/errors.hpp"
#include "rodgrowth/grid.hpp"
#include "rodgrowth/growth.hpp"

namespace rodgrowth {

/// One spatial coefficient in a scenario document: a constant, an affine
/// profile a + b X, or a strictly increasing knot table interpolated
/// linearly. Tables must span the whole reference rod.
struct CoefficientSpec {
  enum class Kind { constant, affine, table };
  Kind kind = Kind::constant;
  double value = 1.0;     // constant
  double a = 0.0;         // affine offset
  double b = 0.0;         // affine slope
  std::vector<double> xs;       // table knots
  std::vector<double> values;   // table values

  static CoefficientSpec constant_of(double v) {
    CoefficientSpec s;
    s.kind = Kind::constant;
    s.value = v;
    return s;
  }
  static CoefficientSpec affine_of(double a, double b) {
    CoefficientSpec s;
    s.kind = Kind::affine;
    s.a = a;
    s.b = b;
    return s;
  }
  static CoefficientSpec table_of(std::vector<double> xs, std::vector<double> values) {
    CoefficientSpec s;
    s.kind = Kind::table;
    s.xs = std::move(xs);
    s.values = std::move(values);
    return s;
  }
};

/// Nodal samples of the spec on a uniform grid. Table specs interpolate
/// between knots; the first/last knot must sit on the rod ends (1e-12 slack).
inline ScalarField evaluate(const CoefficientSpec& spec, const Grid& grid) {
  switch (spec.kind) {
    case CoefficientSpec::Kind::constant:
      return ScalarField::constant(grid, spec.value);
    case CoefficientSpec::Kind::affine:
      return ScalarField::sample(grid, [&](double X) { return spec.a + spec.b * X; });
    case CoefficientSpec::Kind::table: {
      if (spec.xs.size() < 2 || spec.xs.size() != spec.values.size())
        throw std::invalid_argument("coefficient table: need matching xs/values with >= 2 knots");
      for (std::size_t i = 0; i + 1 < spec.xs.size(); ++i)
        if (!(spec.xs[i] < spec.xs[i + 1]))
          throw std::invalid_argument("coefficient table: xs must be strictly increasing");
      if (std::abs(spec.xs.front()) > 1e-12 || std::abs(spec.xs.back() - grid.length) > 1e-12)
        throw std::invalid_argument("coefficient table: knots must span [0, L0]");
      return ScalarField::sample(grid, [&](double X) {
        const double x = std::clamp(X, spec.xs.front(), spec.xs.back());
        auto hi = std::upper_bound(spec.xs.begin(), spec.xs.end(), x);
        if (hi == spec.xs.begin()) ++hi;
        if (hi == spec.xs.end()) --hi;
        const auto j = static_cast<std::size_t>(hi - spec.xs.begin());
        const double t = (x - spec.xs[j - 1]) / (spec.xs[j] - spec.xs[j - 1]);
        return spec.values[j - 1] * (1.0 - t) + spec.values[j] * t;
      });
    }
  }
  throw std::logic_error("coefficient spec: unknown kind");
}

/// Fully resolved scenario. Defaults reproduce the reference coupled setup:
/// unit rod clamped at its own length, unit transport coefficients, saturated
/// nutrient supply, and the bounded stress/nutrient responses.
struct Scenario {
  double L0 = 1.0, l0 = 1.0;
  double T = 1.0;
  long long n_steps = 100;
  long long snapshot_every = 10;
  long long M = 128;
  std::string energy_kind = "log_quadratic";
  CoefficientSpec mu = CoefficientSpec::constant_of(1.0);
  CoefficientSpec D0 = CoefficientSpec::constant_of(1.0);
  CoefficientSpec beta0 = CoefficientSpec::constant_of(1.0);
  double nL = 1.0, nR = 1.0;
  CoefficientSpec gamma = CoefficientSpec::constant_of(1.0);
  double mu0 = 0.5, mu1 = 1.5;
  double S_ref = 1.0;
  double eta0 = 0.0, eta1 = 1.0;
  double N_ref = 1.0;
  double root_tol = 1e-12;
  CoefficientSpec G0 = CoefficientSpec::constant_of(1.0);
};

namespace detail {

using nlohmann::json;

class ScenarioReader {
 public:
  explicit ScenarioReader(const json& doc) : doc_(doc) {}

  Scenario read() {
    Scenario s;
    check_object(doc_, "", {"geometry", "time", "grid", "energy", "nutrient", "law", "numerics",
                            "initial"});

    if (auto* geo = section("geometry", {"L0", "l0"})) {
      number(*geo, "geometry.L0", "L0", s.L0);
      number(*geo, "geometry.l0", "l0", s.l0);
    }
    if (auto* time = section("time", {"T", "n_steps", "snapshot_every"})) {
      number(*time, "time.T", "T", s.T);
      integer(*time, "time.n_steps", "n_steps", s.n_steps);
      integer(*time, "time.snapshot_every", "snapshot_every", s.snapshot_every);
    }
    if (auto* grid = section("grid", {"M"})) integer(*grid, "grid.M", "M", s.M);
    if (auto* energy = section("energy", {"kind", "mu"})) {
      string(*energy, "energy.kind", "kind", s.energy_kind);
      coefficient(*energy, "energy.mu", "mu", s.mu);
    }
    if (auto* nutrient = section("nutrient", {"D0", "beta0", "nL", "nR"})) {
      coefficient(*nutrient, "nutrient.D0", "D0", s.D0);
      coefficient(*nutrient, "nutrient.beta0", "beta0", s.beta0);
      number(*nutrient, "nutrient.nL", "nL", s.nL);
      number(*nutrient, "nutrient.nR", "nR", s.nR);
    }
    if (auto* law = section("law", {"gamma", "mu0", "mu1", "S_ref", "eta0", "eta1", "N_ref"})) {
      coefficient(*law, "law.gamma", "gamma", s.gamma);
      number(*law, "law.mu0", "mu0", s.mu0);
      number(*law, "law.mu1", "mu1", s.mu1);
      number(*law, "law.S_ref", "S_ref", s.S_ref);
      number(*law, "law.eta0", "eta0", s.eta0);
      number(*law, "law.eta1", "eta1", s.eta1);
      number(*law, "law.N_ref", "N_ref", s.N_ref);
    }
    if (auto* numerics = section("numerics", {"root_tol"}))
      number(*numerics, "numerics.root_tol", "root_tol", s.root_tol);
    if (auto* initial = section("initial", {"G"})) coefficient(*initial, "initial.G", "G", s.G0);

    validate(s);
    if (!issues_.empty()) throw validation_error("invalid scenario", issues_);
    return s;
  }

 private:
  const json* section(const char* key, std::initializer_list<const char*> known) {
    if (!doc_.contains(key)) return nullptr;
    const json& sub = doc_.at(key);
    if (!sub.is_object()) {
      issues_.push_back(std::string(key) + ": expected an object");
      return nullptr;
    }
    check_object(sub, std::string(key) + ".", known);
    return &sub;
  }

  void check_object(const json& obj, const std::string& prefix,
                    std::initializer_list<const char*> known) {
    for (const auto& item : obj.items()) {
      bool ok = false;
      for (const char* k : known) ok = ok || item.key() == k;
      if (!ok) issues_.push_back(prefix + item.key() + ": unknown key");
    }
  }

  void number(const json& obj, const std::string& path, const char* key, double& out) {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    if (!v.is_number()) {
      issues_.push_back(path + ": expected a number");
      return;
    }
    out = v.get<double>();
    if (!std::isfinite(out)) issues_.push_back(path + ": must be finite");
  }

  void integer(const json& obj, const std::string& path, const char* key, long long& out) {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) {
      issues_.push_back(path + ": expected an integer");
      return;
    }
    out = v.get<long long>();
  }

  void string(const json& obj, const std::string& path, const char* key, std::string& out) {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    if (!v.is_string()) {
      issues_.push_back(path + ": expected a string");
      return;
    }
    out = v.get<std::string>();
  }

  void coefficient(const json& obj, const std::string& path, const char* key,
                   CoefficientSpec& out) {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    if (!v.is_object() || !v.contains("kind") || !v.at("kind").is_string()) {
      issues_.push_back(path + ": expected an object with a \"kind\" string");
      return;
    }
    const auto kind = v.at("kind").get<std::string>();
    if (kind == "constant") {
      check_object(v, path + ".", {"kind", "value"});
      out = CoefficientSpec::constant_of(1.0);
      number(v, path + ".value", "value", out.value);
    } else if (kind == "affine") {
      check_object(v, path + ".", {"kind", "a", "b"});
      out = CoefficientSpec::affine_of(0.0, 0.0);
      number(v, path + ".a", "a", out.a);
      number(v, path + ".b", "b", out.b);
    } else if (kind == "table") {
      check_object(v, path + ".", {"kind", "xs", "values"});
      std::vector<double> xs, values;
      if (!number_array(v, path + ".xs", "xs", xs) ||
          !number_array(v, path + ".values", "values", values))
        return;
      if (xs.size() != values.size() || xs.size() < 2) {
        issues_.push_back(path + ": xs and values must have equal length >= 2");
        return;
      }
      for (std::size_t i = 0; i + 1 < xs.size(); ++i)
        if (!(xs[i] < xs[i + 1])) {
          issues_.push_back(path + ".xs: must be strictly increasing");
          return;
        }
      out = CoefficientSpec::table_of(std::move(xs), std::move(values));
    } else {
      issues_.push_back(path + ".kind: expected constant, affine, or table, got \"" + kind +
                        "\"");
    }
  }

  bool number_array(const json& obj, const std::string& path, const char* key,
                    std::vector<double>& out) {
    if (!obj.contains(key) || !obj.at(key).is_array()) {
      issues_.push_back(path + ": expected an array of numbers");
      return false;
    }
    for (const auto& e : obj.at(key)) {
      if (!e.is_number()) {
        issues_.push_back(path + ": expected an array of numbers");
        return false;
      }
      out.push_back(e.get<double>());
      if (!std::isfinite(out.back())) {
        issues_.push_back(path + ": entries must be finite");
        return false;
      }
    }
    return true;
  }

  void require(bool ok, const std::string& message) {
    if (!ok) issues_.push_back(message);
  }

  void validate(const Scenario& s) {
    require(s.L0 > 0.0, "geometry.L0: must be positive");
    require(s.l0 > 0.0, "geometry.l0: must be positive");
    require(s.T >= 0.0, "time.T: must be nonnegative");
    require(s.n_steps >= 1, "time.n_steps: must be at least 1");
    require(s.snapshot_every >= 1, "time.snapshot_every: must be at least 1");
    require(s.M >= 8, "grid.M: must be at least 8");
    require(s.energy_kind == "log_quadratic",
            "energy.kind: unknown energy family \"" + s.energy_kind + "\"");
    require(s.nL >= 0.0, "nutrient.nL: must be nonnegative");
    require(s.nR >= 0.0, "nutrient.nR: must be nonnegative");
    require(s.mu0 <= s.mu1, "law.mu0: must not exceed law.mu1");
    require(s.eta0 >= 0.0, "law.eta0: must be nonnegative");
    require(s.eta0 <= s.eta1, "law.eta0: must not exceed law.eta1");
    require(s.S_ref > 0.0, "law.S_ref: must be positive");
    require(s.N_ref > 0.0, "law.N_ref: must be positive");
    require(s.root_tol > 0.0, "numerics.root_tol: must be positive");
    coefficient_span(s.mu, s.L0, "energy.mu");
    coefficient_span(s.D0, s.L0, "nutrient.D0");
    coefficient_span(s.beta0, s.L0, "nutrient.beta0");
    coefficient_span(s.gamma, s.L0, "law.gamma");
    coefficient_span(s.G0, s.L0, "initial.G");
  }

  void coefficient_span(const CoefficientSpec& c, double L0, const std::string& path) {
    if (c.kind != CoefficientSpec::Kind::table) return;
    if (std::abs(c.xs.front()) > 1e-12 || std::abs(c.xs.back() - L0) > 1e-12)
      issues_.push_back(path + ".xs: knots must span [0, L0]");
  }

  const json& doc_;
  std::vector<std::string> issues_;
};

inline json to_json(const CoefficientSpec& c) {
  switch (c.kind) {
    case CoefficientSpec::Kind::constant:
      return json{{"kind", "constant"}, {"value", c.value}};
    case CoefficientSpec::Kind::affine:
      return json{{"kind", "affine"}, {"a", c.a}, {"b", c.b}};
    case CoefficientSpec::Kind::table:
      return json{{"kind", "table"}, {"xs", c.xs}, {"values", c.values}};
  }
  throw std::logic_error("coefficient spec: unknown kind");
}

}  // namespace detail

inline Scenario scenario_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw validation_error("invalid scenario", {"document must be an object"});
  return detail::ScenarioReader(doc).read();
}

inline Scenario parse_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open scenario file: " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& err) {
    throw parse_error("scenario is not valid JSON: " + std::string(err.what()));
  }
  return scenario_from_json(doc);
}

/// Fully resolved echo of a scenario; parsing it again reproduces the same
/// scenario, which is what makes run outputs reproducible from the summary.
inline nlohmann::json scenario_to_json(const Scenario& s) {
  using detail::to_json;
  return nlohmann::json{
      {"geometry", {{"L0", s.L0}, {"l0", s.l0}}},
      {"time", {{"T", s.T}, {"n_steps", s.n_steps}, {"snapshot_every", s.snapshot_every}}},
      {"grid", {{"M", s.M}}},
      {"energy", {{"kind", s.energy_kind}, {"mu", to_json(s.mu)}}},
      {"nutrient",
       {{"D0", to_json(s.D0)}, {"beta0", to_json(s.beta0)}, {"nL", s.nL}, {"nR", s.nR}}},
      {"law",
       {{"gamma", to_json(s.gamma)},
        {"mu0", s.mu0},
        {"mu1", s.mu1},
        {"S_ref", s.S_ref},
        {"eta0", s.eta0},
        {"eta1", s.eta1},
        {"N_ref", s.N_ref}}},
      {"numerics", {{"root_tol", s.root_tol}}},
      {"initial", {{"G", to_json(s.G0)}}},
  };
}

/// The scenario turned into runnable objects. Coefficient positivity is
/// enforced here, on the evaluated nodal fields.
struct Runtime {
  Grid grid;
  CoupledProblem<LogQuadraticEnergy> problem;
  ExampleLawParams law_params;
  GrowthEnvelope env;
  ScalarField G0;
  double L0 = 1.0;
  double T = 1.0;
  long long n_steps = 1;
  long long snapshot_every = 1;
};

inline Runtime make_runtime(const Scenario& s) {
  const Grid grid = make_uniform_grid(s.L0, s.M);

  LogQuadraticEnergy model(evaluate(s.mu, grid));

  ScalarField D0 = evaluate(s.D0, grid);
  ScalarField beta0 = evaluate(s.beta0, grid);
  for (std::size_t i = 0; i < grid.node_count(); ++i) {
    if (!(D0[i] > 0.0)) throw invalid_coefficient_error("nutrient.D0: must be positive on the rod");
    if (!(beta0[i] > 0.0))
      throw invalid_coefficient_error("nutrient.beta0: must be positive on the rod");
  }

  ExampleLawParams law{evaluate(s.gamma, grid), s.mu0, s.mu1, s.S_ref, s.eta0, s.eta1, s.N_ref};
  validate_law_params(law);

  ScalarField G0 = evaluate(s.G0, grid);
  for (std::size_t i = 0; i < grid.node_count(); ++i)
    if (!(G0[i] > 0.0)) throw invalid_coefficient_error("initial.G: must be positive on the rod");

  Runtime rt{grid,
             CoupledProblem<LogQuadraticEnergy>{std::move(model), std::move(D0), std::move(beta0),
                                                s.l0, s.nL, s.nR, s.root_tol},
             law,
             envelope(law),
             std::move(G0),
             s.L0,
             s.T,
             s.n_steps,
             s.snapshot_every};
  return rt;
}

}  // namespace rodgrowth
