#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rodgrowth/errors.hpp"
#include "rodgrowth/numerics.hpp"
#include "rodgrowth/scenario.hpp"
#include "rodgrowth/sim.hpp"

namespace rodgrowth {

// Shortest fixed policy that survives a double round trip.
inline std::string g17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

namespace detail {

inline std::ofstream open_output(const std::filesystem::path& p) {
  std::ofstream out(p);
  if (!out) throw parse_error("cannot open output file for writing: " + p.string());
  return out;
}

inline void write_series_csv(const std::filesystem::path& p, const RunResult& res) {
  auto out = open_output(p);
  out << "t,S,yL0_residual,G_min,G_max,N_min,N_max\n";
  for (const Snapshot& s : res.snapshots)
    out << g17(s.t) << ',' << g17(s.S) << ',' << g17(s.checks.boundary_residual) << ','
        << g17(s.G.min_value()) << ',' << g17(s.G.max_value()) << ',' << g17(s.N.min_value())
        << ',' << g17(s.N.max_value()) << '\n';
}

inline std::string snapshot_filename(std::size_t step) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "snapshot_%04zu.csv", step);
  return buf;
}

inline void write_snapshot_csv(const std::filesystem::path& p, const Snapshot& s) {
  auto out = open_output(p);
  out << "X,G,g,y,Fe,N\n";
  for (std::size_t i = 0; i < s.G.size(); ++i)
    out << g17(s.G.grid.node(i)) << ',' << g17(s.G[i]) << ',' << g17(s.g[i]) << ','
        << g17(s.y[i]) << ',' << g17(s.Fe[i]) << ',' << g17(s.N[i]) << '\n';
}

inline nlohmann::json check_entry(bool pass, double worst) {
  return nlohmann::json{{"pass", pass}, {"worst_value", worst}};
}

inline void write_summary_json(const std::filesystem::path& p, const Scenario& scenario,
                               const Runtime& rt, const RunResult& res) {
  nlohmann::json summary;
  summary["scenario"] = scenario_to_json(scenario);
  summary["n_snapshots"] = res.snapshots.size();
  if (!res.snapshots.empty()) {
    const Snapshot& last = res.snapshots.back();
    summary["final"] = {{"t", last.t},
                        {"S", last.S},
                        {"G_min", last.G.min_value()},
                        {"G_max", last.G.max_value()}};
  }
  summary["checks"] = {
      {"positivity", check_entry(res.checks.positivity_pass, res.checks.positivity_worst)},
      {"envelope", check_entry(res.checks.envelope_pass, res.checks.envelope_worst)},
      {"boundary_residual_max",
       check_entry(res.checks.boundary_pass, res.checks.boundary_worst)},
      {"max_principle",
       check_entry(res.checks.max_principle_pass, res.checks.max_principle_worst)},
  };
  summary["derived"] = {
      {"D0_min", rt.problem.D0.min_value()},       {"D0_max", rt.problem.D0.max_value()},
      {"beta0_min", rt.problem.beta0.min_value()}, {"beta0_max", rt.problem.beta0.max_value()},
      {"gamma_min", rt.law_params.gamma.min_value()},
      {"gamma_max", rt.law_params.gamma.max_value()},
      {"c_min", rt.env.c_min},                     {"c_max", rt.env.c_max},
  };
  if (!res.completed) summary["failure"] = res.failure;

  auto out = open_output(p);
  out << summary.dump(2) << '\n';
}

inline SimulationSetup<LogQuadraticEnergy, ExampleLaw> make_setup(const Runtime& rt) {
  return SimulationSetup<LogQuadraticEnergy, ExampleLaw>{
      rt.problem, ExampleLaw{rt.law_params}, rt.env, rt.G0, rt.T, rt.n_steps, rt.snapshot_every};
}

}  // namespace detail

/// Run a scenario and write series.csv, per-snapshot CSVs, and summary.json
/// into outdir. Exit 0 on success, 1 on config or io trouble, 2 when growth
/// collapsed (partial outputs are still written).
inline int cmd_run(const std::filesystem::path& scenario_path,
                   const std::filesystem::path& outdir) {
  try {
    const Scenario scenario = parse_scenario(scenario_path);
    const Runtime rt = make_runtime(scenario);
    const RunResult res = run(detail::make_setup(rt));

    std::error_code ec;
    std::filesystem::create_directories(outdir, ec);
    detail::write_series_csv(outdir / "series.csv", res);
    for (const Snapshot& s : res.snapshots)
      detail::write_snapshot_csv(outdir / detail::snapshot_filename(s.step), s);
    detail::write_summary_json(outdir / "summary.json", scenario, rt, res);

    if (!res.completed) {
      std::cerr << "growth collapse: " << res.failure << "\n";
      return 2;
    }
    return 0;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
}

namespace detail {

struct InstanceResult {
  double resolution = 0.0;  // h or dt
  double S = 0.0;
  double G_mid = 0.0;
  double N_mid = 0.0;
};

inline InstanceResult run_instance(const Scenario& scenario) {
  const Runtime rt = make_runtime(scenario);
  auto setup = make_setup(rt);
  setup.snapshot_every = std::max<long long>(setup.n_steps, 1);  // endpoints only
  const RunResult res = run(setup);
  if (!res.completed) throw growth_collapse_error(res.failure);
  const Snapshot& last = res.snapshots.back();
  const double mid = 0.5 * rt.L0;
  return InstanceResult{0.0, last.S, eval_linear(last.G, mid), eval_linear(last.N, mid)};
}

}  // namespace detail

/// Self-convergence study against a finer reference. Space mode refines the
/// grid at fixed step count; time mode refines the step count at fixed grid.
/// Writes orders.csv; the observed order appears on the last row of each
/// quantity group, or n/a when the errors sit at machine floor.
inline int cmd_convergence(const std::filesystem::path& scenario_path, const std::string& mode,
                           const std::filesystem::path& outdir) {
  try {
    if (mode != "space" && mode != "time")
      throw std::invalid_argument("convergence mode must be \"space\" or \"time\"");
    const Scenario base = parse_scenario(scenario_path);

    std::vector<Scenario> instances;
    std::vector<double> resolutions;
    Scenario reference = base;
    if (mode == "space") {
      for (long long M : {64LL, 128LL, 256LL, 512LL}) {
        Scenario s = base;
        s.M = M;
        instances.push_back(s);
        resolutions.push_back(base.L0 / static_cast<double>(M));
      }
      reference.M = 1024;
    } else {
      for (long long n : {25LL, 50LL, 100LL, 200LL}) {
        Scenario s = base;
        s.n_steps = n;
        instances.push_back(s);
        resolutions.push_back(base.T / static_cast<double>(n));
      }
      reference.n_steps = 400;
    }

    // Instances are independent; run them in parallel and merge afterwards.
    std::vector<std::future<detail::InstanceResult>> futures;
    futures.reserve(instances.size() + 1);
    for (const Scenario& s : instances)
      futures.push_back(std::async(std::launch::async, [s] { return detail::run_instance(s); }));
    futures.push_back(
        std::async(std::launch::async, [reference] { return detail::run_instance(reference); }));

    std::vector<detail::InstanceResult> results;
    for (auto& f : futures) results.push_back(f.get());
    const detail::InstanceResult ref = results.back();
    results.pop_back();

    struct Group {
      const char* name;
      std::vector<double> errors;
    };
    std::vector<Group> groups{{"final_S", {}}, {"final_G_mid", {}}, {"final_N_mid", {}}};
    for (const auto& r : results) {
      groups[0].errors.push_back(std::abs(r.S - ref.S));
      groups[1].errors.push_back(std::abs(r.G_mid - ref.G_mid));
      groups[2].errors.push_back(std::abs(r.N_mid - ref.N_mid));
    }

    std::error_code ec;
    std::filesystem::create_directories(outdir, ec);
    auto out = detail::open_output(outdir / "orders.csv");
    out << "quantity,h_or_dt,error,observed_order\n";
    for (const Group& g : groups) {
      bool floored = true;
      for (double e : g.errors) floored = floored && e <= 1e-12;
      bool degenerate = false;
      for (double e : g.errors) degenerate = degenerate || e == 0.0;

      for (std::size_t i = 0; i < g.errors.size(); ++i) {
        out << g.name << ',' << g17(resolutions[i]) << ',' << g17(g.errors[i]) << ',';
        if (i + 1 == g.errors.size()) {
          if (floored || degenerate)
            out << "n/a";
          else
            out << g17(observed_order(g.errors, resolutions));
        }
        out << '\n';
      }
    }
    return 0;
  } catch (const growth_collapse_error& err) {
    std::cerr << "growth collapse: " << err.what() << "\n";
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
}

/// Check the configured energy family against the constitutive assumptions.
/// Prints one line per check; optionally writes the same report as JSON.
/// Exit 0 when all checks pass, 3 when any fails, 1 on config errors.
inline int cmd_validate_energy(const std::filesystem::path& scenario_path,
                               const std::optional<std::filesystem::path>& json_path = {}) {
  try {
    const Scenario scenario = parse_scenario(scenario_path);
    const Grid grid = make_uniform_grid(scenario.L0, scenario.M);
    const LogQuadraticEnergy model(evaluate(scenario.mu, grid));

    const auto probes = default_energy_probes();
    const EnergyValidationReport report = validate_energy(model, probes);

    nlohmann::json doc;
    doc["checks"] = nlohmann::json::array();
    for (const auto& c : report.checks) {
      std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << "  worst value "
                << g17(c.worst_value) << " at (X = " << g17(c.worst_X)
                << ", p = " << g17(c.worst_p) << ")\n";
      doc["checks"].push_back({{"name", c.name},
                               {"pass", c.pass},
                               {"worst_value", c.worst_value},
                               {"worst_X", c.worst_X},
                               {"worst_p", c.worst_p}});
    }
    doc["all_pass"] = report.all_pass();

    if (json_path) {
      auto out = detail::open_output(*json_path);
      out << doc.dump(2) << '\n';
    }
    return report.all_pass() ? 0 : 3;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
}

}  // namespace rodgrowth
