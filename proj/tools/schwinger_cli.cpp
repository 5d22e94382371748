// Copyright 2026 The schwinger-open Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// schwinger: command-line front end.
//
// Exit codes: 0 ok, 1 numerical-check failure, 2 usage / parameter error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "schwinger/schwinger.hpp"

namespace {

using namespace schwinger;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

struct ConfigFlags {
  RunConfig cfg;
  std::string method = "rk4";
  std::optional<double> dt;
  std::optional<int> n_cycle;

  void add_physics(CLI::App* app, bool truncate_default) {
    cfg.truncate_total_flux = truncate_default;
    app->add_option("-N,--N", cfg.n_sites, "spatial lattice sites")->capture_default_str();
    app->add_option("--a", cfg.a, "lattice spacing")->capture_default_str();
    app->add_option("--m", cfg.m, "fermion mass (1/a)")->capture_default_str();
    app->add_option("--e", cfg.e, "gauge coupling (1/a)")->capture_default_str();
    app->add_option("--beta", cfg.beta, "inverse bath temperature (a)")->capture_default_str();
    app->add_option("--D", cfg.coupling, "environment correlator D")->capture_default_str();
    app->add_flag("--truncate,!--no-truncate", cfg.truncate_total_flux,
                  "keep only states with sum_n |l_n| < Nf")
        ->capture_default_str();
  }

  void add_run(CLI::App* app, const std::string& suffix = "") {
    app->add_option("--method" + suffix, method, "rk4 | dilation | exact")->capture_default_str();
    app->add_option("--dt" + suffix, dt, "time step for rk4/exact (default 0.005)");
    app->add_option("--ncycle" + suffix, n_cycle, "number of dilation cycles (default 200)");
  }

  void add_common(CLI::App* app) {
    app->add_option("--t-max", cfg.t_max, "final time (units of a)")->capture_default_str();
    app->add_option("--stride", cfg.stride, "record every k-th rk4/exact step")->capture_default_str();
    app->add_option("-o,--output", cfg.output, "output path prefix")->capture_default_str();
  }

  RunConfig resolve() const {
    RunConfig c = cfg;
    c.method = parse_method(method);
    if (c.method == Method::kDilation) {
      c.n_cycle = n_cycle.value_or(200);
    } else {
      c.dt = dt.value_or(0.005);
    }
    c.validate();
    return c;
  }
};

void print_json(const nlohmann::json& j, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream os(path);
  if (!os) throw ParameterError("cannot write " + path);
  os << j.dump(2) << '\n';
}

int cmd_states(int n, bool sector, bool truncate) {
  const StatesReport r = states_report(n, sector, truncate);
  std::cout << "N " << r.n_sites << '\n';
  std::cout << "closed-form D_N " << r.closed_form << '\n';
  if (r.enumerated) std::cout << "enumerated " << *r.enumerated << (truncate ? " (total-flux truncated)" : "") << '\n';
  if (r.sector_dim) std::cout << "sector dim " << *r.sector_dim << '\n';
  std::cout << (r.consistent ? "cross-checks passed" : "cross-check FAILED") << '\n';
  return r.consistent ? kExitOk : kExitCheckFailed;
}

int cmd_hamiltonian(const RunConfig& cfg, bool full, const std::string& which, const std::string& out) {
  const LatticeSpec spec = cfg.lattice();
  const ModelParams params = cfg.model();
  const PhysicalBasis basis(spec);
  if (full) {
    if (which == "H") {
      print_json(to_json(build_hamiltonian_full(basis, params)), out);
      return kExitOk;
    }
    ConfigFunction f;
    if (which == "e2") f = electric_energy_density(spec, params);
    if (which == "pairs") f = pair_number(spec);
    if (which == "os") f = scalar_density_number_form(spec, params);
    if (!f) throw ParameterError("unknown operator '" + which + "'");
    print_json(matrix_to_json(CMatrix(diagonal_operator_full(basis, f).matrix), "full-physical", spec), out);
    return kExitOk;
  }
  const SymmetrySector sector = project_zero_momentum_positive_parity(basis);
  std::optional<HermitianOperator> op;
  if (which == "H") op = build_hamiltonian_sector(basis, sector, params);
  if (which == "e2") op = build_observable_e2(basis, sector, params);
  if (which == "pairs") op = build_observable_pairs(basis, sector);
  if (which == "os") op = build_O_S(basis, sector, params);
  if (!op) throw ParameterError("unknown operator '" + which + "'");
  print_json(to_json(*op), out);
  return kExitOk;
}

int cmd_evolve(const RunConfig& cfg, bool dump_unitaries) {
  const auto ops = build_sector_operators(cfg.lattice(), cfg.model());
  if (cfg.method == Method::kExact) check_liouvillian_size(ops.hamiltonian.dim());
  const RunResult r = run_evolve(cfg, ops);
  write_run_files(r, cfg.output);
  if (dump_unitaries && cfg.method == Method::kDilation) {
    const CMatrix l = build_lindblad_operator(ops.hamiltonian, ops.o_s, cfg.bath(), cfg.lattice(), cfg.model());
    const DilationChannel ch(ops.hamiltonian.matrix(), l, cfg.t_max / *cfg.n_cycle);
    print_json(ch.unitaries_json(cfg.lattice()), cfg.output + "_unitaries.json");
  }
  const auto& last = r.record.back();
  std::cout << "wrote " << cfg.output << ".csv (" << r.record.size() << " samples, sector dim " << r.sector_dim
            << ")\n";
  std::cout << "final  t=" << last.t << "  <N>=" << last.n_pairs << "  <E^2>=" << last.e2 << '\n';
  std::cout << "gibbs  <N>=" << r.gibbs_pairs << "  <E^2>=" << r.gibbs_e2 << '\n';
  return kExitOk;
}

int cmd_gibbs(const RunConfig& cfg, const std::string& out) {
  const auto ops = build_sector_operators(cfg.lattice(), cfg.model());
  const DensityMatrix g = gibbs_state(ops.hamiltonian.matrix(), cfg.beta);
  print_json({{"N", cfg.n_sites},
              {"beta", cfg.beta},
              {"sector_dim", ops.hamiltonian.dim()},
              {"n_pairs", expectation(g, ops.pairs)},
              {"e2", expectation(g, ops.e2)}},
             out);
  return kExitOk;
}

int cmd_compare(const RunConfig& a, const RunConfig& b, std::optional<double> max_dev, const std::string& out) {
  const CompareReport rep = run_compare(a, b);
  nlohmann::json j = to_json(rep);
  j["a"] = to_json(a);
  j["b"] = to_json(b);
  print_json(j, out);
  if (max_dev && rep.max_dev() > *max_dev) {
    std::cerr << "max deviation " << rep.max_dev() << " exceeds " << *max_dev << '\n';
    return kExitCheckFailed;
  }
  return kExitOk;
}

int cmd_sweep(const RunConfig& base, const std::vector<int>& sizes, unsigned jobs) {
  const auto results = run_sweep(base, sizes, jobs);
  std::cout << "N,sector_dim,gibbs_e2,final_e2,late_e2,gibbs_n_pairs,final_n_pairs\n";
  for (const auto& r : results) {
    write_run_files(r, r.config.output);
    std::cout << r.config.n_sites << ',' << r.sector_dim << ',' << format_double(r.gibbs_e2) << ','
              << format_double(r.record.back().e2) << ',' << format_double(late_time_e2(r.record)) << ','
              << format_double(r.gibbs_pairs) << ',' << format_double(r.record.back().n_pairs) << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Open-system lattice Schwinger model: bases, operators, Lindblad and dilation dynamics"};
  app.require_subcommand(1);

  int states_n = 0;
  bool states_sector = false;
  bool states_truncate = false;
  auto* states = app.add_subcommand("states", "count physical states and cross-check by enumeration");
  states->add_option("-N,--N", states_n, "spatial lattice sites")->required();
  states->add_flag("--sector", states_sector, "also report the k=0, P=+ sector dimension");
  states->add_flag("--truncate", states_truncate, "apply the total-flux truncation to the enumeration");

  ConfigFlags ham_flags;
  bool ham_full = false;
  std::string ham_op = "H";
  std::string ham_out;
  auto* ham = app.add_subcommand("hamiltonian", "dump an operator as JSON");
  ham_flags.add_physics(ham, false);
  ham->add_flag("--full", ham_full, "full physical basis instead of the symmetry sector");
  ham->add_option("--operator", ham_op, "H | e2 | pairs | os")->capture_default_str();
  ham->add_option("-o,--output", ham_out, "output file (default stdout)");

  ConfigFlags evo_flags;
  bool dump_unitaries = false;
  auto* evolve = app.add_subcommand("evolve", "run one trajectory and write CSV + JSON sidecar");
  evo_flags.add_physics(evolve, true);
  evo_flags.add_run(evolve);
  evo_flags.add_common(evolve);
  evolve->add_flag("--dump-unitaries", dump_unitaries, "dilation only: write U_J and U_H as operator JSON");

  ConfigFlags gibbs_flags;
  std::string gibbs_out;
  auto* gibbs = app.add_subcommand("gibbs", "thermal reference observables");
  gibbs_flags.add_physics(gibbs, true);
  gibbs->add_option("-o,--output", gibbs_out, "output file (default stdout)");

  ConfigFlags cmp_a;
  ConfigFlags cmp_b;
  std::optional<double> cmp_max;
  std::string cmp_out;
  auto* compare = app.add_subcommand("compare", "run two methods on one setup and report deviations");
  cmp_a.add_physics(compare, true);
  cmp_a.add_common(compare);
  cmp_a.add_run(compare, "-a");
  cmp_b.add_run(compare, "-b");
  cmp_b.method = "exact";
  compare->add_option("--max-dev", cmp_max, "exit 1 if the max deviation exceeds this");
  compare->add_option("--report", cmp_out, "report file (default stdout)");

  ConfigFlags sweep_flags;
  std::vector<int> sweep_sizes{2, 4, 6, 8};
  unsigned sweep_jobs = 0;
  auto* sweep = app.add_subcommand("sweep", "rk4/dilation runs over several lattice sizes");
  sweep_flags.add_physics(sweep, true);
  sweep_flags.add_run(sweep);
  sweep_flags.add_common(sweep);
  sweep->add_option("--sizes", sweep_sizes, "lattice sizes")->delimiter(',')->capture_default_str();
  sweep->add_option("--jobs", sweep_jobs, "worker threads (0 = hardware concurrency)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*states) {
      if (states_n < 1) {
        std::cerr << "states: N must be >= 1\n";
        return kExitUsage;
      }
      return cmd_states(states_n, states_sector, states_truncate);
    }
    if (*ham) return cmd_hamiltonian(ham_flags.cfg, ham_full, ham_op, ham_out);
    if (*evolve) return cmd_evolve(evo_flags.resolve(), dump_unitaries);
    if (*gibbs) return cmd_gibbs(gibbs_flags.cfg, gibbs_out);
    if (*compare) {
      cmp_b.cfg = cmp_a.cfg;
      return cmd_compare(cmp_a.resolve(), cmp_b.resolve(), cmp_max, cmp_out);
    }
    if (*sweep) return cmd_sweep(sweep_flags.resolve(), sweep_sizes, sweep_jobs);
  } catch (const NumericalCheckError& e) {
    std::cerr << "numerical check failed: " << e.what() << '\n';
    return kExitCheckFailed;
  } catch (const ConsistencyError& e) {
    std::cerr << "consistency check failed: " << e.what() << '\n';
    return kExitCheckFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
