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

// Run orchestration shared by the command-line tool and the acceptance suite.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <future>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "schwinger/dilation.hpp"
#include "schwinger/errors.hpp"
#include "schwinger/lattice_basis.hpp"
#include "schwinger/lindblad.hpp"
#include "schwinger/operators.hpp"

namespace schwinger {

enum class Method { kRk4, kDilation, kExact };

inline std::string to_string(Method m) {
  switch (m) {
    case Method::kRk4: return "rk4";
    case Method::kDilation: return "dilation";
    case Method::kExact: return "exact";
  }
  return "?";
}

inline Method parse_method(const std::string& s) {
  if (s == "rk4") return Method::kRk4;
  if (s == "dilation") return Method::kDilation;
  if (s == "exact") return Method::kExact;
  throw ParameterError("unknown method '" + s + "' (expected rk4, dilation or exact)");
}

struct RunConfig {
  int n_sites = 2;
  double a = 1.0;
  double m = 0.1;
  double e = 1.0;
  double beta = 0.1;
  double coupling = 3.2;  // D
  double t_max = 10.0;
  Method method = Method::kRk4;
  std::optional<double> dt;     // rk4, exact
  std::optional<int> n_cycle;   // dilation
  bool truncate_total_flux = true;
  std::string output = "run";
  int stride = 1;

  LatticeSpec lattice() const { return {n_sites, 1, truncate_total_flux}; }
  ModelParams model() const { return {a, m, e}; }
  BathParams bath() const { return BathParams::from_beta(beta, coupling); }

  void validate() const {
    if (n_sites < 1) throw ParameterError("N must be >= 1");
    if (!(a > 0.0)) throw ParameterError("a must be > 0");
    if (!(beta > 0.0)) throw ParameterError("beta must be > 0");
    if (!(coupling >= 0.0)) throw ParameterError("D must be >= 0");
    if (!(t_max > 0.0)) throw ParameterError("t_max must be > 0");
    if (stride < 1) throw ParameterError("stride must be >= 1");
    if (method == Method::kDilation) {
      if (!n_cycle) throw ParameterError("dilation runs need Ncycle");
      if (*n_cycle < 1) throw ParameterError("Ncycle must be >= 1");
    } else {
      if (!dt) throw ParameterError(to_string(method) + " runs need dt");
      if (!(*dt > 0.0)) throw ParameterError("dt must be > 0");
    }
  }

  /// Same physical setup (everything except the numerical method).
  bool same_physics(const RunConfig& o) const {
    return n_sites == o.n_sites && a == o.a && m == o.m && e == o.e && beta == o.beta &&
           coupling == o.coupling && t_max == o.t_max && truncate_total_flux == o.truncate_total_flux;
  }

  bool operator==(const RunConfig&) const = default;
};

inline nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json j{{"N", c.n_sites},
                   {"a", c.a},
                   {"m", c.m},
                   {"e", c.e},
                   {"beta", c.beta},
                   {"D", c.coupling},
                   {"t_max", c.t_max},
                   {"method", to_string(c.method)},
                   {"truncate_total_flux", c.truncate_total_flux},
                   {"output", c.output},
                   {"stride", c.stride}};
  j["dt"] = c.dt ? nlohmann::json(*c.dt) : nlohmann::json(nullptr);
  j["Ncycle"] = c.n_cycle ? nlohmann::json(*c.n_cycle) : nlohmann::json(nullptr);
  return j;
}

inline RunConfig run_config_from_json(const nlohmann::json& j) {
  RunConfig c;
  c.n_sites = j.at("N").get<int>();
  c.a = j.at("a").get<double>();
  c.m = j.at("m").get<double>();
  c.e = j.at("e").get<double>();
  c.beta = j.at("beta").get<double>();
  c.coupling = j.at("D").get<double>();
  c.t_max = j.at("t_max").get<double>();
  c.method = parse_method(j.at("method").get<std::string>());
  c.truncate_total_flux = j.at("truncate_total_flux").get<bool>();
  c.output = j.value("output", std::string("run"));
  c.stride = j.value("stride", 1);
  if (j.contains("dt") && !j["dt"].is_null()) c.dt = j["dt"].get<double>();
  if (j.contains("Ncycle") && !j["Ncycle"].is_null()) c.n_cycle = j["Ncycle"].get<int>();
  return c;
}

struct RunResult {
  RunConfig config;
  std::size_t sector_dim = 0;
  std::size_t full_dim = 0;
  double gibbs_pairs = 0.0;
  double gibbs_e2 = 0.0;
  EvolutionRecord record;
};

/// Index of the bare-vacuum state in a sector built by build_sector_operators:
/// the only state with zero flux and zero pairs, which sorts first.
inline Eigen::Index vacuum_index(const SectorOperators& ops) {
  for (Eigen::Index k = 0; k < ops.e2.dim(); ++k) {
    if (std::abs(ops.e2.matrix()(k, k)) < 1e-14 && std::abs(ops.pairs.matrix()(k, k)) < 1e-14) return k;
  }
  throw ConsistencyError("sector has no bare-vacuum state");
}

inline RunResult run_evolve(const RunConfig& cfg, const SectorOperators& ops) {
  cfg.validate();
  const CMatrix l = build_lindblad_operator(ops.hamiltonian, ops.o_s, cfg.bath(), cfg.lattice(), cfg.model());
  const CMatrix& h = ops.hamiltonian.matrix();
  const ObservableSet obs = observables_of(ops);
  const DensityMatrix rho0 = DensityMatrix::pure(h.rows(), vacuum_index(ops));
  const DensityMatrix gibbs = gibbs_state(h, cfg.beta);

  RunResult r;
  r.config = cfg;
  r.sector_dim = static_cast<std::size_t>(h.rows());
  r.full_dim = ops.full_dimension;
  r.gibbs_pairs = expectation(gibbs, ops.pairs);
  r.gibbs_e2 = expectation(gibbs, ops.e2);
  switch (cfg.method) {
    case Method::kRk4:
      r.record = rk4_evolve(rho0, h, l, obs, {cfg.t_max, *cfg.dt, cfg.stride, 1e-6});
      break;
    case Method::kExact:
      r.record = exact_evolve(rho0, h, l, obs, cfg.t_max, *cfg.dt, cfg.stride);
      break;
    case Method::kDilation:
      r.record = dilation_evolve(rho0, h, l, obs, cfg.t_max, *cfg.n_cycle);
      break;
  }
  return r;
}

inline RunResult run_evolve(const RunConfig& cfg) {
  cfg.validate();
  const auto ops = build_sector_operators(cfg.lattice(), cfg.model());
  if (cfg.method == Method::kExact) check_liouvillian_size(ops.hamiltonian.dim());
  return run_evolve(cfg, ops);
}

inline nlohmann::json sidecar_json(const RunResult& r) {
  return {{"config", to_json(r.config)},
          {"sector_dim", r.sector_dim},
          {"full_dim", r.full_dim},
          {"gibbs", {{"beta", r.config.beta}, {"n_pairs", r.gibbs_pairs}, {"e2", r.gibbs_e2}}},
          {"csv_columns", kEvolutionCsvHeader}};
}

/// Writes <prefix>.csv and <prefix>.json.
inline void write_run_files(const RunResult& r, const std::string& prefix) {
  {
    std::ofstream csv(prefix + ".csv");
    if (!csv) throw ParameterError("cannot write " + prefix + ".csv");
    write_csv(csv, r.record);
  }
  std::ofstream js(prefix + ".json");
  if (!js) throw ParameterError("cannot write " + prefix + ".json");
  js << sidecar_json(r).dump(2) << '\n';
}

// ---------------------------------------------------------------------------

struct CompareReport {
  std::size_t common_samples = 0;
  double max_dev_pairs = 0.0;
  double max_dev_e2 = 0.0;
  double mean_dev_pairs = 0.0;
  double mean_dev_e2 = 0.0;

  double max_dev() const { return std::max(max_dev_pairs, max_dev_e2); }
};

/// Deviations over the sample times both records share (matched to 1e-9).
/// `t_limit` restricts the comparison to t <= t_limit.
inline CompareReport compare_records(const EvolutionRecord& a, const EvolutionRecord& b,
                                     double t_limit = std::numeric_limits<double>::infinity()) {
  CompareReport rep;
  std::size_t j = 0;
  for (const auto& sa : a.samples) {
    if (sa.t > t_limit + 1e-9) break;
    while (j < b.samples.size() && b.samples[j].t < sa.t - 1e-9) ++j;
    if (j == b.samples.size()) break;
    if (std::abs(b.samples[j].t - sa.t) > 1e-9) continue;
    const double dp = std::abs(sa.n_pairs - b.samples[j].n_pairs);
    const double de = std::abs(sa.e2 - b.samples[j].e2);
    rep.max_dev_pairs = std::max(rep.max_dev_pairs, dp);
    rep.max_dev_e2 = std::max(rep.max_dev_e2, de);
    rep.mean_dev_pairs += dp;
    rep.mean_dev_e2 += de;
    ++rep.common_samples;
  }
  if (rep.common_samples == 0) throw ParameterError("compared runs share no sample times");
  rep.mean_dev_pairs /= static_cast<double>(rep.common_samples);
  rep.mean_dev_e2 /= static_cast<double>(rep.common_samples);
  return rep;
}

inline CompareReport run_compare(const RunConfig& a, const RunConfig& b) {
  if (!a.same_physics(b)) throw ParameterError("compare: the two runs describe different physical setups");
  a.validate();
  b.validate();
  const auto ops = build_sector_operators(a.lattice(), a.model());
  return compare_records(run_evolve(a, ops).record, run_evolve(b, ops).record);
}

inline nlohmann::json to_json(const CompareReport& r) {
  return {{"common_samples", r.common_samples},
          {"max_dev_n_pairs", r.max_dev_pairs},
          {"max_dev_e2", r.max_dev_e2},
          {"mean_dev_n_pairs", r.mean_dev_pairs},
          {"mean_dev_e2", r.mean_dev_e2}};
}

// ---------------------------------------------------------------------------

/// One run per N, fanned out over `jobs` worker threads.
inline std::vector<RunResult> run_sweep(const RunConfig& base, const std::vector<int>& sizes, unsigned jobs = 0) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  std::vector<RunResult> results(sizes.size());
  std::size_t next = 0;
  while (next < sizes.size()) {
    std::vector<std::future<RunResult>> batch;
    for (unsigned w = 0; w < jobs && next < sizes.size(); ++w, ++next) {
      RunConfig c = base;
      c.n_sites = sizes[next];
      c.output = base.output + "_N" + std::to_string(sizes[next]);
      batch.push_back(std::async(std::launch::async, [c] { return run_evolve(c); }));
    }
    const std::size_t first = next - batch.size();
    for (std::size_t k = 0; k < batch.size(); ++k) results[first + k] = batch[k].get();
  }
  return results;
}

/// Time average of <E^2> over the last `fraction` of a record.
inline double late_time_e2(const EvolutionRecord& rec, double fraction = 0.1) {
  const double t_end = rec.back().t;
  const double t_start = t_end * (1.0 - fraction);
  double sum = 0.0;
  int n = 0;
  for (const auto& s : rec.samples) {
    if (s.t >= t_start - 1e-12) {
      sum += s.e2;
      ++n;
    }
  }
  return sum / n;
}

// ---------------------------------------------------------------------------

struct StatesReport {
  int n_sites = 0;
  BigInt closed_form;
  std::optional<std::size_t> enumerated;
  std::optional<std::size_t> sector_dim;
  bool consistent = true;
};

inline constexpr int kMaxEnumeratedSites = 6;

inline StatesReport states_report(int n_sites, bool with_sector, bool truncate_total_flux = false) {
  if (n_sites < 1) throw DomainError("N must be >= 1");
  StatesReport r;
  r.n_sites = n_sites;
  r.closed_form = count_physical_states(n_sites);
  const LatticeSpec spec{n_sites, 1, truncate_total_flux};
  if (n_sites <= kMaxEnumeratedSites || with_sector) {
    const PhysicalBasis basis(spec);
    if (n_sites <= kMaxEnumeratedSites) {
      r.enumerated = basis.size();
      if (!truncate_total_flux) r.consistent = (BigInt(basis.size()) == r.closed_form);
    }
    for (const auto& c : basis.configs()) {
      if (!c.satisfies_gauss_law()) r.consistent = false;
    }
    if (with_sector) r.sector_dim = project_zero_momentum_positive_parity(basis).dimension();
  }
  return r;
}

}  // namespace schwinger
