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

// Physical Hilbert space of the lattice Schwinger model with staggered
// fermions on a periodic chain of N spatial sites (Nf = 2N fermion sites).
//
// Conventions used throughout the library:
//   * even fermion sites host electrons, odd sites host positrons;
//   * occupations store the physical particle content, so the bare vacuum is
//     the all-zero bit vector. In spin language an electron site is spin-up
//     when occupied, a positron site is spin-up when *empty*;
//   * the staggered charge is -1 for an electron and +1 for a positron, and
//     Gauss's law reads  l_n - l_{n-1} = q_n  (indices mod Nf), where l_n is
//     the integer flux on the link n -> n+1.

#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/SparseCore>
#include <boost/multiprecision/cpp_int.hpp>
#include <nlohmann/json.hpp>

#include "schwinger/errors.hpp"

namespace schwinger {

using BigInt = boost::multiprecision::cpp_int;

struct LatticeSpec {
  int n_sites = 1;  // spatial sites N
  int flux_cutoff = 1;
  bool truncate_total_flux = false;  // keep only sum_n |l_n| < Nf

  int fermion_sites() const { return 2 * n_sites; }

  void validate() const {
    if (n_sites < 1) throw DomainError("lattice needs at least one spatial site");
    if (flux_cutoff < 1) throw DomainError("flux cutoff must be >= 1");
  }

  bool operator==(const LatticeSpec&) const = default;
};

struct GaugeFermionConfig {
  std::vector<std::uint8_t> occupations;  // length Nf, 1 = particle present
  std::vector<int> fluxes;                // length Nf, flux on link n -> n+1

  auto operator<=>(const GaugeFermionConfig&) const = default;
  bool operator==(const GaugeFermionConfig&) const = default;

  int size() const { return static_cast<int>(occupations.size()); }

  // Staggered charge of fermion site n.
  int charge(int n) const {
    if (occupations[n] == 0) return 0;
    return (n % 2 == 0) ? -1 : +1;
  }

  // Eigenvalue of sigma^+ sigma^- at site n (spin-up indicator).
  int spin_up(int n) const {
    return (n % 2 == 0) ? occupations[n] : 1 - occupations[n];
  }

  int pair_count() const {
    int pairs = 0;
    for (int n = 0; n < size(); n += 2) pairs += occupations[n];
    return pairs;
  }

  int sum_flux_squared() const {
    int s = 0;
    for (int l : fluxes) s += l * l;
    return s;
  }

  int sum_abs_flux() const {
    int s = 0;
    for (int l : fluxes) s += std::abs(l);
    return s;
  }

  // sum_n (-1)^n (sigma_z(n) + 1) / 2, the staggered mass count. Equals
  // 2 * pairs - N for a charge-neutral configuration.
  int staggered_mass() const {
    int s = 0;
    for (int n = 0; n < size(); ++n) s += (n % 2 == 0 ? 1 : -1) * spin_up(n);
    return s;
  }

  bool satisfies_gauss_law() const {
    const int nf = size();
    for (int n = 0; n < nf; ++n) {
      const int prev = fluxes[(n + nf - 1) % nf];
      if (fluxes[n] - prev != charge(n)) return false;
    }
    return true;
  }
};

inline GaugeFermionConfig bare_vacuum(const LatticeSpec& spec) {
  const int nf = spec.fermion_sites();
  return {std::vector<std::uint8_t>(nf, 0), std::vector<int>(nf, 0)};
}

// ---------------------------------------------------------------------------
// Closed-form count of physical states (flux cutoff 1, no total-flux cut).

namespace detail {

inline BigInt binomial(long n, long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigInt r = 1;
  for (long i = 1; i <= k; ++i) {
    r *= (n - k + i);
    r /= i;
  }
  return r;
}

}  // namespace detail

/// Number of Gauss-law states with |l_n| <= 1 on N spatial sites:
///   D_N = sum_{M=1}^{N} (2N/M) sum_{K=0}^{N-M} C(M-1+K, M-1) C(2N-2K-M-1, M-1) + 3,
/// where M counts e+e- pairs and the 3 accounts for the pair-free states with
/// uniform flux -1, 0, +1.
inline BigInt count_physical_states(int n_sites) {
  if (n_sites < 1) throw DomainError("count_physical_states: N must be >= 1");
  const long n = n_sites;
  BigInt total = 3;
  for (long m = 1; m <= n; ++m) {
    BigInt inner = 0;
    for (long k = 0; k <= n - m; ++k) {
      inner += detail::binomial(m - 1 + k, m - 1) * detail::binomial(2 * n - 2 * k - m - 1, m - 1);
    }
    // The cyclic symmetry factor 2N/M always yields an integer after the sum.
    total += (inner * (2 * n)) / m;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Enumeration.

/// All Gauss-law configurations for `spec`, sorted lexicographically by
/// (occupations, fluxes). The sort order is the canonical full-basis order.
inline std::vector<GaugeFermionConfig> enumerate_physical_configs(const LatticeSpec& spec) {
  spec.validate();
  const int nf = spec.fermion_sites();
  const int cut = spec.flux_cutoff;
  std::vector<GaugeFermionConfig> out;

  GaugeFermionConfig cur{std::vector<std::uint8_t>(nf, 0), std::vector<int>(nf, 0)};
  // Depth-first over occupations; the flux entering site 0 is fixed by the
  // outer loop and must reappear on the last link for periodicity.
  auto recurse = [&](auto&& self, int site, int incoming, int boundary) -> void {
    if (site == nf) {
      if (incoming != boundary) return;
      if (spec.truncate_total_flux && cur.sum_abs_flux() >= nf) return;
      out.push_back(cur);
      return;
    }
    for (std::uint8_t occ : {std::uint8_t{0}, std::uint8_t{1}}) {
      cur.occupations[site] = occ;
      const int l = incoming + cur.charge(site);
      if (std::abs(l) > cut) continue;
      cur.fluxes[site] = l;
      self(self, site + 1, l, boundary);
    }
    cur.occupations[site] = 0;
  };
  for (int boundary = -cut; boundary <= cut; ++boundary) recurse(recurse, 0, boundary, boundary);

  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Symmetry actions.

/// Translation by one spatial site (two fermion sites): site n -> n + 2.
inline GaugeFermionConfig translation_image(const GaugeFermionConfig& c) {
  const int nf = c.size();
  GaugeFermionConfig r{std::vector<std::uint8_t>(nf), std::vector<int>(nf)};
  for (int n = 0; n < nf; ++n) {
    r.occupations[(n + 2) % nf] = c.occupations[n];
    r.fluxes[(n + 2) % nf] = c.fluxes[n];
  }
  return r;
}

/// Reflection about fermion site 0: site n -> -n. The link n -> n+1 maps onto
/// the link -n-1 -> -n traversed backwards, so its flux changes sign.
inline GaugeFermionConfig parity_image(const GaugeFermionConfig& c) {
  const int nf = c.size();
  GaugeFermionConfig r{std::vector<std::uint8_t>(nf), std::vector<int>(nf)};
  for (int n = 0; n < nf; ++n) {
    r.occupations[n] = c.occupations[(nf - n) % nf];
    r.fluxes[n] = -c.fluxes[(2 * nf - n - 1) % nf];
  }
  return r;
}

// ---------------------------------------------------------------------------
// Full physical basis with lookup.

class PhysicalBasis {
 public:
  PhysicalBasis(LatticeSpec spec, std::vector<GaugeFermionConfig> configs)
      : spec_(spec), configs_(std::move(configs)) {
    for (std::size_t i = 0; i < configs_.size(); ++i) {
      if (!index_.emplace(configs_[i], i).second) {
        throw ConsistencyError("duplicate configuration in physical basis");
      }
    }
  }

  explicit PhysicalBasis(const LatticeSpec& spec)
      : PhysicalBasis(spec, enumerate_physical_configs(spec)) {}

  const LatticeSpec& spec() const { return spec_; }
  const std::vector<GaugeFermionConfig>& configs() const { return configs_; }
  const GaugeFermionConfig& operator[](std::size_t i) const { return configs_[i]; }
  std::size_t size() const { return configs_.size(); }

  std::optional<std::size_t> find(const GaugeFermionConfig& c) const {
    auto it = index_.find(c);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

 private:
  LatticeSpec spec_;
  std::vector<GaugeFermionConfig> configs_;
  std::map<GaugeFermionConfig, std::size_t> index_;
};

// Permutation matrices of the symmetry actions on the full basis.
inline Eigen::SparseMatrix<double> symmetry_permutation(
    const PhysicalBasis& basis, GaugeFermionConfig (*action)(const GaugeFermionConfig&)) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    auto j = basis.find(action(basis[i]));
    if (!j) throw ConsistencyError("basis is not closed under the symmetry action");
    trips.emplace_back(static_cast<Eigen::Index>(*j), static_cast<Eigen::Index>(i), 1.0);
  }
  Eigen::SparseMatrix<double> p(n, n);
  p.setFromTriplets(trips.begin(), trips.end());
  return p;
}

inline Eigen::SparseMatrix<double> translation_matrix(const PhysicalBasis& basis) {
  return symmetry_permutation(basis, &translation_image);
}

inline Eigen::SparseMatrix<double> parity_matrix(const PhysicalBasis& basis) {
  return symmetry_permutation(basis, &parity_image);
}

// ---------------------------------------------------------------------------
// Zero-momentum, positive-parity sector.

struct SymmetryOrbit {
  std::size_t representative = 0;     // full-basis index of the smallest member
  std::vector<std::size_t> members;   // representative, T rep, T^2 rep, ...
  std::optional<std::size_t> parity_partner;  // orbit index, empty if self-conjugate
};

struct SectorState {
  std::vector<std::size_t> orbits;   // one orbit, or an orbit and its parity partner
  std::vector<std::size_t> members;  // distinct full-basis indices, sorted
  double amplitude = 0.0;            // 1/sqrt(|members|)
  std::size_t representative = 0;    // smallest member (canonical tiebreak)
  int sum_flux_squared = 0;
  int pair_count = 0;
};

class SymmetrySector {
 public:
  SymmetrySector(LatticeSpec spec, std::size_t full_dim, std::vector<SymmetryOrbit> orbits,
                 std::vector<SectorState> states)
      : spec_(spec), full_dim_(full_dim), orbits_(std::move(orbits)), states_(std::move(states)) {}

  const LatticeSpec& spec() const { return spec_; }
  std::size_t dimension() const { return states_.size(); }
  std::size_t full_dimension() const { return full_dim_; }
  const std::vector<SymmetryOrbit>& orbits() const { return orbits_; }
  const std::vector<SectorState>& states() const { return states_; }

  /// Isometry V (full_dim x dim) whose columns are the symmetrized states.
  Eigen::SparseMatrix<double> isometry() const {
    std::vector<Eigen::Triplet<double>> trips;
    for (std::size_t k = 0; k < states_.size(); ++k) {
      for (std::size_t i : states_[k].members) {
        trips.emplace_back(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k),
                           states_[k].amplitude);
      }
    }
    Eigen::SparseMatrix<double> v(static_cast<Eigen::Index>(full_dim_),
                                  static_cast<Eigen::Index>(states_.size()));
    v.setFromTriplets(trips.begin(), trips.end());
    return v;
  }

 private:
  LatticeSpec spec_;
  std::size_t full_dim_;
  std::vector<SymmetryOrbit> orbits_;
  std::vector<SectorState> states_;
};

/// Symmetrize the physical basis into translation- and reflection-invariant
/// states. Each translation orbit gives one k = 0 state; a k = 0 state that
/// is mapped onto a different one by parity is merged with its partner.
/// States are ordered by (sum l^2, pair count, representative config).
inline SymmetrySector project_zero_momentum_positive_parity(const PhysicalBasis& basis) {
  const auto& cfg = basis.configs();
  constexpr std::size_t kUnassigned = static_cast<std::size_t>(-1);
  std::vector<std::size_t> orbit_of(cfg.size(), kUnassigned);
  std::vector<SymmetryOrbit> orbits;

  auto lookup = [&](const GaugeFermionConfig& c) {
    auto j = basis.find(c);
    if (!j) throw ConsistencyError("configuration set is not closed under translation/parity");
    return *j;
  };

  // Configs are sorted, so the first unvisited one is the orbit minimum.
  for (std::size_t i = 0; i < cfg.size(); ++i) {
    if (orbit_of[i] != kUnassigned) continue;
    SymmetryOrbit orb;
    orb.representative = i;
    std::size_t j = i;
    do {
      orb.members.push_back(j);
      orbit_of[j] = orbits.size();
      j = lookup(translation_image(cfg[j]));
      if (orb.members.size() > cfg.size()) throw ConsistencyError("translation orbit does not close");
    } while (j != i);
    if (orbit_of[j] != orbits.size()) throw ConsistencyError("translation orbit does not close");
    orbits.push_back(std::move(orb));
  }

  for (std::size_t k = 0; k < orbits.size(); ++k) {
    const std::size_t partner = orbit_of[lookup(parity_image(cfg[orbits[k].representative]))];
    if (partner != k) orbits[k].parity_partner = partner;
  }

  std::vector<SectorState> states;
  std::vector<bool> used(orbits.size(), false);
  for (std::size_t k = 0; k < orbits.size(); ++k) {
    if (used[k]) continue;
    SectorState s;
    s.orbits.push_back(k);
    used[k] = true;
    s.members = orbits[k].members;
    if (orbits[k].parity_partner) {
      const std::size_t p = *orbits[k].parity_partner;
      if (used[p]) throw ConsistencyError("parity pairing is not an involution");
      used[p] = true;
      s.orbits.push_back(p);
      s.members.insert(s.members.end(), orbits[p].members.begin(), orbits[p].members.end());
    }
    std::sort(s.members.begin(), s.members.end());
    s.amplitude = 1.0 / std::sqrt(static_cast<double>(s.members.size()));
    s.representative = s.members.front();
    s.sum_flux_squared = cfg[s.representative].sum_flux_squared();
    s.pair_count = cfg[s.representative].pair_count();
    states.push_back(std::move(s));
  }

  std::stable_sort(states.begin(), states.end(), [&](const SectorState& a, const SectorState& b) {
    if (a.sum_flux_squared != b.sum_flux_squared) return a.sum_flux_squared < b.sum_flux_squared;
    if (a.pair_count != b.pair_count) return a.pair_count < b.pair_count;
    return cfg[a.representative] < cfg[b.representative];
  });

  return SymmetrySector(basis.spec(), cfg.size(), std::move(orbits), std::move(states));
}

inline SymmetrySector project_zero_momentum_positive_parity(
    const std::vector<GaugeFermionConfig>& configs, const LatticeSpec& spec) {
  return project_zero_momentum_positive_parity(PhysicalBasis(spec, configs));
}

// ---------------------------------------------------------------------------
// JSON export.

inline nlohmann::json to_json(const LatticeSpec& spec) {
  return {{"n_sites", spec.n_sites},
          {"flux_cutoff", spec.flux_cutoff},
          {"truncate_total_flux", spec.truncate_total_flux}};
}

inline nlohmann::json to_json(const GaugeFermionConfig& c) {
  std::vector<int> occ(c.occupations.begin(), c.occupations.end());
  return {{"occupations", occ}, {"fluxes", c.fluxes}};
}

/// Config list with orbit bookkeeping; the sector block is optional.
inline nlohmann::json basis_to_json(const PhysicalBasis& basis, const SymmetrySector* sector = nullptr) {
  nlohmann::json j;
  j["lattice"] = to_json(basis.spec());
  j["count"] = basis.size();
  auto& arr = j["configs"] = nlohmann::json::array();
  for (const auto& c : basis.configs()) arr.push_back(to_json(c));
  if (sector != nullptr) {
    auto& orbs = j["orbits"] = nlohmann::json::array();
    for (const auto& o : sector->orbits()) {
      nlohmann::json oj{{"representative", o.representative}, {"members", o.members}};
      oj["parity_partner"] = o.parity_partner ? nlohmann::json(*o.parity_partner) : nlohmann::json(nullptr);
      orbs.push_back(std::move(oj));
    }
    auto& st = j["sector_states"] = nlohmann::json::array();
    for (const auto& s : sector->states()) {
      st.push_back({{"orbits", s.orbits},
                    {"members", s.members},
                    {"amplitude", s.amplitude},
                    {"sum_flux_squared", s.sum_flux_squared},
                    {"pair_count", s.pair_count}});
    }
  }
  return j;
}

}  // namespace schwinger
