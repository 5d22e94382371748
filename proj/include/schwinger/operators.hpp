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

// Schwinger-model Hamiltonian and diagonal observables on the full physical
// basis (sparse) and on the zero-momentum positive-parity sector (dense).

#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <nlohmann/json.hpp>

#include "schwinger/errors.hpp"
#include "schwinger/lattice_basis.hpp"

namespace schwinger {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using SparseCMatrix = Eigen::SparseMatrix<Complex>;

struct ModelParams {
  double a = 1.0;  // lattice spacing
  double m = 0.1;  // fermion mass, units 1/a
  double e = 1.0;  // gauge coupling, units 1/a

  void validate() const {
    if (!(a > 0.0)) throw ParameterError("lattice spacing a must be > 0");
  }
};

// How the hop across the periodic boundary (fermion site Nf-1 <-> 0) is signed.
enum class BoundaryPhase {
  kPeriodic,      // +1, same as every bulk hop; commutes with translation
  kJordanWigner,  // literal Jordan-Wigner string (-1)^N prod_{0<m<Nf-1} sigma_z(m)
};

enum class BasisKind { kFullPhysical, kProjectedSector };

struct BasisTag {
  BasisKind kind = BasisKind::kProjectedSector;
  LatticeSpec lattice;

  bool operator==(const BasisTag&) const = default;

  std::string name() const {
    return kind == BasisKind::kFullPhysical ? "full-physical" : "projected-sector";
  }
};

inline constexpr double kHermiticityTolerance = 1e-12;

inline double hermiticity_defect(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

/// Dense Hermitian matrix tagged with the basis it acts on.
class HermitianOperator {
 public:
  HermitianOperator() = default;
  HermitianOperator(CMatrix entries, BasisTag tag) : entries_(std::move(entries)), tag_(std::move(tag)) {
    if (entries_.rows() != entries_.cols()) throw DimensionError("operator must be square");
    if (hermiticity_defect(entries_) > kHermiticityTolerance) {
      throw ConsistencyError("operator is not Hermitian");
    }
  }

  Eigen::Index dim() const { return entries_.rows(); }
  const CMatrix& matrix() const { return entries_; }
  const BasisTag& basis() const { return tag_; }

 private:
  CMatrix entries_;
  BasisTag tag_;
};

/// Sparse operator on the full physical basis (used where dense would not fit).
struct SparseOperator {
  SparseCMatrix matrix;
  BasisTag basis;
};

// ---------------------------------------------------------------------------
// Hamiltonian
//
//   H = 1/(2a) sum_n [ s+(n) L-_n s-(n+1) + h.c. ]
//       + sum_n [ a e^2/2 l_n^2 + m (-1)^n (s_z(n)+1)/2 ]
//
// The hop s+(n) s-(n+1) moves a spin-up from n+1 to n; with the charge
// convention of lattice_basis.hpp Gauss's law then requires l_n -> l_n - 1,
// which is exactly the L-_n in the kinetic term.

namespace detail {

inline double diagonal_energy(const GaugeFermionConfig& c, const ModelParams& p) {
  return 0.5 * p.a * p.e * p.e * c.sum_flux_squared() + p.m * c.staggered_mass();
}

inline double boundary_sign(const GaugeFermionConfig& c, BoundaryPhase phase, int n_sites) {
  if (phase == BoundaryPhase::kPeriodic) return 1.0;
  double s = (n_sites % 2 == 0) ? 1.0 : -1.0;
  for (int m = 1; m < c.size() - 1; ++m) s *= c.spin_up(m) ? 1.0 : -1.0;
  return s;
}

// Calls emit(row, col, value) for every nonzero of H; off-diagonal entries
// are emitted in both triangles.
template <typename Emit>
void for_each_hamiltonian_term(const PhysicalBasis& basis, const ModelParams& p, BoundaryPhase phase,
                               Emit&& emit) {
  const int nf = basis.spec().fermion_sites();
  const int cut = basis.spec().flux_cutoff;
  const double hop = 1.0 / (2.0 * p.a);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto& c = basis[i];
    emit(i, i, diagonal_energy(c, p));
    for (int n = 0; n < nf; ++n) {
      const int n1 = (n + 1) % nf;
      if (c.spin_up(n) != 0 || c.spin_up(n1) != 1) continue;
      GaugeFermionConfig t = c;
      t.occupations[n] ^= 1;
      t.occupations[n1] ^= 1;
      t.fluxes[n] -= 1;
      if (std::abs(t.fluxes[n]) > cut) continue;
      auto j = basis.find(t);
      if (!j) continue;  // removed by the total-flux truncation
      const double v = (n == nf - 1) ? hop * boundary_sign(c, phase, basis.spec().n_sites) : hop;
      emit(*j, i, v);
      emit(i, *j, v);
    }
  }
}

}  // namespace detail

inline SparseOperator build_hamiltonian_sparse(const PhysicalBasis& basis, const ModelParams& params,
                                               BoundaryPhase phase = BoundaryPhase::kPeriodic) {
  params.validate();
  std::vector<Eigen::Triplet<Complex>> trips;
  detail::for_each_hamiltonian_term(basis, params, phase, [&](std::size_t r, std::size_t c, double v) {
    trips.emplace_back(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c), Complex(v, 0.0));
  });
  const auto n = static_cast<Eigen::Index>(basis.size());
  SparseCMatrix h(n, n);
  h.setFromTriplets(trips.begin(), trips.end());
  return {std::move(h), {BasisKind::kFullPhysical, basis.spec()}};
}

inline HermitianOperator build_hamiltonian_full(const PhysicalBasis& basis, const ModelParams& params,
                                                BoundaryPhase phase = BoundaryPhase::kPeriodic) {
  params.validate();
  const auto n = static_cast<Eigen::Index>(basis.size());
  CMatrix h = CMatrix::Zero(n, n);
  detail::for_each_hamiltonian_term(basis, params, phase, [&](std::size_t r, std::size_t c, double v) {
    h(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) += v;
  });
  return HermitianOperator(std::move(h), {BasisKind::kFullPhysical, basis.spec()});
}

// ---------------------------------------------------------------------------
// Projection onto the sector: A_proj = V^dagger A V.

inline HermitianOperator project_operator(const SparseOperator& full, const SymmetrySector& sector) {
  if (full.basis.kind != BasisKind::kFullPhysical || !(full.basis.lattice == sector.spec()) ||
      static_cast<std::size_t>(full.matrix.rows()) != sector.full_dimension()) {
    throw DimensionError("project_operator: operator and sector live on different bases");
  }
  const SparseCMatrix v = sector.isometry().cast<Complex>();
  const SparseCMatrix av = full.matrix * v;
  CMatrix proj = CMatrix(SparseCMatrix(v.adjoint()) * av);
  proj = 0.5 * (proj + proj.adjoint()).eval();
  return HermitianOperator(std::move(proj), {BasisKind::kProjectedSector, sector.spec()});
}

inline HermitianOperator project_operator(const HermitianOperator& full, const SymmetrySector& sector) {
  if (full.basis().kind != BasisKind::kFullPhysical || !(full.basis().lattice == sector.spec()) ||
      static_cast<std::size_t>(full.dim()) != sector.full_dimension()) {
    throw DimensionError("project_operator: operator and sector live on different bases");
  }
  const SparseCMatrix v = sector.isometry().cast<Complex>();
  CMatrix proj = CMatrix(v.adjoint()) * (full.matrix() * v);
  proj = 0.5 * (proj + proj.adjoint()).eval();
  return HermitianOperator(std::move(proj), {BasisKind::kProjectedSector, sector.spec()});
}

inline HermitianOperator build_hamiltonian_sector(const PhysicalBasis& basis, const SymmetrySector& sector,
                                                  const ModelParams& params) {
  return project_operator(build_hamiltonian_sparse(basis, params), sector);
}

// ---------------------------------------------------------------------------
// Diagonal observables. Each is a function of a single configuration and is
// invariant under translation and parity, so in the sector it is diagonal with
// the value taken on any member of the state.

using ConfigFunction = std::function<double(const GaugeFermionConfig&)>;

/// A_{E^2} = e^2/(2N) sum_n l_n^2
inline ConfigFunction electric_energy_density(const LatticeSpec& spec, const ModelParams& params) {
  const double scale = params.e * params.e / (2.0 * spec.n_sites);
  return [scale](const GaugeFermionConfig& c) { return scale * c.sum_flux_squared(); };
}

/// A_{N_e+e-} = sum_{n even} s+(n) s-(n)
inline ConfigFunction pair_number(const LatticeSpec&) {
  return [](const GaugeFermionConfig& c) { return static_cast<double>(c.pair_count()); };
}

/// O_S = 1/(a Nf) sum_n (-1)^n (s_z(n) + 1)/2
inline ConfigFunction scalar_density_number_form(const LatticeSpec& spec, const ModelParams& params) {
  const double scale = 1.0 / (params.a * spec.fermion_sites());
  return [scale](const GaugeFermionConfig& c) { return scale * c.staggered_mass(); };
}

/// O_S = 1/(2 a Nf) sum_n (-1)^n s_z(n); equal to the number form because
/// sum_n (-1)^n vanishes on an even number of sites.
inline ConfigFunction scalar_density_sigma_z_form(const LatticeSpec& spec, const ModelParams& params) {
  const double scale = 1.0 / (2.0 * params.a * spec.fermion_sites());
  return [scale](const GaugeFermionConfig& c) {
    int s = 0;
    for (int n = 0; n < c.size(); ++n) s += (n % 2 == 0 ? 1 : -1) * (2 * c.spin_up(n) - 1);
    return scale * s;
  };
}

inline SparseOperator diagonal_operator_full(const PhysicalBasis& basis, const ConfigFunction& f) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  SparseCMatrix d(n, n);
  d.reserve(Eigen::VectorXi::Constant(n, 1));
  for (Eigen::Index i = 0; i < n; ++i) d.insert(i, i) = Complex(f(basis[static_cast<std::size_t>(i)]), 0.0);
  d.makeCompressed();
  return {std::move(d), {BasisKind::kFullPhysical, basis.spec()}};
}

inline HermitianOperator diagonal_operator_sector(const PhysicalBasis& basis, const SymmetrySector& sector,
                                                  const ConfigFunction& f) {
  const auto n = static_cast<Eigen::Index>(sector.dimension());
  CMatrix d = CMatrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) d(k, k) = f(basis[sector.states()[static_cast<std::size_t>(k)].representative]);
  return HermitianOperator(std::move(d), {BasisKind::kProjectedSector, sector.spec()});
}

inline HermitianOperator build_observable_e2(const PhysicalBasis& basis, const SymmetrySector& sector,
                                             const ModelParams& params) {
  return diagonal_operator_sector(basis, sector, electric_energy_density(basis.spec(), params));
}

inline HermitianOperator build_observable_pairs(const PhysicalBasis& basis, const SymmetrySector& sector) {
  return diagonal_operator_sector(basis, sector, pair_number(basis.spec()));
}

inline HermitianOperator build_O_S(const PhysicalBasis& basis, const SymmetrySector& sector,
                                   const ModelParams& params) {
  return diagonal_operator_sector(basis, sector, scalar_density_number_form(basis.spec(), params));
}

/// Everything a dynamics run needs on one sector.
struct SectorOperators {
  LatticeSpec lattice;
  ModelParams params;
  HermitianOperator hamiltonian;
  HermitianOperator e2;
  HermitianOperator pairs;
  HermitianOperator o_s;
  std::size_t full_dimension = 0;
};

inline SectorOperators build_sector_operators(const LatticeSpec& lattice, const ModelParams& params) {
  lattice.validate();
  params.validate();
  const PhysicalBasis basis(lattice);
  const SymmetrySector sector = project_zero_momentum_positive_parity(basis);
  return {lattice,
          params,
          build_hamiltonian_sector(basis, sector, params),
          build_observable_e2(basis, sector, params),
          build_observable_pairs(basis, sector),
          build_O_S(basis, sector, params),
          basis.size()};
}

// ---------------------------------------------------------------------------
// JSON: {dim, basis_tag, lattice, entries: [[re, im], ...] row-major}

inline nlohmann::json matrix_to_json(const CMatrix& m, const std::string& tag, const LatticeSpec& lattice) {
  nlohmann::json j;
  j["dim"] = m.rows();
  j["basis_tag"] = tag;
  j["lattice"] = to_json(lattice);
  auto& entries = j["entries"] = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) entries.push_back({m(r, c).real(), m(r, c).imag()});
  }
  return j;
}

inline nlohmann::json to_json(const HermitianOperator& op) {
  return matrix_to_json(op.matrix(), op.basis().name(), op.basis().lattice);
}

inline CMatrix matrix_from_json(const nlohmann::json& j) {
  const auto dim = j.at("dim").get<Eigen::Index>();
  const auto& entries = j.at("entries");
  if (dim < 0 || entries.size() != static_cast<std::size_t>(dim * dim)) {
    throw DimensionError("operator JSON: entries do not match dim");
  }
  CMatrix m(dim, dim);
  std::size_t k = 0;
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c, ++k) {
      m(r, c) = Complex(entries[k].at(0).get<double>(), entries[k].at(1).get<double>());
    }
  }
  return m;
}

inline HermitianOperator operator_from_json(const nlohmann::json& j) {
  BasisTag tag;
  const auto name = j.at("basis_tag").get<std::string>();
  if (name == "full-physical") {
    tag.kind = BasisKind::kFullPhysical;
  } else if (name == "projected-sector") {
    tag.kind = BasisKind::kProjectedSector;
  } else {
    throw ParameterError("operator JSON: unknown basis_tag '" + name + "'");
  }
  if (j.contains("lattice")) {
    const auto& l = j.at("lattice");
    tag.lattice.n_sites = l.at("n_sites").get<int>();
    tag.lattice.flux_cutoff = l.value("flux_cutoff", 1);
    tag.lattice.truncate_total_flux = l.value("truncate_total_flux", false);
  }
  return HermitianOperator(matrix_from_json(j), tag);
}

}  // namespace schwinger
