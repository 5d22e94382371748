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

// Density-matrix simulation of the one-ancilla Stinespring cycle:
//
//   rho' = Tr_a[ (I_a x U_H) U_J (|0><0| x rho) U_J^dagger (I_a x U_H)^dagger ],
//   U_J = exp(-i J sqrt(dt)),  U_H = exp(-i H dt),  J = [[0, L^dagger], [L, 0]].
//
// The ancilla is the leftmost (block) tensor factor, so a 2d x 2d operator is
// a 2 x 2 array of d x d blocks and |0><0| x rho = diag(rho, 0). Resetting the
// ancilla after each cycle is the partial trace followed by re-tensoring |0>.

#pragma once

#include <cmath>
#include <string>
#include <utility>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "schwinger/errors.hpp"
#include "schwinger/lindblad.hpp"
#include "schwinger/operators.hpp"

namespace schwinger {

struct DilationPlan {
  double dt = 0.05;
  int n_cycle = 200;

  static DilationPlan over(double t_max, int n_cycle) {
    if (n_cycle < 1) throw ParameterError("Ncycle must be >= 1");
    if (!(t_max > 0.0)) throw ParameterError("t_max must be > 0");
    return {t_max / n_cycle, n_cycle};
  }

  double total_time() const { return dt * n_cycle; }

  void validate() const {
    if (!(dt > 0.0)) throw ParameterError("cycle time step must be > 0");
    if (n_cycle < 1) throw ParameterError("Ncycle must be >= 1");
  }
};

class JOperator {
 public:
  explicit JOperator(const CMatrix& l) : d_(l.rows()) {
    if (l.rows() != l.cols()) throw DimensionError("build_J: L must be square");
    j_ = CMatrix::Zero(2 * d_, 2 * d_);
    j_.topRightCorner(d_, d_) = l.adjoint();
    j_.bottomLeftCorner(d_, d_) = l;
  }

  Eigen::Index system_dim() const { return d_; }
  const CMatrix& matrix() const { return j_; }

 private:
  Eigen::Index d_;
  CMatrix j_;
};

inline JOperator build_J(const CMatrix& l) { return JOperator(l); }

/// One cycle as a precomputed channel. Writing U_J in blocks [[A, B], [C, D]],
/// the cycle acts as rho -> K0 rho K0^dagger + K1 rho K1^dagger with
/// K0 = U_H A and K1 = U_H C; unitarity of U_J gives K0^dag K0 + K1^dag K1 = I.
class DilationChannel {
 public:
  DilationChannel(const CMatrix& h, const CMatrix& l, double dt) : dt_(dt) {
    if (!(dt > 0.0)) throw ParameterError("dilation cycle: dt must be > 0");
    if (h.rows() != l.rows() || h.rows() != h.cols()) throw DimensionError("dilation cycle: H and L differ in size");
    const Eigen::Index d = h.rows();
    u_j_ = unitary_propagator(build_J(l).matrix(), std::sqrt(dt));
    u_h_ = unitary_propagator(h, dt);
    k0_ = u_h_ * u_j_.topLeftCorner(d, d);
    k1_ = u_h_ * u_j_.bottomLeftCorner(d, d);
  }

  double dt() const { return dt_; }
  const CMatrix& u_j() const { return u_j_; }
  const CMatrix& u_h() const { return u_h_; }
  const CMatrix& kraus0() const { return k0_; }
  const CMatrix& kraus1() const { return k1_; }

  CMatrix apply(const CMatrix& rho) const {
    CMatrix out = k0_ * rho * k0_.adjoint();
    out.noalias() += k1_ * rho * k1_.adjoint();
    return out;
  }

  DensityMatrix apply(const DensityMatrix& rho) const { return DensityMatrix(apply(rho.matrix())); }

  nlohmann::json unitaries_json(const LatticeSpec& lattice) const {
    return {{"dt", dt_},
            {"U_J", matrix_to_json(u_j_, "ancilla+projected-sector", lattice)},
            {"U_H", matrix_to_json(u_h_, "projected-sector", lattice)}};
  }

 private:
  double dt_;
  CMatrix u_j_;
  CMatrix u_h_;
  CMatrix k0_;
  CMatrix k1_;
};

inline DensityMatrix dilation_cycle(const DensityMatrix& rho, const CMatrix& h, const CMatrix& l, double dt) {
  return DilationChannel(h, l, dt).apply(rho);
}

/// Ncycle cycles with dt = t_max / Ncycle; samples at t = 0 and after every cycle.
inline EvolutionRecord dilation_evolve(const DensityMatrix& rho0, const CMatrix& h, const CMatrix& l,
                                       const ObservableSet& obs, double t_max, int n_cycle,
                                       const std::function<void(double, const CMatrix&)>& on_sample = {}) {
  const DilationPlan plan = DilationPlan::over(t_max, n_cycle);
  const DilationChannel channel(h, l, plan.dt);
  CMatrix rho = rho0.matrix();
  EvolutionRecord rec;
  rec.samples.push_back(measure(0.0, rho, obs));
  if (on_sample) on_sample(0.0, rho);
  for (int c = 1; c <= plan.n_cycle; ++c) {
    rho = channel.apply(rho);
    const double t = (c == plan.n_cycle) ? t_max : c * plan.dt;
    rec.samples.push_back(measure(t, rho, obs));
    if (on_sample) on_sample(t, rho);
  }
  return rec;
}

}  // namespace schwinger
