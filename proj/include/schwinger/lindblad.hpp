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

// Quantum-Brownian-motion Lindblad dynamics of the Schwinger model:
//
//   d rho/dt = -i [H, rho] + L rho L^dagger - 1/2 {L^dagger L, rho},
//   L = sqrt(a Nf D) (O_S - [H, O_S] / (4T)).

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdio>
#include <functional>
#include <limits>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <nlohmann/json.hpp>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "schwinger/errors.hpp"
#include "schwinger/operators.hpp"

namespace schwinger {

struct BathParams {
  double temperature = 10.0;  // T, units 1/a
  double coupling = 3.2;      // D(k0 = 0, k = 0), dimensionless

  static BathParams from_beta(double beta, double coupling) {
    if (!(beta > 0.0)) throw ParameterError("beta must be > 0");
    return {1.0 / beta, coupling};
  }

  double beta() const { return 1.0 / temperature; }

  void validate() const {
    if (!(temperature > 0.0)) throw ParameterError("bath temperature must be > 0");
    if (!(coupling >= 0.0)) throw ParameterError("bath coupling D must be >= 0");
  }
};

// ---------------------------------------------------------------------------
// Density matrices.

struct DensityTolerances {
  double trace = 1e-9;
  double hermiticity = 1e-10;
  double positivity = -1e-7;  // smallest allowed eigenvalue
};

class DensityMatrix {
 public:
  DensityMatrix() = default;
  explicit DensityMatrix(CMatrix rho) : rho_(std::move(rho)) {
    if (rho_.rows() != rho_.cols()) throw DimensionError("density matrix must be square");
  }

  static DensityMatrix pure(Eigen::Index dim, Eigen::Index index) {
    if (index < 0 || index >= dim) throw DimensionError("pure state index out of range");
    CMatrix r = CMatrix::Zero(dim, dim);
    r(index, index) = 1.0;
    return DensityMatrix(std::move(r));
  }

  static DensityMatrix pure(const Eigen::VectorXcd& psi) {
    const Eigen::VectorXcd n = psi / psi.norm();
    return DensityMatrix(n * n.adjoint());
  }

  static DensityMatrix maximally_mixed(Eigen::Index dim) {
    return DensityMatrix(CMatrix::Identity(dim, dim) / static_cast<double>(dim));
  }

  Eigen::Index dim() const { return rho_.rows(); }
  const CMatrix& matrix() const { return rho_; }
  CMatrix& matrix() { return rho_; }

  Complex trace() const { return rho_.trace(); }
  double trace_deviation() const { return std::abs(rho_.trace() - Complex(1.0, 0.0)); }
  double hermiticity() const { return hermiticity_defect(rho_); }
  double purity() const { return (rho_ * rho_).trace().real(); }

  double min_eigenvalue() const {
    const CMatrix h = 0.5 * (rho_ + rho_.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  }

  void validate(const DensityTolerances& tol = {}) const {
    if (trace_deviation() > tol.trace) throw NumericalCheckError("density matrix trace deviates from 1");
    if (hermiticity() > tol.hermiticity) throw NumericalCheckError("density matrix is not Hermitian");
    if (min_eigenvalue() < tol.positivity) throw NumericalCheckError("density matrix is not positive");
  }

 private:
  CMatrix rho_;
};

/// Re Tr(rho A). Throws if the imaginary part exceeds 1e-10.
inline double expectation(const CMatrix& rho, const CMatrix& a) {
  if (rho.rows() != a.rows() || rho.cols() != a.cols()) throw DimensionError("expectation: dimension mismatch");
  const Complex v = rho.cwiseProduct(a.transpose()).sum();
  if (std::abs(v.imag()) > 1e-10) throw NumericalCheckError("expectation value has an imaginary part");
  return v.real();
}

inline double expectation(const DensityMatrix& rho, const HermitianOperator& a) {
  return expectation(rho.matrix(), a.matrix());
}

// ---------------------------------------------------------------------------
// Lindblad operator and generator.

/// L = sqrt(a Nf D) (O_S - (H O_S - O_S H)/(4T)). Not Hermitian in general.
inline CMatrix build_lindblad_operator(const HermitianOperator& h, const HermitianOperator& o_s,
                                       const BathParams& bath, const LatticeSpec& lattice,
                                       const ModelParams& params) {
  bath.validate();
  params.validate();
  if (h.dim() != o_s.dim()) throw DimensionError("H and O_S have different dimensions");
  const CMatrix& hm = h.matrix();
  const CMatrix& om = o_s.matrix();
  const double scale = std::sqrt(params.a * lattice.fermion_sites() * bath.coupling);
  return scale * (om - (hm * om - om * hm) / (4.0 * bath.temperature));
}

/// Right-hand side of the Lindblad equation for an arbitrary square matrix.
inline CMatrix lindblad_rhs(const CMatrix& rho, const CMatrix& h, const CMatrix& l) {
  if (rho.rows() != h.rows() || h.rows() != l.rows() || rho.cols() != rho.rows()) {
    throw DimensionError("lindblad_rhs: dimension mismatch");
  }
  const Complex i(0.0, 1.0);
  const CMatrix ldl = l.adjoint() * l;
  return -i * (h * rho - rho * h) + l * rho * l.adjoint() - 0.5 * (ldl * rho + rho * ldl);
}

/// Sparse evaluator of the Lindblad right-hand side for Hermitian states.
///
/// With G = -i H rho - 1/2 L^dagger (L rho) + 1/2 L (L rho)^dagger the
/// generator is G + G^dagger whenever rho = rho^dagger. The sum is Hermitian
/// bit-for-bit, so an integrator that only forms linear combinations of such
/// outputs keeps the state exactly Hermitian.
class LindbladGenerator {
 public:
  using RowSparse = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;

  LindbladGenerator(const CMatrix& h, const CMatrix& l) : h_dense_(h), l_dense_(l) {
    if (h.rows() != h.cols() || l.rows() != l.cols() || h.rows() != l.rows()) {
      throw DimensionError("LindbladGenerator: H and L must be square with equal size");
    }
    const double ref = std::max({1.0, h.cwiseAbs().maxCoeff(), l.size() ? l.cwiseAbs().maxCoeff() : 0.0});
    h_ = h.sparseView(ref, 1e-15);
    l_ = l.sparseView(ref, 1e-15);
    ldag_ = RowSparse(l_.adjoint());
    g_.resize(h.rows(), h.cols());
    lr_.resize(h.rows(), h.cols());
  }

  Eigen::Index dim() const { return h_dense_.rows(); }
  const CMatrix& hamiltonian() const { return h_dense_; }
  const CMatrix& jump() const { return l_dense_; }

  void apply(const CMatrix& rho, CMatrix& out) {
    const Complex i(0.0, 1.0);
    lr_.noalias() = l_ * rho;
    g_.noalias() = h_ * rho;
    g_ *= -i;
    g_.noalias() -= 0.5 * (ldag_ * lr_);
    g_.noalias() += 0.5 * (l_ * lr_.adjoint());
    out = g_ + g_.adjoint();
  }

  CMatrix operator()(const CMatrix& rho) {
    CMatrix out(rho.rows(), rho.cols());
    apply(rho, out);
    return out;
  }

 private:
  CMatrix h_dense_;
  CMatrix l_dense_;
  RowSparse h_;
  RowSparse l_;
  RowSparse ldag_;
  CMatrix g_;
  CMatrix lr_;
};

// ---------------------------------------------------------------------------
// Evolution records.

struct EvolutionSample {
  double t = 0.0;
  double n_pairs = 0.0;
  double e2 = 0.0;
  double trace = 1.0;
  double purity = 1.0;
  double min_eig = 0.0;
  double hermiticity = 0.0;  // not part of the CSV schema
};

struct EvolutionRecord {
  std::vector<EvolutionSample> samples;

  std::size_t size() const { return samples.size(); }
  const EvolutionSample& back() const { return samples.back(); }
};

inline const char* kEvolutionCsvHeader = "t,n_pairs,e2,trace,purity,min_eig";

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_csv(std::ostream& os, const EvolutionRecord& rec) {
  os << kEvolutionCsvHeader << '\n';
  for (const auto& s : rec.samples) {
    os << format_double(s.t) << ',' << format_double(s.n_pairs) << ',' << format_double(s.e2) << ','
       << format_double(s.trace) << ',' << format_double(s.purity) << ',' << format_double(s.min_eig) << '\n';
  }
}

inline nlohmann::json to_json(const EvolutionRecord& rec) {
  nlohmann::json j;
  auto col = [&](auto member) {
    std::vector<double> v;
    v.reserve(rec.samples.size());
    for (const auto& s : rec.samples) v.push_back(s.*member);
    return v;
  };
  j["t"] = col(&EvolutionSample::t);
  j["n_pairs"] = col(&EvolutionSample::n_pairs);
  j["e2"] = col(&EvolutionSample::e2);
  j["trace"] = col(&EvolutionSample::trace);
  j["purity"] = col(&EvolutionSample::purity);
  j["min_eig"] = col(&EvolutionSample::min_eig);
  return j;
}

/// Observables recorded along a trajectory.
struct ObservableSet {
  CMatrix pairs;
  CMatrix e2;
};

inline ObservableSet observables_of(const SectorOperators& ops) {
  return {ops.pairs.matrix(), ops.e2.matrix()};
}

inline EvolutionSample measure(double t, const CMatrix& rho, const ObservableSet& obs, bool with_min_eig = true) {
  EvolutionSample s;
  s.t = t;
  const CMatrix herm = 0.5 * (rho + rho.adjoint());
  s.n_pairs = expectation(herm, obs.pairs);
  s.e2 = expectation(herm, obs.e2);
  s.trace = rho.trace().real();
  s.purity = rho.cwiseAbs2().sum();
  s.hermiticity = hermiticity_defect(rho);
  if (with_min_eig) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(herm, Eigen::EigenvaluesOnly);
    s.min_eig = es.eigenvalues().minCoeff();
  } else {
    s.min_eig = std::numeric_limits<double>::quiet_NaN();
  }
  return s;
}

// ---------------------------------------------------------------------------
// Fixed-step RK4.

struct Rk4Options {
  double t_max = 10.0;
  double dt = 0.005;
  int stride = 1;  // record every `stride` steps (the final step is always recorded)
  double trace_abort = 1e-6;
};

namespace detail {

inline int step_count(double t_max, double dt) {
  if (!(dt > 0.0)) throw ParameterError("time step must be > 0");
  if (!(t_max >= 0.0)) throw ParameterError("t_max must be >= 0");
  return static_cast<int>(std::ceil(t_max / dt - 1e-9));
}

}  // namespace detail

/// Classic fixed-step RK4 on the matrix ODE. `on_sample` (optional) sees
/// every recorded state.
inline EvolutionRecord rk4_evolve(const DensityMatrix& rho0, LindbladGenerator& gen, const ObservableSet& obs,
                                  const Rk4Options& opt,
                                  const std::function<void(double, const CMatrix&)>& on_sample = {}) {
  if (rho0.dim() != gen.dim()) throw DimensionError("rk4_evolve: state and generator differ in size");
  if (opt.stride < 1) throw ParameterError("stride must be >= 1");
  const int steps = detail::step_count(opt.t_max, opt.dt);
  const Eigen::Index d = gen.dim();

  CMatrix rho = rho0.matrix();
  CMatrix k1(d, d), k2(d, d), k3(d, d), k4(d, d), tmp(d, d);
  EvolutionRecord rec;
  rec.samples.push_back(measure(0.0, rho, obs));
  if (on_sample) on_sample(0.0, rho);

  for (int n = 1; n <= steps; ++n) {
    const double t_prev = (n - 1) * opt.dt;
    const double t = (n == steps) ? opt.t_max : n * opt.dt;
    const double h = t - t_prev;
    gen.apply(rho, k1);
    tmp = rho + (0.5 * h) * k1;
    gen.apply(tmp, k2);
    tmp = rho + (0.5 * h) * k2;
    gen.apply(tmp, k3);
    tmp = rho + h * k3;
    gen.apply(tmp, k4);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    const double drift = std::abs(rho.trace() - Complex(1.0, 0.0));
    if (drift > opt.trace_abort) {
      throw NumericalCheckError("rk4_evolve: trace drifted by " + format_double(drift) + " at t = " +
                                format_double(t) + "; reduce dt");
    }
    if (n % opt.stride == 0 || n == steps) {
      rec.samples.push_back(measure(t, rho, obs));
      if (on_sample) on_sample(t, rho);
    }
  }
  return rec;
}

inline EvolutionRecord rk4_evolve(const DensityMatrix& rho0, const CMatrix& h, const CMatrix& l,
                                  const ObservableSet& obs, const Rk4Options& opt) {
  LindbladGenerator gen(h, l);
  return rk4_evolve(rho0, gen, obs, opt);
}

// ---------------------------------------------------------------------------
// Vectorized Liouvillian (column stacking: vec(A X B) = (B^T kron A) vec(X)).
//
//   Lsup = -i (I kron H - H^T kron I) + conj(L) kron L
//          - 1/2 (I kron L^dagger L + (L^dagger L)^T kron I)

/// Largest d for which the d^2 x d^2 dense superoperator is formed.
inline constexpr Eigen::Index kMaxLiouvillianStateDim = 50;

inline void check_liouvillian_size(Eigen::Index d) {
  if (d > kMaxLiouvillianStateDim) {
    throw DimensionError("Liouvillian of a " + std::to_string(d) +
                         "-dimensional state space is too large for dense propagation (limit " +
                         std::to_string(kMaxLiouvillianStateDim) + ")");
  }
}

inline Eigen::VectorXcd vec(const CMatrix& m) {
  return Eigen::Map<const Eigen::VectorXcd>(m.data(), m.size());
}

inline CMatrix unvec(const Eigen::VectorXcd& v, Eigen::Index d) {
  if (v.size() != d * d) throw DimensionError("unvec: size mismatch");
  return Eigen::Map<const CMatrix>(v.data(), d, d);
}

inline CMatrix vectorize_liouvillian(const CMatrix& h, const CMatrix& l) {
  const Eigen::Index d = h.rows();
  if (h.cols() != d || l.rows() != d || l.cols() != d) throw DimensionError("vectorize_liouvillian: dimension mismatch");
  check_liouvillian_size(d);
  const Complex i(0.0, 1.0);
  const CMatrix id = CMatrix::Identity(d, d);
  const CMatrix ldl = l.adjoint() * l;
  CMatrix sup = -i * (Eigen::kroneckerProduct(id, h).eval() - Eigen::kroneckerProduct(h.transpose(), id).eval());
  sup += Eigen::kroneckerProduct(l.conjugate(), l);
  sup -= 0.5 * (Eigen::kroneckerProduct(id, ldl).eval() + Eigen::kroneckerProduct(ldl.transpose(), id).eval());
  return sup;
}

/// rho(t) = unvec(exp(Lsup t) vec(rho0)), scaling-and-squaring Pade exponential.
inline DensityMatrix exact_propagate(const DensityMatrix& rho0, const CMatrix& h, const CMatrix& l, double t) {
  if (t == 0.0) return rho0;
  const CMatrix sup = vectorize_liouvillian(h, l);
  const CMatrix prop = (sup * t).exp();
  return DensityMatrix(unvec(prop * vec(rho0.matrix()), rho0.dim()));
}

/// Samples the exact solution on the grid t_k = k * dt by repeated application
/// of the one-step propagator.
inline EvolutionRecord exact_evolve(const DensityMatrix& rho0, const CMatrix& h, const CMatrix& l,
                                    const ObservableSet& obs, double t_max, double dt, int stride = 1) {
  if (stride < 1) throw ParameterError("stride must be >= 1");
  const int steps = detail::step_count(t_max, dt);
  const Eigen::Index d = rho0.dim();
  const CMatrix sup = vectorize_liouvillian(h, l);
  const CMatrix step = (sup * dt).exp();
  Eigen::VectorXcd v = vec(rho0.matrix());
  EvolutionRecord rec;
  rec.samples.push_back(measure(0.0, rho0.matrix(), obs));
  for (int n = 1; n <= steps; ++n) {
    const double t = (n == steps) ? t_max : n * dt;
    if (n == steps && std::abs(t - n * dt) > 1e-12) {
      const CMatrix last = (sup * (t - (n - 1) * dt)).exp();
      v = last * v;
    } else {
      v = step * v;
    }
    if (n % stride == 0 || n == steps) rec.samples.push_back(measure(t, unvec(v, d), obs));
  }
  return rec;
}

/// Stationary state: eigenvector of the Liouvillian with eigenvalue closest to
/// zero, normalized to unit trace and Hermitized.
inline DensityMatrix steady_state(const CMatrix& h, const CMatrix& l) {
  const Eigen::Index d = h.rows();
  const CMatrix sup = vectorize_liouvillian(h, l);
  Eigen::ComplexEigenSolver<CMatrix> es(sup);
  Eigen::Index best = 0;
  es.eigenvalues().cwiseAbs().minCoeff(&best);
  CMatrix rho = unvec(es.eigenvectors().col(best), d);
  rho /= rho.trace();
  return DensityMatrix(0.5 * (rho + rho.adjoint()));
}

inline Eigen::VectorXcd liouvillian_spectrum(const CMatrix& h, const CMatrix& l) {
  Eigen::ComplexEigenSolver<CMatrix> es(vectorize_liouvillian(h, l), false);
  return es.eigenvalues();
}

// ---------------------------------------------------------------------------
// Thermal reference.

/// exp(-beta H)/Tr exp(-beta H), evaluated with the ground energy shifted to
/// zero so large beta does not overflow.
inline DensityMatrix gibbs_state(const CMatrix& h, double beta) {
  if (!(beta >= 0.0)) throw ParameterError("gibbs_state: beta must be >= 0");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (h + h.adjoint()));
  const Eigen::VectorXd& w = es.eigenvalues();
  Eigen::VectorXd p = (-beta * (w.array() - w.minCoeff())).exp().matrix();
  p /= p.sum();
  const CMatrix& v = es.eigenvectors();
  return DensityMatrix(v * p.cast<Complex>().asDiagonal() * v.adjoint());
}

/// exp(-i H t) for Hermitian H via eigendecomposition.
inline CMatrix unitary_propagator(const CMatrix& h, double t) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (h + h.adjoint()));
  const Eigen::VectorXcd phases =
      (es.eigenvalues().cast<Complex>() * Complex(0.0, -t)).array().exp().matrix();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace schwinger
