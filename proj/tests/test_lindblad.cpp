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

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "schwinger/lindblad.hpp"

namespace schwinger {
namespace {

using test::random_density;
using test::random_hermitian;
using test::random_matrix;

const ModelParams kParams{1.0, 0.1, 1.0};
const BathParams kBath{10.0, 3.2};

struct Model {
  SectorOperators ops;
  CMatrix h;
  CMatrix l;
  ObservableSet obs;
};

Model make_setup(int n, bool trunc, const BathParams& bath = kBath) {
  const LatticeSpec spec{n, 1, trunc};
  auto ops = build_sector_operators(spec, kParams);
  CMatrix l = build_lindblad_operator(ops.hamiltonian, ops.o_s, bath, spec, kParams);
  CMatrix h = ops.hamiltonian.matrix();
  ObservableSet obs = observables_of(ops);
  return {std::move(ops), std::move(h), std::move(l), std::move(obs)};
}

double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

TEST(LindbladOperator, MatchesElementwiseEvaluation) {
  const Model s = make_setup(2, false);
  const CMatrix& h = s.h;
  const CMatrix& o = s.ops.o_s.matrix();
  const Eigen::Index d = h.rows();
  const double scale = std::sqrt(1.0 * 4 * 3.2);
  CMatrix ref(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      Complex comm = 0.0;
      for (Eigen::Index k = 0; k < d; ++k) comm += h(i, k) * o(k, j) - o(i, k) * h(k, j);
      ref(i, j) = scale * (o(i, j) - comm / 40.0);
    }
  }
  EXPECT_LE(max_abs(s.l - ref), 1e-14);
  EXPECT_GT(max_abs(s.l - s.l.adjoint()), 0.05);  // not Hermitian
}

TEST(LindbladOperator, ZeroCouplingAndHighTemperatureLimits) {
  const Model zero = make_setup(2, false, {10.0, 0.0});
  EXPECT_EQ(max_abs(zero.l), 0.0);

  const Model hot = make_setup(2, false, {1e12, 3.2});
  const CMatrix bare = std::sqrt(4 * 3.2) * hot.ops.o_s.matrix();
  EXPECT_LE(max_abs(hot.l - bare), 1e-10 * max_abs(bare));
}

TEST(LindbladOperator, RejectsBadBath) {
  const Model s = make_setup(2, false);
  const LatticeSpec spec{2};
  EXPECT_THROW(build_lindblad_operator(s.ops.hamiltonian, s.ops.o_s, {0.0, 1.0}, spec, kParams), ParameterError);
  EXPECT_THROW(build_lindblad_operator(s.ops.hamiltonian, s.ops.o_s, {1.0, -0.1}, spec, kParams), ParameterError);
  EXPECT_THROW(BathParams::from_beta(-1.0, 1.0), ParameterError);
  const Model four = make_setup(4, false);
  EXPECT_THROW(build_lindblad_operator(four.ops.hamiltonian, s.ops.o_s, kBath, spec, kParams), DimensionError);
}

TEST(Rhs, MaximallyMixedIsStationaryWithoutDissipation) {
  const Model s = make_setup(2, false);
  const CMatrix rho = DensityMatrix::maximally_mixed(5).matrix();
  EXPECT_LE(max_abs(lindblad_rhs(rho, s.h, CMatrix::Zero(5, 5))), 1e-16);
}

TEST(Rhs, TraceKillAndHermiticity) {
  std::mt19937 rng(7);
  const Model s = make_setup(2, false);
  for (int k = 0; k < 100; ++k) {
    const CMatrix rho = random_density(5, rng);
    const CMatrix r = lindblad_rhs(rho, s.h, s.l);
    EXPECT_LE(std::abs(r.trace()), 1e-12);
    EXPECT_LE(max_abs(r - r.adjoint()), 1e-12);
  }
}

TEST(Rhs, RejectsMismatchedDimensions) {
  const Model s = make_setup(2, false);
  EXPECT_THROW(lindblad_rhs(CMatrix::Zero(4, 4), s.h, s.l), DimensionError);
  EXPECT_THROW(LindbladGenerator(s.h, CMatrix::Zero(4, 4)), DimensionError);
}

TEST(Rhs, EqualsVectorizedLiouvillian) {
  std::mt19937 rng(11);
  for (bool trunc : {false, true}) {
    const Model s = make_setup(2, trunc);
    const Eigen::Index d = s.h.rows();
    const CMatrix sup = vectorize_liouvillian(s.h, s.l);
    for (int k = 0; k < 100; ++k) {
      // Linear maps agree on any matrix, not only on states.
      const CMatrix x = (k % 2 == 0) ? random_density(d, rng) : random_matrix(d, rng);
      EXPECT_LE(max_abs(unvec(sup * vec(x), d) - lindblad_rhs(x, s.h, s.l)), 1e-10);
    }
  }
}

TEST(Liouvillian, ColumnStackingConvention) {
  std::mt19937 rng(3);
  const CMatrix a = random_matrix(3, rng);
  const CMatrix b = random_matrix(3, rng);
  const CMatrix x = random_matrix(3, rng);
  const CMatrix lhs = Eigen::kroneckerProduct(b.transpose(), a);
  EXPECT_LE((lhs * vec(x) - vec(a * x * b)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_EQ(unvec(vec(x), 3), x);
  EXPECT_THROW(unvec(vec(x), 4), DimensionError);
}

TEST(Liouvillian, TracePreservationAndClosedLimit) {
  const Model s = make_setup(2, false);
  const Eigen::Index d = s.h.rows();
  const CMatrix sup = vectorize_liouvillian(s.h, s.l);
  const Eigen::VectorXcd vid = vec(CMatrix::Identity(d, d));
  EXPECT_LE((vid.adjoint() * sup).cwiseAbs().maxCoeff(), 1e-10);

  const Eigen::VectorXcd closed = liouvillian_spectrum(s.h, CMatrix::Zero(d, d));
  EXPECT_LE(closed.real().cwiseAbs().maxCoeff(), 1e-8);

  const Eigen::VectorXcd open = liouvillian_spectrum(s.h, s.l);
  EXPECT_LE(open.real().maxCoeff(), 1e-10);
}

TEST(Liouvillian, SizeGuard) {
  EXPECT_NO_THROW(check_liouvillian_size(kMaxLiouvillianStateDim));
  EXPECT_THROW(check_liouvillian_size(kMaxLiouvillianStateDim + 1), DimensionError);
  const CMatrix big = CMatrix::Zero(60, 60);
  EXPECT_THROW(vectorize_liouvillian(big, big), DimensionError);
}

TEST(Generator, SparseKernelMatchesDenseRhs) {
  std::mt19937 rng(5);
  for (int n : {2, 4}) {
    const Model s = make_setup(n, false);
    LindbladGenerator gen(s.h, s.l);
    const double scale = max_abs(s.l) * max_abs(s.l) + max_abs(s.h);
    for (int k = 0; k < 20; ++k) {
      const CMatrix rho = random_density(s.h.rows(), rng);
      const CMatrix fast = gen(rho);
      EXPECT_LE(max_abs(fast - lindblad_rhs(rho, s.h, s.l)), 1e-12 * scale);
      EXPECT_EQ(max_abs(fast - fast.adjoint()), 0.0);  // Hermitian bit for bit
    }
  }
}

TEST(ExactPropagation, TimeZeroIsIdentity) {
  const Model s = make_setup(2, false);
  const DensityMatrix rho0 = DensityMatrix::pure(5, 0);
  EXPECT_EQ(exact_propagate(rho0, s.h, s.l, 0.0).matrix(), rho0.matrix());
}

TEST(ExactPropagation, UnitaryLimit) {
  std::mt19937 rng(2);
  const Model s = make_setup(2, false);
  const CMatrix zero = CMatrix::Zero(5, 5);
  const DensityMatrix rho0(random_density(5, rng));
  for (double t : {0.3, 2.0, 7.5}) {
    const CMatrix u = unitary_propagator(s.h, t);
    const CMatrix ref = u * rho0.matrix() * u.adjoint();
    EXPECT_LE(max_abs(exact_propagate(rho0, s.h, zero, t).matrix() - ref), 1e-9);
  }
  // Independent check of the propagator: exp(-iHt) from the Pade exponential.
  const CMatrix pade = (CMatrix(s.h * Complex(0.0, -1.3))).exp();
  EXPECT_LE(max_abs(unitary_propagator(s.h, 1.3) - pade), 1e-12);
}

TEST(ExactPropagation, SemigroupAndValidity) {
  std::mt19937 rng(9);
  const Model s = make_setup(2, false);
  const DensityMatrix rho0(random_density(5, rng, 2));
  const DensityMatrix a = exact_propagate(exact_propagate(rho0, s.h, s.l, 0.7), s.h, s.l, 1.9);
  const DensityMatrix b = exact_propagate(rho0, s.h, s.l, 2.6);
  EXPECT_LE(max_abs(a.matrix() - b.matrix()), 1e-9);
  EXPECT_LE(b.trace_deviation(), 1e-10);
  EXPECT_NO_THROW(b.validate());
  EXPECT_GE(b.min_eigenvalue(), -1e-10);
}

TEST(SteadyState, IsValidFixedPoint) {
  const Model s = make_setup(2, true);
  const DensityMatrix ss = steady_state(s.h, s.l);
  EXPECT_LE(ss.trace_deviation(), 1e-12);
  EXPECT_GE(ss.min_eigenvalue(), -1e-7);
  EXPECT_LE(max_abs(lindblad_rhs(ss.matrix(), s.h, s.l)), 1e-10);
}

TEST(Gibbs, Limits) {
  const Model s = make_setup(2, false);
  EXPECT_LE(max_abs(gibbs_state(s.h, 0.0).matrix() - CMatrix::Identity(5, 5) / 5.0), 1e-14);

  Eigen::SelfAdjointEigenSolver<CMatrix> es(s.h);
  const Eigen::VectorXcd g = es.eigenvectors().col(0);
  const CMatrix cold = gibbs_state(s.h, 1e6).matrix();
  EXPECT_LE(max_abs(cold - g * g.adjoint()), 1e-8);
  EXPECT_TRUE(cold.allFinite());

  EXPECT_THROW(gibbs_state(s.h, -0.1), ParameterError);

  const CMatrix warm = gibbs_state(s.h, 0.1).matrix();
  EXPECT_LE(max_abs(warm * s.h - s.h * warm), 1e-13);
}

TEST(Gibbs, MatchesDirectSumOverEigenstates) {
  const Model s = make_setup(2, true);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(s.h);
  double z = 0.0, e2 = 0.0, np = 0.0;
  for (Eigen::Index k = 0; k < s.h.rows(); ++k) {
    const Eigen::VectorXcd v = es.eigenvectors().col(k);
    const double w = std::exp(-0.1 * es.eigenvalues()(k));
    z += w;
    e2 += w * (v.adjoint() * s.obs.e2 * v)(0).real();
    np += w * (v.adjoint() * s.obs.pairs * v)(0).real();
  }
  const DensityMatrix g = gibbs_state(s.h, 0.1);
  EXPECT_NEAR(expectation(g, s.ops.e2), e2 / z, 1e-13);
  EXPECT_NEAR(expectation(g, s.ops.pairs), np / z, 1e-13);
}

TEST(Expectation, BasicValues) {
  const Model s = make_setup(2, false);
  EXPECT_EQ(expectation(DensityMatrix::pure(5, 0), s.ops.pairs), 0.0);
  EXPECT_NEAR(expectation(DensityMatrix::maximally_mixed(5), s.ops.pairs), 0.8, 1e-15);
  EXPECT_NEAR(expectation(DensityMatrix::maximally_mixed(5), s.ops.e2), 0.5, 1e-15);
  EXPECT_NEAR(expectation(gibbs_state(s.h, 0.0), s.ops.pairs), 0.8, 1e-14);

  CMatrix skew = CMatrix::Zero(5, 5);
  skew(0, 1) = 1.0;
  CMatrix a = CMatrix::Zero(5, 5);
  a(1, 0) = Complex(0.0, 1.0);
  EXPECT_THROW(expectation(skew, a), NumericalCheckError);
  EXPECT_THROW(expectation(CMatrix::Zero(4, 4), a), DimensionError);
}

TEST(DensityMatrixChecks, ValidateFlagsEachDefect) {
  EXPECT_NO_THROW(DensityMatrix::pure(3, 1).validate());
  EXPECT_THROW(DensityMatrix(CMatrix::Identity(3, 3)).validate(), NumericalCheckError);
  CMatrix nonherm = CMatrix::Identity(2, 2) / 2.0;
  nonherm(0, 1) = 1e-6;
  EXPECT_THROW(DensityMatrix(nonherm).validate(), NumericalCheckError);
  CMatrix negative = CMatrix::Zero(2, 2);
  negative(0, 0) = 1.1;
  negative(1, 1) = -0.1;
  EXPECT_THROW(DensityMatrix(negative).validate(), NumericalCheckError);
  EXPECT_THROW(DensityMatrix::pure(3, 3), DimensionError);
  EXPECT_NEAR(DensityMatrix::maximally_mixed(4).purity(), 0.25, 1e-15);
}

TEST(Rk4, UnitaryEvolutionKeepsPurity) {
  const Model s = make_setup(2, false);
  const auto rec = rk4_evolve(DensityMatrix::pure(5, 0), s.h, CMatrix::Zero(5, 5), s.obs, {10.0, 0.005, 10});
  for (const auto& smp : rec.samples) EXPECT_NEAR(smp.purity, 1.0, 1e-8);
}

TEST(Rk4, MatchesExactPropagation) {
  const Model s = make_setup(2, true);
  const DensityMatrix rho0 = DensityMatrix::pure(s.h.rows(), 0);
  const auto rk = rk4_evolve(rho0, s.h, s.l, s.obs, {10.0, 0.005, 1});
  const auto ex = exact_evolve(rho0, s.h, s.l, s.obs, 10.0, 0.005);
  ASSERT_EQ(rk.size(), ex.size());
  double dev = 0.0;
  for (std::size_t k = 0; k < rk.size(); ++k) {
    EXPECT_NEAR(rk.samples[k].t, ex.samples[k].t, 1e-12);
    dev = std::max({dev, std::abs(rk.samples[k].n_pairs - ex.samples[k].n_pairs),
                    std::abs(rk.samples[k].e2 - ex.samples[k].e2)});
  }
  EXPECT_LE(dev, 1e-6);
}

// Fourth order: halving dt cuts the error by about 2^4. The step sizes are
// large enough that the error is far above round-off.
TEST(Rk4, FourthOrderConvergence) {
  const Model s = make_setup(2, true);
  const DensityMatrix rho0 = DensityMatrix::pure(s.h.rows(), 0);
  auto err = [&](double dt) {
    const auto rk = rk4_evolve(rho0, s.h, s.l, s.obs, {1.0, dt, 1});
    const auto ex = exact_evolve(rho0, s.h, s.l, s.obs, 1.0, dt);
    double e = 0.0;
    for (std::size_t k = 0; k < rk.size(); ++k) {
      e = std::max({e, std::abs(rk.samples[k].n_pairs - ex.samples[k].n_pairs),
                    std::abs(rk.samples[k].e2 - ex.samples[k].e2)});
    }
    return e;
  };
  const double ratio = err(0.1) / err(0.05);
  EXPECT_GE(ratio, 12.0);
  EXPECT_LE(ratio, 20.0);
}

TEST(Rk4, GridStrideAndFinalTime) {
  const Model s = make_setup(2, true);
  const auto rec = rk4_evolve(DensityMatrix::pure(4, 0), s.h, s.l, s.obs, {1.03, 0.1, 3});
  ASSERT_FALSE(rec.samples.empty());
  EXPECT_EQ(rec.samples.front().t, 0.0);
  EXPECT_EQ(rec.back().t, 1.03);
  for (std::size_t k = 1; k < rec.size(); ++k) EXPECT_GT(rec.samples[k].t, rec.samples[k - 1].t);
  EXPECT_EQ(rec.size(), 5u);  // t = 0, 0.3, 0.6, 0.9, 1.03
  EXPECT_THROW(rk4_evolve(DensityMatrix::pure(4, 0), s.h, s.l, s.obs, {1.0, 0.0, 1}), ParameterError);
  EXPECT_THROW(rk4_evolve(DensityMatrix::pure(5, 0), s.h, s.l, s.obs, {1.0, 0.1, 1}), DimensionError);
}

TEST(Rk4, UnstableStepIsReported) {
  const Model s = make_setup(2, true);
  EXPECT_THROW(rk4_evolve(DensityMatrix::pure(4, 0), s.h, s.l, s.obs, {400.0, 2.0, 1}), NumericalCheckError);
}

TEST(Rk4, LongTimeApproachesSteadyState) {
  const Model s = make_setup(2, true);
  const auto rec = rk4_evolve(DensityMatrix::pure(4, 0), s.h, s.l, s.obs, {50.0, 0.005, 1});
  const DensityMatrix ss = steady_state(s.h, s.l);
  EXPECT_NEAR(rec.back().e2, expectation(ss, s.ops.e2), 1e-4);
  EXPECT_NEAR(rec.back().n_pairs, expectation(ss, s.ops.pairs), 1e-4);
  const auto& prev = rec.samples[rec.size() - 2];
  EXPECT_LT(std::abs(rec.back().e2 - prev.e2), 1e-4);
  for (const auto& smp : rec.samples) {
    EXPECT_NEAR(smp.trace, 1.0, 1e-9);
    EXPECT_LE(smp.hermiticity, 1e-10);
    EXPECT_GE(smp.min_eig, -1e-7);
  }
}

TEST(Records, CsvIsDeterministic) {
  const Model s = make_setup(2, true);
  auto run = [&] {
    std::ostringstream os;
    write_csv(os, rk4_evolve(DensityMatrix::pure(4, 0), s.h, s.l, s.obs, {1.0, 0.01, 10}));
    return os.str();
  };
  const std::string a = run();
  EXPECT_EQ(a, run());
  EXPECT_EQ(a.substr(0, a.find('\n')), "t,n_pairs,e2,trace,purity,min_eig");
  const auto j = to_json(rk4_evolve(DensityMatrix::pure(4, 0), s.h, s.l, s.obs, {1.0, 0.01, 10}));
  EXPECT_EQ(j["t"].size(), 11u);
  EXPECT_EQ(j["e2"].size(), 11u);
}

}  // namespace
}  // namespace schwinger
