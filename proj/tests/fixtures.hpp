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

// Reference sector Hamiltonians for N = 2 and N = 4, entered by hand in
// symbolic form (a, e, m), plus small shared test helpers.

#pragma once

#include <cmath>
#include <random>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

namespace schwinger::test {

inline Eigen::MatrixXd printed_n2_hamiltonian(double a, double e, double m) {
  const double ee = a * e * e;
  const double r = 1.0 / (std::sqrt(2.0) * a);
  Eigen::MatrixXd h(5, 5);
  h << -2 * m, 1 / a, 0, 0, 0,
       1 / a, ee / 2, r, 0, 0,
       0, r, ee + 2 * m, r, 0,
       0, 0, r, 1.5 * ee, r,
       0, 0, 0, r, 2 * ee - 2 * m;
  return h;
}

inline Eigen::MatrixXd printed_n4_hamiltonian(double a, double e, double m) {
  const double ee = a * e * e;
  const double s2 = std::sqrt(2.0) / a;
  const double one = 1.0 / a;
  const double half = 1.0 / (2.0 * a);
  const double r = 1.0 / (std::sqrt(2.0) * a);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(19, 19);
  const double diag[19] = {-4 * m,           ee / 2 - 2 * m,   ee,          ee,         ee,
                           ee,               1.5 * ee - 2 * m, 1.5 * ee + 2 * m, 1.5 * ee + 2 * m,
                           2 * ee,           2 * ee,           2 * ee,      2 * ee + 4 * m,
                           2.5 * ee - 2 * m, 2.5 * ee + 2 * m, 3 * ee,      3 * ee,
                           3.5 * ee - 2 * m, 4 * ee - 4 * m};
  for (int i = 0; i < 19; ++i) h(i, i) = diag[i];
  const std::vector<std::tuple<int, int, double>> upper = {
      {0, 1, s2},    {1, 2, one},   {1, 3, r},     {1, 4, r},      {1, 5, r},     {2, 6, half},
      {2, 7, one},   {2, 8, half},  {3, 8, r},     {4, 7, r},      {5, 8, r},     {6, 9, half},
      {6, 10, half}, {6, 11, half}, {7, 9, half},  {7, 11, half},  {7, 12, one},  {8, 10, half},
      {9, 13, half}, {9, 14, half}, {11, 13, half}, {11, 14, half}, {12, 14, one}, {13, 15, half},
      {14, 15, one}, {14, 16, r},   {15, 17, one}, {16, 17, r},    {17, 18, one},
  };
  for (const auto& [i, j, v] : upper) h(i, j) = h(j, i) = v;
  return h;
}

// Random density matrix of rank `rank` (full rank by default).
inline Eigen::MatrixXcd random_density(Eigen::Index d, std::mt19937& rng, Eigen::Index rank = -1) {
  std::normal_distribution<double> g;
  if (rank < 0) rank = d;
  Eigen::MatrixXcd x(d, rank);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < rank; ++j) x(i, j) = {g(rng), g(rng)};
  }
  Eigen::MatrixXcd rho = x * x.adjoint();
  return rho / rho.trace();
}

inline Eigen::MatrixXcd random_matrix(Eigen::Index d, std::mt19937& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd x(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) x(i, j) = {g(rng), g(rng)};
  }
  return x;
}

inline Eigen::MatrixXcd random_hermitian(Eigen::Index d, std::mt19937& rng) {
  const Eigen::MatrixXcd x = random_matrix(d, rng);
  return 0.5 * (x + x.adjoint());
}

}  // namespace schwinger::test
