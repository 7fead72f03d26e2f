// Copyright 2026 The bosonstat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BOSONSTAT_LINEAR_OPTICS_HAAR_HPP
#define BOSONSTAT_LINEAR_OPTICS_HAAR_HPP

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>

#include "bosonstat/core/rng.hpp"
#include "bosonstat/linear_optics/unitary.hpp"

namespace bosonstat {

// Haar-distributed m x m unitary: QR-orthonormalize an i.i.d. complex
// Gaussian (Ginibre) matrix, then rotate each column so the R factor has a
// positive real diagonal. Without that phase correction the QR convention
// would bias the distribution away from Haar.
inline UnitaryMatrix haar_random_unitary(int m, std::uint64_t seed) {
    UnitaryMatrix::require_dim(m);
    Rng rng(seed);
    Eigen::MatrixXcd g(m, m);
    const double scale = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            double re = rng.gaussian();
            double im = rng.gaussian();
            g(i, j) = std::complex<double>(re * scale, im * scale);
        }
    }
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(m, m);
    Eigen::MatrixXcd r = qr.matrixQR();
    for (int j = 0; j < m; ++j) {
        std::complex<double> d = r(j, j);
        double a = std::abs(d);
        std::complex<double> phase = a > 0.0 ? d / a : std::complex<double>(1.0, 0.0);
        q.col(j) *= phase;
    }
    return UnitaryMatrix(std::move(q));
}

}  // namespace bosonstat

#endif
