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

#ifndef BOSONSTAT_LINEAR_OPTICS_UNITARY_HPP
#define BOSONSTAT_LINEAR_OPTICS_UNITARY_HPP

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <utility>

namespace bosonstat {

inline constexpr double kUnitarityTolerance = 1e-10;

// Transfer matrix of an m-mode linear interferometer. Entry (j, s) is the
// amplitude from input mode s to output mode j (modes are 1-based at the API
// surface, 0-based in the matrix).
struct UnitaryMatrix {
    Eigen::MatrixXcd mat;

    UnitaryMatrix() = default;
    explicit UnitaryMatrix(Eigen::MatrixXcd m) : mat(std::move(m)) {}

    int dim() const { return static_cast<int>(mat.rows()); }

    // Max elementwise |U U^dag - I|.
    double unitarity_error() const {
        Eigen::MatrixXcd d = mat * mat.adjoint();
        d -= Eigen::MatrixXcd::Identity(mat.rows(), mat.cols());
        return d.cwiseAbs().maxCoeff();
    }

    bool is_unitary(double tol = kUnitarityTolerance) const {
        return mat.rows() == mat.cols() && mat.rows() >= 2 && unitarity_error() <= tol;
    }

    static UnitaryMatrix identity(int m) {
        require_dim(m);
        return UnitaryMatrix(Eigen::MatrixXcd::Identity(m, m));
    }

    // Validating factory for matrices arriving from files or user code.
    static UnitaryMatrix checked(Eigen::MatrixXcd m, double tol = kUnitarityTolerance) {
        if (m.rows() != m.cols()) {
            throw std::invalid_argument("UnitaryMatrix: matrix must be square");
        }
        require_dim(static_cast<int>(m.rows()));
        UnitaryMatrix u(std::move(m));
        double err = u.unitarity_error();
        if (err > tol) {
            throw std::invalid_argument("UnitaryMatrix: not unitary (max deviation " +
                                        std::to_string(err) + ")");
        }
        return u;
    }

    static void require_dim(int m) {
        if (m < 2) {
            throw std::invalid_argument("UnitaryMatrix: dim must be >= 2");
        }
    }
};

}  // namespace bosonstat

#endif
