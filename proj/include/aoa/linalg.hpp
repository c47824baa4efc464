// SPDX-License-Identifier: Apache-2.0
//
// aoa-lab: angle-of-arrival bounds and antenna selection for massive MIMO arrays
// Copyright (C) 2026 The aoa-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <optional>

#include <Eigen/Dense>

namespace aoa
{
    /// Inverse by Gauss-Jordan elimination with partial (column) pivoting.
    /// Returns nullopt when a pivot falls below rel_tol * max|A|.
    std::optional<Eigen::MatrixXd> invert_pivoted(const Eigen::MatrixXd &a, double rel_tol = 1e-12);

    struct HermitianEigen
    {
        Eigen::VectorXd values;   // descending
        Eigen::MatrixXcd vectors; // column i pairs with values(i)
        int sweeps = 0;
    };

    /// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
    ///
    /// Iterates until the off-diagonal Frobenius norm drops below 1e-12 * ||R||_F. Throws
    /// std::invalid_argument if R is not Hermitian within 1e-10 (relative) and NumericalFailure
    /// if 100 sweeps do not converge.
    HermitianEigen hermitian_evd(const Eigen::MatrixXcd &r);
}
