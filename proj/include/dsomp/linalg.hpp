// SPDX-License-Identifier: Apache-2.0
//
// dsomp: double-structured sparse cascaded channel estimation for RIS uplinks
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

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace dsomp
{
    using Complex = std::complex<double>;
    using CMatrix = Eigen::MatrixXcd;
    using CVector = Eigen::VectorXcd;
    using Index = Eigen::Index;

    // Sorted, duplicate-free list of row or column indices.
    using Support = std::vector<Index>;

    // All supports of one user: one column support per estimated non-zero row.
    using RowColumnSupports = std::vector<Support>;

    // Relative Frobenius error between two matrices of equal shape.
    inline double relative_error(const CMatrix &estimate, const CMatrix &truth)
    {
        return (estimate - truth).norm() / truth.norm();
    }
}
