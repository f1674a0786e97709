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

#include <cstddef>

#include "dsomp/linalg.hpp"

namespace dsomp
{
    // Uniform planar array with n1 x n2 elements. Element (a, b) has flat index a * n2 + b.
    struct UpaShape
    {
        Index n1 = 1;
        Index n2 = 1;

        UpaShape() = default;
        UpaShape(Index first_axis, Index second_axis);

        Index total() const { return n1 * n2; }
        bool operator==(const UpaShape &) const = default;
    };

    // Normalized spatial frequencies along the two array axes, each reduced to [0, 1).
    // With half-wavelength spacing, f1 = sin(theta) cos(psi) / 2 and f2 = sin(psi) / 2 (mod 1).
    struct SpatialFrequencyPair
    {
        double f1 = 0.0;
        double f2 = 0.0;

        bool operator==(const SpatialFrequencyPair &) const = default;
    };

    // Reduce a real frequency into [0, 1).
    double wrap_frequency(double f);

    // Per-axis wrapped sum f + g.
    SpatialFrequencyPair wrapped_sum(const SpatialFrequencyPair &f, const SpatialFrequencyPair &g);

    // Frequency pair of grid point (i1 / n1, i2 / n2) with flat index i1 * n2 + i2.
    SpatialFrequencyPair grid_frequency(const UpaShape &shape, Index flat_index);

    // Flat index of the grid point nearest to `freq` (wrapping around per axis).
    Index nearest_grid_index(const UpaShape &shape, const SpatialFrequencyPair &freq);

    // Normalized UPA steering vector: entry a * n2 + b is exp(-j 2 pi (f1 a + f2 b)) / sqrt(n1 n2).
    CVector steering_vector(const SpatialFrequencyPair &freq, const UpaShape &shape);

    // Kronecker-DFT dictionary. Column i1 * n2 + i2 is the steering vector of grid
    // point (i1 / n1, i2 / n2), so the matrix is unitary.
    struct Dictionary
    {
        UpaShape shape;
        CMatrix u;

        Index total() const { return shape.total(); }
    };

    Dictionary build_dictionary(const UpaShape &shape);

    // Angular image of a spatial channel: U_M^H * H * conj(U_N).
    // This is the unique solution of H = U_M * H_angular * U_N^T.
    CMatrix to_angular(const CMatrix &h_spatial, const Dictionary &um, const Dictionary &un);

    // Spatial channel U_M * H_angular * U_N^T. Rows of `h_angular` that are entirely
    // zero are skipped, so sparse estimates are mapped back cheaply.
    CMatrix from_angular(const CMatrix &h_angular, const Dictionary &um, const Dictionary &un);
}
