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

#include <cstdint>
#include <vector>

#include "dsomp/angular_model.hpp"

namespace dsomp
{
    // Shape of one experiment: arrays, users and path counts.
    struct SystemGeometry
    {
        UpaShape bs{8, 8};   // M = bs.total()
        UpaShape ris{16, 16}; // N = ris.total()
        Index k_users = 16;
        Index l_g = 5; // RIS-BS paths
        Index l_r = 8; // user-RIS paths, identical for every user
        Index l_c = 0; // user-RIS paths shared by all users

        Index m() const { return bs.total(); }
        Index n() const { return ris.total(); }

        // Throws InfeasibleGeometryError or InvalidArgumentError.
        void validate() const;

        bool operator==(const SystemGeometry &) const = default;
    };

    // Path-loss magnitudes |alpha| = 1e-3 * d^(-exponent).
    struct GainModel
    {
        double d_br = 10.0;  // BS-RIS distance, meters
        double d_ru = 100.0; // RIS-user distance, meters

        double bs_ris_magnitude() const;
        double ris_user_magnitude() const;
        void validate() const;

        bool operator==(const GainModel &) const = default;
    };

    struct BsRisPath
    {
        Complex gain;
        SpatialFrequencyPair bs_freq;  // arrival at the BS
        SpatialFrequencyPair ris_freq; // departure from the RIS
    };

    struct UserRisPath
    {
        Complex gain;
        SpatialFrequencyPair ris_freq; // arrival at the RIS
        bool common = false;           // belongs to the set shared by every user
    };

    // Sampled on-grid propagation paths. The common paths of every user come first in
    // `user_side[k]` and carry identical frequencies across users.
    struct PathSet
    {
        std::vector<BsRisPath> bs_side;
        std::vector<std::vector<UserRisPath>> user_side;
    };

    // Draws grid-aligned paths with distinct indices per list. Deterministic in `seed`.
    PathSet sample_paths(const SystemGeometry &geom, const GainModel &gains, std::uint64_t seed);

    // Checks a path set against a geometry: counts, grid alignment, distinctness and sharing.
    void validate_paths(const PathSet &paths, const SystemGeometry &geom);

    // RIS-BS channel, M x N.
    CMatrix assemble_g(const PathSet &paths, const SystemGeometry &geom);

    // User-RIS channel of user k, length N.
    CVector assemble_h(const PathSet &paths, Index user, const SystemGeometry &geom);

    // G * diag(h).
    CMatrix cascade(const CMatrix &g, const CVector &h);

    struct TrueSupports
    {
        Support rows;                            // sorted, L_G entries
        std::vector<RowColumnSupports> columns;  // [k][l1], aligned with `rows`
        RowColumnSupports common_columns;        // [l1], columns produced by the common paths
    };

    // Support of every angular cascaded channel implied by the path grid indices.
    TrueSupports true_supports(const PathSet &paths, const SystemGeometry &geom);

    struct ChannelRealization
    {
        SystemGeometry geom;
        PathSet paths;
        CMatrix g;
        std::vector<CVector> h_users;
        std::vector<CMatrix> cascaded; // H_k
        std::vector<CMatrix> angular;  // to_angular(H_k)
        TrueSupports supports;
    };

    // Assembles all channels and supports from a path set.
    ChannelRealization realize(const PathSet &paths, const SystemGeometry &geom,
                               const Dictionary &um, const Dictionary &un);
}
