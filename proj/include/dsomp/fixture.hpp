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
#include <filesystem>

#include <json.hpp>

#include "dsomp/channel_gen.hpp"

namespace dsomp
{
    // Persisted channel draw. Only the geometry, gain model, seed and path records are
    // stored; every matrix is re-derived with realize().
    //
    //   {
    //     "format": "dsomp-channel-fixture", "version": 1,
    //     "geometry": {"bs": [4, 4], "ris": [8, 8], "k_users": 8, "l_g": 3, "l_r": 4, "l_c": 2},
    //     "gains": {"d_br": 10.0, "d_ru": 100.0},
    //     "seed": 7,
    //     "bs_paths": [{"gain": [re, im], "bs_index": [i1, i2], "ris_index": [i1, i2]}, ...],
    //     "user_paths": [[{"gain": [re, im], "ris_index": [i1, i2], "common": true}, ...], ...]
    //   }
    //
    // Grid indices are per-axis integers; the frequency of index (i1, i2) is (i1 / n1, i2 / n2).
    struct ChannelFixture
    {
        SystemGeometry geom;
        GainModel gains;
        std::uint64_t seed = 0;
        PathSet paths;
    };

    inline constexpr const char *kFixtureFormat = "dsomp-channel-fixture";
    inline constexpr int kFixtureVersion = 1;

    nlohmann::json fixture_to_json(const ChannelFixture &fixture);
    ChannelFixture fixture_from_json(const nlohmann::json &doc);

    void save_fixture(const ChannelFixture &fixture, const std::filesystem::path &path);
    ChannelFixture load_fixture(const std::filesystem::path &path);
}
