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

namespace dsomp
{
    // Independent random streams used inside one Monte-Carlo trial.
    enum class SeedStream : std::uint32_t
    {
        paths = 1,
        reflecting = 2,
        noise = 3,
    };

    // Seed of trial `trial_index` under `master_seed`: master_seed + trial_index.
    inline std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial_index)
    {
        return master_seed + trial_index;
    }

    // Seed for one stream of a trial, mixed through std::seed_seq.
    // paths: (l_c, 0), reflecting: (q, 0), noise: (q, l_c).
    std::uint64_t derive_seed(std::uint64_t trial_seed, SeedStream stream, std::uint64_t a, std::uint64_t b);

    inline std::uint64_t paths_seed(std::uint64_t trial, std::uint64_t l_c)
    {
        return derive_seed(trial, SeedStream::paths, l_c, 0);
    }
    inline std::uint64_t reflecting_seed(std::uint64_t trial, std::uint64_t q)
    {
        return derive_seed(trial, SeedStream::reflecting, q, 0);
    }
    inline std::uint64_t noise_seed(std::uint64_t trial, std::uint64_t q, std::uint64_t l_c)
    {
        return derive_seed(trial, SeedStream::noise, q, l_c);
    }
}
