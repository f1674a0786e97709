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

#include "dsomp/seeds.hpp"

#include <array>
#include <random>

namespace dsomp
{
    std::uint64_t derive_seed(std::uint64_t trial_seed, SeedStream stream, std::uint64_t a, std::uint64_t b)
    {
        auto lo = [](std::uint64_t v) { return std::uint32_t(v & 0xffffffffu); };
        auto hi = [](std::uint64_t v) { return std::uint32_t(v >> 32); };
        std::seed_seq seq{lo(trial_seed), hi(trial_seed), std::uint32_t(stream), lo(a), hi(a), lo(b), hi(b)};
        std::array<std::uint32_t, 2> out{};
        seq.generate(out.begin(), out.end());
        return (std::uint64_t(out[1]) << 32) | out[0];
    }
}
