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
#include <ostream>
#include <vector>

#include "dsomp/bench_harness.hpp"
#include "dsomp/config.hpp"
#include "dsomp/fixture.hpp"

namespace dsomp
{
    // Channel fixture drawn exactly as trial seed `seed` of a sweep at `l_c` would draw it.
    ChannelFixture make_fixture(const ExperimentConfig &config, std::uint64_t seed, Index l_c);

    // Runs `estimators` on a fixture with pilots and noise drawn from `seed`.
    TrialResult estimate_fixture(const ChannelFixture &fixture, const std::vector<EstimatorKind> &estimators,
                                 Index q, double snr_db, std::uint64_t seed);

    // Writes the CSV and the manifest beside it. Refuses to overwrite unless `force`.
    void write_sweep_outputs(const SweepResult &result, const CliConfig &config, const std::filesystem::path &csv,
                             bool force);

    // Entry point of the `dsomp` tool: generate | estimate | sweep.
    // Returns 0 on success, 1 on a library error and 2 on a usage error.
    int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);
}
