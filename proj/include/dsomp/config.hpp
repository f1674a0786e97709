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

#include <filesystem>

#include <json.hpp>

#include "dsomp/bench_harness.hpp"

namespace dsomp
{
    // Contents of a sweep configuration file.
    //
    // JSON layout (every key optional, defaults are the reference scenario):
    //
    //   {
    //     "geometry": {"bs": [8, 8], "ris": [16, 16], "k_users": 16, "l_g": 5, "l_r": 8},
    //     "gains": {"d_br": 10.0, "d_ru": 100.0},
    //     "snr_db": 0.0,                      // a number, or "inf" for noiseless pilots
    //     "q_values": [16, 32, 48, 64, 80, 96, 112, 128],
    //     "l_c_values": [0, 2, 4, 6, 8],
    //     "n_trials": 100,
    //     "master_seed": 1,
    //     "estimators": ["ds_omp", "row_structured", "baseline_omp", "oracle_ls"],
    //     "record_wall_time": false,
    //     "out": "sweep.csv"
    //   }
    //
    // Unknown keys are rejected at every level.
    struct CliConfig
    {
        ExperimentConfig experiment;
        std::filesystem::path out = "sweep.csv";
    };

    CliConfig config_from_json(const nlohmann::json &doc);
    nlohmann::json config_to_json(const CliConfig &config);
    CliConfig load_config(const std::filesystem::path &path);

    nlohmann::json geometry_to_json(const SystemGeometry &geom, bool include_l_c);
    SystemGeometry geometry_from_json(const nlohmann::json &doc, bool allow_l_c);
    nlohmann::json gains_to_json(const GainModel &gains);
    GainModel gains_from_json(const nlohmann::json &doc);

    // Accepts a number or the strings "inf" / "+inf".
    double snr_from_json(const nlohmann::json &value);
    nlohmann::json snr_to_json(double snr_db);
}
