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
#include <limits>
#include <vector>

#include "dsomp/angular_model.hpp"
#include "dsomp/channel_gen.hpp"

namespace dsomp
{
    // RIS reflecting coefficients over Q pilot slots: N x Q, entries +-1/sqrt(N).
    struct ReflectingMatrix
    {
        CMatrix theta;

        Index n() const { return theta.rows(); }
        Index q() const { return theta.cols(); }
    };

    // Q x N sensing matrix (U_N^T * Theta)^H.
    struct SensingMatrix
    {
        CMatrix theta_tilde;

        Index q() const { return theta_tilde.rows(); }
        Index n() const { return theta_tilde.cols(); }
    };

    // Use as `snr_db` to request noiseless measurements.
    inline constexpr double kNoiseless = std::numeric_limits<double>::infinity();

    // Effective received pilots of every user after the BS-side angular transform.
    struct MeasurementSet
    {
        std::vector<CMatrix> y_tilde;     // K matrices, Q x M
        std::vector<CMatrix> noise;       // realized effective noise, same shapes
        std::vector<double> noise_power;  // per-user per-entry variance sigma^2
        double snr_db = kNoiseless;

        Index q() const { return y_tilde.empty() ? 0 : y_tilde.front().rows(); }
        Index m() const { return y_tilde.empty() ? 0 : y_tilde.front().cols(); }
        Index k_users() const { return Index(y_tilde.size()); }
    };

    ReflectingMatrix gen_reflecting(Index n, Index q, std::uint64_t seed);

    SensingMatrix build_sensing(const ReflectingMatrix &theta, const Dictionary &un);

    // Y_k = Theta_tilde * H_angular_k^H + W_k. The noise variance of user k is set so that
    // ||Theta_tilde H_k^H||_F^2 / (Q M sigma_k^2) equals 10^(snr_db / 10).
    MeasurementSet measure(const std::vector<CMatrix> &angular, const SensingMatrix &sensing,
                           double snr_db, std::uint64_t seed);

    inline MeasurementSet measure(const ChannelRealization &realization, const SensingMatrix &sensing,
                                  double snr_db, std::uint64_t seed)
    {
        return measure(realization.angular, sensing, snr_db, seed);
    }
}
