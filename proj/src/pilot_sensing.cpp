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

#include "dsomp/pilot_sensing.hpp"

#include <cmath>
#include <random>
#include <string>

#include "dsomp/errors.hpp"

namespace dsomp
{
    ReflectingMatrix gen_reflecting(Index n, Index q, std::uint64_t seed)
    {
        if (n < 1 || q < 1)
            throw InvalidArgumentError("reflecting matrix needs n >= 1 and q >= 1");
        std::mt19937_64 rng(seed);
        std::bernoulli_distribution coin(0.5);
        const double level = 1.0 / std::sqrt(double(n));

        ReflectingMatrix r{CMatrix(n, q)};
        for (Index c = 0; c < q; ++c)
            for (Index e = 0; e < n; ++e)
                r.theta(e, c) = coin(rng) ? level : -level;
        return r;
    }

    SensingMatrix build_sensing(const ReflectingMatrix &theta, const Dictionary &un)
    {
        if (theta.n() != un.total())
            throw ShapeError("reflecting matrix has " + std::to_string(theta.n()) + " rows, RIS dictionary has " +
                             std::to_string(un.total()));
        return {(un.u.transpose() * theta.theta).adjoint()};
    }

    MeasurementSet measure(const std::vector<CMatrix> &angular, const SensingMatrix &sensing,
                           double snr_db, std::uint64_t seed)
    {
        if (std::isnan(snr_db))
            throw InvalidArgumentError("SNR must not be NaN");
        if (std::isinf(snr_db) && snr_db < 0.0)
            throw InvalidArgumentError("SNR of -inf dB would require infinite noise power");

        MeasurementSet out;
        out.snr_db = snr_db;
        const bool noiseless = std::isinf(snr_db) && snr_db > 0.0;

        std::mt19937_64 rng(seed);
        std::normal_distribution<double> gauss(0.0, 1.0);

        for (std::size_t k = 0; k < angular.size(); ++k)
        {
            const CMatrix &hk = angular[k];
            if (hk.cols() != sensing.n())
                throw ShapeError("user " + std::to_string(k) + ": angular channel has " +
                                 std::to_string(hk.cols()) + " columns, sensing matrix has " +
                                 std::to_string(sensing.n()));

            CMatrix signal = sensing.theta_tilde * hk.adjoint();
            CMatrix noise = CMatrix::Zero(signal.rows(), signal.cols());
            double sigma2 = 0.0;
            if (!noiseless)
            {
                const double energy = signal.squaredNorm();
                if (!(energy > 0.0))
                    throw DegenerateSignalError("user " + std::to_string(k) +
                                                " has zero signal energy; a finite SNR is undefined");
                sigma2 = energy / (double(signal.size()) * std::pow(10.0, snr_db / 10.0));
                const double sd = std::sqrt(sigma2 / 2.0);
                for (Index c = 0; c < noise.cols(); ++c)
                    for (Index r = 0; r < noise.rows(); ++r)
                    {
                        const double re = gauss(rng);
                        const double im = gauss(rng);
                        noise(r, c) = Complex(sd * re, sd * im);
                    }
            }
            out.y_tilde.push_back(signal + noise);
            out.noise.push_back(std::move(noise));
            out.noise_power.push_back(sigma2);
        }
        return out;
    }
}
