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

#include <gtest/gtest.h>

#include "dsomp/errors.hpp"
#include "dsomp/pilot_sensing.hpp"
#include "test_support.hpp"

using namespace dsomp;
using dsomp::fixtures::desk_geometry;
using dsomp::fixtures::max_abs;
using dsomp::fixtures::naive_product;
using dsomp::fixtures::random_matrix;

TEST(Reflecting, MagnitudeIsForced)
{
    const auto r = gen_reflecting(4, 3, 1);
    ASSERT_EQ(r.theta.rows(), 4);
    ASSERT_EQ(r.theta.cols(), 3);
    for (Index i = 0; i < r.theta.size(); ++i)
    {
        EXPECT_DOUBLE_EQ(std::abs(r.theta(i)), 0.5);
        EXPECT_EQ(r.theta(i).imag(), 0.0);
    }
}

TEST(Reflecting, DeterministicInSeed)
{
    EXPECT_EQ(gen_reflecting(64, 16, 5).theta, gen_reflecting(64, 16, 5).theta);
    EXPECT_NE(gen_reflecting(64, 16, 5).theta, gen_reflecting(64, 16, 6).theta);
}

TEST(Reflecting, BalancedSigns)
{
    // 16384 fair coin flips: the positive fraction has standard deviation ~0.004.
    const auto r = gen_reflecting(256, 64, 77);
    Index positive = 0;
    for (Index i = 0; i < r.theta.size(); ++i)
        positive += r.theta(i).real() > 0.0;
    const double fraction = double(positive) / double(r.theta.size());
    EXPECT_GE(fraction, 0.45);
    EXPECT_LE(fraction, 0.55);
    EXPECT_THROW(gen_reflecting(0, 3, 1), InvalidArgumentError);
}

TEST(Sensing, ConjugateDictionaryGivesIdentity)
{
    const auto un = build_dictionary({4, 4});
    const ReflectingMatrix theta{un.u.conjugate()};
    EXPECT_LT(max_abs(build_sensing(theta, un).theta_tilde - CMatrix::Identity(16, 16)), 1e-12);
}

TEST(Sensing, PreservesFrobeniusNormAndMatchesNaiveProduct)
{
    const auto un = build_dictionary({8, 8});
    const auto theta = gen_reflecting(64, 24, 3);
    const auto s = build_sensing(theta, un);
    ASSERT_EQ(s.q(), 24);
    ASSERT_EQ(s.n(), 64);
    EXPECT_NEAR(s.theta_tilde.norm(), theta.theta.norm(), 1e-10);
    const CMatrix direct = naive_product(un.u.transpose(), theta.theta);
    EXPECT_LT(max_abs(s.theta_tilde.adjoint() - direct), 1e-12);
    EXPECT_THROW(build_sensing(gen_reflecting(63, 4, 1), un), ShapeError);
}

TEST(Measure, NoiselessIsExactProduct)
{
    const auto g = desk_geometry();
    const auto s = fixtures::make_scenario(g, 20, kNoiseless, 4);
    for (Index k = 0; k < g.k_users; ++k)
    {
        const CMatrix expected = s.sensing.theta_tilde * s.channel.angular[std::size_t(k)].adjoint();
        EXPECT_EQ(s.meas.y_tilde[std::size_t(k)], expected);
        EXPECT_EQ(s.meas.noise_power[std::size_t(k)], 0.0);
    }
}

TEST(Measure, ZeroChannel)
{
    const auto un = build_dictionary({4, 4});
    const auto sensing = build_sensing(gen_reflecting(16, 8, 1), un);
    const std::vector<CMatrix> zero{CMatrix::Zero(4, 16)};
    EXPECT_EQ(max_abs(measure(zero, sensing, kNoiseless, 1).y_tilde[0]), 0.0);
    EXPECT_THROW(measure(zero, sensing, 0.0, 1), DegenerateSignalError);
    EXPECT_THROW(measure(zero, sensing, std::nan(""), 1), InvalidArgumentError);
}

TEST(Measure, SnrDefinitionHoldsOnAverage)
{
    const auto g = desk_geometry();
    const auto s = fixtures::make_scenario(g, 32, kNoiseless, 9);
    const std::vector<CMatrix> one_user{s.channel.angular[0]};
    const double signal = (s.sensing.theta_tilde * one_user[0].adjoint()).squaredNorm();
    double ratio = 0.0;
    for (std::uint64_t draw = 0; draw < 200; ++draw)
    {
        const auto m = measure(one_user, s.sensing, 0.0, 1000 + draw);
        ratio += signal / m.noise[0].squaredNorm();
    }
    EXPECT_NEAR(ratio / 200.0, 1.0, 0.1);
}

TEST(Measure, PerUserCalibration)
{
    const auto g = desk_geometry();
    const auto s = fixtures::make_scenario(g, 32, 10.0, 9);
    for (Index k = 0; k < g.k_users; ++k)
    {
        const double signal = (s.sensing.theta_tilde * s.channel.angular[std::size_t(k)].adjoint()).squaredNorm();
        EXPECT_NEAR(s.meas.noise_power[std::size_t(k)] * 32.0 * 16.0 * 10.0, signal, 1e-9 * signal);
    }
}

TEST(Measure, DeterministicAndConjugateLinear)
{
    const auto g = desk_geometry();
    const auto s = fixtures::make_scenario(g, 16, kNoiseless, 2);
    const auto a = measure(s.channel, s.sensing, 3.0, 55);
    const auto b = measure(s.channel, s.sensing, 3.0, 55);
    EXPECT_EQ(a.y_tilde[2], b.y_tilde[2]);

    std::vector<CMatrix> scaled;
    const Complex alpha(2.5, -0.75);
    for (const auto &h : s.channel.angular)
        scaled.push_back(alpha * h);
    const auto base = measure(s.channel.angular, s.sensing, kNoiseless, 0);
    const auto lin = measure(scaled, s.sensing, kNoiseless, 0);
    for (std::size_t k = 0; k < scaled.size(); ++k)
        EXPECT_LT(max_abs(lin.y_tilde[k] - std::conj(alpha) * base.y_tilde[k]), 1e-12 * max_abs(lin.y_tilde[k]));

    // real scale factors pass straight through
    std::vector<CMatrix> real_scaled;
    for (const auto &h : s.channel.angular)
        real_scaled.push_back(-3.0 * h);
    const auto real_lin = measure(real_scaled, s.sensing, kNoiseless, 0);
    for (std::size_t k = 0; k < real_scaled.size(); ++k)
        EXPECT_LT(max_abs(real_lin.y_tilde[k] + 3.0 * base.y_tilde[k]), 1e-12 * max_abs(real_lin.y_tilde[k]));
}

TEST(Measure, EffectiveModelMatchesSpatialPilots)
{
    // Y_k = H_k Theta in the spatial domain, then Y~_k = (U_M^H Y_k)^H.
    const auto g = desk_geometry();
    const Index q = 24;
    const auto theta = gen_reflecting(g.n(), q, 31);
    const auto um = build_dictionary(g.bs), un = build_dictionary(g.ris);
    const auto channel = realize(sample_paths(g, {}, 31), g, um, un);
    const auto meas = measure(channel, build_sensing(theta, un), kNoiseless, 0);
    for (Index k = 0; k < g.k_users; ++k)
    {
        const CMatrix y = naive_product(channel.cascaded[std::size_t(k)], theta.theta);
        const CMatrix effective = naive_product(um.u.adjoint(), y).adjoint();
        EXPECT_LT(max_abs(effective - meas.y_tilde[std::size_t(k)]), 1e-12 * max_abs(effective));
    }
}

TEST(Measure, UnitaryPreprocessingKeepsNoiseWhite)
{
    const Index m = 16, q = 4096;
    const double sigma2 = 3.0;
    const auto um = build_dictionary({4, 4});
    std::mt19937_64 rng(8);
    std::normal_distribution<double> gauss(0.0, std::sqrt(sigma2 / 2.0));
    CMatrix w(m, q);
    for (Index i = 0; i < w.size(); ++i)
    {
        const double re = gauss(rng);
        w(i) = Complex(re, gauss(rng));
    }
    const CMatrix effective = (um.u.adjoint() * w).adjoint();
    for (Index c = 0; c < m; ++c)
        EXPECT_NEAR(effective.col(c).squaredNorm() / double(q), sigma2, 0.1 * sigma2);
    // Cross-column correlation stays near zero.
    const CMatrix cov = effective.adjoint() * effective / double(q);
    for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < m; ++j)
            if (i != j)
                EXPECT_LT(std::abs(cov(i, j)), 0.1 * sigma2);
}
