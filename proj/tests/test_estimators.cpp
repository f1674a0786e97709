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

#include <algorithm>
#include <set>

#include "dsomp/bench_harness.hpp"
#include "dsomp/errors.hpp"
#include "dsomp/estimators.hpp"
#include "test_support.hpp"

using namespace dsomp;
using dsomp::fixtures::desk_geometry;
using dsomp::fixtures::make_scenario;
using dsomp::fixtures::max_abs;
using dsomp::fixtures::random_matrix;

namespace
{
    SensingMatrix random_sensing(Index n1, Index n2, Index q, std::uint64_t seed)
    {
        return build_sensing(gen_reflecting(n1 * n2, q, seed), build_dictionary({n1, n2}));
    }

    Support sorted(Support s)
    {
        std::sort(s.begin(), s.end());
        return s;
    }

    bool is_subset(const Support &small, const Support &big)
    {
        return std::includes(big.begin(), big.end(), small.begin(), small.end());
    }
}

TEST(TopIndices, LargestWithLowIndexTieBreak)
{
    Eigen::VectorXd v(6);
    v << 1.0, 5.0, 3.0, 5.0, 0.0, 3.0;
    EXPECT_EQ(top_indices(v, 1), (Support{1}));
    EXPECT_EQ(top_indices(v, 2), (Support{1, 3}));
    EXPECT_EQ(top_indices(v, 3), (Support{1, 2, 3}));
    EXPECT_EQ(top_indices(v, 0), Support{});
    EXPECT_EQ(top_indices(Eigen::VectorXd::Zero(4), 2), (Support{0, 1}));
}

TEST(RowSupport, SingleNonZeroColumn)
{
    MeasurementSet m;
    CMatrix y = CMatrix::Zero(5, 9);
    y.col(6) = random_matrix(5, 1, 1).col(0);
    m.y_tilde.push_back(y);
    EXPECT_EQ(estimate_row_support(m, 1), (Support{6}));
    EXPECT_THROW(estimate_row_support(m, 10), InvalidArgumentError);
}

TEST(RowSupport, NoiselessMatchesTruth)
{
    for (std::uint64_t seed = 0; seed < 20; ++seed)
    {
        const auto s = make_scenario(desk_geometry(), 1 + Index(seed % 8), kNoiseless, seed);
        EXPECT_EQ(estimate_row_support(s.meas, 3), s.channel.supports.rows) << "seed " << seed;
    }
}

TEST(RowSupport, JointPowerEqualsStackedSingleUser)
{
    // Column powers of a vertical stack are the sums of the users' column powers.
    const CMatrix a = random_matrix(6, 12, 2), b = random_matrix(6, 12, 3);
    MeasurementSet two, stacked;
    two.y_tilde = {a, b};
    CMatrix s(12, 12);
    s << a, b;
    stacked.y_tilde = {s};
    for (Index l = 1; l <= 12; ++l)
        EXPECT_EQ(estimate_row_support(two, l), estimate_row_support(stacked, l));
}

TEST(RowSupport, WorkIsKMQ)
{
    const auto s = make_scenario(desk_geometry(), 24, 0.0, 1);
    StageWork work;
    estimate_row_support(s.meas, 3, &work);
    EXPECT_EQ(work.row_support, std::uint64_t(8 * 16 * 24));
}

TEST(OmpInner, SingleAtomExactRecovery)
{
    const auto sensing = random_sensing(8, 8, 16, 4);
    const Index c = 37;
    const CVector y = sensing.theta_tilde.col(c) * Complex(0.3, -1.2);
    const auto r = omp_inner(y, sensing, 1);
    EXPECT_EQ(r.support, Support{c});
    EXPECT_LT(r.residual.norm(), 1e-10);
    EXPECT_NEAR(std::abs(r.coeffs(0) - Complex(0.3, -1.2)), 0.0, 1e-10);
}

TEST(OmpInner, ZeroIterations)
{
    const auto sensing = random_sensing(8, 8, 16, 4);
    const CVector y = random_matrix(16, 1, 5).col(0);
    const auto r = omp_inner(y, sensing, 0);
    EXPECT_TRUE(r.support.empty());
    EXPECT_EQ(r.residual, y);
}

TEST(OmpInner, RecoversThreeSparseVectors)
{
    const Index q = 32, n = 64;
    int successes = 0;
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 100; ++trial)
    {
        const auto sensing = random_sensing(8, 8, q, 100 + std::uint64_t(trial));
        Support truth;
        std::uniform_int_distribution<Index> pick(0, n - 1);
        while (truth.size() < 3)
        {
            const Index c = pick(rng);
            if (std::find(truth.begin(), truth.end(), c) == truth.end())
                truth.push_back(c);
        }
        const CVector coeffs = random_matrix(3, 1, 500 + std::uint64_t(trial)).col(0);
        CVector y = CVector::Zero(q);
        for (std::size_t i = 0; i < 3; ++i)
            y += coeffs(Index(i)) * sensing.theta_tilde.col(truth[i]);
        successes += sorted(omp_inner(y, sensing, 3).support) == sorted(truth);
    }
    EXPECT_GE(successes, 99);
}

TEST(OmpInner, InitialSupportIsFittedAndKept)
{
    const auto sensing = random_sensing(8, 8, 16, 7);
    const CVector y = 2.0 * sensing.theta_tilde.col(3) - sensing.theta_tilde.col(50);
    const auto r = omp_inner(y, sensing, 1, {3});
    ASSERT_EQ(r.support.size(), 2u);
    EXPECT_EQ(r.support[0], 3);
    EXPECT_EQ(r.support[1], 50);
    EXPECT_LT(r.residual.norm(), 1e-10);

    const auto init_only = omp_inner(y, sensing, 0, {3, 50});
    EXPECT_LT(init_only.residual.norm(), 1e-10);
}

TEST(OmpInner, NeverReselectsAColumn)
{
    const auto sensing = random_sensing(4, 4, 16, 8);
    const CVector y = random_matrix(16, 1, 9).col(0);
    const auto r = omp_inner(y, sensing, 16);
    EXPECT_EQ(std::set<Index>(r.support.begin(), r.support.end()).size(), 16u);
}

TEST(OmpInner, PreconditionsAndSingularity)
{
    const auto sensing = random_sensing(8, 8, 4, 8);
    const CVector y = random_matrix(4, 1, 1).col(0);
    EXPECT_THROW(omp_inner(y, sensing, 5), InvalidArgumentError);
    EXPECT_THROW(omp_inner(y, sensing, 3, {1, 2}), InvalidArgumentError);
    EXPECT_THROW(omp_inner(y, sensing, -1), InvalidArgumentError);
    EXPECT_THROW(omp_inner(random_matrix(5, 1, 1).col(0), sensing, 1), ShapeError);
    EXPECT_THROW(restricted_least_squares(sensing, {2, 2}, y), SingularSystemError);
}

TEST(CommonCols, ZeroCommonPathsGivesEmptySets)
{
    const auto s = make_scenario(desk_geometry(0), 32, 0.0, 1);
    const auto common = estimate_common_cols(s.meas, s.sensing, s.channel.supports.rows,
                                             std::vector<Index>(8, 4), 0);
    ASSERT_EQ(common.size(), 3u);
    for (const auto &c : common)
        EXPECT_TRUE(c.empty());
}

TEST(CommonCols, SingleVoterKeepsLowestPicks)
{
    const auto s = make_scenario(desk_geometry(), 32, 5.0, 2);
    MeasurementSet one;
    one.y_tilde = {s.meas.y_tilde[0]};
    const auto common = estimate_common_cols(one, s.sensing, s.channel.supports.rows, {4}, 2);
    for (std::size_t l = 0; l < common.size(); ++l)
    {
        const auto picks = sorted(omp_inner(one.y_tilde[0].col(s.channel.supports.rows[l]), s.sensing, 4).support);
        EXPECT_EQ(common[l], (Support{picks[0], picks[1]}));
    }
}

TEST(CommonCols, NoiselessRecoversSharedColumns)
{
    int hits = 0;
    for (std::uint64_t trial = 0; trial < 100; ++trial)
    {
        const auto s = make_scenario(desk_geometry(2), 64, kNoiseless, 300 + trial);
        const auto common = estimate_common_cols(s.meas, s.sensing, s.channel.supports.rows,
                                                 std::vector<Index>(8, 4), 2);
        bool ok = true;
        for (std::size_t l = 0; l < common.size(); ++l)
            ok = ok && is_subset(s.channel.supports.common_columns[l], common[l]);
        hits += ok;
    }
    EXPECT_GE(hits, 95);
}

TEST(UserCols, FullySharedNeedsNoIterations)
{
    const auto s = make_scenario(desk_geometry(4), 32, 0.0, 3);
    const auto common = estimate_common_cols(s.meas, s.sensing, s.channel.supports.rows,
                                             std::vector<Index>(8, 4), 4);
    StageWork work;
    const auto cols = estimate_user_cols(s.meas, s.sensing, s.channel.supports.rows, common,
                                         std::vector<Index>(8, 4), 4, &work);
    for (const auto &user : cols)
        EXPECT_EQ(user, common);
    // Only the initial least-squares fits ran: no N x Q correlation sweeps.
    EXPECT_LT(work.user_columns, std::uint64_t(8 * 3) * std::uint64_t(64 * 32));
}

TEST(UserCols, NoCommonColumnsIsPlainPerRowOmp)
{
    const auto s = make_scenario(desk_geometry(0), 24, 0.0, 4);
    const auto rows = s.channel.supports.rows;
    const auto cols = estimate_user_cols(s.meas, s.sensing, rows, RowColumnSupports(rows.size()),
                                         std::vector<Index>(8, 4), 0);
    for (Index k = 0; k < 8; ++k)
        for (std::size_t l = 0; l < rows.size(); ++l)
            EXPECT_EQ(cols[std::size_t(k)][l],
                      sorted(omp_inner(s.meas.y_tilde[std::size_t(k)].col(rows[l]), s.sensing, 4).support));
}

TEST(UserCols, NoiselessWithTrueRowsAndCommonColumns)
{
    int hits = 0;
    for (std::uint64_t trial = 0; trial < 100; ++trial)
    {
        const auto s = make_scenario(desk_geometry(2), 32, kNoiseless, 700 + trial);
        const auto cols = estimate_user_cols(s.meas, s.sensing, s.channel.supports.rows,
                                             s.channel.supports.common_columns, std::vector<Index>(8, 4), 2);
        hits += cols == s.channel.supports.columns;
    }
    EXPECT_GE(hits, 95);
}

TEST(UserCols, RejectsWrongCommonSizes)
{
    const auto s = make_scenario(desk_geometry(2), 32, 0.0, 5);
    EXPECT_THROW(estimate_user_cols(s.meas, s.sensing, s.channel.supports.rows, RowColumnSupports(3),
                                    std::vector<Index>(8, 4), 2),
                 InvalidArgumentError);
}

TEST(LsReconstruct, TrueSupportNoiselessIsExact)
{
    const auto s = make_scenario(desk_geometry(), 16, kNoiseless, 6);
    const auto est = oracle_ls(s.meas, s.sensing, s.channel.supports, s.um, s.un);
    for (std::size_t k = 0; k < est.angular.size(); ++k)
    {
        EXPECT_LT(relative_error(est.angular[k], s.channel.angular[k]), 1e-9);
        EXPECT_LT(relative_error(est.spatial[k], s.channel.cascaded[k]), 1e-9);
    }
}

TEST(LsReconstruct, EmptySupportGivesZero)
{
    const auto s = make_scenario(desk_geometry(), 16, 0.0, 6);
    SupportEstimate empty;
    empty.user_rows.assign(8, Support{});
    empty.user_cols.assign(8, RowColumnSupports{});
    const auto est = ls_reconstruct(s.meas, s.sensing, empty, s.um, s.un);
    for (const auto &h : est.spatial)
        EXPECT_EQ(max_abs(h), 0.0);
}

TEST(LsReconstruct, SupersetOfTruthStaysExact)
{
    const auto s = make_scenario(desk_geometry(), 16, kNoiseless, 7);
    auto support = support_from_truth(s.channel.supports);
    for (auto &user : support.user_cols)
        for (auto &cols : user)
        {
            Index extra = 0;
            while (std::find(cols.begin(), cols.end(), extra) != cols.end())
                ++extra;
            cols.push_back(extra);
            std::sort(cols.begin(), cols.end());
        }
    const auto est = ls_reconstruct(s.meas, s.sensing, support, s.um, s.un);
    for (std::size_t k = 0; k < est.angular.size(); ++k)
        EXPECT_LT(relative_error(est.angular[k], s.channel.angular[k]), 1e-9);
}

TEST(Estimators, SingleUserBaselineEqualsRowStructured)
{
    auto g = desk_geometry(2);
    g.k_users = 1;
    for (std::uint64_t seed = 0; seed < 5; ++seed)
    {
        const auto s = make_scenario(g, 24, 0.0, seed);
        const auto levels = SparsityLevels::from_geometry(g);
        const auto a = baseline_omp(s.meas, s.sensing, levels, s.um, s.un);
        const auto b = row_structured_omp(s.meas, s.sensing, levels, s.um, s.un);
        EXPECT_EQ(a.angular[0], b.angular[0]);
        EXPECT_EQ(a.support.user_cols, b.support.user_cols);
    }
}

TEST(Estimators, NoiselessGenerousPilotsRecoverExactly)
{
    const auto g = desk_geometry(2);
    const auto levels = SparsityLevels::from_geometry(g);
    for (std::uint64_t seed = 0; seed < 5; ++seed)
    {
        const auto s = make_scenario(g, 48, kNoiseless, 40 + seed);
        EXPECT_LT(nmse(ds_omp(s.meas, s.sensing, levels, s.um, s.un).spatial, s.channel.cascaded), 1e-9);
        EXPECT_LT(nmse(row_structured_omp(s.meas, s.sensing, levels, s.um, s.un).spatial, s.channel.cascaded), 1e-9);
        EXPECT_LT(nmse(baseline_omp(s.meas, s.sensing, levels, s.um, s.un).spatial, s.channel.cascaded), 1e-9);
    }
}

TEST(Estimators, DsOmpWithoutCommonPathsEqualsRowStructured)
{
    const auto g = desk_geometry(0);
    const auto levels = SparsityLevels::from_geometry(g);
    for (std::uint64_t seed = 0; seed < 5; ++seed)
    {
        const auto s = make_scenario(g, 20, 0.0, seed);
        const auto a = ds_omp(s.meas, s.sensing, levels, s.um, s.un);
        const auto b = row_structured_omp(s.meas, s.sensing, levels, s.um, s.un);
        for (std::size_t k = 0; k < a.angular.size(); ++k)
            EXPECT_EQ(a.angular[k], b.angular[k]);
    }
}

TEST(Estimators, BaselineNoBetterThanDsOmpOnAverage)
{
    const auto g = desk_geometry(2);
    const auto levels = SparsityLevels::from_geometry(g);
    double ds = 0.0, base = 0.0;
    for (std::uint64_t seed = 0; seed < 40; ++seed)
    {
        const auto s = make_scenario(g, 16, 0.0, 900 + seed);
        ds += nmse(ds_omp(s.meas, s.sensing, levels, s.um, s.un).spatial, s.channel.cascaded);
        base += nmse(baseline_omp(s.meas, s.sensing, levels, s.um, s.un).spatial, s.channel.cascaded);
    }
    EXPECT_LE(ds, base);
}

TEST(Estimators, SupportContainmentAndSparsityBudget)
{
    const auto g = desk_geometry(2);
    const auto levels = SparsityLevels::from_geometry(g);
    for (std::uint64_t seed = 0; seed < 10; ++seed)
    {
        const auto s = make_scenario(g, 16, 0.0, 50 + seed);
        for (auto kind : all_estimators())
        {
            const auto est = run_estimator(kind, s.meas, s.sensing, levels, s.um, s.un, &s.channel.supports);
            for (const auto &a : est.angular)
                EXPECT_LE((a.array() != Complex(0.0)).count(), g.l_g * g.l_r);
            if (kind != EstimatorKind::ds_omp)
                continue;
            for (const auto &user : est.support.user_cols)
                for (std::size_t l = 0; l < user.size(); ++l)
                {
                    EXPECT_EQ(Index(est.support.common_cols[l].size()), g.l_c);
                    EXPECT_EQ(Index(user[l].size()), g.l_r);
                    EXPECT_TRUE(is_subset(est.support.common_cols[l], user[l]));
                }
        }
    }
}

TEST(Estimators, SupportSelectionIsScaleInvariant)
{
    const auto g = desk_geometry(2);
    const auto levels = SparsityLevels::from_geometry(g);
    const auto s = make_scenario(g, 20, 0.0, 61);
    auto scaled = s.meas;
    for (auto &y : scaled.y_tilde)
        y *= 4.0;
    const auto a = ds_omp(s.meas, s.sensing, levels, s.um, s.un);
    const auto b = ds_omp(scaled, s.sensing, levels, s.um, s.un);
    EXPECT_EQ(a.support.row_support, b.support.row_support);
    EXPECT_EQ(a.support.common_cols, b.support.common_cols);
    EXPECT_EQ(a.support.user_cols, b.support.user_cols);
}

TEST(Estimators, DeterministicAcrossRuns)
{
    const auto g = desk_geometry(2);
    const auto levels = SparsityLevels::from_geometry(g);
    const auto s = make_scenario(g, 20, 0.0, 62);
    const auto a = ds_omp(s.meas, s.sensing, levels, s.um, s.un);
    const auto b = ds_omp(s.meas, s.sensing, levels, s.um, s.un);
    for (std::size_t k = 0; k < a.angular.size(); ++k)
        EXPECT_EQ(a.spatial[k], b.spatial[k]);
}

TEST(Estimators, OracleNeedsTruthAndNamesRoundTrip)
{
    const auto s = make_scenario(desk_geometry(), 16, 0.0, 63);
    EXPECT_THROW(run_estimator(EstimatorKind::oracle_ls, s.meas, s.sensing, SparsityLevels::from_geometry(s.geom),
                               s.um, s.un),
                 InvalidArgumentError);
    for (auto kind : all_estimators())
        EXPECT_EQ(parse_estimator(to_string(kind)), kind);
    EXPECT_FALSE(parse_estimator("omp").has_value());
}

TEST(Estimators, LevelsValidation)
{
    const auto s = make_scenario(desk_geometry(), 16, 0.0, 64);
    auto levels = SparsityLevels::from_geometry(s.geom);
    levels.l_c = 5;
    EXPECT_THROW(ds_omp(s.meas, s.sensing, levels, s.um, s.un), InvalidArgumentError);
    levels = SparsityLevels::from_geometry(s.geom);
    levels.l_r.pop_back();
    EXPECT_THROW(ds_omp(s.meas, s.sensing, levels, s.um, s.un), ShapeError);
    levels = SparsityLevels::from_geometry(s.geom);
    levels.l_r[0] = 17;
    EXPECT_THROW(ds_omp(s.meas, s.sensing, levels, s.um, s.un), InvalidArgumentError);
}

TEST(Estimators, PerUserPathCounts)
{
    const auto g = desk_geometry(1);
    const auto s = make_scenario(g, 24, 10.0, 65);
    auto levels = SparsityLevels::from_geometry(g);
    levels.l_r = {4, 3, 4, 2, 4, 4, 1, 4};
    const auto est = ds_omp(s.meas, s.sensing, levels, s.um, s.un);
    for (std::size_t k = 0; k < levels.l_r.size(); ++k)
        for (const auto &cols : est.support.user_cols[k])
            EXPECT_EQ(Index(cols.size()), levels.l_r[k]);
}
