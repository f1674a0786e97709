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

#include "dsomp/estimators.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <string>

#include "dsomp/errors.hpp"

namespace dsomp
{
    SparsityLevels SparsityLevels::from_geometry(const SystemGeometry &geom)
    {
        return {geom.l_g, std::vector<Index>(std::size_t(geom.k_users), geom.l_r), geom.l_c};
    }

    void SparsityLevels::validate(Index k_users, Index m, Index n, Index q) const
    {
        if (l_g < 1 || l_g > m)
            throw InvalidArgumentError("L_G = " + std::to_string(l_g) + " must lie in [1, " + std::to_string(m) + "]");
        if (Index(l_r.size()) != k_users)
            throw ShapeError("expected " + std::to_string(k_users) + " per-user path counts, got " +
                             std::to_string(l_r.size()));
        for (Index lr : l_r)
        {
            if (lr < 0 || lr > n)
                throw InvalidArgumentError("L_r = " + std::to_string(lr) + " must lie in [0, " + std::to_string(n) + "]");
            if (lr > q)
                throw InvalidArgumentError("L_r = " + std::to_string(lr) + " exceeds the " + std::to_string(q) +
                                           " pilot slots; the least-squares fit would be underdetermined");
            if (l_c > lr)
                throw InvalidArgumentError("L_c = " + std::to_string(l_c) + " exceeds L_r = " + std::to_string(lr));
        }
        if (l_c < 0)
            throw InvalidArgumentError("L_c must be non-negative");
    }

    Support top_indices(const Eigen::VectorXd &scores, Index count)
    {
        count = std::clamp<Index>(count, 0, scores.size());
        std::vector<Index> order(std::size_t(scores.size()));
        std::iota(order.begin(), order.end(), Index(0));
        std::partial_sort(order.begin(), order.begin() + count, order.end(),
                          [&](Index a, Index b)
                          { return scores(a) > scores(b) || (scores(a) == scores(b) && a < b); });
        Support top(order.begin(), order.begin() + count);
        std::sort(top.begin(), top.end());
        return top;
    }

    CVector restricted_least_squares(const SensingMatrix &sensing, const Support &columns, const CVector &y,
                                     std::uint64_t *work)
    {
        if (y.size() != sensing.q())
            throw ShapeError("measurement vector has " + std::to_string(y.size()) + " entries, sensing matrix has " +
                             std::to_string(sensing.q()) + " rows");
        const auto s = Index(columns.size());
        if (s == 0)
            return CVector(0);
        if (s > sensing.q())
            throw SingularSystemError("cannot fit " + std::to_string(s) + " coefficients from " +
                                      std::to_string(sensing.q()) + " measurements");

        CMatrix a(sensing.q(), s);
        for (Index i = 0; i < s; ++i)
            a.col(i) = sensing.theta_tilde.col(columns[std::size_t(i)]);

        Eigen::ColPivHouseholderQR<CMatrix> qr(a);
        if (qr.rank() < s)
            throw SingularSystemError("selected sensing columns are rank deficient (rank " +
                                      std::to_string(qr.rank()) + " < " + std::to_string(s) + ")");
        if (work)
            *work += std::uint64_t(sensing.q() * s * s);
        return qr.solve(y);
    }

    namespace
    {
        CMatrix gather_columns(const SensingMatrix &sensing, const Support &columns)
        {
            CMatrix a(sensing.q(), Index(columns.size()));
            for (std::size_t i = 0; i < columns.size(); ++i)
                a.col(Index(i)) = sensing.theta_tilde.col(columns[i]);
            return a;
        }

        void refit(const CVector &y, const SensingMatrix &sensing, OmpResult &state, std::uint64_t *work)
        {
            state.coeffs = restricted_least_squares(sensing, state.support, y, work);
            state.residual = y - gather_columns(sensing, state.support) * state.coeffs;
            if (work)
                *work += std::uint64_t(sensing.q() * Index(state.support.size()));
        }

        Support sorted(Support s)
        {
            std::sort(s.begin(), s.end());
            return s;
        }

        void check_measurements(const MeasurementSet &meas, const SensingMatrix &sensing)
        {
            if (meas.y_tilde.empty())
                throw InvalidArgumentError("measurement set has no users");
            for (const auto &y : meas.y_tilde)
                if (y.rows() != sensing.q() || y.cols() != meas.m())
                    throw ShapeError("measurement matrices must be " + std::to_string(sensing.q()) + " x " +
                                     std::to_string(meas.m()));
        }

        void check_rows(const Support &rows, Index m)
        {
            for (Index r : rows)
                if (r < 0 || r >= m)
                    throw RangeError("row index " + std::to_string(r) + " outside [0, " + std::to_string(m) + ")");
        }

        Eigen::VectorXd column_power(const CMatrix &y, std::uint64_t *work)
        {
            Eigen::VectorXd g = Eigen::VectorXd::Zero(y.cols());
            for (Index m = 0; m < y.cols(); ++m)
                for (Index q = 0; q < y.rows(); ++q)
                    g(m) += std::norm(y(q, m));
            if (work)
                *work += std::uint64_t(y.size());
            return g;
        }

        std::uint64_t *slot(StageWork *work, std::uint64_t StageWork::*member)
        {
            return work ? &(work->*member) : nullptr;
        }
    }

    OmpResult omp_inner(const CVector &y, const SensingMatrix &sensing, Index n_iters, const Support &init_support,
                        std::uint64_t *work)
    {
        if (n_iters < 0)
            throw InvalidArgumentError("OMP iteration count must be non-negative");
        if (y.size() != sensing.q())
            throw ShapeError("measurement vector has " + std::to_string(y.size()) + " entries, sensing matrix has " +
                             std::to_string(sensing.q()) + " rows");
        const Index final_size = Index(init_support.size()) + n_iters;
        if (final_size > sensing.q() || final_size > sensing.n())
            throw InvalidArgumentError("OMP would select " + std::to_string(final_size) + " columns from a " +
                                       std::to_string(sensing.q()) + " x " + std::to_string(sensing.n()) +
                                       " sensing matrix");
        for (Index c : init_support)
            if (c < 0 || c >= sensing.n())
                throw RangeError("initial support index " + std::to_string(c) + " out of range");

        OmpResult state{init_support, y, CVector(0)};
        if (!init_support.empty())
            refit(y, sensing, state, work);

        std::vector<char> taken(std::size_t(sensing.n()), 0);
        for (Index c : state.support)
            taken[std::size_t(c)] = 1;

        for (Index it = 0; it < n_iters; ++it)
        {
            const CVector corr = sensing.theta_tilde.adjoint() * state.residual;
            if (work)
                *work += std::uint64_t(sensing.n() * sensing.q());

            Index best = -1;
            double best_score = -1.0;
            for (Index n = 0; n < corr.size(); ++n)
            {
                if (taken[std::size_t(n)])
                    continue;
                const double score = std::norm(corr(n));
                if (score > best_score)
                {
                    best_score = score;
                    best = n;
                }
            }
            taken[std::size_t(best)] = 1;
            state.support.push_back(best);
            refit(y, sensing, state, work);
        }
        return state;
    }

    Support estimate_row_support(const MeasurementSet &measurements, Index l_g, StageWork *work)
    {
        if (measurements.y_tilde.empty())
            throw InvalidArgumentError("measurement set has no users");
        if (l_g < 0 || l_g > measurements.m())
            throw InvalidArgumentError("L_G = " + std::to_string(l_g) + " exceeds the " +
                                       std::to_string(measurements.m()) + " BS beams");

        Eigen::VectorXd g = Eigen::VectorXd::Zero(measurements.m());
        for (const auto &y : measurements.y_tilde)
            g += column_power(y, slot(work, &StageWork::row_support));
        return top_indices(g, l_g);
    }

    RowColumnSupports estimate_common_cols(const MeasurementSet &measurements, const SensingMatrix &sensing,
                                           const Support &row_support, const std::vector<Index> &l_r, Index l_c,
                                           StageWork *work)
    {
        check_measurements(measurements, sensing);
        check_rows(row_support, measurements.m());
        if (Index(l_r.size()) != measurements.k_users())
            throw ShapeError("one L_r per user is required");

        RowColumnSupports common(row_support.size());
        if (l_c == 0)
            return common;

        for (std::size_t i = 0; i < row_support.size(); ++i)
        {
            // Votes are integer counts summed over users, so the order of users is irrelevant.
            Eigen::VectorXd votes = Eigen::VectorXd::Zero(sensing.n());
            for (Index k = 0; k < measurements.k_users(); ++k)
            {
                const CVector y = measurements.y_tilde[std::size_t(k)].col(row_support[i]);
                const auto picks = omp_inner(y, sensing, l_r[std::size_t(k)], {},
                                             slot(work, &StageWork::common_columns));
                for (Index c : picks.support)
                    votes(c) += 1.0;
            }
            common[i] = top_indices(votes, l_c);
        }
        return common;
    }

    std::vector<RowColumnSupports> estimate_user_cols(const MeasurementSet &measurements,
                                                      const SensingMatrix &sensing, const Support &row_support,
                                                      const RowColumnSupports &common_cols,
                                                      const std::vector<Index> &l_r, Index l_c, StageWork *work)
    {
        check_measurements(measurements, sensing);
        check_rows(row_support, measurements.m());
        if (common_cols.size() != row_support.size())
            throw ShapeError("one common column support per row is required");
        if (Index(l_r.size()) != measurements.k_users())
            throw ShapeError("one L_r per user is required");
        for (const auto &c : common_cols)
            if (Index(c.size()) != l_c)
                throw InvalidArgumentError("common column supports must have exactly L_c = " + std::to_string(l_c) +
                                           " entries");

        std::vector<RowColumnSupports> user_cols(std::size_t(measurements.k_users()));
        for (Index k = 0; k < measurements.k_users(); ++k)
            for (std::size_t i = 0; i < row_support.size(); ++i)
            {
                const CVector y = measurements.y_tilde[std::size_t(k)].col(row_support[i]);
                const auto fit = omp_inner(y, sensing, l_r[std::size_t(k)] - l_c, common_cols[i],
                                           slot(work, &StageWork::user_columns));
                user_cols[std::size_t(k)].push_back(sorted(fit.support));
            }
        return user_cols;
    }

    EstimationResult ls_reconstruct(const MeasurementSet &measurements, const SensingMatrix &sensing,
                                    const SupportEstimate &support, const Dictionary &um, const Dictionary &un,
                                    StageWork *work)
    {
        check_measurements(measurements, sensing);
        if (measurements.m() != um.total() || sensing.n() != un.total())
            throw ShapeError("dictionaries do not match the measurement dimensions");
        const Index k_users = measurements.k_users();
        if (Index(support.user_rows.size()) != k_users || Index(support.user_cols.size()) != k_users)
            throw ShapeError("support estimate must cover every user");

        EstimationResult out;
        out.support = support;
        for (Index k = 0; k < k_users; ++k)
        {
            const auto &rows = support.user_rows[std::size_t(k)];
            const auto &cols = support.user_cols[std::size_t(k)];
            if (rows.size() != cols.size())
                throw ShapeError("user " + std::to_string(k) + ": one column support per row is required");
            check_rows(rows, measurements.m());

            // The sparse unknown is the conjugate transpose of the angular channel.
            CMatrix angular = CMatrix::Zero(measurements.m(), sensing.n());
            for (std::size_t i = 0; i < rows.size(); ++i)
            {
                const CVector y = measurements.y_tilde[std::size_t(k)].col(rows[i]);
                const CVector coeffs = restricted_least_squares(sensing, cols[i], y,
                                                                slot(work, &StageWork::reconstruction));
                for (std::size_t j = 0; j < cols[i].size(); ++j)
                    angular(rows[i], cols[i][j]) = std::conj(coeffs(Index(j)));
            }
            out.spatial.push_back(from_angular(angular, um, un));
            out.angular.push_back(std::move(angular));
        }
        return out;
    }

    EstimationResult ds_omp(const MeasurementSet &measurements, const SensingMatrix &sensing,
                            const SparsityLevels &levels, const Dictionary &um, const Dictionary &un, StageWork *work)
    {
        check_measurements(measurements, sensing);
        levels.validate(measurements.k_users(), measurements.m(), sensing.n(), sensing.q());

        SupportEstimate est;
        est.row_support = estimate_row_support(measurements, levels.l_g, work);
        if (levels.l_c > 0)
            est.common_cols = estimate_common_cols(measurements, sensing, est.row_support, levels.l_r, levels.l_c, work);
        else
            est.common_cols.assign(est.row_support.size(), Support{});
        est.user_cols = estimate_user_cols(measurements, sensing, est.row_support, est.common_cols, levels.l_r,
                                           levels.l_c, work);
        est.user_rows.assign(std::size_t(measurements.k_users()), est.row_support);
        return ls_reconstruct(measurements, sensing, est, um, un, work);
    }

    EstimationResult row_structured_omp(const MeasurementSet &measurements, const SensingMatrix &sensing,
                                        const SparsityLevels &levels, const Dictionary &um, const Dictionary &un,
                                        StageWork *work)
    {
        check_measurements(measurements, sensing);
        levels.validate(measurements.k_users(), measurements.m(), sensing.n(), sensing.q());

        SupportEstimate est;
        est.row_support = estimate_row_support(measurements, levels.l_g, work);
        est.common_cols.assign(est.row_support.size(), Support{});
        est.user_cols = estimate_user_cols(measurements, sensing, est.row_support, est.common_cols, levels.l_r, 0,
                                           work);
        est.user_rows.assign(std::size_t(measurements.k_users()), est.row_support);
        return ls_reconstruct(measurements, sensing, est, um, un, work);
    }

    EstimationResult baseline_omp(const MeasurementSet &measurements, const SensingMatrix &sensing,
                                  const SparsityLevels &levels, const Dictionary &um, const Dictionary &un,
                                  StageWork *work)
    {
        check_measurements(measurements, sensing);
        levels.validate(measurements.k_users(), measurements.m(), sensing.n(), sensing.q());

        SupportEstimate est;
        for (Index k = 0; k < measurements.k_users(); ++k)
        {
            MeasurementSet single;
            single.y_tilde.push_back(measurements.y_tilde[std::size_t(k)]);
            const Support rows = estimate_row_support(single, levels.l_g, work);
            const std::vector<Index> lr{levels.l_r[std::size_t(k)]};
            auto cols = estimate_user_cols(single, sensing, rows, RowColumnSupports(rows.size()), lr, 0, work);
            est.user_rows.push_back(rows);
            est.user_cols.push_back(std::move(cols.front()));
        }
        est.common_cols.assign(std::size_t(levels.l_g), Support{});
        return ls_reconstruct(measurements, sensing, est, um, un, work);
    }

    SupportEstimate support_from_truth(const TrueSupports &truth)
    {
        SupportEstimate est;
        est.row_support = truth.rows;
        est.common_cols = truth.common_columns;
        est.user_rows.assign(truth.columns.size(), truth.rows);
        est.user_cols = truth.columns;
        return est;
    }

    EstimationResult oracle_ls(const MeasurementSet &measurements, const SensingMatrix &sensing,
                               const TrueSupports &truth, const Dictionary &um, const Dictionary &un)
    {
        return ls_reconstruct(measurements, sensing, support_from_truth(truth), um, un);
    }

    namespace
    {
        constexpr std::array<std::pair<EstimatorKind, std::string_view>, 4> kNames{{
            {EstimatorKind::ds_omp, "ds_omp"},
            {EstimatorKind::row_structured, "row_structured"},
            {EstimatorKind::baseline_omp, "baseline_omp"},
            {EstimatorKind::oracle_ls, "oracle_ls"},
        }};
    }

    std::string_view to_string(EstimatorKind kind)
    {
        for (const auto &[k, name] : kNames)
            if (k == kind)
                return name;
        return "unknown";
    }

    std::optional<EstimatorKind> parse_estimator(std::string_view name)
    {
        for (const auto &[k, n] : kNames)
            if (n == name)
                return k;
        return std::nullopt;
    }

    const std::vector<EstimatorKind> &all_estimators()
    {
        static const std::vector<EstimatorKind> all{EstimatorKind::ds_omp, EstimatorKind::row_structured,
                                                    EstimatorKind::baseline_omp, EstimatorKind::oracle_ls};
        return all;
    }

    EstimationResult run_estimator(EstimatorKind kind, const MeasurementSet &measurements,
                                   const SensingMatrix &sensing, const SparsityLevels &levels,
                                   const Dictionary &um, const Dictionary &un, const TrueSupports *truth)
    {
        switch (kind)
        {
        case EstimatorKind::ds_omp:
            return ds_omp(measurements, sensing, levels, um, un);
        case EstimatorKind::row_structured:
            return row_structured_omp(measurements, sensing, levels, um, un);
        case EstimatorKind::baseline_omp:
            return baseline_omp(measurements, sensing, levels, um, un);
        case EstimatorKind::oracle_ls:
            if (!truth)
                throw InvalidArgumentError("oracle_ls needs the true supports");
            return oracle_ls(measurements, sensing, *truth, um, un);
        }
        throw InvalidArgumentError("unknown estimator");
    }
}
