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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dsomp/angular_model.hpp"
#include "dsomp/channel_gen.hpp"
#include "dsomp/pilot_sensing.hpp"

namespace dsomp
{
    // Sparsity levels handed to the estimators. `l_r` holds one entry per user.
    struct SparsityLevels
    {
        Index l_g = 0;
        std::vector<Index> l_r;
        Index l_c = 0;

        static SparsityLevels from_geometry(const SystemGeometry &geom);
        void validate(Index k_users, Index m, Index n, Index q) const;
    };

    // Supports selected by an estimator.
    //
    // `user_rows[k]` lists the rows used for user k and `user_cols[k][i]` the columns
    // of row `user_rows[k][i]`. Joint estimators use the same rows for every user and
    // also report them in `row_support`; the per-user baseline leaves `row_support`
    // empty. `common_cols[i]` is empty unless the common-column stage ran.
    struct SupportEstimate
    {
        Support row_support;
        RowColumnSupports common_cols;
        std::vector<Support> user_rows;
        std::vector<RowColumnSupports> user_cols;
    };

    struct EstimationResult
    {
        std::vector<CMatrix> angular; // estimated angular cascaded channels, M x N
        std::vector<CMatrix> spatial; // from_angular(angular)
        SupportEstimate support;
    };

    // Complex multiply-accumulate counts per stage. Pass a pointer to collect them.
    struct StageWork
    {
        std::uint64_t row_support = 0;
        std::uint64_t common_columns = 0;
        std::uint64_t user_columns = 0;
        std::uint64_t reconstruction = 0;
    };

    // Sorted indices of the `count` largest scores; ties go to the lower index.
    Support top_indices(const Eigen::VectorXd &scores, Index count);

    // Least-squares coefficients of `y` on the sensing columns in `columns` (in that order),
    // computed with a column-pivoted Householder QR.
    // Throws SingularSystemError if the selected columns are rank deficient.
    CVector restricted_least_squares(const SensingMatrix &sensing, const Support &columns, const CVector &y,
                                     std::uint64_t *work = nullptr);

    struct OmpResult
    {
        Support support;  // in selection order, starting with the initial support
        CVector residual; // y - Theta_tilde(:, support) * coeffs
        CVector coeffs;   // aligned with `support`
    };

    // Orthogonal matching pursuit on a single measurement vector.
    // Starts from `init_support` (fitted by least squares when non-empty) and adds
    // `n_iters` columns, each the one most correlated with the current residual.
    // Columns already in the support are never re-selected.
    OmpResult omp_inner(const CVector &y, const SensingMatrix &sensing, Index n_iters,
                        const Support &init_support = {}, std::uint64_t *work = nullptr);

    // Stage 1: rows with the largest total received power summed over all users.
    Support estimate_row_support(const MeasurementSet &measurements, Index l_g, StageWork *work = nullptr);

    // Stage 2: for every row, each user runs l_r[k] OMP iterations and votes for the
    // columns it selects; the l_c most voted columns form the common support of that row.
    RowColumnSupports estimate_common_cols(const MeasurementSet &measurements, const SensingMatrix &sensing,
                                           const Support &row_support, const std::vector<Index> &l_r, Index l_c,
                                           StageWork *work = nullptr);

    // Stage 3: every (row, user) pair starts from the common columns of that row and adds
    // l_r[k] - l_c columns by OMP. Result is indexed [k][row].
    std::vector<RowColumnSupports> estimate_user_cols(const MeasurementSet &measurements,
                                                      const SensingMatrix &sensing, const Support &row_support,
                                                      const RowColumnSupports &common_cols,
                                                      const std::vector<Index> &l_r, Index l_c,
                                                      StageWork *work = nullptr);

    // Least-squares channel estimate on a fixed support.
    EstimationResult ls_reconstruct(const MeasurementSet &measurements, const SensingMatrix &sensing,
                                    const SupportEstimate &support, const Dictionary &um, const Dictionary &un,
                                    StageWork *work = nullptr);

    // Double-structured OMP: joint rows, joint common columns, per-user completion, LS.
    // With l_c = 0 the common-column stage is skipped.
    EstimationResult ds_omp(const MeasurementSet &measurements, const SensingMatrix &sensing,
                            const SparsityLevels &levels, const Dictionary &um, const Dictionary &un,
                            StageWork *work = nullptr);

    // Joint rows, then independent OMP per (user, row).
    EstimationResult row_structured_omp(const MeasurementSet &measurements, const SensingMatrix &sensing,
                                        const SparsityLevels &levels, const Dictionary &um, const Dictionary &un,
                                        StageWork *work = nullptr);

    // Conventional single-user OMP: every user picks its own L_G strongest rows from its
    // own pilots and runs l_r OMP iterations on each. No information is shared across users.
    EstimationResult baseline_omp(const MeasurementSet &measurements, const SensingMatrix &sensing,
                                  const SparsityLevels &levels, const Dictionary &um, const Dictionary &un,
                                  StageWork *work = nullptr);

    // Least squares on the true supports.
    EstimationResult oracle_ls(const MeasurementSet &measurements, const SensingMatrix &sensing,
                               const TrueSupports &truth, const Dictionary &um, const Dictionary &un);

    SupportEstimate support_from_truth(const TrueSupports &truth);

    enum class EstimatorKind
    {
        ds_omp,
        row_structured,
        baseline_omp,
        oracle_ls,
    };

    std::string_view to_string(EstimatorKind kind);
    std::optional<EstimatorKind> parse_estimator(std::string_view name);
    const std::vector<EstimatorKind> &all_estimators();

    // Dispatches to one of the estimators above. `truth` is required for oracle_ls only.
    EstimationResult run_estimator(EstimatorKind kind, const MeasurementSet &measurements,
                                   const SensingMatrix &sensing, const SparsityLevels &levels,
                                   const Dictionary &um, const Dictionary &un, const TrueSupports *truth = nullptr);
}
