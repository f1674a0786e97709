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
#include <string>
#include <vector>

#include "dsomp/channel_gen.hpp"
#include "dsomp/estimators.hpp"

namespace dsomp
{
    struct ExperimentConfig
    {
        SystemGeometry geom;   // geom.l_c is overridden by every entry of l_c_values
        GainModel gains;
        double snr_db = 0.0;   // kNoiseless for noise-free pilots
        std::vector<Index> q_values{16, 32, 48, 64, 80, 96, 112, 128};
        std::vector<Index> l_c_values{0, 2, 4, 6, 8};
        Index n_trials = 100;
        std::uint64_t master_seed = 1;
        std::vector<EstimatorKind> estimators = all_estimators();
        // Off by default: timings are the only non-reproducible CSV field.
        bool record_wall_time = false;

        void validate() const;
    };

    // (1/K) sum_k ||est_k - truth_k||_F^2 / ||truth_k||_F^2
    double nmse(const std::vector<CMatrix> &estimated, const std::vector<CMatrix> &truth);

    struct SupportRecovery
    {
        double row_rate = 0.0;
        double col_rate = 0.0;
    };

    // Fraction of true rows found (averaged over users) and fraction of true columns found
    // per (user, true row); a true row that was missed contributes zero column hits.
    SupportRecovery support_recovery(const SupportEstimate &estimate, const TrueSupports &truth);

    struct EstimatorMetrics
    {
        EstimatorKind estimator{};
        double nmse = 0.0;
        SupportRecovery recovery;
        double wall_time = 0.0; // seconds, zero unless timing is recorded
    };

    // Metrics of every configured estimator on one shared channel, pilot and noise draw.
    struct TrialResult
    {
        Index trial = 0;
        Index q = 0;
        Index l_c = 0;
        std::vector<EstimatorMetrics> metrics;

        const EstimatorMetrics &of(EstimatorKind kind) const;
    };

    // Evaluates every configured estimator on a given channel. Pilots and noise are drawn
    // from `seed` exactly as a sweep trial with that trial seed would draw them.
    TrialResult evaluate_realization(const ExperimentConfig &config, const ChannelRealization &channel,
                                     std::uint64_t seed, Index trial_index, Index q, const Dictionary &um,
                                     const Dictionary &un);

    // One trial at a single (q, l_c) point, with explicitly supplied dictionaries.
    TrialResult run_trial_point(const ExperimentConfig &config, Index trial_index, Index q, Index l_c,
                                const Dictionary &um, const Dictionary &un);

    // One trial over every (l_c, q) pair of the config, ordered by l_c then q.
    std::vector<TrialResult> run_trial(const ExperimentConfig &config, Index trial_index);

    struct CurvePoint
    {
        Index q = 0;
        EstimatorKind estimator{};
        Index l_c = 0;
        double snr_db = 0.0;
        double nmse_mean = 0.0;
        double nmse_stderr = 0.0;
        double row_support_recovery = 0.0;
        double col_support_recovery = 0.0;
        double wall_time_mean = 0.0;
        Index n_trials = 0;
    };

    struct SweepResult
    {
        std::vector<CurvePoint> points;   // sorted by (l_c, estimator name, q)
        std::vector<TrialResult> trials;  // sorted by (trial, l_c, q)
    };

    // Thread count from DSOMP_THREADS, falling back to the hardware concurrency.
    unsigned default_thread_count();

    // Runs all trials on `threads` workers (0 = default_thread_count()). Output does not
    // depend on the thread count.
    SweepResult run_sweep(const ExperimentConfig &config, unsigned threads = 0);

    // Aggregates per-trial metrics of one (q, l_c, estimator) point.
    CurvePoint aggregate(const std::vector<TrialResult> &trials, Index q, Index l_c, EstimatorKind estimator,
                         double snr_db);

    struct PairedDifference
    {
        double mean = 0.0;   // mean over trials of nmse(a) - nmse(b)
        double stderr_ = 0.0;
        Index n = 0;
    };

    PairedDifference paired_nmse_difference(const std::vector<TrialResult> &trials, Index q, Index l_c,
                                            EstimatorKind a, EstimatorKind b);

    inline constexpr const char *kCsvHeader =
        "q,estimator,l_c,snr_db,nmse_mean,nmse_stderr,row_rec,col_rec,wall_time_mean,n_trials";

    std::string to_csv(const std::vector<CurvePoint> &points);

    // Manifest path written next to a CSV: "<csv>.manifest.json".
    std::filesystem::path manifest_path(const std::filesystem::path &csv_path);
}
