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

#include "dsomp/bench_harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <set>
#include <thread>

#include "dsomp/errors.hpp"
#include "dsomp/pilot_sensing.hpp"
#include "dsomp/seeds.hpp"

namespace dsomp
{
    void ExperimentConfig::validate() const
    {
        if (n_trials < 1)
            throw ConfigError("n_trials must be at least 1");
        if (q_values.empty())
            throw ConfigError("q_values must not be empty");
        if (l_c_values.empty())
            throw ConfigError("l_c_values must not be empty");
        if (estimators.empty())
            throw ConfigError("at least one estimator is required");
        auto has_duplicates = [](auto values)
        {
            std::sort(values.begin(), values.end());
            return std::adjacent_find(values.begin(), values.end()) != values.end();
        };
        if (has_duplicates(q_values) || has_duplicates(l_c_values) || has_duplicates(estimators))
            throw ConfigError("q_values, l_c_values and estimators must not contain duplicates");
        if (std::isnan(snr_db) || (std::isinf(snr_db) && snr_db < 0.0))
            throw ConfigError("snr_db must be a number or +inf");
        for (Index q : q_values)
        {
            if (q < 1)
                throw ConfigError("every q must be at least 1, got " + std::to_string(q));
            if (q < geom.l_r)
                throw ConfigError("q = " + std::to_string(q) + " is below L_r = " + std::to_string(geom.l_r) +
                                  "; the per-row least-squares fits would be underdetermined");
        }
        for (Index l_c : l_c_values)
        {
            SystemGeometry g = geom;
            g.l_c = l_c;
            try
            {
                g.validate();
            }
            catch (const Error &e)
            {
                throw ConfigError(e.what());
            }
        }
        gains.validate();
    }

    double nmse(const std::vector<CMatrix> &estimated, const std::vector<CMatrix> &truth)
    {
        if (estimated.size() != truth.size() || truth.empty())
            throw ShapeError("nmse needs the same non-zero number of estimated and true channels");
        double sum = 0.0;
        for (std::size_t k = 0; k < truth.size(); ++k)
        {
            if (estimated[k].rows() != truth[k].rows() || estimated[k].cols() != truth[k].cols())
                throw ShapeError("nmse: channel " + std::to_string(k) + " has mismatched dimensions");
            const double ref = truth[k].squaredNorm();
            if (!(ref > 0.0))
                throw DegenerateTruthError("nmse: true channel " + std::to_string(k) + " is all zero");
            sum += (estimated[k] - truth[k]).squaredNorm() / ref;
        }
        return sum / double(truth.size());
    }

    namespace
    {
        double overlap(const Support &a, const Support &b)
        {
            std::vector<Index> common;
            std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
            return double(common.size());
        }
    }

    SupportRecovery support_recovery(const SupportEstimate &estimate, const TrueSupports &truth)
    {
        const std::size_t k_users = truth.columns.size();
        if (estimate.user_rows.size() != k_users || estimate.user_cols.size() != k_users)
            throw ShapeError("support estimate and truth cover different numbers of users");
        if (truth.rows.empty())
            throw InvalidArgumentError("true row support is empty");

        SupportRecovery rec;
        double col_sum = 0.0;
        std::size_t col_terms = 0;
        for (std::size_t k = 0; k < k_users; ++k)
        {
            Support rows = estimate.user_rows[k];
            std::sort(rows.begin(), rows.end());
            rec.row_rate += overlap(rows, truth.rows) / double(truth.rows.size());

            for (std::size_t l = 0; l < truth.rows.size(); ++l)
            {
                const auto &true_cols = truth.columns[k][l];
                const auto &est_rows = estimate.user_rows[k];
                const auto hit = std::find(est_rows.begin(), est_rows.end(), truth.rows[l]);
                if (hit != est_rows.end() && !true_cols.empty())
                {
                    Support cols = estimate.user_cols[k][std::size_t(hit - est_rows.begin())];
                    std::sort(cols.begin(), cols.end());
                    col_sum += overlap(cols, true_cols) / double(true_cols.size());
                }
                ++col_terms;
            }
        }
        rec.row_rate /= double(k_users);
        rec.col_rate = col_terms ? col_sum / double(col_terms) : 0.0;
        return rec;
    }

    const EstimatorMetrics &TrialResult::of(EstimatorKind kind) const
    {
        for (const auto &m : metrics)
            if (m.estimator == kind)
                return m;
        throw InvalidArgumentError("estimator " + std::string(to_string(kind)) + " was not run in this trial");
    }

    namespace
    {
        struct TrialContext
        {
            const ExperimentConfig &config;
            const Dictionary &um;
            const Dictionary &un;
        };

        SystemGeometry with_common(const SystemGeometry &geom, Index l_c)
        {
            SystemGeometry g = geom;
            g.l_c = l_c;
            return g;
        }

        TrialResult evaluate(const TrialContext &ctx, const ChannelRealization &channel, std::uint64_t seed,
                             Index trial_index, Index q)
        {
            if (q < channel.geom.l_r)
                throw InvalidArgumentError("q = " + std::to_string(q) + " is below L_r = " +
                                           std::to_string(channel.geom.l_r));
            const auto &config = ctx.config;
            const Index l_c = channel.geom.l_c;
            const auto reflecting = gen_reflecting(channel.geom.n(), q, reflecting_seed(seed, std::uint64_t(q)));
            const auto sensing = build_sensing(reflecting, ctx.un);
            const auto meas = measure(channel, sensing, config.snr_db,
                                      noise_seed(seed, std::uint64_t(q), std::uint64_t(l_c)));
            const auto levels = SparsityLevels::from_geometry(channel.geom);

            TrialResult result{trial_index, q, l_c, {}};
            for (EstimatorKind kind : config.estimators)
            {
                const auto start = std::chrono::steady_clock::now();
                const auto est = run_estimator(kind, meas, sensing, levels, ctx.um, ctx.un, &channel.supports);
                const auto stop = std::chrono::steady_clock::now();

                EstimatorMetrics m;
                m.estimator = kind;
                m.nmse = nmse(est.spatial, channel.cascaded);
                m.recovery = support_recovery(est.support, channel.supports);
                if (config.record_wall_time)
                    m.wall_time = std::chrono::duration<double>(stop - start).count();
                result.metrics.push_back(m);
            }
            return result;
        }

        std::vector<TrialResult> run_trial_with(const TrialContext &ctx, Index trial_index)
        {
            const auto &config = ctx.config;
            const auto seed = trial_seed(config.master_seed, std::uint64_t(trial_index));

            std::vector<TrialResult> out;
            for (Index l_c : config.l_c_values)
            {
                const auto geom = with_common(config.geom, l_c);
                const auto paths = sample_paths(geom, config.gains, paths_seed(seed, std::uint64_t(l_c)));
                const auto channel = realize(paths, geom, ctx.um, ctx.un);
                for (Index q : config.q_values)
                    out.push_back(evaluate(ctx, channel, seed, trial_index, q));
            }
            return out;
        }
    }

    TrialResult evaluate_realization(const ExperimentConfig &config, const ChannelRealization &channel,
                                     std::uint64_t seed, Index trial_index, Index q, const Dictionary &um,
                                     const Dictionary &un)
    {
        return evaluate({config, um, un}, channel, seed, trial_index, q);
    }

    TrialResult run_trial_point(const ExperimentConfig &config, Index trial_index, Index q, Index l_c,
                                const Dictionary &um, const Dictionary &un)
    {
        const TrialContext ctx{config, um, un};
        const auto seed = trial_seed(config.master_seed, std::uint64_t(trial_index));
        const auto geom = with_common(config.geom, l_c);
        const auto paths = sample_paths(geom, config.gains, paths_seed(seed, std::uint64_t(l_c)));
        const auto channel = realize(paths, geom, um, un);
        return evaluate(ctx, channel, seed, trial_index, q);
    }

    std::vector<TrialResult> run_trial(const ExperimentConfig &config, Index trial_index)
    {
        config.validate();
        const auto um = build_dictionary(config.geom.bs);
        const auto un = build_dictionary(config.geom.ris);
        return run_trial_with({config, um, un}, trial_index);
    }

    unsigned default_thread_count()
    {
        if (const char *env = std::getenv("DSOMP_THREADS"))
        {
            char *end = nullptr;
            const long v = std::strtol(env, &end, 10);
            if (end != env && *end == '\0' && v > 0)
                return unsigned(v);
        }
        return std::max(1u, std::thread::hardware_concurrency());
    }

    CurvePoint aggregate(const std::vector<TrialResult> &trials, Index q, Index l_c, EstimatorKind estimator,
                         double snr_db)
    {
        std::vector<const EstimatorMetrics *> picked;
        for (const auto &t : trials)
            if (t.q == q && t.l_c == l_c)
                picked.push_back(&t.of(estimator));

        CurvePoint p;
        p.q = q;
        p.estimator = estimator;
        p.l_c = l_c;
        p.snr_db = snr_db;
        p.n_trials = Index(picked.size());
        if (picked.empty())
            return p;

        const double n = double(picked.size());
        for (const auto *m : picked)
        {
            p.nmse_mean += m->nmse;
            p.row_support_recovery += m->recovery.row_rate;
            p.col_support_recovery += m->recovery.col_rate;
            p.wall_time_mean += m->wall_time;
        }
        p.nmse_mean /= n;
        p.row_support_recovery /= n;
        p.col_support_recovery /= n;
        p.wall_time_mean /= n;

        if (picked.size() > 1)
        {
            double ss = 0.0;
            for (const auto *m : picked)
                ss += (m->nmse - p.nmse_mean) * (m->nmse - p.nmse_mean);
            p.nmse_stderr = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
        }
        return p;
    }

    PairedDifference paired_nmse_difference(const std::vector<TrialResult> &trials, Index q, Index l_c,
                                            EstimatorKind a, EstimatorKind b)
    {
        std::vector<double> diff;
        for (const auto &t : trials)
            if (t.q == q && t.l_c == l_c)
                diff.push_back(t.of(a).nmse - t.of(b).nmse);

        PairedDifference d;
        d.n = Index(diff.size());
        if (diff.empty())
            return d;
        for (double v : diff)
            d.mean += v;
        d.mean /= double(diff.size());
        if (diff.size() > 1)
        {
            double ss = 0.0;
            for (double v : diff)
                ss += (v - d.mean) * (v - d.mean);
            d.stderr_ = std::sqrt(ss / double(diff.size() - 1)) / std::sqrt(double(diff.size()));
        }
        return d;
    }

    SweepResult run_sweep(const ExperimentConfig &config, unsigned threads)
    {
        config.validate();
        if (threads == 0)
            threads = default_thread_count();
        const auto um = build_dictionary(config.geom.bs);
        const auto un = build_dictionary(config.geom.ris);
        const TrialContext ctx{config, um, un};

        const auto n_jobs = std::size_t(config.n_trials);
        std::vector<std::vector<TrialResult>> per_trial(n_jobs);
        std::vector<std::exception_ptr> errors(n_jobs);
        std::atomic<std::size_t> next{0};

        auto worker = [&]
        {
            for (std::size_t job = next++; job < n_jobs; job = next++)
            {
                try
                {
                    per_trial[job] = run_trial_with(ctx, Index(job));
                }
                catch (...)
                {
                    errors[job] = std::current_exception();
                }
            }
        };
        {
            std::vector<std::jthread> pool;
            for (unsigned i = 1; i < std::min<std::size_t>(threads, n_jobs); ++i)
                pool.emplace_back(worker);
            worker();
        }
        for (const auto &e : errors)
            if (e)
                std::rethrow_exception(e);

        SweepResult result;
        for (auto &t : per_trial)
            for (auto &r : t)
                result.trials.push_back(std::move(r));

        std::vector<EstimatorKind> by_name = config.estimators;
        std::sort(by_name.begin(), by_name.end(),
                  [](EstimatorKind a, EstimatorKind b) { return to_string(a) < to_string(b); });
        by_name.erase(std::unique(by_name.begin(), by_name.end()), by_name.end());
        std::vector<Index> l_cs = config.l_c_values, qs = config.q_values;
        std::sort(l_cs.begin(), l_cs.end());
        l_cs.erase(std::unique(l_cs.begin(), l_cs.end()), l_cs.end());
        std::sort(qs.begin(), qs.end());
        qs.erase(std::unique(qs.begin(), qs.end()), qs.end());

        for (Index l_c : l_cs)
            for (EstimatorKind kind : by_name)
                for (Index q : qs)
                    result.points.push_back(aggregate(result.trials, q, l_c, kind, config.snr_db));
        return result;
    }

    std::string to_csv(const std::vector<CurvePoint> &points)
    {
        std::string out = kCsvHeader;
        out += '\n';
        char buf[512];
        for (const auto &p : points)
        {
            std::snprintf(buf, sizeof(buf), "%lld,%s,%lld,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%lld\n",
                          static_cast<long long>(p.q), std::string(to_string(p.estimator)).c_str(),
                          static_cast<long long>(p.l_c), p.snr_db, p.nmse_mean, p.nmse_stderr,
                          p.row_support_recovery, p.col_support_recovery, p.wall_time_mean,
                          static_cast<long long>(p.n_trials));
            out += buf;
        }
        return out;
    }

    std::filesystem::path manifest_path(const std::filesystem::path &csv_path)
    {
        auto p = csv_path;
        p += ".manifest.json";
        return p;
    }
}
