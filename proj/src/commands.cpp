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

#include "dsomp/commands.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "dsomp/errors.hpp"
#include "dsomp/seeds.hpp"
#include "dsomp/version.hpp"

namespace dsomp
{
    namespace
    {
        // Raised for malformed command lines; mapped to exit status 2.
        class UsageError : public Error
        {
        public:
            using Error::Error;
        };

        double parse_snr(const std::string &text)
        {
            if (text == "inf" || text == "+inf")
                return kNoiseless;
            try
            {
                std::size_t used = 0;
                const double v = std::stod(text, &used);
                if (used == text.size() && std::isfinite(v))
                    return v;
            }
            catch (const std::exception &)
            {
            }
            throw UsageError("--snr-db expects a number or 'inf', got '" + text + "'");
        }

        std::vector<EstimatorKind> parse_estimators(const std::vector<std::string> &names)
        {
            std::vector<EstimatorKind> kinds;
            for (const auto &name : names)
            {
                const auto kind = parse_estimator(name);
                if (!kind)
                    throw UsageError("unknown estimator '" + name +
                                     "' (expected ds_omp, row_structured, baseline_omp or oracle_ls)");
                kinds.push_back(*kind);
            }
            return kinds;
        }

        void guard_overwrite(const std::filesystem::path &path, bool force)
        {
            if (!force && std::filesystem::exists(path))
                throw UsageError(path.string() + " already exists; pass --force to overwrite");
        }

        void write_text(const std::filesystem::path &path, const std::string &text)
        {
            std::ofstream out(path, std::ios::binary);
            if (!out)
                throw ConfigError("cannot write " + path.string());
            out << text;
        }

        std::string format_report(const TrialResult &r, double snr_db, std::uint64_t seed)
        {
            std::ostringstream os;
            os << "estimator,q,l_c,snr_db,seed,nmse,row_rec,col_rec\n";
            os.precision(10);
            for (const auto &m : r.metrics)
                os << to_string(m.estimator) << ',' << r.q << ',' << r.l_c << ',' << snr_db << ',' << seed << ','
                   << m.nmse << ',' << m.recovery.row_rate << ',' << m.recovery.col_rate << '\n';
            return os.str();
        }
    }

    ChannelFixture make_fixture(const ExperimentConfig &config, std::uint64_t seed, Index l_c)
    {
        ChannelFixture f;
        f.geom = config.geom;
        f.geom.l_c = l_c;
        f.gains = config.gains;
        f.seed = seed;
        f.paths = sample_paths(f.geom, f.gains, paths_seed(seed, std::uint64_t(l_c)));
        return f;
    }

    TrialResult estimate_fixture(const ChannelFixture &fixture, const std::vector<EstimatorKind> &estimators,
                                 Index q, double snr_db, std::uint64_t seed)
    {
        ExperimentConfig config;
        config.geom = fixture.geom;
        config.gains = fixture.gains;
        config.snr_db = snr_db;
        config.estimators = estimators;
        const auto um = build_dictionary(fixture.geom.bs);
        const auto un = build_dictionary(fixture.geom.ris);
        const auto channel = realize(fixture.paths, fixture.geom, um, un);
        return evaluate_realization(config, channel, seed, 0, q, um, un);
    }

    void write_sweep_outputs(const SweepResult &result, const CliConfig &config, const std::filesystem::path &csv,
                             bool force)
    {
        const auto manifest = manifest_path(csv);
        guard_overwrite(csv, force);
        guard_overwrite(manifest, force);
        if (csv.has_parent_path())
            std::filesystem::create_directories(csv.parent_path());

        CliConfig recorded = config;
        recorded.out = csv;
        nlohmann::json doc{{"library", "dsomp"},
                           {"library_version", DSOMP_VERSION},
                           {"master_seed", config.experiment.master_seed},
                           {"csv", csv.filename().string()},
                           {"config", config_to_json(recorded)}};
        write_text(csv, to_csv(result.points));
        write_text(manifest, doc.dump(2) + "\n");
    }

    int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
    {
        CLI::App app{"Double-structured OMP cascaded channel estimation for RIS uplinks", "dsomp"};
        app.require_subcommand(1);
        app.set_version_flag("--version", DSOMP_VERSION);

        std::string config_path, out_path, snr_text, fixture_path;
        std::uint64_t seed = 0;
        Index trials = 0, single_q = 64, single_lc = 0;
        std::vector<Index> q_list, lc_list;
        std::vector<std::string> estimator_names;
        bool force = false;

        auto *gen = app.add_subcommand("generate", "Draw one channel and write it as a JSON fixture");
        gen->add_option("--config", config_path, "Sweep configuration (JSON)")->check(CLI::ExistingFile);
        gen->add_option("--out", out_path, "Fixture path")->required();
        auto *gen_seed = gen->add_option("--seed", seed, "Trial seed (default: master_seed of the config)");
        auto *gen_lc = gen->add_option("--lc", single_lc, "Number of common user-RIS paths (default: first l_c_values)");
        gen->add_flag("--force", force, "Overwrite an existing fixture");

        auto *est = app.add_subcommand("estimate", "Run estimators on a fixture and print NMSE and support rates");
        est->add_option("fixture", fixture_path, "Fixture written by 'generate'")->required()->check(CLI::ExistingFile);
        est->add_option("--estimators", estimator_names, "Estimators to run")->delimiter(',');
        est->add_option("--q", single_q, "Pilot slots")->capture_default_str();
        auto *est_snr = est->add_option("--snr-db", snr_text, "SNR in dB, or 'inf' for noiseless (default 0)");
        auto *est_seed = est->add_option("--seed", seed, "Pilot/noise seed (default: fixture seed)");

        auto *sweep = app.add_subcommand("sweep", "Monte-Carlo NMSE sweep; writes a CSV and a manifest");
        sweep->add_option("--config", config_path, "Sweep configuration (JSON)")->check(CLI::ExistingFile);
        auto *sweep_out = sweep->add_option("--out", out_path, "CSV path (default: 'out' of the config)");
        auto *sweep_trials = sweep->add_option("--trials", trials, "Trials per point");
        auto *sweep_snr = sweep->add_option("--snr-db", snr_text, "SNR in dB, or 'inf'");
        auto *sweep_q = sweep->add_option("--q", q_list, "Pilot slot counts")->delimiter(',');
        auto *sweep_lc = sweep->add_option("--lc", lc_list, "Common path counts")->delimiter(',');
        auto *sweep_est = sweep->add_option("--estimators", estimator_names, "Estimators")->delimiter(',');
        auto *sweep_seed = sweep->add_option("--seed", seed, "Master seed");
        sweep->add_flag("--force", force, "Overwrite existing outputs");

        try
        {
            app.parse(argc, argv);
        }
        catch (const CLI::ParseError &e)
        {
            if (e.get_exit_code() == 0)
            {
                out << (e.get_name() == "CallForVersion" ? std::string(DSOMP_VERSION) + "\n" : app.help());
                return 0;
            }
            err << "dsomp: " << e.what() << '\n';
            return 2;
        }

        try
        {
            auto load = [&]
            {
                CliConfig cfg;
                if (!config_path.empty())
                    cfg = load_config(config_path);
                return cfg;
            };

            if (*gen)
            {
                const auto cfg = load();
                const auto s = gen_seed->count() ? seed : cfg.experiment.master_seed;
                const Index l_c = gen_lc->count() ? single_lc : cfg.experiment.l_c_values.front();
                guard_overwrite(out_path, force);
                const auto fixture = make_fixture(cfg.experiment, s, l_c);
                save_fixture(fixture, out_path);
                out << "wrote " << out_path << " (seed " << s << ", l_c " << l_c << ")\n";
            }
            else if (*est)
            {
                const auto fixture = load_fixture(fixture_path);
                const auto kinds = estimator_names.empty() ? std::vector<EstimatorKind>{EstimatorKind::ds_omp}
                                                           : parse_estimators(estimator_names);
                const double snr = est_snr->count() ? parse_snr(snr_text) : 0.0;
                const auto s = est_seed->count() ? seed : fixture.seed;
                out << format_report(estimate_fixture(fixture, kinds, single_q, snr, s), snr, s);
            }
            else if (*sweep)
            {
                auto cfg = load();
                auto &exp = cfg.experiment;
                if (sweep_out->count())
                    cfg.out = out_path;
                if (sweep_trials->count())
                    exp.n_trials = trials;
                if (sweep_snr->count())
                    exp.snr_db = parse_snr(snr_text);
                if (sweep_q->count())
                    exp.q_values = q_list;
                if (sweep_lc->count())
                    exp.l_c_values = lc_list;
                if (sweep_est->count())
                    exp.estimators = parse_estimators(estimator_names);
                if (sweep_seed->count())
                    exp.master_seed = seed;
                exp.validate();

                guard_overwrite(cfg.out, force);
                guard_overwrite(manifest_path(cfg.out), force);
                const auto result = run_sweep(exp);
                write_sweep_outputs(result, cfg, cfg.out, force);
                out << "wrote " << cfg.out.string() << " (" << result.points.size() << " points, "
                    << exp.n_trials << " trials)\n";
            }
            return 0;
        }
        catch (const UsageError &e)
        {
            err << "dsomp: usage error: " << e.what() << '\n';
            return 2;
        }
        catch (const Error &e)
        {
            err << "dsomp: error: " << e.what() << '\n';
            return 1;
        }
        catch (const std::exception &e)
        {
            err << "dsomp: error: " << e.what() << '\n';
            return 1;
        }
    }
}
