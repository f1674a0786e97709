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

#include "dsomp/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <string>

#include "dsomp/errors.hpp"
#include "dsomp/pilot_sensing.hpp"

namespace dsomp
{
    using nlohmann::json;

    namespace
    {
        void reject_unknown_keys(const json &doc, std::initializer_list<std::string_view> known,
                                 std::string_view where)
        {
            if (!doc.is_object())
                throw ConfigError(std::string(where) + " must be a JSON object");
            for (const auto &item : doc.items())
            {
                bool ok = false;
                for (auto k : known)
                    ok = ok || item.key() == k;
                if (!ok)
                    throw ConfigError("unknown key '" + item.key() + "' in " + std::string(where));
            }
        }

        UpaShape shape_from_json(const json &v, std::string_view name)
        {
            if (!v.is_array() || v.size() != 2)
                throw ConfigError(std::string(name) + " must be a two-element array [n1, n2]");
            try
            {
                return {v.at(0).get<Index>(), v.at(1).get<Index>()};
            }
            catch (const InvalidArgumentError &e)
            {
                throw ConfigError(std::string(name) + ": " + e.what());
            }
        }

        template <typename T>
        void read(const json &doc, const char *key, T &target)
        {
            if (doc.contains(key))
                target = doc.at(key).get<T>();
        }
    }

    nlohmann::json geometry_to_json(const SystemGeometry &geom, bool include_l_c)
    {
        json doc{{"bs", {geom.bs.n1, geom.bs.n2}},
                 {"ris", {geom.ris.n1, geom.ris.n2}},
                 {"k_users", geom.k_users},
                 {"l_g", geom.l_g},
                 {"l_r", geom.l_r}};
        if (include_l_c)
            doc["l_c"] = geom.l_c;
        return doc;
    }

    SystemGeometry geometry_from_json(const nlohmann::json &doc, bool allow_l_c)
    {
        if (allow_l_c)
            reject_unknown_keys(doc, {"bs", "ris", "k_users", "l_g", "l_r", "l_c"}, "geometry");
        else
            reject_unknown_keys(doc, {"bs", "ris", "k_users", "l_g", "l_r"}, "geometry");
        SystemGeometry g;
        if (doc.contains("bs"))
            g.bs = shape_from_json(doc.at("bs"), "geometry.bs");
        if (doc.contains("ris"))
            g.ris = shape_from_json(doc.at("ris"), "geometry.ris");
        read(doc, "k_users", g.k_users);
        read(doc, "l_g", g.l_g);
        read(doc, "l_r", g.l_r);
        if (allow_l_c)
            read(doc, "l_c", g.l_c);
        return g;
    }

    nlohmann::json gains_to_json(const GainModel &gains)
    {
        return {{"d_br", gains.d_br}, {"d_ru", gains.d_ru}};
    }

    GainModel gains_from_json(const nlohmann::json &doc)
    {
        reject_unknown_keys(doc, {"d_br", "d_ru"}, "gains");
        GainModel g;
        read(doc, "d_br", g.d_br);
        read(doc, "d_ru", g.d_ru);
        return g;
    }

    double snr_from_json(const nlohmann::json &value)
    {
        if (value.is_number())
            return value.get<double>();
        if (value.is_string())
        {
            const auto s = value.get<std::string>();
            if (s == "inf" || s == "+inf")
                return kNoiseless;
        }
        throw ConfigError("snr_db must be a number or \"inf\"");
    }

    nlohmann::json snr_to_json(double snr_db)
    {
        if (std::isinf(snr_db))
            return "inf";
        return snr_db;
    }

    CliConfig config_from_json(const nlohmann::json &doc)
    {
        reject_unknown_keys(doc,
                            {"geometry", "gains", "snr_db", "q_values", "l_c_values", "n_trials", "master_seed",
                             "estimators", "record_wall_time", "out"},
                            "config");
        CliConfig cfg;
        auto &exp = cfg.experiment;
        try
        {
            if (doc.contains("geometry"))
                exp.geom = geometry_from_json(doc.at("geometry"), false);
            if (doc.contains("gains"))
                exp.gains = gains_from_json(doc.at("gains"));
            if (doc.contains("snr_db"))
                exp.snr_db = snr_from_json(doc.at("snr_db"));
            read(doc, "q_values", exp.q_values);
            read(doc, "l_c_values", exp.l_c_values);
            read(doc, "n_trials", exp.n_trials);
            if (doc.contains("master_seed") && !doc.at("master_seed").is_number_unsigned())
                throw ConfigError("master_seed must be a non-negative integer");
            read(doc, "master_seed", exp.master_seed);
            read(doc, "record_wall_time", exp.record_wall_time);
            if (doc.contains("estimators"))
            {
                exp.estimators.clear();
                for (const auto &name : doc.at("estimators").get<std::vector<std::string>>())
                {
                    const auto kind = parse_estimator(name);
                    if (!kind)
                        throw ConfigError("unknown estimator '" + name + "'");
                    exp.estimators.push_back(*kind);
                }
            }
            if (doc.contains("out"))
                cfg.out = doc.at("out").get<std::string>();
        }
        catch (const json::exception &e)
        {
            throw ConfigError(std::string("malformed config: ") + e.what());
        }
        exp.validate();
        return cfg;
    }

    nlohmann::json config_to_json(const CliConfig &config)
    {
        const auto &exp = config.experiment;
        json names = json::array();
        for (auto kind : exp.estimators)
            names.push_back(std::string(to_string(kind)));
        return {{"geometry", geometry_to_json(exp.geom, false)},
                {"gains", gains_to_json(exp.gains)},
                {"snr_db", snr_to_json(exp.snr_db)},
                {"q_values", exp.q_values},
                {"l_c_values", exp.l_c_values},
                {"n_trials", exp.n_trials},
                {"master_seed", exp.master_seed},
                {"estimators", names},
                {"record_wall_time", exp.record_wall_time},
                {"out", config.out.string()}};
    }

    CliConfig load_config(const std::filesystem::path &path)
    {
        std::ifstream in(path);
        if (!in)
            throw ConfigError("cannot open config file " + path.string());
        json doc;
        try
        {
            doc = json::parse(in);
        }
        catch (const json::exception &e)
        {
            throw ConfigError("cannot parse " + path.string() + ": " + e.what());
        }
        return config_from_json(doc);
    }
}
