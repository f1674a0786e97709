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

#include "dsomp/fixture.hpp"

#include <fstream>
#include <string>

#include "dsomp/config.hpp"
#include "dsomp/errors.hpp"

namespace dsomp
{
    using nlohmann::json;

    namespace
    {
        json grid_to_json(const UpaShape &shape, const SpatialFrequencyPair &f)
        {
            const Index flat = nearest_grid_index(shape, f);
            return {flat / shape.n2, flat % shape.n2};
        }

        SpatialFrequencyPair grid_from_json(const UpaShape &shape, const json &v)
        {
            if (!v.is_array() || v.size() != 2)
                throw ConfigError("grid index must be a two-element array");
            const auto i1 = v.at(0).get<Index>();
            const auto i2 = v.at(1).get<Index>();
            if (i1 < 0 || i1 >= shape.n1 || i2 < 0 || i2 >= shape.n2)
                throw ConfigError("grid index out of range");
            return grid_frequency(shape, i1 * shape.n2 + i2);
        }

        json complex_to_json(Complex c) { return {c.real(), c.imag()}; }

        Complex complex_from_json(const json &v)
        {
            if (!v.is_array() || v.size() != 2)
                throw ConfigError("complex gain must be a two-element array [re, im]");
            return {v.at(0).get<double>(), v.at(1).get<double>()};
        }
    }

    nlohmann::json fixture_to_json(const ChannelFixture &fixture)
    {
        const auto &g = fixture.geom;
        json bs = json::array();
        for (const auto &p : fixture.paths.bs_side)
            bs.push_back({{"gain", complex_to_json(p.gain)},
                          {"bs_index", grid_to_json(g.bs, p.bs_freq)},
                          {"ris_index", grid_to_json(g.ris, p.ris_freq)}});
        json users = json::array();
        for (const auto &list : fixture.paths.user_side)
        {
            json u = json::array();
            for (const auto &p : list)
                u.push_back({{"gain", complex_to_json(p.gain)},
                             {"ris_index", grid_to_json(g.ris, p.ris_freq)},
                             {"common", p.common}});
            users.push_back(std::move(u));
        }
        return {{"format", kFixtureFormat},
                {"version", kFixtureVersion},
                {"geometry", geometry_to_json(g, true)},
                {"gains", gains_to_json(fixture.gains)},
                {"seed", fixture.seed},
                {"bs_paths", bs},
                {"user_paths", users}};
    }

    ChannelFixture fixture_from_json(const nlohmann::json &doc)
    {
        ChannelFixture f;
        try
        {
            if (doc.value("format", std::string{}) != kFixtureFormat)
                throw ConfigError("not a channel fixture (missing or wrong \"format\")");
            if (doc.value("version", 0) != kFixtureVersion)
                throw ConfigError("unsupported fixture version");
            f.geom = geometry_from_json(doc.at("geometry"), true);
            f.gains = gains_from_json(doc.at("gains"));
            f.seed = doc.at("seed").get<std::uint64_t>();
            for (const auto &p : doc.at("bs_paths"))
                f.paths.bs_side.push_back({complex_from_json(p.at("gain")), grid_from_json(f.geom.bs, p.at("bs_index")),
                                           grid_from_json(f.geom.ris, p.at("ris_index"))});
            for (const auto &list : doc.at("user_paths"))
            {
                auto &user = f.paths.user_side.emplace_back();
                for (const auto &p : list)
                    user.push_back({complex_from_json(p.at("gain")), grid_from_json(f.geom.ris, p.at("ris_index")),
                                    p.at("common").get<bool>()});
            }
        }
        catch (const json::exception &e)
        {
            throw ConfigError(std::string("malformed fixture: ") + e.what());
        }
        validate_paths(f.paths, f.geom);
        return f;
    }

    void save_fixture(const ChannelFixture &fixture, const std::filesystem::path &path)
    {
        std::ofstream out(path);
        if (!out)
            throw ConfigError("cannot write fixture " + path.string());
        out << fixture_to_json(fixture).dump(2) << '\n';
    }

    ChannelFixture load_fixture(const std::filesystem::path &path)
    {
        std::ifstream in(path);
        if (!in)
            throw ConfigError("cannot open fixture " + path.string());
        try
        {
            return fixture_from_json(json::parse(in));
        }
        catch (const json::parse_error &e)
        {
            throw ConfigError("cannot parse " + path.string() + ": " + e.what());
        }
    }
}
