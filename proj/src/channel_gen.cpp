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

#include "dsomp/channel_gen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <string>

#include "dsomp/errors.hpp"

namespace dsomp
{
    void SystemGeometry::validate() const
    {
        if (k_users < 1)
            throw InvalidArgumentError("at least one user is required");
        if (l_g < 1 || l_r < 1)
            throw InvalidArgumentError("path counts L_G and L_r must be positive");
        if (l_c < 0 || l_c > l_r)
            throw InvalidArgumentError("common path count L_c must lie in [0, L_r], got " + std::to_string(l_c));
        if (l_g > m() || l_g > n())
            throw InfeasibleGeometryError("L_G = " + std::to_string(l_g) + " distinct paths do not fit a " +
                                          std::to_string(m()) + "-antenna BS and " + std::to_string(n()) +
                                          "-element RIS");
        if (l_r > n())
            throw InfeasibleGeometryError("L_r = " + std::to_string(l_r) + " distinct paths do not fit a " +
                                          std::to_string(n()) + "-element RIS");
    }

    double GainModel::bs_ris_magnitude() const { return 1e-3 * std::pow(d_br, -2.2); }

    double GainModel::ris_user_magnitude() const { return 1e-3 * std::pow(d_ru, -2.8); }

    void GainModel::validate() const
    {
        if (!(d_br > 0.0) || !(d_ru > 0.0) || !std::isfinite(d_br) || !std::isfinite(d_ru))
            throw InvalidArgumentError("link distances must be positive and finite");
    }

    namespace
    {
        // `count` distinct values from [0, pool) \ excluded, uniformly without replacement.
        std::vector<Index> draw_distinct(Index pool, Index count, const std::vector<Index> &excluded,
                                         std::mt19937_64 &rng)
        {
            std::vector<Index> candidates;
            candidates.reserve(std::size_t(pool));
            for (Index i = 0; i < pool; ++i)
                if (std::find(excluded.begin(), excluded.end(), i) == excluded.end())
                    candidates.push_back(i);
            if (Index(candidates.size()) < count)
                throw InfeasibleGeometryError("cannot draw " + std::to_string(count) + " distinct grid points from " +
                                              std::to_string(candidates.size()) + " candidates");

            // Partial Fisher-Yates
            for (Index i = 0; i < count; ++i)
            {
                std::uniform_int_distribution<Index> pick(i, Index(candidates.size()) - 1);
                std::swap(candidates[std::size_t(i)], candidates[std::size_t(pick(rng))]);
            }
            candidates.resize(std::size_t(count));
            return candidates;
        }

        Complex random_phase(double magnitude, std::mt19937_64 &rng)
        {
            std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
            return std::polar(magnitude, phase(rng));
        }
    }

    PathSet sample_paths(const SystemGeometry &geom, const GainModel &gains, std::uint64_t seed)
    {
        geom.validate();
        gains.validate();
        std::mt19937_64 rng(seed);

        PathSet paths;
        const auto bs_rows = draw_distinct(geom.m(), geom.l_g, {}, rng);
        const auto ris_departures = draw_distinct(geom.n(), geom.l_g, {}, rng);
        for (Index l = 0; l < geom.l_g; ++l)
        {
            const Complex gain = random_phase(gains.bs_ris_magnitude(), rng);
            paths.bs_side.push_back({gain, grid_frequency(geom.bs, bs_rows[std::size_t(l)]),
                                     grid_frequency(geom.ris, ris_departures[std::size_t(l)])});
        }

        // Distinct RIS arrival indices per user make the cascaded column indices of every
        // row distinct as well, because they are all shifted by the same departure frequency.
        const auto shared = draw_distinct(geom.n(), geom.l_c, {}, rng);
        paths.user_side.resize(std::size_t(geom.k_users));
        for (auto &user : paths.user_side)
        {
            const auto own = draw_distinct(geom.n(), geom.l_r - geom.l_c, shared, rng);
            for (Index idx : shared)
                user.push_back({random_phase(gains.ris_user_magnitude(), rng), grid_frequency(geom.ris, idx), true});
            for (Index idx : own)
                user.push_back({random_phase(gains.ris_user_magnitude(), rng), grid_frequency(geom.ris, idx), false});
        }
        return paths;
    }

    void validate_paths(const PathSet &paths, const SystemGeometry &geom)
    {
        geom.validate();
        auto on_grid = [](const UpaShape &shape, const SpatialFrequencyPair &f)
        {
            const auto snapped = grid_frequency(shape, nearest_grid_index(shape, f));
            return std::abs(snapped.f1 - f.f1) < 1e-12 && std::abs(snapped.f2 - f.f2) < 1e-12;
        };

        if (Index(paths.bs_side.size()) != geom.l_g)
            throw ShapeError("expected " + std::to_string(geom.l_g) + " BS-side paths, got " +
                             std::to_string(paths.bs_side.size()));
        std::set<Index> rows;
        for (const auto &p : paths.bs_side)
        {
            if (!on_grid(geom.bs, p.bs_freq) || !on_grid(geom.ris, p.ris_freq))
                throw ConfigError("BS-side path frequency is off the dictionary grid");
            rows.insert(nearest_grid_index(geom.bs, p.bs_freq));
        }
        if (Index(rows.size()) != geom.l_g)
            throw ConfigError("BS-side paths share a BS grid index");

        if (Index(paths.user_side.size()) != geom.k_users)
            throw ShapeError("expected " + std::to_string(geom.k_users) + " users, got " +
                             std::to_string(paths.user_side.size()));
        std::vector<Index> reference_common;
        for (std::size_t k = 0; k < paths.user_side.size(); ++k)
        {
            const auto &user = paths.user_side[k];
            if (Index(user.size()) != geom.l_r)
                throw ShapeError("user " + std::to_string(k) + " has " + std::to_string(user.size()) +
                                 " paths, expected " + std::to_string(geom.l_r));
            std::set<Index> arrivals;
            std::vector<Index> common;
            for (const auto &p : user)
            {
                if (!on_grid(geom.ris, p.ris_freq))
                    throw ConfigError("user-side path frequency is off the dictionary grid");
                const Index idx = nearest_grid_index(geom.ris, p.ris_freq);
                arrivals.insert(idx);
                if (p.common)
                    common.push_back(idx);
            }
            if (Index(arrivals.size()) != geom.l_r)
                throw ConfigError("user " + std::to_string(k) + " has colliding RIS grid indices");
            if (Index(common.size()) != geom.l_c)
                throw ConfigError("user " + std::to_string(k) + " flags " + std::to_string(common.size()) +
                                  " common paths, expected " + std::to_string(geom.l_c));
            std::sort(common.begin(), common.end());
            if (k == 0)
                reference_common = common;
            else if (common != reference_common)
                throw ConfigError("common paths differ between users");
        }
    }

    CMatrix assemble_g(const PathSet &paths, const SystemGeometry &geom)
    {
        if (Index(paths.bs_side.size()) != geom.l_g)
            throw ShapeError("path set does not match L_G");
        const double scale = std::sqrt(double(geom.m() * geom.n()) / double(geom.l_g));
        CMatrix g = CMatrix::Zero(geom.m(), geom.n());
        for (const auto &p : paths.bs_side)
            g.noalias() += (scale * p.gain) * steering_vector(p.bs_freq, geom.bs) *
                           steering_vector(p.ris_freq, geom.ris).transpose();
        return g;
    }

    CVector assemble_h(const PathSet &paths, Index user, const SystemGeometry &geom)
    {
        if (user < 0 || user >= Index(paths.user_side.size()))
            throw RangeError("user index " + std::to_string(user) + " out of range [0, " +
                             std::to_string(paths.user_side.size()) + ")");
        const auto &list = paths.user_side[std::size_t(user)];
        const double scale = std::sqrt(double(geom.n()) / double(list.size()));
        CVector h = CVector::Zero(geom.n());
        for (const auto &p : list)
            h += (scale * p.gain) * steering_vector(p.ris_freq, geom.ris);
        return h;
    }

    CMatrix cascade(const CMatrix &g, const CVector &h)
    {
        if (g.cols() != h.size())
            throw ShapeError("cascade: G has " + std::to_string(g.cols()) + " columns but h has " +
                             std::to_string(h.size()) + " entries");
        return g * h.asDiagonal();
    }

    TrueSupports true_supports(const PathSet &paths, const SystemGeometry &geom)
    {
        // Sort BS-side paths by their row index so that supports line up with sorted rows.
        std::vector<std::size_t> order(paths.bs_side.size());
        for (std::size_t i = 0; i < order.size(); ++i)
            order[i] = i;
        auto row_of = [&](std::size_t l) { return nearest_grid_index(geom.bs, paths.bs_side[l].bs_freq); };
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return row_of(a) < row_of(b); });

        TrueSupports s;
        for (std::size_t l : order)
            s.rows.push_back(row_of(l));

        auto column_of = [&](std::size_t l, const UserRisPath &p)
        { return nearest_grid_index(geom.ris, wrapped_sum(paths.bs_side[l].ris_freq, p.ris_freq)); };

        s.columns.resize(paths.user_side.size());
        for (std::size_t k = 0; k < paths.user_side.size(); ++k)
            for (std::size_t l : order)
            {
                Support cols;
                for (const auto &p : paths.user_side[k])
                    cols.push_back(column_of(l, p));
                std::sort(cols.begin(), cols.end());
                s.columns[k].push_back(std::move(cols));
            }

        for (std::size_t l : order)
        {
            Support cols;
            if (!paths.user_side.empty())
                for (const auto &p : paths.user_side.front())
                    if (p.common)
                        cols.push_back(column_of(l, p));
            std::sort(cols.begin(), cols.end());
            s.common_columns.push_back(std::move(cols));
        }
        return s;
    }

    ChannelRealization realize(const PathSet &paths, const SystemGeometry &geom,
                               const Dictionary &um, const Dictionary &un)
    {
        validate_paths(paths, geom);
        ChannelRealization r;
        r.geom = geom;
        r.paths = paths;
        r.g = assemble_g(paths, geom);
        for (Index k = 0; k < geom.k_users; ++k)
        {
            r.h_users.push_back(assemble_h(paths, k, geom));
            r.cascaded.push_back(cascade(r.g, r.h_users.back()));
            r.angular.push_back(to_angular(r.cascaded.back(), um, un));
        }
        r.supports = true_supports(paths, geom);
        return r;
    }
}
