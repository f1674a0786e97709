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

#include "dsomp/angular_model.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "dsomp/errors.hpp"

namespace dsomp
{
    UpaShape::UpaShape(Index first_axis, Index second_axis) : n1(first_axis), n2(second_axis)
    {
        if (n1 < 1 || n2 < 1)
            throw InvalidArgumentError("UPA dimensions must be positive, got " +
                                       std::to_string(n1) + "x" + std::to_string(n2));
    }

    double wrap_frequency(double f)
    {
        double w = f - std::floor(f);
        // floor() can leave exactly 1.0 for tiny negative inputs
        return w >= 1.0 ? 0.0 : w;
    }

    SpatialFrequencyPair wrapped_sum(const SpatialFrequencyPair &f, const SpatialFrequencyPair &g)
    {
        return {wrap_frequency(f.f1 + g.f1), wrap_frequency(f.f2 + g.f2)};
    }

    SpatialFrequencyPair grid_frequency(const UpaShape &shape, Index flat_index)
    {
        if (flat_index < 0 || flat_index >= shape.total())
            throw RangeError("grid index " + std::to_string(flat_index) + " outside array of " +
                             std::to_string(shape.total()) + " elements");
        const Index i1 = flat_index / shape.n2;
        const Index i2 = flat_index % shape.n2;
        return {double(i1) / double(shape.n1), double(i2) / double(shape.n2)};
    }

    Index nearest_grid_index(const UpaShape &shape, const SpatialFrequencyPair &freq)
    {
        auto axis_index = [](double f, Index n)
        {
            auto i = static_cast<Index>(std::llround(wrap_frequency(f) * double(n)));
            return i % n;
        };
        return axis_index(freq.f1, shape.n1) * shape.n2 + axis_index(freq.f2, shape.n2);
    }

    CVector steering_vector(const SpatialFrequencyPair &freq, const UpaShape &shape)
    {
        constexpr double two_pi = 2.0 * std::numbers::pi;
        const double scale = 1.0 / std::sqrt(double(shape.total()));

        // Kronecker product of the two per-axis phase ramps
        CVector axis1(shape.n1), axis2(shape.n2);
        for (Index a = 0; a < shape.n1; ++a)
            axis1(a) = std::polar(1.0, -two_pi * freq.f1 * double(a));
        for (Index b = 0; b < shape.n2; ++b)
            axis2(b) = std::polar(1.0, -two_pi * freq.f2 * double(b));

        CVector v(shape.total());
        for (Index a = 0; a < shape.n1; ++a)
            v.segment(a * shape.n2, shape.n2) = scale * axis1(a) * axis2;
        return v;
    }

    Dictionary build_dictionary(const UpaShape &shape)
    {
        Dictionary d{shape, CMatrix(shape.total(), shape.total())};
        for (Index c = 0; c < shape.total(); ++c)
            d.u.col(c) = steering_vector(grid_frequency(shape, c), shape);
        return d;
    }

    namespace
    {
        void check_transform_shape(const CMatrix &h, const Dictionary &um, const Dictionary &un)
        {
            if (h.rows() != um.total() || h.cols() != un.total())
                throw ShapeError("channel is " + std::to_string(h.rows()) + "x" + std::to_string(h.cols()) +
                                 " but dictionaries are " + std::to_string(um.total()) + " and " +
                                 std::to_string(un.total()));
        }
    }

    CMatrix to_angular(const CMatrix &h_spatial, const Dictionary &um, const Dictionary &un)
    {
        check_transform_shape(h_spatial, um, un);
        return um.u.adjoint() * h_spatial * un.u.conjugate();
    }

    CMatrix from_angular(const CMatrix &h_angular, const Dictionary &um, const Dictionary &un)
    {
        check_transform_shape(h_angular, um, un);

        std::vector<Index> rows;
        for (Index r = 0; r < h_angular.rows(); ++r)
            if (h_angular.row(r).squaredNorm() > 0.0)
                rows.push_back(r);

        if (2 * rows.size() >= std::size_t(h_angular.rows()))
            return um.u * h_angular * un.u.transpose();

        const auto n_rows = Index(rows.size());
        CMatrix basis(um.total(), n_rows), coeffs(n_rows, un.total());
        for (Index i = 0; i < n_rows; ++i)
        {
            basis.col(i) = um.u.col(rows[i]);
            coeffs.row(i) = h_angular.row(rows[i]);
        }
        return basis * (coeffs * un.u.transpose());
    }
}
