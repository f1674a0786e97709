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

#include <stdexcept>
#include <string>

namespace dsomp
{
    // Base class of every error raised by the library. The CLI maps any of these
    // to a one-line diagnostic and a non-zero exit status.
    class Error : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // Matrix or vector dimensions disagree.
    class ShapeError : public Error
    {
    public:
        using Error::Error;
    };

    // Index (user, path, row) out of its valid range.
    class RangeError : public Error
    {
    public:
        using Error::Error;
    };

    // The requested geometry cannot host the requested number of distinct paths.
    class InfeasibleGeometryError : public Error
    {
    public:
        using Error::Error;
    };

    // Least-squares subproblem on a rank-deficient column selection.
    class SingularSystemError : public Error
    {
    public:
        using Error::Error;
    };

    // A finite SNR was requested for an all-zero signal.
    class DegenerateSignalError : public Error
    {
    public:
        using Error::Error;
    };

    // NMSE against an all-zero reference channel.
    class DegenerateTruthError : public Error
    {
    public:
        using Error::Error;
    };

    // Invalid user input: preconditions of an operation are violated.
    class InvalidArgumentError : public Error
    {
    public:
        using Error::Error;
    };

    // Malformed or inconsistent configuration / fixture files.
    class ConfigError : public Error
    {
    public:
        using Error::Error;
    };
}
