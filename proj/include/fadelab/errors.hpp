// SPDX-License-Identifier: Apache-2.0
//
// fadelab: statistics of fading channels with multiple specular components
// Copyright (C) 2026 The fadelab authors
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

#ifndef FADELAB_ERRORS_HPP
#define FADELAB_ERRORS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fadelab
{

// Input outside the mathematical domain of a function (negative Marcum argument, NaN, ...)
class domain_error : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

// Malformed call: dimension mismatch, MGF argument outside its region of convergence, ...
class argument_error : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

// Model configuration that the requested statistic does not support (e.g. a density with no diffuse power)
class unsupported_model_error : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

// Quadrature grid would exceed the configured node budget
class resource_error : public std::runtime_error
{
public:
    resource_error(const std::string &what, std::uint64_t required_nodes)
        : std::runtime_error(what), required_(required_nodes) {}

    std::uint64_t required_nodes() const noexcept { return required_; }

private:
    std::uint64_t required_;
};

// Series or iteration failed to converge; carries the best estimate reached
class numeric_error : public std::runtime_error
{
public:
    numeric_error(const std::string &what, double partial_estimate)
        : std::runtime_error(what), partial_(partial_estimate) {}

    double partial_estimate() const noexcept { return partial_; }

private:
    double partial_;
};

} // namespace fadelab

#endif
