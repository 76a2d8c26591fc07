// SPDX-License-Identifier: Apache-2.0
//
// cloudmimo: air-to-ground LoS MIMO through a stochastic cloud layer
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

#ifndef CLOUDMIMO_ERRORS_HPP
#define CLOUDMIMO_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cloudmimo
{

// Invalid or inconsistent user-facing parameters (CLI exit code 1)
struct ConfigError : std::invalid_argument
{
    using std::invalid_argument::invalid_argument;
};

// Argument outside a function's mathematical domain
struct DomainError : std::domain_error
{
    using std::domain_error::domain_error;
};

// Degenerate link geometry (coincident endpoints etc.)
struct GeometryError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

// A request that would exhaust memory or time
struct ResourceError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

// Non-finite intermediate results
struct NumericError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

// Fitted closed forms evaluated outside the range where they stay meaningful
struct ModelValidityError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

// sigma = 0: the distribution is a point mass and has no density
struct DegenerateDistribution : std::domain_error
{
    using std::domain_error::domain_error;
};

} // namespace cloudmimo

#endif
