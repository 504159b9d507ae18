// SPDX-License-Identifier: Apache-2.0
//
// cpsc-fama: link-level simulator for codebook-based fluid antenna uplink access
// Copyright (C) 2026 The cpsc-fama Authors
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

namespace cpsc
{

// Bad argument to a library call (dimension mismatch, out-of-range count, ...).
class InvalidArgument : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

// A factorization or solve that could not be completed.
class NumericalError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

// Inputs that violate a precondition established by an earlier stage,
// e.g. two transmitting users on one codeword.
class InvalidState : public std::logic_error
{
  public:
    using std::logic_error::logic_error;
};

// Exhaustive search refused because the subset count exceeds the budget.
class BudgetExceeded : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

// Malformed experiment configuration or override.
class ConfigError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

// A CSV file that does not match the expected column layout.
class SchemaError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

} // namespace cpsc
