/*
 * Copyright 2026 The rategp Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace rategp
{

/// Base class for all errors raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Invalid parameters or violated preconditions. Maps to exit code 1.
class ArgumentError : public Error
{
public:
    using Error::Error;
};

/// Malformed or inconsistent input data (files, shapes). Maps to exit code 2.
class DataError : public Error
{
public:
    using Error::Error;
};

/// Numerical failures: factorizations, non-finite results. Maps to exit code 3.
class NumericalError : public Error
{
public:
    using Error::Error;
};

}  // namespace rategp
