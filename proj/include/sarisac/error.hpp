// SPDX-License-Identifier: Apache-2.0
//
// sarisac: beamforming design for ISAC with a sensor-aided active RIS
// Copyright (C) 2026 The sarisac authors
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

namespace sarisac {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Dimension mismatch, non-finite value or violated precondition.
class InvalidInput : public Error {
  public:
    using Error::Error;
};

/// The target channel toward the sensor array vanishes, so no receive combiner exists.
class DegenerateTarget : public Error {
  public:
    using Error::Error;
};

/// No QoS- and power-feasible starting point was found.
class InitializationFailure : public Error {
  public:
    using Error::Error;
};

/// Configuration file could not be parsed or failed validation.
class ConfigError : public Error {
  public:
    using Error::Error;
};

}  // namespace sarisac
