/******************************************************************************
 * Copyright 2026 The hscsim Authors. All Rights Reserved.
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
 *****************************************************************************/

#pragma once

#include <cmath>
#include <initializer_list>
#include <stdexcept>
#include <string>

namespace hscsim {

/// Raised when a model function receives NaN or infinite input.
class NonFiniteInput : public std::domain_error {
 public:
  explicit NonFiniteInput(const std::string& where)
      : std::domain_error(where + ": non-finite input") {}
};

/// Raised by the integrator when a state component leaves the finite range
/// or its magnitude reaches the divergence guard.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(double time, const std::string& what)
      : std::runtime_error(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// Invalid parameter set or configuration value. `field` names the offending
/// entry so front ends can print field-level diagnostics.
class ParameterError : public std::invalid_argument {
 public:
  ParameterError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

namespace detail {

inline void require_finite(const char* where, std::initializer_list<double> values) {
  for (double v : values) {
    if (!std::isfinite(v)) throw NonFiniteInput(where);
  }
}

inline void require_positive(const char* field, double v) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ParameterError(field, "must be finite and > 0");
}

inline void require_non_negative(const char* field, double v) {
  if (!(v >= 0.0) || !std::isfinite(v)) throw ParameterError(field, "must be finite and >= 0");
}

}  // namespace detail
}  // namespace hscsim
