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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hscsim/errors.hpp"

namespace hscsim {

/// Stiffness/damping of the adversarial target and their time derivatives.
struct ProfileValue {
  double K = 0.0;
  double B = 0.0;
  double K_dot = 0.0;
  double B_dot = 0.0;
};

/// One row of a user-supplied impedance table.
struct ProfileSample {
  double t = 0.0;
  double K = 0.0;
  double B = 0.0;
  double K_dot = 0.0;
  double B_dot = 0.0;
};

/// Time-varying stiffness K_T(t) and damping B_T(t).
///
/// Three kinds are supported:
///   - constant:    K_T = K0, B_T = B0
///   - exponential: K_T = K0 exp(growth_rate t), B_T = B0
///   - sampled:     a table of (t, K, B, K_dot, B_dot) interpolated with cubic
///                  Hermite segments, so the reported derivatives are exactly
///                  the derivatives of the interpolant and the profile is C^1.
///
/// Closed-form kinds are defined for all t. A sampled profile is only defined
/// on [front().t, back().t].
class ImpedanceProfile {
 public:
  enum class Kind { constant, exponential, sampled };

  ImpedanceProfile() = default;

  static ImpedanceProfile constant(double K0, double B0) {
    ImpedanceProfile p;
    p.kind_ = Kind::constant;
    p.K0_ = K0;
    p.B0_ = B0;
    return p;
  }

  static ImpedanceProfile exponential(double K0, double B0, double growth_rate) {
    ImpedanceProfile p;
    p.kind_ = Kind::exponential;
    p.K0_ = K0;
    p.B0_ = B0;
    p.growth_rate_ = growth_rate;
    return p;
  }

  /// Needs at least two rows with strictly increasing t. At interior rows the
  /// central difference of K and B must match the supplied derivatives to
  /// 1% (catches wrong signs and units, not truncation error); otherwise
  /// ParameterError names the offending row.
  static ImpedanceProfile sampled(std::vector<ProfileSample> table) {
    if (table.size() < 2) throw ParameterError("target.samples", "need at least two rows");
    for (std::size_t i = 0; i < table.size(); ++i) {
      const auto& s = table[i];
      detail::require_finite("ImpedanceProfile::sampled", {s.t, s.K, s.B, s.K_dot, s.B_dot});
      if (i > 0 && !(s.t > table[i - 1].t)) {
        throw ParameterError("target.samples", "row " + std::to_string(i) + ": t not increasing");
      }
    }
    constexpr double kRelTol = 1e-2;
    auto consistent = [](double central, double supplied) {
      const double scale = std::max(std::abs(central), std::abs(supplied));
      return std::abs(central - supplied) <= kRelTol * scale + 1e-12;
    };
    for (std::size_t i = 1; i + 1 < table.size(); ++i) {
      const double h = table[i + 1].t - table[i - 1].t;
      const double dK = (table[i + 1].K - table[i - 1].K) / h;
      const double dB = (table[i + 1].B - table[i - 1].B) / h;
      if (!consistent(dK, table[i].K_dot) || !consistent(dB, table[i].B_dot)) {
        throw ParameterError("target.samples", "row " + std::to_string(i) +
                                                   ": derivative inconsistent with values");
      }
    }
    ImpedanceProfile p;
    p.kind_ = Kind::sampled;
    p.K0_ = table.front().K;
    p.B0_ = table.front().B;
    p.table_ = std::move(table);
    return p;
  }

  Kind kind() const noexcept { return kind_; }
  double K0() const noexcept { return K0_; }
  double B0() const noexcept { return B0_; }
  double growth_rate() const noexcept { return growth_rate_; }
  const std::vector<ProfileSample>& table() const noexcept { return table_; }

  bool closed_form() const noexcept { return kind_ != Kind::sampled; }

  /// Declared horizon [t_begin, t_end]; infinite for closed-form kinds.
  std::pair<double, double> horizon() const {
    if (kind_ == Kind::sampled) return {table_.front().t, table_.back().t};
    constexpr double inf = std::numeric_limits<double>::infinity();
    return {-inf, inf};
  }

  ProfileValue operator()(double t) const {
    switch (kind_) {
      case Kind::constant:
        return {K0_, B0_, 0.0, 0.0};
      case Kind::exponential: {
        const double K = K0_ * std::exp(growth_rate_ * t);
        return {K, B0_, growth_rate_ * K, 0.0};
      }
      case Kind::sampled:
        return interpolate(t);
    }
    return {};
  }

 private:
  ProfileValue interpolate(double t) const {
    const auto [lo, hi] = horizon();
    if (!(t >= lo && t <= hi)) {
      throw std::out_of_range("impedance profile evaluated at t=" + std::to_string(t) +
                              " outside sampled horizon");
    }
    auto it = std::upper_bound(table_.begin(), table_.end(), t,
                               [](double v, const ProfileSample& s) { return v < s.t; });
    if (it == table_.end()) --it;
    if (it == table_.begin()) ++it;
    const ProfileSample& a = *(it - 1);
    const ProfileSample& b = *it;
    const double h = b.t - a.t;
    const double s = (t - a.t) / h;
    // Cubic Hermite basis and its derivative with respect to s.
    const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
    const double h10 = s * (1 - s) * (1 - s);
    const double h01 = s * s * (3 - 2 * s);
    const double h11 = s * s * (s - 1);
    const double d00 = 6 * s * s - 6 * s;
    const double d10 = 3 * s * s - 4 * s + 1;
    const double d01 = -d00;
    const double d11 = 3 * s * s - 2 * s;
    auto value = [&](double ya, double da, double yb, double db) {
      return h00 * ya + h10 * h * da + h01 * yb + h11 * h * db;
    };
    auto slope = [&](double ya, double da, double yb, double db) {
      return (d00 * ya + d01 * yb) / h + d10 * da + d11 * db;
    };
    return {value(a.K, a.K_dot, b.K, b.K_dot), value(a.B, a.B_dot, b.B, b.B_dot),
            slope(a.K, a.K_dot, b.K, b.K_dot), slope(a.B, a.B_dot, b.B, b.B_dot)};
  }

  Kind kind_ = Kind::constant;
  double K0_ = 0.0;
  double B0_ = 0.0;
  double growth_rate_ = 0.0;
  std::vector<ProfileSample> table_;
};

inline ProfileValue eval_profile(const ImpedanceProfile& profile, double t) { return profile(t); }

/// Adversarial target: I_T theta_dd + B_T(t) theta_d_dot + K_T(t) theta_d =
/// alpha_T_sw tau_sw + alpha_T_c tau_c, with storage-function constant alpha.
struct TargetParams {
  double I_T = 1e-2;
  double alpha = 0.5;
  double alpha_T_sw = 1.0;
  double alpha_T_c = 0.15;
  ImpedanceProfile profile = ImpedanceProfile::exponential(2.8e-2, 4.99e-3, 1.05);

  /// alpha = 0 is accepted here; it selects the mechanical-energy storage used
  /// to audit passive targets. validate_profile itself requires alpha > 0.
  void validate() const {
    detail::require_positive("target.I_T", I_T);
    detail::require_non_negative("target.alpha", alpha);
    detail::require_non_negative("target.alpha_T_sw", alpha_T_sw);
    detail::require_non_negative("target.alpha_T_c", alpha_T_c);
    if (alpha_T_sw == 0.0 && alpha_T_c == 0.0) {
      throw ParameterError("target.alpha_T_sw", "at least one torque weight must be nonzero");
    }
  }
};

struct TargetState {
  double theta_d = 0.0;
  double theta_dot_d = 0.0;
};

class BetaNegative : public std::domain_error {
 public:
  BetaNegative(double t, double beta)
      : std::domain_error("storage function undefined: beta(" + std::to_string(t) +
                          ") = " + std::to_string(beta) + " < 0") {}
};

/// Weighted torque fed into the target, alpha_T_sw tau_sw + alpha_T_c tau_c.
inline double target_input(double tau_sw, double tau_c, const TargetParams& p) {
  return p.alpha_T_sw * tau_sw + p.alpha_T_c * tau_c;
}

inline double target_accel(const TargetState& s, double tau_sw, double tau_c, double t,
                           const TargetParams& p) {
  detail::require_finite("target_accel", {s.theta_d, s.theta_dot_d, tau_sw, tau_c, t});
  const ProfileValue v = p.profile(t);
  return (target_input(tau_sw, tau_c, p) - v.B * s.theta_dot_d - v.K * s.theta_d) / p.I_T;
}

/// beta(t) = K_T + alpha B_T - alpha^2 I_T.
inline double beta(double t, const TargetParams& p) {
  const ProfileValue v = p.profile(t);
  return v.K + p.alpha * v.B - p.alpha * p.alpha * p.I_T;
}

namespace detail {

inline double storage_expression(const TargetState& s, double beta_t, const TargetParams& p) {
  const double w = s.theta_dot_d + p.alpha * s.theta_d;
  return 0.5 * p.I_T * w * w + 0.5 * beta_t * s.theta_d * s.theta_d;
}

}  // namespace detail

/// V_a = 1/2 I_T (theta_d_dot + alpha theta_d)^2 + 1/2 beta(t) theta_d^2.
inline double storage_value(const TargetState& s, double t, const TargetParams& p) {
  const double b = beta(t, p);
  if (b < 0.0) throw BetaNegative(t, b);
  return detail::storage_expression(s, b, p);
}

/// Same quadratic form without the beta >= 0 precondition. Used for logging
/// runs whose profile was not accepted, where V_a may be indefinite.
inline double storage_value_unchecked(const TargetState& s, double t, const TargetParams& p) {
  return detail::storage_expression(s, beta(t, p), p);
}

/// The four additive pieces of dV_a/dt along the target dynamics.
struct StorageRateTerms {
  double damping_coefficient = 0.0;  // alpha I_T - B_T, multiplies theta_d_dot^2
  double growth_coefficient = 0.0;   // K_T_dot/2 + alpha B_T_dot/2 - alpha K_T, multiplies theta_d^2
  double velocity_quadratic = 0.0;
  double position_quadratic = 0.0;
  double velocity_supply = 0.0;      // theta_d_dot u
  double position_supply = 0.0;      // alpha theta_d u

  double total() const {
    return velocity_quadratic + position_quadratic + velocity_supply + position_supply;
  }
  /// The commonly quoted expansion, which omits the alpha theta_d u term.
  /// Equal to total() only when the target is unforced or theta_d = 0.
  double printed_expansion() const {
    return velocity_quadratic + position_quadratic + velocity_supply;
  }
};

inline StorageRateTerms storage_rate_terms(const TargetState& s, double tau_sw, double tau_c,
                                           double t, const TargetParams& p) {
  detail::require_finite("storage_rate", {s.theta_d, s.theta_dot_d, tau_sw, tau_c, t});
  const ProfileValue v = p.profile(t);
  const double u = target_input(tau_sw, tau_c, p);
  StorageRateTerms r;
  r.damping_coefficient = p.alpha * p.I_T - v.B;
  r.growth_coefficient = 0.5 * v.K_dot + 0.5 * p.alpha * v.B_dot - p.alpha * v.K;
  r.velocity_quadratic = r.damping_coefficient * s.theta_dot_d * s.theta_dot_d;
  r.position_quadratic = r.growth_coefficient * s.theta_d * s.theta_d;
  r.velocity_supply = s.theta_dot_d * u;
  r.position_supply = p.alpha * s.theta_d * u;
  return r;
}

/// Exact time derivative of storage_value along target_accel.
inline double storage_rate(const TargetState& s, double tau_sw, double tau_c, double t,
                           const TargetParams& p) {
  return storage_rate_terms(s, tau_sw, tau_c, t, p).total();
}

/// kappa(t) = -K_T - alpha B_T + alpha^2 I_T (= -beta(t)).
inline double kappa(double t, const TargetParams& p) { return -beta(t, p); }

/// Upper envelope kappa(0) exp(2 alpha t) implied by d kappa/dt < 2 alpha kappa.
inline double gronwall_bound(double t, const TargetParams& p) {
  return kappa(0.0, p) * std::exp(2.0 * p.alpha * t);
}

/// Right-hand side of the admissible-region constraint
/// K_T + alpha B_T > alpha^2 I_T + (K0 + alpha B0 - alpha^2 I_T) exp(2 alpha t).
inline double admissible_region_floor(double t, const TargetParams& p) {
  const ProfileValue v0 = p.profile(0.0);
  const double a2I = p.alpha * p.alpha * p.I_T;
  return a2I + (v0.K + p.alpha * v0.B - a2I) * std::exp(2.0 * p.alpha * t);
}

enum class ViolatedCondition { none, damping_bound, growth_bound, beta_nonneg };

inline const char* to_string(ViolatedCondition c) {
  switch (c) {
    case ViolatedCondition::none: return "none";
    case ViolatedCondition::damping_bound: return "damping_bound";
    case ViolatedCondition::growth_bound: return "growth_bound";
    case ViolatedCondition::beta_nonneg: return "beta_nonneg";
  }
  return "unknown";
}

struct ValidationMargins {
  double rho_damping = 0.0;     // min of alpha I_T - B_T
  double rho_growth = 0.0;      // min of K_T_dot/2 + alpha B_T_dot/2 - alpha K_T
  double beta_min = 0.0;
  double region_slack_min = 0.0;  // min over t > 0 of K_T + alpha B_T - admissible_region_floor
};

struct ValidationReport {
  bool accepted = false;
  std::optional<double> first_violation_time;
  ViolatedCondition violated_condition = ViolatedCondition::none;
  ValidationMargins margins;
  bool region_constraint_holds = false;
  double horizon = 0.0;
  std::size_t samples = 0;
};

namespace detail {

struct ClosedFormVerdict {
  ViolatedCondition condition = ViolatedCondition::none;
  double time = 0.0;
};

// Constant and exponential kinds have constant B_T, so the damping bound is
// time-invariant, the growth term has the fixed sign of K0 (g/2 - alpha), and
// beta is monotone, attaining its minimum at an endpoint of [0, H].
inline ClosedFormVerdict closed_form_check(const TargetParams& p, double horizon) {
  const ImpedanceProfile& prof = p.profile;
  const double g = prof.kind() == ImpedanceProfile::Kind::exponential ? prof.growth_rate() : 0.0;
  if (!(p.alpha * p.I_T - prof.B0() > 0.0)) return {ViolatedCondition::damping_bound, 0.0};
  if (!(prof.K0() * (0.5 * g - p.alpha) > 0.0)) return {ViolatedCondition::growth_bound, 0.0};
  const double b0 = beta(0.0, p);
  const double bH = beta(horizon, p);
  if (b0 < 0.0) return {ViolatedCondition::beta_nonneg, 0.0};
  if (bH < 0.0) return {ViolatedCondition::beta_nonneg, horizon};
  return {};
}

}  // namespace detail

/// Checks the non-passivity conditions on n_samples uniform points of
/// [0, horizon]:
///   (a) alpha I_T - B_T(t) > 0
///   (b) K_T_dot/2 + alpha B_T_dot/2 - alpha K_T > 0
///   (c) beta(t) >= 0
/// Closed-form kinds are additionally checked analytically over the whole
/// interval. The admissible-region constraint is reported separately; it is
/// required to hold strictly only for t > 0, since at t = 0 it is an identity.
inline ValidationReport validate_profile(const TargetParams& p, double horizon,
                                         std::size_t n_samples = 10000) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw std::invalid_argument("validate_profile: horizon must be finite and > 0");
  }
  if (n_samples < 2) throw std::invalid_argument("validate_profile: need n_samples >= 2");
  if (!(p.alpha > 0.0)) throw ParameterError("target.alpha", "must be > 0 for profile validation");
  p.validate();

  ValidationReport rep;
  rep.horizon = horizon;
  rep.samples = n_samples;
  constexpr double inf = std::numeric_limits<double>::infinity();
  rep.margins = {inf, inf, inf, inf};
  rep.region_constraint_holds = true;

  for (std::size_t i = 0; i < n_samples; ++i) {
    const double t = horizon * static_cast<double>(i) / static_cast<double>(n_samples - 1);
    const ProfileValue v = p.profile(t);
    const double a = p.alpha * p.I_T - v.B;
    const double b = 0.5 * v.K_dot + 0.5 * p.alpha * v.B_dot - p.alpha * v.K;
    const double c = v.K + p.alpha * v.B - p.alpha * p.alpha * p.I_T;
    rep.margins.rho_damping = std::min(rep.margins.rho_damping, a);
    rep.margins.rho_growth = std::min(rep.margins.rho_growth, b);
    rep.margins.beta_min = std::min(rep.margins.beta_min, c);
    if (i > 0) {
      const double slack = v.K + p.alpha * v.B - admissible_region_floor(t, p);
      rep.margins.region_slack_min = std::min(rep.margins.region_slack_min, slack);
      if (!(slack > 0.0)) rep.region_constraint_holds = false;
    }
    if (rep.violated_condition == ViolatedCondition::none) {
      ViolatedCondition bad = ViolatedCondition::none;
      if (!(a > 0.0)) {
        bad = ViolatedCondition::damping_bound;
      } else if (!(b > 0.0)) {
        bad = ViolatedCondition::growth_bound;
      } else if (!(c >= 0.0)) {
        bad = ViolatedCondition::beta_nonneg;
      }
      if (bad != ViolatedCondition::none) {
        rep.violated_condition = bad;
        rep.first_violation_time = t;
      }
    }
  }

  if (rep.violated_condition == ViolatedCondition::none && p.profile.closed_form()) {
    const auto cf = detail::closed_form_check(p, horizon);
    if (cf.condition != ViolatedCondition::none) {
      rep.violated_condition = cf.condition;
      rep.first_violation_time = cf.time;
    }
  }
  rep.accepted = rep.violated_condition == ViolatedCondition::none;
  return rep;
}

/// Suggests alpha = 2 B0 / I_T when that choice satisfies the damping bound
/// and beta(0) >= 0; std::nullopt means no suggestion is feasible.
inline std::optional<double> suggest_alpha(const ImpedanceProfile& profile, double I_T) {
  if (!(I_T > 0.0)) return std::nullopt;
  const ProfileValue v = profile(profile.closed_form() ? 0.0 : profile.horizon().first);
  const double alpha = 2.0 * v.B / I_T;
  if (!(alpha > 0.0)) return std::nullopt;
  const double damping_slack = alpha * I_T - v.B;
  const double beta0 = v.K + alpha * v.B - alpha * alpha * I_T;
  if (!(damping_slack > 0.0) || beta0 < 0.0) return std::nullopt;
  return alpha;
}

}  // namespace hscsim
