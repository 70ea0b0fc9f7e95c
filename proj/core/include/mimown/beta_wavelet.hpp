// Copyright 2026 The mimown Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Beta function, its analytic derivatives, and the dilated/translated Beta
// wavelet atoms built from them.
//
//   beta(x) = ((x - x0) / (xc - x0))^p * ((x1 - x) / (x1 - xc))^q  on (x0, x1)
//   beta(x) = 0                                                     elsewhere
//
// with mode xc = (p * x1 + q * x0) / (p + q), so beta(xc) = 1.
//
// The n-th derivative is obtained from beta' = beta * P1 with
// P1(x) = p / (x - x0) - q / (x1 - x), by the Leibniz recurrence
//   beta^(m+1) = sum_{k=0..m} C(m, k) beta^(k) P1^(m-k).

#include <cstddef>
#include <span>

namespace mimown {

// Largest derivative order beta_derivative accepts.
inline constexpr int kMaxBetaDerivative = 15;
// Largest mother-wavelet order; training needs one order more.
inline constexpr int kMaxWaveletOrder = kMaxBetaDerivative - 1;

class BetaParams {
 public:
  // Throws ValidationError unless p >= 0, q >= 0, p + q > 0 and x0 < x1
  // (all finite).
  BetaParams(double p, double q, double x0, double x1);

  double p() const noexcept { return p_; }
  double q() const noexcept { return q_; }
  double x0() const noexcept { return x0_; }
  double x1() const noexcept { return x1_; }
  double xc() const noexcept { return xc_; }

  bool operator==(const BetaParams&) const = default;

 private:
  double p_;
  double q_;
  double x0_;
  double x1_;
  double xc_;
};

double beta_eval(const BetaParams& params, double x);

// n-th derivative of beta_eval at x, 0 <= n <= kMaxBetaDerivative. Returns 0
// outside the open support, including exactly at x0 and x1.
double beta_derivative(const BetaParams& params, int n, double x);

// Writes beta^(0..n)(x) into out[0..n]; out.size() must be > n.
void beta_derivatives(const BetaParams& params, int n, double x,
                      std::span<double> out);

// Mother wavelet = order-th derivative of Beta, mapped by
//   psi_ab(x) = a^(-1/2) psi((x - b) / a).
class WaveletSpec {
 public:
  // Throws ValidationError unless 1 <= order <= kMaxWaveletOrder, a > 0 and b
  // finite.
  WaveletSpec(BetaParams params, int order, double a, double b);

  const BetaParams& params() const noexcept { return params_; }
  int order() const noexcept { return order_; }
  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }

  // Support of the atom in input coordinates: (b + a*x0, b + a*x1).
  double support_lo() const noexcept { return b_ + a_ * params_.x0(); }
  double support_hi() const noexcept { return b_ + a_ * params_.x1(); }

  // Same mother wavelet at another dilation/translation.
  WaveletSpec with_position(double a, double b) const {
    return WaveletSpec(params_, order_, a, b);
  }

  bool operator==(const WaveletSpec&) const = default;

 private:
  BetaParams params_;
  int order_;
  double a_;
  double b_;
};

// a^(-1/2) * beta^(order)((x - b) / a); exactly 0 outside the atom support.
double psi_eval(const WaveletSpec& spec, double x);

struct AdmissibilityReport {
  double integral_abs = 0.0;    // |trapezoid integral of psi over its support|
  double c_psi_estimate = 0.0;  // 2*pi * int |psi_hat(w)|^2 / |w| dw, w != 0
  double support_decay = 0.0;   // max |psi| sampled outside the support
};

// n_grid >= 1024 trapezoid points over the support; C_psi from a 2^14-point
// DFT of the atom sampled over four support widths.
AdmissibilityReport check_admissibility(const WaveletSpec& spec, int n_grid);

// Composite trapezoid integral of psi over its closed support with n_points
// nodes. The two end nodes take the interior one-sided limit of psi.
double support_integral(const WaveletSpec& spec, int n_points);

}  // namespace mimown
