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

#include "mimown/beta_wavelet.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <vector>

#include "mimown/errors.hpp"
#include "mimown/fft.hpp"

namespace mimown {

namespace {

constexpr int kAdmissibilityFftSize = 1 << 14;
constexpr int kDecaySamples = 1024;
// End nodes of the support quadrature sit this fraction of the support
// width inside the interval.
constexpr double kEdgeOffset = 1e-12;

std::string describe(double p, double q, double x0, double x1) {
  std::ostringstream os;
  os << "(p=" << p << ", q=" << q << ", x0=" << x0 << ", x1=" << x1 << ")";
  return os.str();
}

}  // namespace

BetaParams::BetaParams(double p, double q, double x0, double x1)
    : p_(p), q_(q), x0_(x0), x1_(x1), xc_(0.0) {
  if (!std::isfinite(p) || !std::isfinite(q) || !std::isfinite(x0) ||
      !std::isfinite(x1)) {
    throw ValidationError("BetaParams: non-finite value " +
                          describe(p, q, x0, x1));
  }
  if (p < 0.0 || q < 0.0) {
    throw ValidationError("BetaParams: p and q must be >= 0 " +
                          describe(p, q, x0, x1));
  }
  if (p + q <= 0.0) {
    throw ValidationError("BetaParams: p + q must be > 0 " +
                          describe(p, q, x0, x1));
  }
  if (!(x0 < x1)) {
    throw ValidationError("BetaParams: x0 must be < x1 " +
                          describe(p, q, x0, x1));
  }
  xc_ = (p * x1 + q * x0) / (p + q);
}

double beta_eval(const BetaParams& params, double x) {
  if (!(x > params.x0() && x < params.x1())) return 0.0;
  double value = 1.0;
  if (params.p() > 0.0) {
    value *= std::pow((x - params.x0()) / (params.xc() - params.x0()), params.p());
  }
  if (params.q() > 0.0) {
    value *= std::pow((params.x1() - x) / (params.x1() - params.xc()), params.q());
  }
  return value;
}

void beta_derivatives(const BetaParams& params, int n, double x,
                      std::span<double> out) {
  if (n < 0 || n > kMaxBetaDerivative) {
    throw ValidationError("beta_derivative: order " + std::to_string(n) +
                          " outside [0, " + std::to_string(kMaxBetaDerivative) +
                          "]");
  }
  if (out.size() <= static_cast<std::size_t>(n)) {
    throw DimensionError("beta_derivatives output", static_cast<std::size_t>(n) + 1,
                         out.size());
  }
  if (!(x > params.x0() && x < params.x1())) {
    std::fill_n(out.begin(), n + 1, 0.0);
    return;
  }
  out[0] = beta_eval(params, x);
  if (n == 0) return;

  const double p = params.p();
  const double q = params.q();
  const double left = x - params.x0();
  const double right = params.x1() - x;

  // k-th derivative of P1:
  //   (-1)^k k! p left^-(k+1) - k! q right^-(k+1)
  std::array<double, kMaxBetaDerivative> p1{};
  p1[0] = (p * right - q * left) / (left * right);
  const double inv_left = 1.0 / left;
  const double inv_right = 1.0 / right;
  double pow_left = inv_left;
  double pow_right = inv_right;
  double factorial = 1.0;
  for (int k = 1; k < n; ++k) {
    pow_left *= inv_left;
    pow_right *= inv_right;
    factorial *= k;
    const double signed_p = (k % 2 == 1) ? -p : p;
    p1[k] = factorial * (signed_p * pow_left - q * pow_right);
  }

  std::array<double, kMaxBetaDerivative + 1> binom{};
  binom[0] = 1.0;
  for (int m = 0; m < n; ++m) {
    // binom holds row m of Pascal's triangle.
    double sum = 0.0;
    for (int k = 0; k <= m; ++k) sum += binom[k] * out[k] * p1[m - k];
    out[m + 1] = sum;
    for (int k = m + 1; k > 0; --k) binom[k] += binom[k - 1];
  }
}

double beta_derivative(const BetaParams& params, int n, double x) {
  std::array<double, kMaxBetaDerivative + 1> buf{};
  beta_derivatives(params, n, x, buf);
  return buf[n];
}

WaveletSpec::WaveletSpec(BetaParams params, int order, double a, double b)
    : params_(params), order_(order), a_(a), b_(b) {
  if (order < 1 || order > kMaxWaveletOrder) {
    throw ValidationError("WaveletSpec: order " + std::to_string(order) +
                          " outside [1, " + std::to_string(kMaxWaveletOrder) +
                          "]");
  }
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw ValidationError("WaveletSpec: dilation a must be finite and > 0, got " +
                          std::to_string(a));
  }
  if (!std::isfinite(b)) {
    throw ValidationError("WaveletSpec: translation b must be finite");
  }
}

double psi_eval(const WaveletSpec& spec, double x) {
  if (!(x > spec.support_lo() && x < spec.support_hi())) return 0.0;
  const double u = (x - spec.b()) / spec.a();
  return beta_derivative(spec.params(), spec.order(), u) / std::sqrt(spec.a());
}

double support_integral(const WaveletSpec& spec, int n_points) {
  if (n_points < 2) {
    throw ValidationError("support_integral: need at least 2 points");
  }
  const BetaParams& bp = spec.params();
  const double lo = spec.support_lo();
  const double hi = spec.support_hi();
  const double h = (hi - lo) / (n_points - 1);
  const double inv_sqrt_a = 1.0 / std::sqrt(spec.a());

  const double edge = (bp.x1() - bp.x0()) * kEdgeOffset;
  const double f_lo =
      beta_derivative(bp, spec.order(), bp.x0() + edge) * inv_sqrt_a;
  const double f_hi =
      beta_derivative(bp, spec.order(), bp.x1() - edge) * inv_sqrt_a;

  double interior = 0.0;
  for (int k = 1; k < n_points - 1; ++k) {
    interior += psi_eval(spec, lo + k * h);
  }
  return h * (0.5 * (f_lo + f_hi) + interior);
}

AdmissibilityReport check_admissibility(const WaveletSpec& spec, int n_grid) {
  if (n_grid < 1024) {
    throw ValidationError("check_admissibility: n_grid must be >= 1024, got " +
                          std::to_string(n_grid));
  }
  AdmissibilityReport report;
  report.integral_abs = std::abs(support_integral(spec, n_grid));

  const double lo = spec.support_lo();
  const double hi = spec.support_hi();
  const double width = hi - lo;

  // |psi_hat(w_k)|^2 / w_k summed over positive bins; the spectrum of a real
  // atom is symmetric, so the negative half doubles it.
  const int n_fft = kAdmissibilityFftSize;
  const double start = 0.5 * (lo + hi) - 2.0 * width;
  const double dt = 4.0 * width / n_fft;
  std::vector<double> sampled(n_fft);
  for (int k = 0; k < n_fft; ++k) sampled[k] = psi_eval(spec, start + k * dt);
  const auto spectrum = fft_real(sampled, n_fft);
  double acc = 0.0;
  const int half = n_fft / 2;
  for (int k = 1; k <= half; ++k) {
    const double weight = (k == 1 || k == half) ? 0.5 : 1.0;
    const double magnitude = std::abs(spectrum[k]) * dt;
    // integrand * dw with w_k = k * dw
    acc += weight * magnitude * magnitude / k;
  }
  report.c_psi_estimate = 2.0 * std::numbers::pi * 2.0 * acc;

  double decay = 0.0;
  for (int k = 0; k < kDecaySamples; ++k) {
    const double t = static_cast<double>(k) / (kDecaySamples - 1);
    decay = std::max(decay, std::abs(psi_eval(spec, lo - width * t)));
    decay = std::max(decay, std::abs(psi_eval(spec, hi + width * t)));
  }
  report.support_decay = decay;
  return report;
}

}  // namespace mimown
