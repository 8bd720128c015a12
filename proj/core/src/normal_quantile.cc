// Copyright 2026 The gnnsim Authors
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

#include <cmath>
#include <numbers>
#include <string>

#include "gnnsim/envelope.h"
#include "gnnsim/error.h"

namespace gnnsim {
namespace {

// Acklam's rational approximation, relative error about 1.15e-9 before
// refinement.
constexpr double kA[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                         -2.759285104469687e+02, 1.383577518672690e+02,
                         -3.066479806614716e+01, 2.506628277459239e+00};
constexpr double kB[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                         -1.556989798598866e+02, 6.680131188771972e+01,
                         -1.328068155288572e+01};
constexpr double kC[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                         -2.400758277161838e+00, -2.549732539343734e+00,
                         4.374664141464968e+00, 2.938163982698783e+00};
constexpr double kD[] = {7.784695709041462e-03, 3.224671290700398e-01,
                         2.445134137142996e+00, 3.754408661907416e+00};
constexpr double kLowRegion = 0.02425;

double acklam(double q) {
  if (q < kLowRegion) {
    const double t = std::sqrt(-2.0 * std::log(q));
    return (((((kC[0] * t + kC[1]) * t + kC[2]) * t + kC[3]) * t + kC[4]) * t +
            kC[5]) /
           ((((kD[0] * t + kD[1]) * t + kD[2]) * t + kD[3]) * t + 1.0);
  }
  const double u = q - 0.5;
  const double r = u * u;
  return (((((kA[0] * r + kA[1]) * r + kA[2]) * r + kA[3]) * r + kA[4]) * r +
          kA[5]) * u /
         (((((kB[0] * r + kB[1]) * r + kB[2]) * r + kB[3]) * r + kB[4]) * r +
          1.0);
}

// q in (0, 0.5]. The CDF residual is evaluated with erfc on the lower tail,
// where it keeps full relative precision.
double lower_quantile(double q) {
  double x = acklam(q);
  const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - q;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  x -= u / (1.0 + 0.5 * x * u);
  return x;
}

}  // namespace

double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double normal_quantile(double q) {
  if (!(q > 0.0 && q < 1.0)) {
    throw DomainError("normal_quantile: q must lie in (0, 1), got " +
                      std::to_string(q));
  }
  if (q == 0.5) return 0.0;
  // 1 - q is exact for q >= 0.5, so the upper half reuses the lower tail.
  if (q > 0.5) return -lower_quantile(1.0 - q);
  return lower_quantile(q);
}

double repetition_quantile(double p, std::uint64_t m) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("confidence must lie in (0, 1), got " + std::to_string(p));
  }
  if (m < 1) throw DomainError("repetitions must be at least 1");
  const double log_q = std::log(p) / static_cast<double>(m);
  const double tail = -std::expm1(log_q);
  if (tail <= 0.0 || tail >= 1.0) {
    throw DomainError("p^(1/m) rounds outside (0, 1)");
  }
  if (tail < 0.5) return -lower_quantile(tail);
  return normal_quantile(std::exp(log_q));
}

}  // namespace gnnsim
