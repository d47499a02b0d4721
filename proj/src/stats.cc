// Copyright 2026 The nerport Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "nerport/stats.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

namespace nerport {
namespace {

double Mean(std::span<const double> xs) {
  return std::accumulate(xs.begin(), xs.end(), 0.0) /
         static_cast<double>(xs.size());
}

double SumSquaredDeviation(std::span<const double> xs, double mean) {
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return ss;
}

// Continued fraction for I_x(a, b), modified Lentz.
double BetaContinuedFraction(double a, double b, double x) {
  constexpr int kMaxIterations = 10000;
  constexpr double kEpsilon = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEpsilon) return h;
  }
  throw std::runtime_error("incomplete beta continued fraction did not converge");
}

}  // namespace

double Pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw std::invalid_argument("pearson: length mismatch");
  }
  if (xs.size() < 2) throw std::invalid_argument("pearson: need >= 2 points");
  const double mx = Mean(xs);
  const double my = Mean(ys);
  double sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  const double sxx = SumSquaredDeviation(xs, mx);
  const double syy = SumSquaredDeviation(ys, my);
  if (sxx == 0.0 || syy == 0.0) {
    throw std::invalid_argument("pearson: constant series");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double RegularizedIncompleteBeta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw std::invalid_argument("incomplete beta: a and b must be positive");
  }
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::invalid_argument("incomplete beta: x must lie in [0, 1]");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) -
                           std::lgamma(b) + a * std::log(x) +
                           b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * BetaContinuedFraction(a, b, x) / a;
  }
  return 1.0 - front * BetaContinuedFraction(b, a, 1.0 - x) / b;
}

double FDistributionSurvival(double f, double d1, double d2) {
  if (std::isnan(f)) return std::numeric_limits<double>::quiet_NaN();
  if (f <= 0.0) return 1.0;
  if (std::isinf(f)) return 0.0;
  return RegularizedIncompleteBeta(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * f));
}

double StudentTTwoSided(double t, double df) {
  if (std::isinf(t)) return 0.0;
  return RegularizedIncompleteBeta(df / 2.0, 0.5, df / (df + t * t));
}

AnovaResult OneWayAnova(const std::vector<std::vector<double>>& groups) {
  if (groups.size() < 2) {
    throw std::invalid_argument("anova: need at least two groups");
  }
  AnovaResult result;
  std::size_t total = 0;
  double grand_sum = 0.0;
  for (const auto& g : groups) {
    if (g.size() < 2) {
      throw std::invalid_argument("anova: every group needs >= 2 values");
    }
    total += g.size();
    grand_sum += std::accumulate(g.begin(), g.end(), 0.0);
    result.group_means.push_back(Mean(g));
  }
  const double grand_mean = grand_sum / static_cast<double>(total);
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const double diff = result.group_means[i] - grand_mean;
    result.ss_between += static_cast<double>(groups[i].size()) * diff * diff;
    result.ss_within += SumSquaredDeviation(groups[i], result.group_means[i]);
  }
  result.df_between = static_cast<int>(groups.size()) - 1;
  result.df_within = static_cast<int>(total - groups.size());
  const double msb = result.ss_between / result.df_between;
  const double msw = result.ss_within / result.df_within;
  if (msw == 0.0) {
    bool same = true;
    for (double m : result.group_means) same = same && m == result.group_means[0];
    result.f = same ? 0.0 : std::numeric_limits<double>::infinity();
    result.p_value = same ? 1.0 : 0.0;
    return result;
  }
  result.f = msb / msw;
  result.p_value =
      FDistributionSurvival(result.f, result.df_between, result.df_within);
  return result;
}

TTestResult WelchTTest(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() < 2 || ys.size() < 2) {
    throw std::invalid_argument("t-test: each sample needs >= 2 values");
  }
  const double nx = static_cast<double>(xs.size());
  const double ny = static_cast<double>(ys.size());
  const double mx = Mean(xs);
  const double my = Mean(ys);
  const double vx = SumSquaredDeviation(xs, mx) / (nx - 1.0);
  const double vy = SumSquaredDeviation(ys, my) / (ny - 1.0);
  const double se2 = vx / nx + vy / ny;
  TTestResult result;
  if (se2 == 0.0) {
    result.df = nx + ny - 2.0;
    if (mx == my) return result;
    result.t = mx > my ? std::numeric_limits<double>::infinity()
                       : -std::numeric_limits<double>::infinity();
    result.p_value = 0.0;
    return result;
  }
  result.t = (mx - my) / std::sqrt(se2);
  const double qx = vx / nx;
  const double qy = vy / ny;
  result.df = se2 * se2 / (qx * qx / (nx - 1.0) + qy * qy / (ny - 1.0));
  result.p_value = StudentTTwoSided(result.t, result.df);
  return result;
}

double CohensKappa(const std::vector<std::string>& a,
                   const std::vector<std::string>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("kappa: length mismatch");
  if (a.empty()) throw std::invalid_argument("kappa: empty label lists");
  const double n = static_cast<double>(a.size());
  std::map<std::string, std::pair<double, double>> marginals;
  double agree = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == b[i]) agree += 1.0;
    marginals[a[i]].first += 1.0;
    marginals[b[i]].second += 1.0;
  }
  const double p_o = agree / n;
  double p_e = 0.0;
  for (const auto& [label, counts] : marginals) {
    p_e += (counts.first / n) * (counts.second / n);
  }
  if (p_e == 1.0) return p_o == 1.0 ? 1.0 : 0.0;
  return (p_o - p_e) / (1.0 - p_e);
}

RunAggregate AggregateRuns(std::string metric, std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("aggregate: no values");
  RunAggregate out;
  out.metric = std::move(metric);
  out.count = values.size();
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (*lo == *hi) {
    out.mean = *lo;
  } else {
    out.mean = Mean(values);
    out.std_dev = std::sqrt(SumSquaredDeviation(values, out.mean) /
                            static_cast<double>(values.size() - 1));
  }
  out.values = std::move(values);
  return out;
}

}  // namespace nerport
