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

// Statistics used by the experiment reports: Pearson correlation, one-way
// ANOVA, Welch's t-test, Cohen's kappa and run aggregation. Distribution tails
// come from the regularized incomplete beta function evaluated with a
// modified Lentz continued fraction.

#ifndef NERPORT_STATS_H_
#define NERPORT_STATS_H_

#include <span>
#include <string>
#include <vector>

namespace nerport {

// Sample correlation. Throws std::invalid_argument on length mismatch, fewer
// than two points, or a constant series.
double Pearson(std::span<const double> xs, std::span<const double> ys);

// I_x(a, b) for a, b > 0 and x in [0, 1].
double RegularizedIncompleteBeta(double a, double b, double x);

// P(F > f) for an F(d1, d2) variable.
double FDistributionSurvival(double f, double d1, double d2);

// Two-sided P(|T| > |t|) for Student's t with `df` degrees of freedom.
double StudentTTwoSided(double t, double df);

struct AnovaResult {
  double f = 0.0;
  int df_between = 0;
  int df_within = 0;
  double ss_between = 0.0;
  double ss_within = 0.0;
  double p_value = 1.0;
  std::vector<double> group_means;
};

// Needs at least two groups of at least two values. Zero within-group
// variance gives F = 0, p = 1 when the means agree and F = inf, p = 0
// otherwise.
AnovaResult OneWayAnova(const std::vector<std::vector<double>>& groups);

struct TTestResult {
  double t = 0.0;
  double df = 0.0;
  double p_value = 1.0;
};

// Welch's unequal-variance two-sample t-test, two-sided. Each sample needs at
// least two values.
TTestResult WelchTTest(std::span<const double> xs, std::span<const double> ys);

// (p_o - p_e) / (1 - p_e). When p_e = 1 the result is 1 for perfect agreement
// and 0 otherwise.
double CohensKappa(const std::vector<std::string>& a,
                   const std::vector<std::string>& b);

struct RunAggregate {
  std::string metric;
  std::vector<double> values;
  double mean = 0.0;
  double std_dev = 0.0;  // n - 1 denominator; 0 for a single run
  std::size_t count = 0;
};

RunAggregate AggregateRuns(std::string metric, std::vector<double> values);

}  // namespace nerport

#endif  // NERPORT_STATS_H_
