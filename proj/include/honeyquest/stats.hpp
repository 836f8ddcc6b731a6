#pragma once

#include <optional>
#include <string_view>

namespace honeyquest {

enum class Alternative { greater, less, two_sided };

std::string_view to_string(Alternative a);
Alternative parse_alternative(std::string_view s);

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
};

struct TestResult {
    double statistic = 0.0;
    std::optional<double> p_value;  // absent when the test is undefined
    int n = 0;
    std::optional<double> power;
    bool low_expected = false;
};

/// Wilson score interval. lo is exactly 0 for k = 0 and hi exactly 1 for k = n.
Interval wilson_interval(int k, int n, double confidence = 0.95);

double binom_pmf(int k, int n, double p);

/// Exact binomial test; statistic is k/n. Two-sided sums every outcome
/// whose probability does not exceed that of k.
TestResult binom_test(int k, int n, double p0 = 0.5, Alternative alt = Alternative::greater);

/// Probability under p_true of landing in the exact test's rejection region.
double binom_power(int n, double p0, double p_true, double alpha = 0.05, Alternative alt = Alternative::greater);

/// Pearson chi-squared on the 2x2 table, no continuity correction, 1 df.
TestResult chi2_two_proportions(int k1, int n1, int k2, int n2);

}  // namespace honeyquest
