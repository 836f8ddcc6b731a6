#include "honeyquest/stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/normal.hpp>

#include "honeyquest/error.hpp"

namespace honeyquest {

namespace {

// Relative slack when comparing pmf values for the two-sided test, so that
// outcomes equal to pmf(k) up to rounding are counted.
constexpr double kRelErr = 1.0 + 1e-7;

void check_binom_args(int k, int n, double p) {
    if (n < 1 || k < 0 || k > n) throw Error(ErrorCode::invalid_argument, "need 0 <= k <= n and n >= 1");
    if (!(p > 0.0 && p < 1.0)) throw Error(ErrorCode::invalid_argument, "probability must be in (0, 1)");
}

}  // namespace

std::string_view to_string(Alternative a) {
    switch (a) {
        case Alternative::greater: return "greater";
        case Alternative::less: return "less";
        case Alternative::two_sided: return "two-sided";
    }
    return "?";
}

Alternative parse_alternative(std::string_view s) {
    if (s == "greater") return Alternative::greater;
    if (s == "less") return Alternative::less;
    if (s == "two-sided") return Alternative::two_sided;
    throw Error(ErrorCode::unknown_enum, "unknown alternative '" + std::string(s) + "'");
}

Interval wilson_interval(int k, int n, double confidence) {
    if (n < 1 || k < 0 || k > n) throw Error(ErrorCode::invalid_argument, "need 0 <= k <= n and n >= 1");
    if (!(confidence > 0.0 && confidence < 1.0))
        throw Error(ErrorCode::invalid_argument, "confidence must be in (0, 1)");
    const double z = boost::math::quantile(boost::math::normal(), 1.0 - (1.0 - confidence) / 2.0);
    const double nn = n, kk = k, z2 = z * z;
    const double center = (kk + z2 / 2.0) / (nn + z2);
    const double half = z / (nn + z2) * std::sqrt(kk * (nn - kk) / nn + z2 / 4.0);
    Interval iv{std::max(0.0, center - half), std::min(1.0, center + half)};
    if (k == 0) iv.lo = 0.0;
    if (k == n) iv.hi = 1.0;
    return iv;
}

double binom_pmf(int k, int n, double p) {
    if (k < 0 || k > n) return 0.0;
    return boost::math::pdf(boost::math::binomial(n, p), k);
}

TestResult binom_test(int k, int n, double p0, Alternative alt) {
    check_binom_args(k, n, p0);
    const boost::math::binomial dist(n, p0);
    TestResult r;
    r.n = n;
    r.statistic = static_cast<double>(k) / n;
    double p = 0.0;
    switch (alt) {
        case Alternative::less:
            p = boost::math::cdf(dist, k);
            break;
        case Alternative::greater:
            p = k == 0 ? 1.0 : boost::math::cdf(boost::math::complement(dist, k - 1));
            break;
        case Alternative::two_sided: {
            const double limit = boost::math::pdf(dist, k) * kRelErr;
            for (int x = 0; x <= n; ++x) {
                const double px = boost::math::pdf(dist, x);
                if (px <= limit) p += px;
            }
            break;
        }
    }
    r.p_value = std::clamp(p, 0.0, 1.0);
    return r;
}

double binom_power(int n, double p0, double p_true, double alpha, Alternative alt) {
    check_binom_args(0, n, p0);
    if (!(p_true > 0.0 && p_true < 1.0)) throw Error(ErrorCode::invalid_argument, "p_true must be in (0, 1)");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error(ErrorCode::invalid_argument, "alpha must be in [0, 1]");
    if (alpha == 0.0) return 0.0;
    double power = 0.0;
    for (int x = 0; x <= n; ++x)
        if (*binom_test(x, n, p0, alt).p_value <= alpha) power += binom_pmf(x, n, p_true);
    return std::clamp(power, 0.0, 1.0);
}

TestResult chi2_two_proportions(int k1, int n1, int k2, int n2) {
    if (n1 < 1 || n2 < 1) throw Error(ErrorCode::invalid_argument, "both totals must be positive");
    if (k1 < 0 || k1 > n1 || k2 < 0 || k2 > n2) throw Error(ErrorCode::invalid_argument, "need 0 <= k <= n");
    const double obs[2][2] = {{double(k1), double(n1 - k1)}, {double(k2), double(n2 - k2)}};
    const double rows[2] = {double(n1), double(n2)};
    const double cols[2] = {double(k1 + k2), double(n1 + n2 - k1 - k2)};
    const double total = n1 + n2;
    TestResult r;
    r.n = n1 + n2;
    double stat = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const double e = rows[i] * cols[j] / total;
            if (e < 5.0) r.low_expected = true;
            if (e > 0.0) stat += (obs[i][j] - e) * (obs[i][j] - e) / e;
        }
    r.statistic = stat;
    r.p_value = std::erfc(std::sqrt(stat / 2.0));
    return r;
}

}  // namespace honeyquest
