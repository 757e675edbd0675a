#include "rainbow/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

namespace rainbow {

namespace mp = boost::multiprecision;

namespace {

void require_sizes(std::size_t m, std::size_t n) {
    if (m < 2 || n < 2) throw std::invalid_argument("partite sizes must be at least 2");
}

double ln(std::size_t x) { return std::log(static_cast<double>(x)); }

// Relative shortfall tolerated by the >= comparisons in regime_valid.
constexpr double kBoundaryTolerance = 1e-12;

InequalityDiagnostic at_least(std::string name, double lhs, double rhs) {
    const double slack = lhs - rhs;
    const bool holds = slack >= -kBoundaryTolerance * std::max(std::abs(lhs), std::abs(rhs));
    return {std::move(name), lhs, rhs, slack, holds};
}

}  // namespace

// ---------------------------------------------------------------------------

RegimeParams::RegimeParams(std::size_t m, std::size_t n, std::size_t d, double c0, double epsilon,
                           std::optional<std::size_t> k)
    : m_(m), n_(n), d_(d), c0_(c0), epsilon_(epsilon), k_(k) {
    require_sizes(m, n);
    if (d < 2 || d > 100) throw std::invalid_argument("d must lie in [2, 100]");
    if (!(c0 >= 1.0) || !std::isfinite(c0)) throw std::invalid_argument("c0 must be a finite value >= 1");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
    if (k && *k == 0) throw std::invalid_argument("k must be at least 1");
}

std::size_t RegimeParams::k() const noexcept {
    if (k_) return *k_;
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(c0_ * ln(n_))));
}

double RegimeParams::log_C1() const noexcept {
    return 10.0 * static_cast<double>(d_) * std::numbers::ln2 + std::log(c0_);
}
double RegimeParams::log_C2() const noexcept { return log_C1() - std::log(epsilon_); }
double RegimeParams::C1() const noexcept { return std::exp(log_C1()); }
double RegimeParams::C2() const noexcept { return std::exp(log_C2()); }
double RegimeParams::c1() const noexcept { return std::pow(std::numbers::ln2, 1.0 / static_cast<double>(d_)) / 2.0; }
double RegimeParams::c2() const noexcept {
    return 1.0 / std::pow(2.0 * std::numbers::ln2, 1.0 / static_cast<double>(d_));
}

double RegimeParams::threshold() const { return rainbow::threshold(m_, n_, d_); }

double RegimeParams::log_upper_probability() const {
    return (odd() ? log_C1() : log_C2()) + std::log(threshold());
}

bool RegimeParams::symbolic_only() const { return log_upper_probability() > 0.0; }

// ---------------------------------------------------------------------------

double p1(std::size_t m, std::size_t n, std::size_t d) {
    require_sizes(m, n);
    if (d < 3 || d % 2 == 0) throw std::domain_error("p1 requires an odd d >= 3");
    const double dd = static_cast<double>(d);
    const double log_mn = ln(m) + ln(n);
    return std::exp(std::log(log_mn) / dd - (dd - 1.0) / (2.0 * dd) * log_mn);
}

double p2(std::size_t m, std::size_t n, std::size_t d) {
    require_sizes(m, n);
    if (d < 2 || d % 2 == 1) throw std::domain_error("p2 requires an even d >= 2");
    const double dd = static_cast<double>(d);
    return std::exp(std::log(ln(n)) / dd - 0.5 * ln(m) - (dd - 2.0) / (2.0 * dd) * ln(n));
}

double threshold(std::size_t m, std::size_t n, std::size_t d) { return d % 2 == 1 ? p1(m, n, d) : p2(m, n, d); }

double diameter_threshold(std::size_t m, std::size_t n, std::size_t d) {
    if (d % 2 == 1) return p1(m, n, d);
    require_sizes(m, n);
    if (d < 2) throw std::domain_error("d must be at least 2");
    const double dd = static_cast<double>(d);
    return std::exp(std::log(2.0 * ln(n)) / dd - 0.5 * ln(m) - (dd - 2.0) / (2.0 * dd) * ln(n));
}

double lower_bound_probability(std::size_t m, std::size_t n, std::size_t d) {
    const double dd = static_cast<double>(d);
    if (d % 2 == 1) return std::pow(std::numbers::ln2, 1.0 / dd) / 2.0 * p1(m, n, d);
    return diameter_threshold(m, n, d) / std::pow(2.0 * std::numbers::ln2, 1.0 / dd);
}

RegimeCheck regime_valid(std::size_t m, std::size_t n, double p, std::size_t d, double epsilon) {
    RegimeCheck check;
    const double log4 = std::pow(std::log(static_cast<double>(n)), 4);
    const double md = static_cast<double>(m);
    const double nd = static_cast<double>(n);
    if (d % 2 == 1) {
        check.inequalities.push_back(at_least("p*n >= p*m", p * nd, p * md));
        check.inequalities.push_back(at_least("p*m >= (ln n)^4", p * md, log4));
    } else {
        const double e = 1.0 - epsilon;
        check.inequalities.push_back(at_least("p*n^(1-eps) >= p*m^(1-eps)", p * std::pow(nd, e), p * std::pow(md, e)));
        check.inequalities.push_back(at_least("p*m^(1-eps) >= (ln n)^4", p * std::pow(md, e), log4));
    }
    check.valid = std::all_of(check.inequalities.begin(), check.inequalities.end(),
                              [](const InequalityDiagnostic& i) { return i.holds; });
    return check;
}

std::string to_string(DiameterClass c) {
    switch (c) {
        case DiameterClass::AtMostDPlus1: return "diam<=d+1";
        case DiameterClass::AtLeastDPlus2: return "diam>=d+2";
        case DiameterClass::Indeterminate: return "indeterminate";
    }
    return "indeterminate";
}

DiameterCriterion diameter_criterion(std::size_t m, std::size_t n, double p, std::size_t d, double dead_band) {
    require_sizes(m, n);
    if (d < 1) throw std::invalid_argument("d must be positive");
    if (!(p >= 0.0)) throw std::invalid_argument("p must be non-negative");
    const double dd = static_cast<double>(d);
    const double lm = ln(m), lnn = ln(n);
    DiameterCriterion out;
    if (d % 2 == 1) {
        const double lead = p == 0.0 ? 0.0 : std::exp(dd * std::log(p) + (dd - 1.0) / 2.0 * (lm + lnn));
        out.value = lead - (lm + lnn);
    } else {
        const double lead = p == 0.0 ? 0.0 : std::exp(dd * std::log(p) + dd / 2.0 * lm + (dd / 2.0 - 1.0) * lnn);
        out.value = lead - 2.0 * lnn;
    }
    if (std::abs(out.value) < dead_band)
        out.expected = DiameterClass::Indeterminate;
    else
        out.expected = out.value > 0 ? DiameterClass::AtMostDPlus1 : DiameterClass::AtLeastDPlus2;
    return out;
}

RainbowProbability rainbow_success_prob(std::size_t d, std::size_t path_len) {
    if (d < 2) throw std::invalid_argument("d must be at least 2");
    if (path_len != d && path_len != d + 1) throw std::invalid_argument("path_len must be d or d+1");
    // x! / x^x with x = path_len.
    mp::cpp_int num = 1, den = 1;
    for (std::size_t i = 2; i <= path_len; ++i) num *= i;
    for (std::size_t i = 0; i < path_len; ++i) den *= path_len;
    const mp::cpp_int g = mp::gcd(num, den);
    num /= g;
    den /= g;

    RainbowProbability out;
    out.value = mp::cpp_rational(num, den).convert_to<double>();
    out.numerator = std::move(num);
    out.denominator = std::move(den);
    const double base = path_len == d + 1 ? 8.0 : 4.0;
    out.lower_bound = std::pow(base, -static_cast<double>(d));
    if (out.value < out.lower_bound) throw std::logic_error("rainbow probability below its lower bound");
    return out;
}

FailureBound per_pair_failure_bound(std::size_t k, std::size_t d, double c0, double n) {
    if (k == 0) throw std::invalid_argument("k must be at least 1");
    if (d < 2 || d > 64) throw std::invalid_argument("d must lie in [2, 64]");
    if (!(c0 >= 1.0)) throw std::invalid_argument("c0 must be >= 1");
    if (!(n >= 2.0) || !std::isfinite(n)) throw std::invalid_argument("n must be a finite value >= 2");

    const double dd = static_cast<double>(d);
    const double log_n = std::log(n);
    FailureBound out;
    out.path_count = std::exp(10.0 * dd * std::numbers::ln2) * c0 * log_n;
    const double j = static_cast<double>(k - 1);
    if (j > out.path_count) throw std::invalid_argument("k-1 exceeds the number of disjoint paths");

    out.q = std::min(rainbow_success_prob(d, d + 1).value, rainbow_success_prob(d, d).value);

    // ln C(N, j) = sum_{i<j} ln(N - i) - ln j!, with ln(N - i) = ln N + log1p(-i/N).
    const double log_N = std::log(out.path_count);
    double log_binom = 0.0;
    for (std::size_t i = 0; i < k - 1; ++i)
        log_binom += log_N + std::log1p(-static_cast<double>(i) / out.path_count);
    log_binom -= std::lgamma(j + 1.0);
    out.log_bound = log_binom + (out.path_count - j) * std::log1p(-out.q);

    // (e * 2^(10d + 8^-d) / 2^(8^-d 2^(10d)))^(c0 ln n)
    const double eight_pow = std::exp(-3.0 * dd * std::numbers::ln2);
    const double ratio = std::exp((10.0 * dd - 3.0 * dd) * std::numbers::ln2);  // 8^-d 2^(10d) = 2^(7d)
    out.log_chain_bound = c0 * log_n * (1.0 + (10.0 * dd + eight_pow) * std::numbers::ln2 - ratio * std::numbers::ln2);

    out.exponent = -out.log_bound / log_n;
    out.below_n_pow_100 = out.log_bound <= -100.0 * log_n;
    return out;
}

std::optional<double> failure_bound_cutoff(std::size_t d, double c0, double target_exponent, double n_max) {
    std::optional<double> cutoff;
    for (int j = 1;; ++j) {
        const double n = std::pow(10.0, j / 4.0);
        if (n > n_max * (1 + 1e-12)) break;
        if (n < 2.0) continue;
        const auto k = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(c0 * std::log(n))));
        const bool ok = per_pair_failure_bound(k, d, c0, n).log_bound <= -target_exponent * std::log(n);
        if (ok && !cutoff) cutoff = n;
        if (!ok) cutoff.reset();
    }
    return cutoff;
}

double log_chernoff_lower_tail(double mean, double frac) {
    if (!(mean > 0.0) || !std::isfinite(mean)) throw std::domain_error("mean must be positive and finite");
    if (!(frac > 0.0 && frac < 1.0)) throw std::domain_error("frac must lie in (0, 1)");
    return -frac * frac * mean / 2.0;
}

double chernoff_lower_tail(double mean, double frac) { return std::exp(log_chernoff_lower_tail(mean, frac)); }

}  // namespace rainbow
