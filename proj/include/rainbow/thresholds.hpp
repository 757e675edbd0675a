#pragma once

// Closed-form quantities around the rainbow k-connectivity threshold of
// G(m, n, p). All logarithms are natural unless a name says otherwise.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace rainbow {

/// (m, n, d, k, c0, epsilon) with the derived constants.
///
/// C1 = 2^(10d) c0 and C2 = 2^(10d) c0 / epsilon overflow double for large d,
/// so they are kept as natural logs; C1()/C2() return +inf past that point.
class RegimeParams {
public:
    /// Throws std::invalid_argument unless m, n >= 2, 2 <= d <= 100, c0 >= 1
    /// and 0 < epsilon < 1.
    RegimeParams(std::size_t m, std::size_t n, std::size_t d, double c0 = 1.0, double epsilon = 0.5,
                 std::optional<std::size_t> k = std::nullopt);

    std::size_t m() const noexcept { return m_; }
    std::size_t n() const noexcept { return n_; }
    std::size_t d() const noexcept { return d_; }
    double c0() const noexcept { return c0_; }
    double epsilon() const noexcept { return epsilon_; }
    bool odd() const noexcept { return d_ % 2 == 1; }

    /// k as given, else max(1, floor(c0 ln n)).
    std::size_t k() const noexcept;

    double log_C1() const noexcept;
    double log_C2() const noexcept;
    double C1() const noexcept;
    double C2() const noexcept;
    /// (ln 2)^(1/d) / 2
    double c1() const noexcept;
    /// 1 / (2 ln 2)^(1/d)
    double c2() const noexcept;

    /// The threshold of the matching parity (p1 for odd d, p2 for even d).
    double threshold() const;
    /// ln of the upper-regime edge probability C1 p1 (odd) or C2 p2 (even).
    double log_upper_probability() const;
    /// True when the upper-regime probability exceeds 1, i.e. the constant
    /// is only meaningful symbolically at this (m, n).
    bool symbolic_only() const;

private:
    std::size_t m_, n_, d_;
    double c0_, epsilon_;
    std::optional<std::size_t> k_;
};

/// (ln(mn))^(1/d) / (m^((d-1)/(2d)) n^((d-1)/(2d))). d odd; throws
/// std::domain_error on an even d.
double p1(std::size_t m, std::size_t n, std::size_t d);

/// (ln n)^(1/d) / (m^(1/2) n^((d-2)/(2d))). d even; throws std::domain_error
/// on an odd d.
double p2(std::size_t m, std::size_t n, std::size_t d);

/// p1 or p2 by parity of d.
double threshold(std::size_t m, std::size_t n, std::size_t d);

/// Probability at which the diameter criterion vanishes:
/// odd d: (ln(mn))^(1/d) / (m n)^((d-1)/(2d))  (equals p1);
/// even d: (2 ln n)^(1/d) / (m^(1/2) n^((d-2)/(2d))).
double diameter_threshold(std::size_t m, std::size_t n, std::size_t d);

/// Largest multiple of the diameter threshold covered by the lower bound:
/// c1 * p1 for odd d, c2 * diameter_threshold for even d (numerically p2).
double lower_bound_probability(std::size_t m, std::size_t n, std::size_t d);

struct InequalityDiagnostic {
    std::string name;
    double lhs = 0;
    double rhs = 0;
    double slack = 0;  // lhs - rhs
    bool holds = false;
};

struct RegimeCheck {
    bool valid = false;
    std::vector<InequalityDiagnostic> inequalities;
};

/// Odd d: p n >= p m >= (ln n)^4. Even d: p n^(1-eps) >= p m^(1-eps) >= (ln n)^4.
/// Comparisons accept a relative shortfall up to 1e-12 so exact boundary
/// cases survive rounding.
RegimeCheck regime_valid(std::size_t m, std::size_t n, double p, std::size_t d, double epsilon = 0.5);

enum class DiameterClass { AtMostDPlus1, AtLeastDPlus2, Indeterminate };

std::string to_string(DiameterClass c);

struct DiameterCriterion {
    double value = 0;
    DiameterClass expected = DiameterClass::Indeterminate;
};

/// Odd d: p^d m^((d-1)/2) n^((d-1)/2) - ln(mn).
/// Even d: p^d m^(d/2) n^(d/2-1) - 2 ln n.
/// |value| < dead_band maps to Indeterminate.
DiameterCriterion diameter_criterion(std::size_t m, std::size_t n, double p, std::size_t d,
                                     double dead_band = 1e-9);

struct RainbowProbability {
    boost::multiprecision::cpp_int numerator;
    boost::multiprecision::cpp_int denominator;  // reduced fraction
    double value = 0;
    double lower_bound = 0;  // 8^-d for length d+1, 4^-d for length d
};

/// Probability that a fixed path of path_len edges is rainbow under a uniform
/// (d+1)- or d-coloring as used in the upper bound: path_len == d+1 gives
/// (d+1)!/(d+1)^(d+1), path_len == d gives d!/d^d. Throws
/// std::invalid_argument for any other length or d < 2, and std::logic_error
/// if the value falls below its stated lower bound.
RainbowProbability rainbow_success_prob(std::size_t d, std::size_t path_len);

struct FailureBound {
    double path_count = 0;        // N = 2^(10d) c0 ln n
    double q = 0;                 // min(q1, q2)
    double log_bound = 0;         // ln[ C(N, k-1) (1-q)^(N-(k-1)) ]
    double log_chain_bound = 0;   // ln of the closed-form relaxation (valid for k-1 <= c0 ln n)
    double exponent = 0;          // -log_bound / ln n: bound = n^(-exponent)
    bool below_n_pow_100 = false;
};

/// Per-pair probability that at most k-1 of N internally disjoint paths are
/// rainbow, with N = 2^(10d) c0 ln n, evaluated in log-space.
/// Requires k >= 1, 0 <= k-1 <= N, n >= 2, 2 <= d <= 64, c0 >= 1.
FailureBound per_pair_failure_bound(std::size_t k, std::size_t d, double c0, double n);

/// Smallest n on the grid {10^(j/4) : n >= 2} up to n_max such that the
/// bound is <= n^-target_exponent at that n and at every larger grid point,
/// with k = max(1, floor(c0 ln n)). nullopt when no such n exists.
std::optional<double> failure_bound_cutoff(std::size_t d, double c0, double target_exponent = 100.0,
                                           double n_max = 1e12);

/// exp(-frac^2 mean / 2): bound on Pr[X < (1-frac) mean] for a sum of
/// independent indicators with mean `mean`. Requires mean > 0, 0 < frac < 1.
double chernoff_lower_tail(double mean, double frac);
double log_chernoff_lower_tail(double mean, double frac);

}  // namespace rainbow
