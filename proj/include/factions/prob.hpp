#pragma once
// Probability kernels: binomial likelihoods, strict Bayesian updating on
// two-point bandit hypotheses, the linear distance-based trust function,
// Jeffrey conditionalization, and belief-space distance.
//
// Everything here is a pure function of its arguments; no shared state.

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>

namespace factions::prob {

enum class UpdateMode {
    Anti,   // trust may drop below the prior probability of the evidence
    NoAnti, // trust is floored at the prior: distant peers are ignored, never inverted
};

inline double clamp01(double x) {
    if (x < 0.0) return 0.0;
    if (x > 1.0) return 1.0;
    return x;
}

namespace detail {

// Exact-arithmetic regime: coefficient by multiplicative recurrence and
// powers by plain multiplication. No libm, error O(n) ulps.
inline constexpr int kSmallN = 64;

inline double pow_small(double base, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

inline double binom_coeff(int n, int j) {
    double c = 1.0;
    for (int i = 0; i < j; ++i) c = c * static_cast<double>(n - i) / static_cast<double>(i + 1);
    return c;
}

// log C(n,k) as a compensated sum; used above kSmallN where the coefficient
// would overflow or the plain powers would underflow.
inline double log_binom_coeff(int n, int k) {
    const int j = k < n - k ? k : n - k;
    double sum = 0.0, comp = 0.0;
    for (int i = 1; i <= j; ++i) {
        const double term = std::log(static_cast<double>(n - j + i)) - std::log(static_cast<double>(i));
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

} // namespace detail

// P(k successes | n trials, success rate p).
inline double binomial_pmf(int k, int n, double p) {
    if (n < 1) throw std::invalid_argument("binomial_pmf: n must be positive, got " + std::to_string(n));
    if (k < 0 || k > n)
        throw std::invalid_argument("binomial_pmf: k must be in [0, n], got k=" + std::to_string(k) +
                                    " n=" + std::to_string(n));
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("binomial_pmf: p must be in [0, 1], got " + std::to_string(p));

    if (p == 0.0) return k == 0 ? 1.0 : 0.0;
    if (p == 1.0) return k == n ? 1.0 : 0.0;

    if (n <= detail::kSmallN) {
        const int j = k < n - k ? k : n - k;
        return detail::binom_coeff(n, j) * detail::pow_small(p, k) * detail::pow_small(1.0 - p, n - k);
    }
    const double lpmf = detail::log_binom_coeff(n, k) +
                        static_cast<double>(k) * std::log(p) +
                        static_cast<double>(n - k) * std::log1p(-p);
    return std::exp(lpmf);
}

// Likelihood-pair forms. The engine precomputes binomial_pmf tables for the
// two bandit hypotheses once per run and feeds them through these; the
// (k, n, eps) overloads below are the same computations applied to freshly
// evaluated pmfs.

inline double prior_prob_evidence_lp(double prior, double lik_good, double lik_bad) {
    return prior * lik_good + (1.0 - prior) * lik_bad;
}

inline double bayes_posterior_lp(double prior, double lik_good, double lik_bad) {
    const double num = prior * lik_good;
    const double den = num + (1.0 - prior) * lik_bad;
    if (den == 0.0) return prior; // only reachable from an absorbing prior
    return num / den;
}

// Jeffrey conditionalization: mix the posterior given E with the posterior
// given not-E, weighted by the updater's credence pf_e that E obtained.
// P(H|~E) is recovered by total probability from prior, P(H|E) and P(E).
inline double jeffrey_posterior_lp(double prior, double lik_good, double lik_bad, double pf_e) {
    const double p_e = prior_prob_evidence_lp(prior, lik_good, lik_bad);
    if (p_e >= 1.0) return prior; // evidence certain a priori: uninformative
    if (p_e == 0.0) return prior;
    const double h_e = bayes_posterior_lp(prior, lik_good, lik_bad);
    const double h_not_e = (prior - h_e * p_e) / (1.0 - p_e);
    return clamp01(h_e * pf_e + h_not_e * (1.0 - pf_e));
}

namespace detail {

inline void check_update_args(const char* who, int k, int n, double eps) {
    if (n < 1) throw std::invalid_argument(std::string(who) + ": n must be positive");
    if (k < 0 || k > n) throw std::invalid_argument(std::string(who) + ": k must be in [0, n]");
    if (!(eps > 0.0 && eps < 0.5))
        throw std::invalid_argument(std::string(who) + ": eps must be in (0, 0.5), got " + std::to_string(eps));
}

} // namespace detail

// Agent's prior probability of seeing k successes in n pulls of arm B,
// mixing the "B pays 0.5+eps" and "B pays 0.5-eps" hypotheses.
inline double prior_prob_evidence(double prior, int k, int n, double eps) {
    detail::check_update_args("prior_prob_evidence", k, n, eps);
    return prior_prob_evidence_lp(prior, binomial_pmf(k, n, 0.5 + eps), binomial_pmf(k, n, 0.5 - eps));
}

// Strict conditionalization on an observed batch.
inline double bayes_posterior(double prior, int k, int n, double eps) {
    detail::check_update_args("bayes_posterior", k, n, eps);
    return bayes_posterior_lp(prior, binomial_pmf(k, n, 0.5 + eps), binomial_pmf(k, n, 0.5 - eps));
}

// Credence assigned to a peer's reported evidence at belief distance d,
// mistrust multiplier m and prior evidence probability prior_e.
// Anti: max(1 - d*m*(1 - prior_e), 0). NoAnti additionally floors at prior_e.
inline double trust_in_evidence(double d, double m, double prior_e, UpdateMode mode) {
    if (!(prior_e >= 0.0 && prior_e <= 1.0))
        throw std::invalid_argument("trust_in_evidence: prior_e must be in [0, 1]");
    const double dm = d * m;
    if (mode == UpdateMode::NoAnti) {
        if (dm >= 1.0) return prior_e; // influence cutoff, exact
        const double t = 1.0 - dm * (1.0 - prior_e);
        return t > prior_e ? t : prior_e;
    }
    const double t = 1.0 - dm * (1.0 - prior_e);
    return t > 0.0 ? t : 0.0;
}

inline double jeffrey_posterior(double prior, int k, int n, double eps, double pf_e) {
    detail::check_update_args("jeffrey_posterior", k, n, eps);
    if (!(pf_e >= 0.0 && pf_e <= 1.0))
        throw std::invalid_argument("jeffrey_posterior: pf_e must be in [0, 1]");
    return jeffrey_posterior_lp(prior, binomial_pmf(k, n, 0.5 + eps), binomial_pmf(k, n, 0.5 - eps), pf_e);
}

// Euclidean distance between two points in belief space.
inline double belief_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw std::invalid_argument("belief_distance: dimension mismatch, " + std::to_string(a.size()) +
                                    " vs " + std::to_string(b.size()));
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double diff = a[i] - b[i];
        s += diff * diff;
    }
    return std::sqrt(s);
}

} // namespace factions::prob
