#include <doctest.h>

#include <cmath>
#include <vector>

#include "factions/prob.hpp"
#include "factions/rng.hpp"

using namespace factions;
using prob::UpdateMode;

TEST_CASE("binomial_pmf matches direct evaluation") {
    CHECK(prob::binomial_pmf(0, 1, 0.6) == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(prob::binomial_pmf(1, 1, 1.0) == 1.0);
    CHECK(prob::binomial_pmf(2, 4, 0.5) == doctest::Approx(0.375).epsilon(1e-15)); // C(4,2)/16
    CHECK(prob::binomial_pmf(0, 3, 0.0) == 1.0);
    CHECK(prob::binomial_pmf(1, 3, 0.0) == 0.0);
}

TEST_CASE("binomial_pmf normalizes over k") {
    for (int n : {1, 2, 7, 50, 64, 65, 200, 1000}) {
        for (double p : {0.01, 0.25, 0.5, 0.6, 0.95}) {
            double sum = 0.0;
            for (int k = 0; k <= n; ++k) sum += prob::binomial_pmf(k, n, p);
            CHECK(std::abs(sum - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("binomial_pmf rejects bad input") {
    CHECK_THROWS_AS((void)prob::binomial_pmf(5, 4, 0.5), std::invalid_argument);
    CHECK_THROWS_AS((void)prob::binomial_pmf(-1, 4, 0.5), std::invalid_argument);
    CHECK_THROWS_AS((void)prob::binomial_pmf(1, 4, 1.5), std::invalid_argument);
    CHECK_THROWS_AS((void)prob::binomial_pmf(0, 0, 0.5), std::invalid_argument);
}

TEST_CASE("bayes_posterior on a single favorable pull") {
    // prior 0.5, k=1, n=1, eps=0.1: 0.5*0.6 / (0.5*0.6 + 0.5*0.4) = 0.6
    CHECK(prob::bayes_posterior(0.5, 1, 1, 0.1) == doctest::Approx(0.6).epsilon(1e-14));
}

TEST_CASE("absorbing priors are fixed points") {
    for (int k : {0, 3, 5}) {
        CHECK(prob::bayes_posterior(0.0, k, 5, 0.2) == 0.0);
        CHECK(prob::bayes_posterior(1.0, k, 5, 0.2) == 1.0);
        for (double pf : {0.0, 0.3, 1.0}) {
            CHECK(prob::jeffrey_posterior(0.0, k, 5, 0.2, pf) == 0.0);
            CHECK(prob::jeffrey_posterior(1.0, k, 5, 0.2, pf) == 1.0);
        }
    }
}

TEST_CASE("bayes_posterior strictly increasing in k") {
    for (double prior : {0.05, 0.5, 0.95}) {
        for (double eps : {0.01, 0.1, 0.4}) {
            double prev = -1.0;
            for (int k = 0; k <= 10; ++k) {
                const double post = prob::bayes_posterior(prior, k, 10, eps);
                CHECK(post > prev);
                prev = post;
            }
        }
    }
}

TEST_CASE("prior_prob_evidence mixes the two hypotheses") {
    CHECK(prob::prior_prob_evidence(0.5, 1, 1, 0.1) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(prob::prior_prob_evidence(1.0, 1, 1, 0.1) == doctest::Approx(0.6).epsilon(1e-14));
    for (double prior : {0.0, 0.3, 1.0}) {
        double sum = 0.0;
        for (int k = 0; k <= 12; ++k) sum += prob::prior_prob_evidence(prior, k, 12, 0.2);
        CHECK(std::abs(sum - 1.0) < 1e-12);
    }
}

TEST_CASE("posterior is a martingale under the prior predictive") {
    for (double prior : {0.001, 0.1, 0.3, 0.5, 0.7, 0.9, 0.999}) {
        for (int n : {1, 2, 5, 10, 50, 200, 1000}) {
            for (double eps : {0.01, 0.1, 0.25, 0.45}) {
                double expect = 0.0;
                for (int k = 0; k <= n; ++k) {
                    expect += prob::prior_prob_evidence(prior, k, n, eps) *
                              prob::bayes_posterior(prior, k, n, eps);
                }
                CHECK(std::abs(expect - prior) < 1e-12);
            }
        }
    }
}

TEST_CASE("trust function values") {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CHECK(prob::trust_in_evidence(0.0, 2.5, 0.75, UpdateMode::Anti) == 1.0);
    CHECK(prob::trust_in_evidence(1.2, 2.5, 0.75, UpdateMode::Anti) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(prob::trust_in_evidence(1.2, 2.5, 0.75, UpdateMode::NoAnti) == 0.75);
    // near-maximal 2D distance at the universal-influence bound stays above the prior
    const double t = prob::trust_in_evidence(1.41, inv_sqrt2, 0.75, UpdateMode::Anti);
    CHECK(t == doctest::Approx(0.7507).epsilon(1e-3));
    CHECK(t >= 0.75);
    // far enough to clip at zero
    CHECK(prob::trust_in_evidence(1.4, 4.0, 0.5, UpdateMode::Anti) == 0.0);
}

TEST_CASE("no-anti influence cutoff at d*m = 1") {
    for (double pe : {0.1, 0.5, 0.9}) {
        // d*m >= 1: floored at the prior, exactly
        CHECK(prob::trust_in_evidence(0.5, 2.0, pe, UpdateMode::NoAnti) == pe);
        CHECK(prob::trust_in_evidence(1.25, 0.8, pe, UpdateMode::NoAnti) == pe);
        CHECK(prob::trust_in_evidence(1.0, 4.0, pe, UpdateMode::NoAnti) == pe);
        // d*m < 1: strictly positive influence
        CHECK(prob::trust_in_evidence(0.4, 2.0, pe, UpdateMode::NoAnti) > pe);
        CHECK(prob::trust_in_evidence(0.999, 1.0, pe, UpdateMode::NoAnti) > pe);
    }
}

TEST_CASE("universal influence bound for m <= 1/sqrt(2)") {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (double m : {0.1, 0.5, inv_sqrt2}) {
        for (double pe : {0.05, 0.5, 0.95}) {
            for (int i = 0; i <= 1414; ++i) {
                const double d = 1e-3 * static_cast<double>(i);
                CHECK(prob::trust_in_evidence(d, m, pe, UpdateMode::Anti) >= pe);
            }
        }
    }
}

TEST_CASE("jeffrey reduces to strict conditionalization at full trust") {
    for (double prior : {0.05, 0.38, 0.5, 0.54, 0.97}) {
        for (int k = 0; k <= 5; ++k) {
            CHECK(prob::jeffrey_posterior(prior, k, 5, 0.1, 1.0) ==
                  prob::bayes_posterior(prior, k, 5, 0.1));
        }
    }
}

TEST_CASE("jeffrey is the identity at pf_e equal to the prior predictive") {
    for (double prior : {0.05, 0.38, 0.5, 0.54, 0.97}) {
        for (int k = 0; k <= 5; ++k) {
            const double pe = prob::prior_prob_evidence(prior, k, 5, 0.1);
            CHECK(std::abs(prob::jeffrey_posterior(prior, k, 5, 0.1, pe) - prior) < 1e-12);
        }
    }
}

TEST_CASE("jeffrey at zero trust moves against the evidence") {
    // hE = 0.6, pE = 0.5, h~E = 0.4; all weight on ~E
    CHECK(prob::jeffrey_posterior(0.5, 1, 1, 0.1, 0.0) == doctest::Approx(0.4).epsilon(1e-14));
}

TEST_CASE("jeffrey is affine and monotone in pf_e") {
    for (double prior : {0.2, 0.5, 0.8}) {
        for (int k : {0, 4, 7}) {
            const double at0 = prob::jeffrey_posterior(prior, k, 7, 0.15, 0.0);
            const double at1 = prob::jeffrey_posterior(prior, k, 7, 0.15, 1.0);
            const double athalf = prob::jeffrey_posterior(prior, k, 7, 0.15, 0.5);
            CHECK(std::abs(athalf - 0.5 * (at0 + at1)) < 1e-14);
            const double strict = prob::bayes_posterior(prior, k, 7, 0.15);
            if (strict > prior) {
                CHECK(prob::jeffrey_posterior(prior, k, 7, 0.15, 0.9) >
                      prob::jeffrey_posterior(prior, k, 7, 0.15, 0.6));
            }
        }
    }
}

TEST_CASE("update outputs stay in [0,1] under random valid inputs") {
    Rng rng(20260810u);
    for (int trial = 0; trial < 20000; ++trial) {
        const double prior = rng.uniform01();
        const int n = 1 + static_cast<int>(rng.next_u64() % 60);
        const int k = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(n + 1));
        const double eps = 0.001 + 0.498 * rng.uniform01();
        const double pf = rng.uniform01();
        const double b = prob::bayes_posterior(prior, k, n, eps);
        const double j = prob::jeffrey_posterior(prior, k, n, eps, pf);
        CHECK(b >= 0.0);
        CHECK(b <= 1.0);
        CHECK(j >= 0.0);
        CHECK(j <= 1.0);
    }
}

TEST_CASE("belief distance") {
    const std::vector<double> a{1.0, 0.0}, b{0.0, 1.0};
    CHECK(prob::belief_distance(a, b) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(prob::belief_distance(a, a) == 0.0);
    const std::vector<double> c{1.0, 1.0, 1.0}, d{0.0, 0.0, 0.0};
    CHECK(prob::belief_distance(c, d) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
    const std::vector<double> e{0.5};
    CHECK_THROWS_AS((void)prob::belief_distance(a, e), std::invalid_argument);
}

TEST_CASE("likelihood-pair forms agree with the (k,n,eps) forms") {
    for (double prior : {0.1, 0.5, 0.9}) {
        for (int k = 0; k <= 6; ++k) {
            const double lg = prob::binomial_pmf(k, 6, 0.5 + 0.15);
            const double lb = prob::binomial_pmf(k, 6, 0.5 - 0.15);
            CHECK(prob::bayes_posterior_lp(prior, lg, lb) == prob::bayes_posterior(prior, k, 6, 0.15));
            CHECK(prob::prior_prob_evidence_lp(prior, lg, lb) == prob::prior_prob_evidence(prior, k, 6, 0.15));
            CHECK(prob::jeffrey_posterior_lp(prior, lg, lb, 0.42) ==
                  prob::jeffrey_posterior(prior, k, 6, 0.15, 0.42));
        }
    }
}
