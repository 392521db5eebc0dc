#pragma once

#include <optional>
#include <utility>

#include "levmap/errors.hpp"

namespace levmap {

/// European call in the Black-Scholes model.
struct CallSpec {
    double S{0.0};      // spot
    double K{0.0};      // strike
    double sigma{0.0};  // volatility
    double r{0.0};      // rate
    double tau{0.0};    // time to maturity T - t, > 0
};

void validate(const CallSpec& spec);

struct CallQuote {
    double price{0.0};
    double n_d1{0.0};  // stock weight of the replicating portfolio (delta)
    double n_d2{0.0};
};

/// C = S N(d1) - K e^{-r tau} N(d2), d1 = d2 + sigma sqrt(tau).
CallQuote call_price(const CallSpec& spec);

/// Central-difference dC/dS with h = 1e-4 S; matches N(d1) to 1e-6.
double delta_check(const CallSpec& spec);

/// Root search for sigma sqrt(tau) is capped here; a target needing more is
/// reported as unbounded rather than chased.
inline constexpr double kAtmRootCap = 50.0;

struct AtmSolution {
    double sigma_root_tau{0.0};
    bool bounded{true};
};

/// At-the-money matching with r = 0: the unique s = sigma sqrt(tau) > 0
/// with N(s/2) = 1 / (2 - sigma/lambda), by bracketed bisection to residual
/// below 1e-12. Throws NoSolutionError when lambda <= sigma.
AtmSolution atm_match(double lambda, double sigma);

/// (sigma/alpha, tau alpha^2): every member shares sigma sqrt(tau) and thus
/// solves the same ATM matching equation.
std::pair<double, double> scaling_family(double sigma_star, double tau_star,
                                         double alpha);

/// Market data for the general strike/maturity search.
struct MatchProblem {
    double S{100.0};
    double sigma{0.2};
    double r{0.0};
    double lambda{0.0};
};

struct MatchResult {
    double K{0.0};
    double tau{0.0};
    double n_d1{0.0};
    double n_d2{0.0};
    double resid_stock{0.0};  // N(d1) - (lambda/sigma) C/S
    double resid_bond{0.0};   // N(d2) + (1 - lambda/sigma) C e^{r tau} / K
};

/// Value of (lambda/sigma)(K/S)(e^{-r tau} - 1); a candidate is admissible
/// only when this is >= -1.
double match_constraint_value(const MatchProblem& problem, double K, double tau);

/// Finds (K, tau) whose replicating call weights equal the Kelly-optimal
/// stock/bond weights: both residuals below 1e-9 and the constraint
/// satisfied, or nothing when no bracket exists (in particular whenever
/// lambda <= sigma). The search runs in (log K/S, log tau) over
/// K/S in [0.01, 100] and tau in [1e-3, 50], trying strikes nearest the
/// money first, so the returned representative is deterministic.
std::optional<MatchResult> general_match(const MatchProblem& problem);

}  // namespace levmap
