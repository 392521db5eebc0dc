#include "levmap/option.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "levmap/normal.hpp"

namespace levmap {

void validate(const CallSpec& spec) {
    if (!std::isfinite(spec.S) || !std::isfinite(spec.K) || !std::isfinite(spec.sigma) ||
        !std::isfinite(spec.r) || !std::isfinite(spec.tau)) {
        throw InvalidParameterError("call spec must be finite");
    }
    if (!(spec.S > 0.0) || !(spec.K > 0.0) || !(spec.sigma > 0.0) || !(spec.tau > 0.0)) {
        throw InvalidParameterError("call spec requires S, K, sigma, tau > 0");
    }
}

CallQuote call_price(const CallSpec& spec) {
    validate(spec);
    const double srt = spec.sigma * std::sqrt(spec.tau);
    const double d2 =
        (std::log(spec.S / spec.K) + (spec.r - 0.5 * spec.sigma * spec.sigma) * spec.tau) /
        srt;
    const double d1 = d2 + srt;
    CallQuote quote;
    quote.n_d1 = norm_cdf(d1);
    quote.n_d2 = norm_cdf(d2);
    quote.price = spec.S * quote.n_d1 - spec.K * std::exp(-spec.r * spec.tau) * quote.n_d2;
    return quote;
}

double delta_check(const CallSpec& spec) {
    validate(spec);
    const double h = 1e-4 * spec.S;
    CallSpec up = spec;
    CallSpec dn = spec;
    up.S += h;
    dn.S -= h;
    return (call_price(up).price - call_price(dn).price) / (2.0 * h);
}

AtmSolution atm_match(double lambda, double sigma) {
    if (!std::isfinite(lambda) || !std::isfinite(sigma) || !(lambda > 0.0) ||
        !(sigma > 0.0)) {
        throw InvalidParameterError("atm_match requires positive lambda and sigma");
    }
    if (lambda <= sigma) {
        throw NoSolutionError("no call matches the Kelly weights when lambda <= sigma");
    }
    const double target = 1.0 / (2.0 - sigma / lambda);  // in (1/2, 1)
    if (norm_cdf(0.5 * kAtmRootCap) < target) {
        return {kAtmRootCap, false};  // target beyond the cap: report unbounded
    }
    double lo = 0.0;  // N(0) - target < 0
    double hi = kAtmRootCap;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (norm_cdf(0.5 * mid) < target ? lo : hi) = mid;
    }
    return {0.5 * (lo + hi), true};
}

std::pair<double, double> scaling_family(double sigma_star, double tau_star,
                                         double alpha) {
    if (!std::isfinite(sigma_star) || !std::isfinite(tau_star) ||
        !std::isfinite(alpha) || !(alpha > 0.0)) {
        throw InvalidParameterError("scaling requires finite inputs and alpha > 0");
    }
    return {sigma_star / alpha, tau_star * alpha * alpha};
}

double match_constraint_value(const MatchProblem& problem, double K, double tau) {
    return (problem.lambda / problem.sigma) * (K / problem.S) *
           (std::exp(-problem.r * tau) - 1.0);
}

namespace {

double stock_weight_residual(const MatchProblem& pr, double K, double tau) {
    const CallQuote q = call_price({pr.S, K, pr.sigma, pr.r, tau});
    return q.n_d1 - (pr.lambda / pr.sigma) * q.price / pr.S;
}

double bond_weight_residual(const MatchProblem& pr, double K, double tau) {
    const CallQuote q = call_price({pr.S, K, pr.sigma, pr.r, tau});
    return q.n_d2 + (1.0 - pr.lambda / pr.sigma) * q.price * std::exp(pr.r * tau) / K;
}

constexpr double kLogTauLo = -6.907755278982137;  // log(1e-3)
constexpr double kLogTauHi = 3.912023005428146;   // log(50)

// Bisection on the stock-weight residual in log tau, then a short damped
// Newton polish. The bond-weight residual follows along: the pricing
// identity ties the two equations together on the solution set.
double refine_root(const MatchProblem& pr, double K, double t_lo, double t_hi,
                   double f_lo) {
    double lo = std::log(t_lo);
    double hi = std::log(t_hi);
    const bool rising = f_lo <= 0.0;
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double f = stock_weight_residual(pr, K, std::exp(mid));
        if ((f <= 0.0) == rising) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    double u = 0.5 * (lo + hi);
    double f = stock_weight_residual(pr, K, std::exp(u));
    for (int i = 0; i < 8 && f != 0.0; ++i) {
        const double h = 1e-7;
        const double fp =
            (stock_weight_residual(pr, K, std::exp(u + h)) - f) / h;
        if (fp == 0.0 || !std::isfinite(fp)) break;
        double step_len = -f / fp;
        double u_next = u;
        double f_next = f;
        for (int halvings = 0; halvings < 20; ++halvings) {
            const double candidate = std::clamp(u + step_len, kLogTauLo, kLogTauHi);
            const double fc = stock_weight_residual(pr, K, std::exp(candidate));
            if (std::abs(fc) < std::abs(f)) {
                u_next = candidate;
                f_next = fc;
                break;
            }
            step_len *= 0.5;
        }
        if (u_next == u) break;
        u = u_next;
        f = f_next;
    }
    return std::exp(u);
}

}  // namespace

std::optional<MatchResult> general_match(const MatchProblem& pr) {
    if (!std::isfinite(pr.S) || !std::isfinite(pr.sigma) || !std::isfinite(pr.r) ||
        !std::isfinite(pr.lambda) || !(pr.S > 0.0) || !(pr.sigma > 0.0)) {
        throw InvalidParameterError("match problem requires finite data, S, sigma > 0");
    }
    // C/S < N(d1) always, so N(d1) - (lambda/sigma) C/S > 0 everywhere when
    // lambda/sigma <= 1: no solution exists.
    if (pr.lambda / pr.sigma <= 1.0) return std::nullopt;

    // strikes nearest the money first; the log grid is symmetric, so the
    // center node is exactly K == S
    constexpr int kStrikes = 41;
    const double log_m_hi = std::log(100.0);
    std::vector<double> log_moneyness(kStrikes);
    for (int i = 0; i < kStrikes; ++i) {
        log_moneyness[static_cast<std::size_t>(i)] =
            -log_m_hi + 2.0 * log_m_hi * i / (kStrikes - 1);
    }
    log_moneyness[kStrikes / 2] = 0.0;
    std::stable_sort(log_moneyness.begin(), log_moneyness.end(),
                     [](double a, double b) {
                         const double fa = std::abs(a), fb = std::abs(b);
                         return fa != fb ? fa < fb : a < b;
                     });

    constexpr int kTaus = 121;
    std::vector<double> taus(kTaus);
    for (int i = 0; i < kTaus; ++i) {
        taus[static_cast<std::size_t>(i)] =
            std::exp(kLogTauLo + (kLogTauHi - kLogTauLo) * i / (kTaus - 1));
    }

    for (const double lm : log_moneyness) {
        const double K = pr.S * std::exp(lm);
        double prev_tau = taus.front();
        double prev_f = stock_weight_residual(pr, K, prev_tau);
        for (std::size_t i = 1; i < taus.size(); ++i) {
            const double tau = taus[i];
            const double f = stock_weight_residual(pr, K, tau);
            if (std::isfinite(prev_f) && std::isfinite(f) &&
                (prev_f <= 0.0) != (f <= 0.0)) {
                const double root = refine_root(pr, K, prev_tau, tau, prev_f);
                MatchResult result;
                result.K = K;
                result.tau = root;
                const CallQuote q = call_price({pr.S, K, pr.sigma, pr.r, root});
                result.n_d1 = q.n_d1;
                result.n_d2 = q.n_d2;
                result.resid_stock = stock_weight_residual(pr, K, root);
                result.resid_bond = bond_weight_residual(pr, K, root);
                const bool admissible =
                    std::abs(result.resid_stock) < 1e-9 &&
                    std::abs(result.resid_bond) < 1e-9 &&
                    match_constraint_value(pr, K, root) >= -1.0 - 1e-12;
                if (admissible) return result;
                // rejected candidate: keep scanning
            }
            prev_tau = tau;
            prev_f = f;
        }
    }
    return std::nullopt;
}

}  // namespace levmap
