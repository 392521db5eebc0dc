#pragma once

#include "levmap/market.hpp"

namespace levmap {

struct Allocation {
    double theta_star{0.0};  // shares
    double phi_star{0.0};    // money-market units
};

/// Kelly-optimal fraction of wealth in the risky asset: lambda / sigma,
/// equivalently (mu - r) / sigma^2. May be negative or exceed 1.
double optimal_leverage(const MarketParams& p);

/// Holdings that realize the optimal leverage at the given prices:
/// theta* = (lambda/sigma) V/S, phi* = (1 - lambda/sigma) V/B.
Allocation optimal_allocation(const MarketParams& p, const PortfolioState& s);

/// Drift of log V at a fixed leverage: r + lambda*sigma*L - sigma^2 L^2 / 2.
/// Strictly concave in L, maximized at L = lambda/sigma.
double log_growth_drift(const MarketParams& p, double leverage);

/// Kelly fraction for a double-or-lose bet with win probability p and loss
/// probability q: p - q. Requires p + q == 1 and p > q.
double kelly_fraction_binary(double p, double q);

/// One self-financing update: S' = S(1+x), B' = B(1+r dt),
/// V' = V(1 + L x + (1-L) r dt) with L = lambda/sigma, then holdings are
/// rebalanced to the optimal allocation at the new prices.
PortfolioState self_financing_step(const MarketParams& p, const PortfolioState& s,
                                   double ds_over_s, double dt);

}  // namespace levmap
