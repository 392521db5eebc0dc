#pragma once

#include "levmap/errors.hpp"

namespace levmap {

/// Market beliefs held by the Kelly investors. The drift mu is derived,
/// never stored, so mu - r == sigma * lambda cannot drift apart.
struct MarketParams {
    double lambda{0.0};  // market price of risk (equals the Sharpe ratio)
    double sigma{0.0};   // volatility per sqrt-time, > 0
    double r{0.0};       // short rate per unit time

    double mu() const { return r + sigma * lambda; }
};

/// Throws InvalidParameterError unless all fields are finite and sigma > 0.
void validate(const MarketParams& p);

/// Portfolio snapshot. Invariant: theta*S + phi*B == V (value identity),
/// S > 0, B > 0.
struct PortfolioState {
    double theta{0.0};  // shares of the risky asset
    double phi{0.0};    // money-market units
    double S{1.0};      // risky asset price
    double B{1.0};      // money-market unit value (B0 = 1)
    double V{0.0};      // portfolio value
};

/// Relative residual of the value identity, |V - (theta*S + phi*B)| scaled
/// by the largest term involved.
double value_gap(const PortfolioState& s);

/// Identity checks use this relative tolerance.
inline constexpr double kValueIdentityTol = 1e-12;

/// Throws DegenerateStateError for S <= 0 or B <= 0, InvalidParameterError
/// for non-finite fields or a broken value identity.
void validate(const PortfolioState& s);

}  // namespace levmap
