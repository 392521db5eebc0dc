#include "levmap/kelly.hpp"

#include <cmath>

namespace levmap {

double optimal_leverage(const MarketParams& p) {
    validate(p);
    return p.lambda / p.sigma;
}

Allocation optimal_allocation(const MarketParams& p, const PortfolioState& s) {
    validate(p);
    validate(s);
    const double leverage = p.lambda / p.sigma;
    return {leverage * s.V / s.S, (1.0 - leverage) * s.V / s.B};
}

double log_growth_drift(const MarketParams& p, double leverage) {
    validate(p);
    return p.r + p.lambda * p.sigma * leverage -
           0.5 * p.sigma * p.sigma * leverage * leverage;
}

double kelly_fraction_binary(double p, double q) {
    if (!std::isfinite(p) || !std::isfinite(q) || p <= 0.0 || p >= 1.0 ||
        q <= 0.0 || q >= 1.0) {
        throw InvalidProbabilityError("p and q must lie in (0,1)");
    }
    if (std::abs(p + q - 1.0) > 1e-12) {
        throw InvalidProbabilityError("p + q must equal 1");
    }
    if (p <= q) {
        throw NoEdgeError("binary Kelly bet requires p > q");
    }
    return p - q;
}

PortfolioState self_financing_step(const MarketParams& p, const PortfolioState& s,
                                   double ds_over_s, double dt) {
    validate(p);
    validate(s);
    if (!std::isfinite(ds_over_s) || !std::isfinite(dt)) {
        throw InvalidParameterError("ds_over_s and dt must be finite");
    }
    if (1.0 + ds_over_s <= 0.0) {
        throw DynamicsBreakdownError("price driven to zero or below");
    }
    const double leverage = p.lambda / p.sigma;
    PortfolioState out;
    out.S = s.S * (1.0 + ds_over_s);
    out.B = s.B * (1.0 + p.r * dt);
    if (!(out.B > 0.0)) {
        throw DynamicsBreakdownError("money-market unit driven to zero or below");
    }
    out.V = s.V * (1.0 + leverage * ds_over_s + (1.0 - leverage) * p.r * dt);
    // rebalance to the Kelly allocation at the new prices
    out.theta = leverage * out.V / out.S;
    out.phi = (1.0 - leverage) * out.V / out.B;
    return out;
}

}  // namespace levmap
