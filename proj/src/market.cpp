#include "levmap/market.hpp"

#include <algorithm>
#include <cmath>

namespace levmap {

void validate(const MarketParams& p) {
    if (!std::isfinite(p.lambda) || !std::isfinite(p.sigma) || !std::isfinite(p.r)) {
        throw InvalidParameterError("market parameters must be finite");
    }
    if (!(p.sigma > 0.0)) {
        throw InvalidParameterError("sigma must be positive");
    }
}

double value_gap(const PortfolioState& s) {
    const double stock = s.theta * s.S;
    const double cash = s.phi * s.B;
    const double scale =
        std::max({1.0, std::abs(s.V), std::abs(stock), std::abs(cash)});
    return std::abs(s.V - (stock + cash)) / scale;
}

void validate(const PortfolioState& s) {
    if (!std::isfinite(s.theta) || !std::isfinite(s.phi) || !std::isfinite(s.S) ||
        !std::isfinite(s.B) || !std::isfinite(s.V)) {
        throw InvalidParameterError("portfolio state must be finite");
    }
    if (!(s.S > 0.0) || !(s.B > 0.0)) {
        throw DegenerateStateError("prices S and B must be positive");
    }
    if (value_gap(s) > kValueIdentityTol) {
        throw InvalidParameterError("value identity theta*S + phi*B == V violated");
    }
}

}  // namespace levmap
