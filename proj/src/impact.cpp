#include "levmap/impact.hpp"

#include <cmath>
#include <cstdio>

#include "levmap/kelly.hpp"

namespace levmap {

void validate(const ImpactLaw& law) {
    if (!std::isfinite(law.gamma) || !std::isfinite(law.kappa) ||
        !(law.gamma > 0.0) || !(law.kappa > 0.0)) {
        throw InvalidParameterError("impact law requires gamma > 0 and kappa > 0");
    }
}

FeedbackMap frozen_map(double leverage, ImpactLaw law, double scale) {
    validate(law);
    if (!std::isfinite(leverage)) {
        throw InvalidParameterError("leverage must be finite");
    }
    if (!std::isfinite(scale) || !(scale > 0.0)) {
        throw InvalidParameterError("frozen rebalance scale A must be positive");
    }
    FeedbackMap map;
    map.leverage = leverage;
    map.impact = law;
    map.mode = MapMode::frozen;
    map.scale = scale;
    return map;
}

FeedbackMap full_map(const MarketParams& market, ImpactLaw law, double dt) {
    validate(market);
    validate(law);
    if (!std::isfinite(dt) || !(dt > 0.0)) {
        throw InvalidParameterError("dt must be positive");
    }
    FeedbackMap map;
    map.leverage = market.lambda / market.sigma;
    map.impact = law;
    map.mode = MapMode::full;
    map.market = market;
    map.dt = dt;
    return map;
}

double rebalance_scale(const FeedbackMap& map, const PortfolioState& state) {
    if (map.mode == MapMode::frozen) return map.scale;
    return map.leverage * state.V / state.S;
}

double rebalance_share_change(const FeedbackMap& map, double x) {
    if (map.mode != MapMode::frozen) {
        throw InvalidParameterError("full-mode share change needs a portfolio state");
    }
    if (!std::isfinite(x)) {
        throw InvalidParameterError("price change must be finite");
    }
    return map.scale * (map.leverage - 1.0) * x;
}

double rebalance_share_change(const FeedbackMap& map, double x,
                              const PortfolioState& state) {
    if (!std::isfinite(x)) {
        throw InvalidParameterError("price change must be finite");
    }
    return rebalance_scale(map, state) * (map.leverage - 1.0) * x;
}

double impact_price_change(const ImpactLaw& law, double dtheta) {
    validate(law);
    if (!std::isfinite(dtheta)) {
        throw InvalidParameterError("share change must be finite");
    }
    if (dtheta == 0.0) return 0.0;
    const double magnitude = std::pow(std::abs(dtheta) / law.kappa, 1.0 / law.gamma);
    return dtheta > 0.0 ? magnitude : -magnitude;
}

double step(const FeedbackMap& map, double x) {
    return impact_price_change(map.impact, rebalance_share_change(map, x));
}

double step(const FeedbackMap& map, double x, PortfolioState& state) {
    if (map.mode != MapMode::full) {
        throw InvalidParameterError("stateful step requires a full-mode map");
    }
    // The response is priced off the pre-update state, then the state
    // absorbs x through the self-financing update.
    const double dtheta = rebalance_share_change(map, x, state);
    state = self_financing_step(map.market, state, x, map.dt);
    return impact_price_change(map.impact, dtheta);
}

std::optional<double> unstable_fixed_point(const FeedbackMap& map) {
    if (map.mode != MapMode::frozen) {
        throw InvalidParameterError("fixed-point algebra applies to frozen maps");
    }
    if (map.impact.gamma == 1.0) {
        throw DegenerateExponentError(
            "gamma == 1 makes the map linear; no nonzero intersection");
    }
    if (map.leverage == 1.0) return std::nullopt;  // rebalance line is flat
    const double c = map.scale * std::abs(map.leverage - 1.0) / map.impact.kappa;
    // g(x) = (c x)^{1/gamma} meets x at x = c^{1/(gamma-1)}.
    return std::pow(c, 1.0 / (map.impact.gamma - 1.0));
}

namespace {

PortfolioState default_full_state(const FeedbackMap& map) {
    PortfolioState s;
    s.S = 1.0;
    s.B = 1.0;
    s.V = 1.0;
    s.theta = map.leverage;
    s.phi = 1.0 - map.leverage;
    return s;
}

}  // namespace

Trajectory simulate(const FeedbackMap& map, double x0, int n_steps,
                    PortfolioState state) {
    if (n_steps < 1) {
        throw InvalidParameterError("n_steps must be at least 1");
    }
    if (!std::isfinite(x0)) {
        throw InvalidParameterError("x0 must be finite");
    }
    Trajectory out;
    out.points.reserve(16);
    double x = x0;
    for (int i = 0; i <= n_steps; ++i) {
        const double a = rebalance_scale(map, state);
        out.points.push_back({i, x, a * (map.leverage - 1.0) * x, state.S, state.V});
        if (!std::isfinite(x) || std::abs(x) > kBlowupThreshold) {
            out.halt = HaltReason::blowup;
            break;
        }
        if (std::abs(x) < kUnderflowThreshold) {
            out.halt = HaltReason::underflow;
            break;
        }
        if (i == n_steps) break;
        x = map.mode == MapMode::frozen ? step(map, x) : step(map, x, state);
    }
    return out;
}

Trajectory simulate(const FeedbackMap& map, double x0, int n_steps) {
    return simulate(map, x0, n_steps, default_full_state(map));
}

const char* to_string(HaltReason reason) {
    switch (reason) {
        case HaltReason::blowup: return "blowup";
        case HaltReason::underflow: return "underflow";
        case HaltReason::completed: return "";
    }
    return "";
}

std::string to_csv(const Trajectory& trajectory) {
    std::string out = "step,x,dtheta,S,V,halt_reason\n";
    char line[192];
    const std::size_t n = trajectory.points.size();
    for (std::size_t i = 0; i < n; ++i) {
        const TrajectoryPoint& p = trajectory.points[i];
        const bool last = i + 1 == n;
        std::snprintf(line, sizeof(line), "%d,%.12g,%.12g,%.12g,%.12g,%s\n", p.step,
                      p.x, p.dtheta, p.S, p.V,
                      last ? to_string(trajectory.halt) : "");
        out += line;
    }
    return out;
}

}  // namespace levmap
