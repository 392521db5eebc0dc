#include "levmap/meta.hpp"

#include <cmath>

namespace levmap {

const char* to_string(Action action) {
    switch (action) {
        case Action::reduce_exposure_or_contrarian: return "REDUCE_EXPOSURE_OR_CONTRARIAN";
        case Action::sell_gamma: return "SELL_GAMMA";
        case Action::no_directional_edge: return "NO_DIRECTIONAL_EDGE";
        case Action::none: return "NONE";
    }
    return "NONE";
}

StrategyAdvice advise(PhaseLabel phase) {
    switch (phase) {
        case PhaseLabel::I:
            return {phase, Action::no_directional_edge,
                    "price swings shrink toward zero; no directional edge to trade"};
        case PhaseLabel::II:
            return {phase, Action::sell_gamma,
                    "steady decay toward equilibrium with falling volatility favors "
                    "selling gamma"};
        case PhaseLabel::III:
            return {phase, Action::reduce_exposure_or_contrarian,
                    "self-reinforcing run-away; cut exposure or position for the "
                    "eventual reversal"};
        case PhaseLabel::IV:
        case PhaseLabel::degenerate:
            return {phase, Action::none, "no recommendation for this regime"};
    }
    return {phase, Action::none, "no recommendation for this regime"};
}

std::optional<PhaseLabel> detect_phase(std::span<const double> returns, int min_len) {
    if (min_len < 2) {
        throw InvalidParameterError("min_len must be at least 2");
    }
    if (returns.size() < static_cast<std::size_t>(min_len)) return std::nullopt;
    constexpr double kSlack = 1e-9;  // floating-point safety only
    bool same = true, alternating = true, increasing = true, decreasing = true;
    for (std::size_t i = 0; i < returns.size(); ++i) {
        if (returns[i] == 0.0 || !std::isfinite(returns[i])) return std::nullopt;
        if (i == 0) continue;
        const bool flip = std::signbit(returns[i]) != std::signbit(returns[i - 1]);
        same &= !flip;
        alternating &= flip;
        const double ratio = std::abs(returns[i]) / std::abs(returns[i - 1]);
        increasing &= ratio > 1.0 + kSlack;
        decreasing &= ratio < 1.0 - kSlack;
    }
    if (same && increasing) return PhaseLabel::III;
    if (same && decreasing) return PhaseLabel::II;
    if (alternating && decreasing) return PhaseLabel::I;
    if (alternating && increasing) return PhaseLabel::IV;
    return std::nullopt;
}

}  // namespace levmap
