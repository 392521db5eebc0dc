#pragma once

#include <optional>
#include <span>
#include <string>

#include "levmap/phase.hpp"

namespace levmap {

enum class Action {
    reduce_exposure_or_contrarian,  // phase III
    sell_gamma,                     // phase II
    no_directional_edge,            // phase I
    none,                           // phase IV / degenerate
};

const char* to_string(Action action);

struct StrategyAdvice {
    PhaseLabel phase{PhaseLabel::degenerate};
    Action action{Action::none};
    std::string rationale;
};

/// Phase-to-action table; total and deterministic over PhaseLabel.
StrategyAdvice advise(PhaseLabel phase);

/// Rule-based phase detection on an observed return sequence. Requires at
/// least min_len returns; any zero (sign undefined) or pattern break yields
/// nothing. Ratio comparisons carry 1e-9 slack for floating-point safety.
std::optional<PhaseLabel> detect_phase(std::span<const double> returns,
                                       int min_len = 8);

}  // namespace levmap
