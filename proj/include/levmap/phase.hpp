#pragma once

#include <optional>
#include <string>
#include <vector>

#include "levmap/impact.hpp"

namespace levmap {

/// Qualitative behaviour of the price-change sequence.
enum class PhaseLabel {
    I,           // oscillating decay
    II,          // monotone decay
    III,         // monotone explosion
    IV,          // oscillating explosion
    degenerate,  // no feedback (L == 1) or neutrally stable boundary
};

const char* to_string(PhaseLabel label);

/// Frozen-mode fast path: sign behaviour from L vs 1, growth behaviour from
/// |x0| vs x* and gamma vs 1. Returns nothing when no analytic rule applies
/// (full mode, or |x0| exactly on the x* contour).
std::optional<PhaseLabel> classify_analytic(const FeedbackMap& map, double x0);

/// Observational path: iterates the map (at most max_steps times) and reads
/// the label off the sign pattern and the magnitude direction.
PhaseLabel classify_by_simulation(const FeedbackMap& map, double x0,
                                  int max_steps = 10000);

/// Analytic rule where one applies, simulation otherwise. The two paths
/// agree away from the x* contour; exact-boundary inputs are settled by the
/// simulation outcome and are boundary-sensitive.
PhaseLabel classify(const FeedbackMap& map, double x0);

struct AxisSpec {
    double lo{0.0};
    double hi{0.0};
    int count{0};  // >= 2, or 1 for a degenerate single-value axis
};

std::vector<double> axis_values(const AxisSpec& axis);

struct PhaseGrid {
    std::vector<double> leverage_axis;  // exported under the header "lambda"
    std::vector<double> gamma_axis;
    double x0{0.0};
    double scale{1.0};  // map provenance: A
    double kappa{1.0};  //                 kappa
    std::vector<PhaseLabel> labels;  // row-major, gamma outer

    PhaseLabel at(int gamma_idx, int leverage_idx) const {
        return labels[static_cast<std::size_t>(gamma_idx) * leverage_axis.size() +
                      static_cast<std::size_t>(leverage_idx)];
    }
};

/// Classifies every (leverage, gamma) node of a frozen map with the given
/// A and kappa at the fixed initial change x0. Cells are independent and
/// evaluated in parallel; assembly is in index order, so the result is
/// identical regardless of scheduling.
PhaseGrid sweep(const AxisSpec& leverage, const AxisSpec& gamma, double x0,
                double scale, double kappa);

/// CSV with header lambda,gamma,phase, one row per node, gamma outer.
std::string to_csv(const PhaseGrid& grid);

/// Deterministic rectangular heatmap with a fixed five-colour legend.
std::string to_svg(const PhaseGrid& grid);

}  // namespace levmap
