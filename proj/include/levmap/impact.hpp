#pragma once

#include <optional>
#include <string>
#include <vector>

#include "levmap/market.hpp"

namespace levmap {

/// Power-law impact: a trade of dtheta shares moves the price by
/// x = sign(dtheta) (|dtheta| / kappa)^(1/gamma).
struct ImpactLaw {
    double gamma{0.5};  // impact exponent, > 0
    double kappa{1.0};  // impact coefficient, > 0
};

void validate(const ImpactLaw& law);

enum class MapMode { frozen, full };

/// |x| beyond this is a blowup signal; simulation halts and phase
/// classification reads it as explosive growth.
inline constexpr double kBlowupThreshold = 1e12;
/// |x| below this is numerically dead; simulation halts as decayed.
inline constexpr double kUnderflowThreshold = 1e-15;

/// The alternating rebalance/impact loop as a one-dimensional map on
/// relative price changes:
///
///   x_{n+1} = sign((L-1) x_n) * (A |L-1| |x_n| / kappa)^(1/gamma)
///
/// In frozen mode the rebalance scale A is pinned at its initial value and
/// the map is a pure function of x. In full mode A = L V/S is recomputed
/// from a PortfolioState that advances by the self-financing update each
/// step (r dt enters the value update only, never the share-change rule).
struct FeedbackMap {
    double leverage{2.0};
    ImpactLaw impact{};
    MapMode mode{MapMode::frozen};
    double scale{1.0};      // frozen-mode A, > 0
    MarketParams market{};  // full mode only
    double dt{1.0};         // full mode: time per step
};

FeedbackMap frozen_map(double leverage, ImpactLaw law = {}, double scale = 1.0);
FeedbackMap full_map(const MarketParams& market, ImpactLaw law = {}, double dt = 1.0);

/// The prefactor A: the frozen scale, or leverage * V/S of the state.
double rebalance_scale(const FeedbackMap& map, const PortfolioState& state);

/// Shares bought (sold if negative) in response to a relative price change:
/// dtheta = A (L - 1) x. Zero iff x == 0 or L == 1.
double rebalance_share_change(const FeedbackMap& map, double x);  // frozen mode
double rebalance_share_change(const FeedbackMap& map, double x,
                              const PortfolioState& state);

/// Relative price change caused by trading dtheta shares; odd in dtheta.
double impact_price_change(const ImpactLaw& law, double dtheta);

/// One application of the composite map. The frozen overload requires
/// frozen mode; the full overload advances the state and throws
/// DynamicsBreakdownError if the price is driven to zero or below.
double step(const FeedbackMap& map, double x);
double step(const FeedbackMap& map, double x, PortfolioState& state);

/// Nonzero intersection of the rebalance line with the impact curve in
/// frozen mode: x* = (A |L-1| / kappa)^(1/(gamma-1)), the positive root of
/// g(x) = x for L > 1. The same threshold separates decay from growth of
/// |x_n| for every L != 1:
///   gamma < 1: repelling (|x| < x* decays to 0, |x| > x* explodes),
///   gamma > 1: attracting (|x_n| converges to x* from either side; for
///              L < 1 it is the limiting amplitude of the sign-alternating
///              cycle rather than a literal fixed point).
/// Returns nothing for L == 1; throws DegenerateExponentError for
/// gamma == 1, where the map is linear and has no nonzero intersection.
std::optional<double> unstable_fixed_point(const FeedbackMap& map);

struct TrajectoryPoint {
    int step{0};
    double x{0.0};       // relative price change arriving this step
    double dtheta{0.0};  // rebalance response A (L-1) x
    double S{0.0};       // price before x is absorbed
    double V{0.0};       // portfolio value before x is absorbed
};

enum class HaltReason { completed, blowup, underflow };

const char* to_string(HaltReason reason);

struct Trajectory {
    std::vector<TrajectoryPoint> points;
    HaltReason halt{HaltReason::completed};
};

/// Iterates the map up to n_steps times, recording the incoming x, the
/// rebalance response and the pre-step state each step. Halts early on
/// blowup (|x| > 1e12) or underflow (|x| < 1e-15). Frozen-mode rows echo
/// the initial S and V; full mode evolves them.
Trajectory simulate(const FeedbackMap& map, double x0, int n_steps);
Trajectory simulate(const FeedbackMap& map, double x0, int n_steps,
                    PortfolioState state);

/// CSV with header step,x,dtheta,S,V,halt_reason; the halt reason appears
/// only on the final row of an early-halted trajectory.
std::string to_csv(const Trajectory& trajectory);

}  // namespace levmap
