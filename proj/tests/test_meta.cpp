#include <doctest.h>

#include <random>
#include <vector>

#include "levmap/impact.hpp"
#include "levmap/meta.hpp"

using namespace levmap;

namespace {

std::vector<double> returns_of(const Trajectory& t) {
    std::vector<double> xs;
    xs.reserve(t.points.size());
    for (const TrajectoryPoint& p : t.points) xs.push_back(p.x);
    return xs;
}

}  // namespace

TEST_CASE("advice table is total and fixed") {
    CHECK(advise(PhaseLabel::III).action == Action::reduce_exposure_or_contrarian);
    CHECK(advise(PhaseLabel::II).action == Action::sell_gamma);
    CHECK(advise(PhaseLabel::I).action == Action::no_directional_edge);
    CHECK(advise(PhaseLabel::IV).action == Action::none);
    CHECK(advise(PhaseLabel::degenerate).action == Action::none);
    for (PhaseLabel label : {PhaseLabel::I, PhaseLabel::II, PhaseLabel::III,
                             PhaseLabel::IV, PhaseLabel::degenerate}) {
        const StrategyAdvice advice = advise(label);
        CHECK(advice.phase == label);
        CHECK(!advice.rationale.empty());
        CHECK(advise(label).action == advice.action);
    }
}

TEST_CASE("action names") {
    CHECK(std::string(to_string(Action::reduce_exposure_or_contrarian)) ==
          "REDUCE_EXPOSURE_OR_CONTRARIAN");
    CHECK(std::string(to_string(Action::sell_gamma)) == "SELL_GAMMA");
    CHECK(std::string(to_string(Action::no_directional_edge)) == "NO_DIRECTIONAL_EDGE");
    CHECK(std::string(to_string(Action::none)) == "NONE");
}

TEST_CASE("detect on simulated monotone decay") {
    // x0 = 0.9 keeps ten returns above the underflow cutoff
    const Trajectory t = simulate(frozen_map(2.0, {0.5, 1.0}, 1.0), 0.9, 100);
    const auto xs = returns_of(t);
    REQUIRE(xs.size() >= 8);
    CHECK(detect_phase(xs) == PhaseLabel::II);
}

TEST_CASE("detect on simulated monotone explosion") {
    const Trajectory t = simulate(frozen_map(2.0, {0.9, 1.0}, 1.0), 1.5, 1000);
    CHECK(t.halt == HaltReason::blowup);
    const auto xs = returns_of(t);
    REQUIRE(xs.size() >= 8);
    CHECK(detect_phase(xs) == PhaseLabel::III);
}

TEST_CASE("detect on alternating sequences") {
    const Trajectory decay = simulate(frozen_map(0.5, {0.9, 1.0}, 1.0), 0.9, 1000);
    const auto xs = returns_of(decay);
    REQUIRE(xs.size() >= 8);
    CHECK(detect_phase(xs) == PhaseLabel::I);

    // gamma > 1, leverage < 1: growing oscillation toward the amplitude x*
    const Trajectory grow = simulate(frozen_map(0.5, {1.4, 1.0}, 1.0), 1e-3, 10);
    const auto ys = returns_of(grow);
    REQUIRE(ys.size() >= 8);
    CHECK(detect_phase(ys) == PhaseLabel::IV);
}

TEST_CASE("rule boundaries give inconclusive") {
    // alternating but not monotone in magnitude
    const std::vector<double> seesaw{0.01, -0.02, 0.01, -0.02};
    CHECK(!detect_phase(seesaw, 4).has_value());
    // shorter than min_len
    const std::vector<double> brief{0.1, 0.05, 0.025};
    CHECK(!detect_phase(brief, 8).has_value());
    // a zero return has no sign
    const std::vector<double> zero{0.1, 0.05, 0.0, 0.0125, 0.006, 0.003, 0.0015, 0.0008};
    CHECK(!detect_phase(zero, 8).has_value());
    // mixed sign pattern
    const std::vector<double> mixed{0.1, 0.09, -0.08, 0.07, -0.06, 0.05, -0.04, 0.03};
    CHECK(!detect_phase(mixed, 8).has_value());
    CHECK_THROWS_AS(detect_phase(seesaw, 1), InvalidParameterError);
}

TEST_CASE("hand-built sequences hit each label") {
    const std::vector<double> up{0.01, 0.02, 0.04, 0.08, 0.16, 0.32, 0.64, 1.28};
    CHECK(detect_phase(up) == PhaseLabel::III);
    const std::vector<double> down{-1.28, -0.64, -0.32, -0.16, -0.08, -0.04, -0.02, -0.01};
    CHECK(detect_phase(down) == PhaseLabel::II);
    const std::vector<double> alt_down{1.28, -0.64, 0.32, -0.16, 0.08, -0.04, 0.02, -0.01};
    CHECK(detect_phase(alt_down) == PhaseLabel::I);
    const std::vector<double> alt_up{0.01, -0.02, 0.04, -0.08, 0.16, -0.32, 0.64, -1.28};
    CHECK(detect_phase(alt_up) == PhaseLabel::IV);
}

TEST_CASE("round trip against classify on random off-boundary maps") {
    std::mt19937 rng(2718);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    int done = 0;
    while (done < 25) {
        const bool monotone = uni(rng) < 0.5;
        const bool steep = uni(rng) < 0.5;  // gamma < 1 vs > 1
        const double leverage = monotone ? 1.2 + 1.8 * uni(rng) : 0.8 * uni(rng);
        const double gamma = steep ? 0.4 + 0.5 * uni(rng) : 1.1 + 0.5 * uni(rng);
        const FeedbackMap map = frozen_map(leverage, {gamma, 1.0}, 1.0);
        const auto x_star = unstable_fixed_point(map);
        if (!x_star || !std::isfinite(*x_star) || *x_star < 1e-6 || *x_star > 1e6)
            continue;
        const double offset = steep ? 0.002 + 0.008 * uni(rng) : 1.0 + uni(rng);
        const double x0 = *x_star * std::exp(uni(rng) < 0.5 ? offset : -offset);
        const int n_steps = steep ? 10000 : 12;
        const Trajectory t = simulate(map, x0, n_steps);
        const auto xs = returns_of(t);
        if (xs.size() < 8) continue;
        const auto detected = detect_phase(xs);
        REQUIRE(detected.has_value());
        CHECK(*detected == classify(map, x0));
        ++done;
    }
}
