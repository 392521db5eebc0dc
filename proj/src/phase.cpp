#include "levmap/phase.hpp"

#include <cmath>
#include <cstdio>
#include <thread>

namespace levmap {

namespace {

PhaseLabel label_from(bool oscillating, bool growing) {
    if (oscillating) return growing ? PhaseLabel::IV : PhaseLabel::I;
    return growing ? PhaseLabel::III : PhaseLabel::II;
}

void check_x0(double x0) {
    if (!std::isfinite(x0) || x0 == 0.0) {
        throw InvalidParameterError("classification requires a finite x0 != 0");
    }
}

PortfolioState default_full_state(const FeedbackMap& map) {
    PortfolioState s;
    s.S = 1.0;
    s.B = 1.0;
    s.V = 1.0;
    s.theta = map.leverage;
    s.phi = 1.0 - map.leverage;
    return s;
}

std::string format_value(const char* fmt, double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), fmt, v);
    return buf;
}

}  // namespace

const char* to_string(PhaseLabel label) {
    switch (label) {
        case PhaseLabel::I: return "I";
        case PhaseLabel::II: return "II";
        case PhaseLabel::III: return "III";
        case PhaseLabel::IV: return "IV";
        case PhaseLabel::degenerate: return "DEGENERATE";
    }
    return "DEGENERATE";
}

std::optional<PhaseLabel> classify_analytic(const FeedbackMap& map, double x0) {
    check_x0(x0);
    if (map.mode != MapMode::frozen) return std::nullopt;
    const double leverage = map.leverage;
    if (leverage == 1.0) return PhaseLabel::degenerate;  // no feedback
    const bool oscillating = leverage < 1.0;
    const double gamma = map.impact.gamma;
    const double slope = map.scale * std::abs(leverage - 1.0) / map.impact.kappa;
    if (gamma == 1.0) {
        // linear map: |x_{n+1}| = slope |x_n|
        if (slope > 1.0) return label_from(oscillating, true);
        if (slope < 1.0) return label_from(oscillating, false);
        return PhaseLabel::degenerate;
    }
    const double x_star = std::pow(slope, 1.0 / (gamma - 1.0));
    const double m = std::abs(x0);
    if (m == x_star) return std::nullopt;  // exact boundary: no analytic rule
    const bool growing = gamma < 1.0 ? m > x_star : m < x_star;
    return label_from(oscillating, growing);
}

PhaseLabel classify_by_simulation(const FeedbackMap& map, double x0, int max_steps) {
    check_x0(x0);
    if (max_steps < 1) {
        throw InvalidParameterError("max_steps must be at least 1");
    }
    PortfolioState state = default_full_state(map);
    double x = x0;
    bool have_sign = false, oscillating = false;
    bool have_dir = false, growing = false;
    for (int i = 0; i < max_steps; ++i) {
        const double next =
            map.mode == MapMode::frozen ? step(map, x) : step(map, x, state);
        if (next == 0.0) return PhaseLabel::degenerate;  // map collapsed (L == 1)
        if (!have_sign) {
            oscillating = std::signbit(next) != std::signbit(x);
            have_sign = true;
        }
        const double m0 = std::abs(x);
        const double m1 = std::abs(next);
        if (!have_dir) {
            if (m1 > m0 * (1.0 + 1e-12)) {
                growing = true;
                have_dir = true;
            } else if (m1 < m0 * (1.0 - 1e-12)) {
                growing = false;
                have_dir = true;
            }
            // neutral transition: keep iterating, rounding may drift one way
        } else if (m1 == m0) {
            break;  // magnitude pinned (gamma > 1 saturation at x*)
        }
        if (m1 > kBlowupThreshold || !std::isfinite(next)) {
            growing = true;
            have_dir = true;
            break;
        }
        if (m1 < kUnderflowThreshold) {
            growing = false;
            have_dir = true;
            break;
        }
        x = next;
    }
    if (!have_dir) return PhaseLabel::degenerate;  // neutrally stable
    return label_from(oscillating, growing);
}

PhaseLabel classify(const FeedbackMap& map, double x0) {
    const auto analytic = classify_analytic(map, x0);
    return analytic ? *analytic : classify_by_simulation(map, x0);
}

std::vector<double> axis_values(const AxisSpec& axis) {
    if (!std::isfinite(axis.lo) || !std::isfinite(axis.hi) || axis.lo > axis.hi) {
        throw InvalidParameterError("axis range must be finite with lo <= hi");
    }
    if (axis.count < 1 || (axis.count == 1 && axis.lo != axis.hi)) {
        throw InvalidParameterError("axis needs count >= 2, or 1 with lo == hi");
    }
    std::vector<double> values(static_cast<std::size_t>(axis.count));
    if (axis.count == 1) {
        values[0] = axis.lo;
        return values;
    }
    const double span = axis.hi - axis.lo;
    for (int i = 0; i < axis.count; ++i) {
        values[static_cast<std::size_t>(i)] = axis.lo + span * i / (axis.count - 1);
    }
    values.back() = axis.hi;
    return values;
}

PhaseGrid sweep(const AxisSpec& leverage, const AxisSpec& gamma, double x0,
                double scale, double kappa) {
    check_x0(x0);
    if (!(gamma.lo > 0.0)) {
        throw InvalidParameterError("gamma axis must be positive");
    }
    validate(ImpactLaw{gamma.lo, kappa});  // rejects bad kappa before any thread runs
    if (!std::isfinite(scale) || !(scale > 0.0)) {
        throw InvalidParameterError("rebalance scale A must be positive");
    }
    PhaseGrid grid;
    grid.leverage_axis = axis_values(leverage);
    grid.gamma_axis = axis_values(gamma);
    grid.x0 = x0;
    grid.scale = scale;
    grid.kappa = kappa;
    const std::size_t cols = grid.leverage_axis.size();
    const std::size_t rows = grid.gamma_axis.size();
    grid.labels.assign(rows * cols, PhaseLabel::degenerate);

    const auto fill_rows = [&](std::size_t row_begin, std::size_t row_end) {
        for (std::size_t g = row_begin; g < row_end; ++g) {
            for (std::size_t l = 0; l < cols; ++l) {
                const FeedbackMap map = frozen_map(
                    grid.leverage_axis[l], ImpactLaw{grid.gamma_axis[g], kappa}, scale);
                grid.labels[g * cols + l] = classify(map, x0);
            }
        }
    };

    // cells are pure functions of their inputs; workers own disjoint rows,
    // so the assembled grid is schedule-independent
    const std::size_t workers =
        std::min<std::size_t>(rows, std::max(1u, std::thread::hardware_concurrency()));
    if (workers <= 1) {
        fill_rows(0, rows);
        return grid;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (rows + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(rows, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back(fill_rows, begin, end);
    }
    for (auto& t : pool) t.join();
    return grid;
}

std::string to_csv(const PhaseGrid& grid) {
    std::string out = "lambda,gamma,phase\n";
    char line[96];
    for (std::size_t g = 0; g < grid.gamma_axis.size(); ++g) {
        for (std::size_t l = 0; l < grid.leverage_axis.size(); ++l) {
            std::snprintf(line, sizeof(line), "%.12g,%.12g,%s\n",
                          grid.leverage_axis[l], grid.gamma_axis[g],
                          to_string(grid.labels[g * grid.leverage_axis.size() + l]));
            out += line;
        }
    }
    return out;
}

namespace {

const char* phase_color(PhaseLabel label) {
    switch (label) {
        case PhaseLabel::I: return "#4e79a7";
        case PhaseLabel::II: return "#59a14f";
        case PhaseLabel::III: return "#e15759";
        case PhaseLabel::IV: return "#f28e2b";
        case PhaseLabel::degenerate: return "#bab0ac";
    }
    return "#bab0ac";
}

const char* phase_legend(PhaseLabel label) {
    switch (label) {
        case PhaseLabel::I: return "I oscillating-decay";
        case PhaseLabel::II: return "II monotone-decay";
        case PhaseLabel::III: return "III monotone-explosion";
        case PhaseLabel::IV: return "IV oscillating-explosion";
        case PhaseLabel::degenerate: return "DEGENERATE";
    }
    return "DEGENERATE";
}

}  // namespace

std::string to_svg(const PhaseGrid& grid) {
    const int cols = static_cast<int>(grid.leverage_axis.size());
    const int rows = static_cast<int>(grid.gamma_axis.size());
    const int largest = std::max(cols, rows);
    const int cell = std::max(4, std::min(24, 480 / largest));
    const int left = 72, top = 24, bottom = 58, right = 210;
    const int plot_w = cols * cell;
    const int plot_h = rows * cell;
    const int width = left + plot_w + right;
    const int height = top + plot_h + bottom;

    std::string svg;
    svg.reserve(static_cast<std::size_t>(rows) * cols * 64 + 2048);
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" "
                  "height=\"%d\" viewBox=\"0 0 %d %d\">\n",
                  width, height, width, height);
    svg += buf;
    std::snprintf(buf, sizeof(buf),
                  "<rect x=\"0\" y=\"0\" width=\"%d\" height=\"%d\" fill=\"#ffffff\"/>\n",
                  width, height);
    svg += buf;

    // cells; gamma increases upward
    for (int g = 0; g < rows; ++g) {
        for (int l = 0; l < cols; ++l) {
            const int x = left + l * cell;
            const int y = top + (rows - 1 - g) * cell;
            std::snprintf(buf, sizeof(buf),
                          "<rect x=\"%d\" y=\"%d\" width=\"%d\" height=\"%d\" fill=\"%s\"/>\n",
                          x, y, cell, cell, phase_color(grid.at(g, l)));
            svg += buf;
        }
    }
    std::snprintf(buf, sizeof(buf),
                  "<rect x=\"%d\" y=\"%d\" width=\"%d\" height=\"%d\" fill=\"none\" "
                  "stroke=\"#333333\"/>\n",
                  left, top, plot_w, plot_h);
    svg += buf;

    const std::string x_lo = format_value("%.6g", grid.leverage_axis.front());
    const std::string x_hi = format_value("%.6g", grid.leverage_axis.back());
    const std::string y_lo = format_value("%.6g", grid.gamma_axis.front());
    const std::string y_hi = format_value("%.6g", grid.gamma_axis.back());
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%d\" y=\"%d\" font-family=\"sans-serif\" font-size=\"11\" "
                  "text-anchor=\"middle\">%s</text>\n",
                  left, top + plot_h + 16, x_lo.c_str());
    svg += buf;
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%d\" y=\"%d\" font-family=\"sans-serif\" font-size=\"11\" "
                  "text-anchor=\"middle\">%s</text>\n",
                  left + plot_w, top + plot_h + 16, x_hi.c_str());
    svg += buf;
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%d\" y=\"%d\" font-family=\"sans-serif\" font-size=\"11\" "
                  "text-anchor=\"end\">%s</text>\n",
                  left - 6, top + plot_h, y_lo.c_str());
    svg += buf;
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%d\" y=\"%d\" font-family=\"sans-serif\" font-size=\"11\" "
                  "text-anchor=\"end\">%s</text>\n",
                  left - 6, top + 10, y_hi.c_str());
    svg += buf;
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%d\" y=\"%d\" font-family=\"sans-serif\" font-size=\"13\" "
                  "text-anchor=\"middle\">leverage ratio Λ</text>\n",
                  left + plot_w / 2, top + plot_h + 40);
    svg += buf;
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%d\" y=\"%d\" font-family=\"sans-serif\" font-size=\"13\" "
                  "text-anchor=\"middle\" transform=\"rotate(-90 %d %d)\">impact exponent "
                  "γ</text>\n",
                  left - 48, top + plot_h / 2, left - 48, top + plot_h / 2);
    svg += buf;

    // fixed five-entry legend
    const PhaseLabel order[] = {PhaseLabel::I, PhaseLabel::II, PhaseLabel::III,
                                PhaseLabel::IV, PhaseLabel::degenerate};
    int ly = top + 6;
    for (const PhaseLabel label : order) {
        std::snprintf(buf, sizeof(buf),
                      "<rect x=\"%d\" y=\"%d\" width=\"14\" height=\"14\" fill=\"%s\"/>\n",
                      left + plot_w + 18, ly, phase_color(label));
        svg += buf;
        std::snprintf(buf, sizeof(buf),
                      "<text x=\"%d\" y=\"%d\" font-family=\"sans-serif\" "
                      "font-size=\"12\">%s</text>\n",
                      left + plot_w + 38, ly + 12, phase_legend(label));
        svg += buf;
        ly += 22;
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace levmap
