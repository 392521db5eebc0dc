#include "levmap/levy.hpp"

#include <cmath>
#include <utility>

namespace levmap {

LevyModel::LevyModel(std::string name, Exponent psi, RiskPremium risk_premium)
    : name_(std::move(name)), psi_(std::move(psi)), risk_premium_(std::move(risk_premium)) {
    if (!psi_ || !risk_premium_) {
        throw InvalidParameterError("Levy model needs both psi and a risk premium");
    }
    const double at_zero = psi_(0.0);
    if (!std::isfinite(at_zero) || std::abs(at_zero) > 1e-12) {
        throw InvalidParameterError("Levy exponent must satisfy psi(0) == 0");
    }
}

namespace {

double default_premium(double lambda, double sigma) { return lambda * sigma; }

}  // namespace

LevyModel brownian_model() {
    return LevyModel("brownian", [](double s) { return 0.5 * s * s; }, default_premium);
}

LevyModel poisson_jump_model(double intensity) {
    if (!std::isfinite(intensity) || intensity <= 0.0) {
        throw InvalidParameterError("jump intensity must be positive");
    }
    return LevyModel(
        "poisson-jump",
        [intensity](double s) { return intensity * (std::exp(s) - 1.0 - s); },
        default_premium);
}

LevyModel jump_diffusion_model(double intensity) {
    if (!std::isfinite(intensity) || intensity <= 0.0) {
        throw InvalidParameterError("jump intensity must be positive");
    }
    return LevyModel(
        "jump-diffusion",
        [intensity](double s) {
            return 0.5 * s * s + intensity * (std::exp(s) - 1.0 - s);
        },
        default_premium);
}

LevyModel model_by_name(const std::string& name, double intensity) {
    if (name == "brownian") return brownian_model();
    if (name == "poisson-jump") return poisson_jump_model(intensity);
    if (name == "jump-diffusion") return jump_diffusion_model(intensity);
    throw InvalidParameterError("unknown Levy model: " + name);
}

double psi_spread(const LevyModel& model, double sigma) {
    return model.psi(2.0 * sigma) - 2.0 * model.psi(sigma);
}

double glm_optimal_leverage(const LevyModel& model, double lambda, double sigma) {
    if (!std::isfinite(lambda) || !std::isfinite(sigma)) {
        throw InvalidParameterError("lambda and sigma must be finite");
    }
    const double denom = psi_spread(model, sigma);
    if (!(denom >= 1e-14)) {
        throw DegenerateExponentError(
            "psi(2 sigma) - 2 psi(sigma) must exceed 1e-14 for model " + model.name());
    }
    return model.risk_premium(lambda, sigma) / denom;
}

double glm_log_utility_expansion(const LevyModel& model, double lambda, double sigma,
                                 double invested_fraction, double r, double t) {
    if (!std::isfinite(invested_fraction) || !std::isfinite(r) || !std::isfinite(t) ||
        !(t > 0.0)) {
        throw InvalidParameterError("expansion requires finite inputs and t > 0");
    }
    const double premium = model.risk_premium(lambda, sigma);
    const double denom = psi_spread(model, sigma);
    return invested_fraction * premium * t + r * t -
           0.5 * invested_fraction * invested_fraction * denom * t;
}

Sensitivity glm_leverage_sensitivity(const LevyModel& model, double lambda,
                                     double sigma, GlmInput which) {
    const double at = which == GlmInput::lambda ? lambda : sigma;
    const double h = 1e-4 * std::max(1.0, std::abs(at));
    const auto diff = [&](double step) {
        double up, dn;
        if (which == GlmInput::lambda) {
            up = glm_optimal_leverage(model, lambda + step, sigma);
            dn = glm_optimal_leverage(model, lambda - step, sigma);
        } else {
            up = glm_optimal_leverage(model, lambda, sigma + step);
            dn = glm_optimal_leverage(model, lambda, sigma - step);
        }
        return (up - dn) / (2.0 * step);
    };
    const double coarse = diff(h);
    const double fine = diff(0.5 * h);
    Sensitivity out;
    out.value = (4.0 * fine - coarse) / 3.0;  // Richardson: cancels the h^2 term
    const double scale = std::max(std::abs(out.value), 1e-8);
    out.converged = std::abs(coarse - fine) <= 1e-6 * scale;
    return out;
}

}  // namespace levmap
