#pragma once

#include <functional>
#include <string>

#include "levmap/errors.hpp"

namespace levmap {

/// Geometric Levy model of the risky asset, characterized by its exponent
/// psi with <e^{s X_t}> = e^{psi(s) t} and a risk premium R(lambda, sigma).
/// Construction rejects exponents with psi(0) != 0.
class LevyModel {
public:
    using Exponent = std::function<double(double)>;
    using RiskPremium = std::function<double(double, double)>;

    LevyModel(std::string name, Exponent psi, RiskPremium risk_premium);

    const std::string& name() const { return name_; }
    double psi(double sigma) const { return psi_(sigma); }
    double risk_premium(double lambda, double sigma) const {
        return risk_premium_(lambda, sigma);
    }

private:
    std::string name_;
    Exponent psi_;
    RiskPremium risk_premium_;
};

// Built-in models. All use R(lambda, sigma) = lambda * sigma, which keeps
// the Brownian reduction exact and cross-model comparisons on one scale.
LevyModel brownian_model();                        // psi(s) = s^2 / 2
LevyModel poisson_jump_model(double intensity);    // psi(s) = m (e^s - 1 - s)
LevyModel jump_diffusion_model(double intensity);  // sum of the two

/// Lookup for the CLI: "brownian", "poisson-jump", "jump-diffusion".
/// Throws InvalidParameterError for unknown names.
LevyModel model_by_name(const std::string& name, double intensity = 1.0);

/// psi(2 sigma) - 2 psi(sigma), the quadratic penalty of the short-time
/// log-utility expansion. Must exceed 1e-14 where a leverage is requested.
double psi_spread(const LevyModel& model, double sigma);

/// Optimal leverage R(lambda, sigma) / (psi(2 sigma) - 2 psi(sigma)).
/// Throws DegenerateExponentError when the denominator is below 1e-14.
double glm_optimal_leverage(const LevyModel& model, double lambda, double sigma);

/// First order in t: <log V_t> = a R t + r t - a^2 (psi(2s) - 2 psi(s)) t / 2
/// with a = invested_fraction. Linear in t, concave quadratic in a.
double glm_log_utility_expansion(const LevyModel& model, double lambda, double sigma,
                                 double invested_fraction, double r, double t);

enum class GlmInput { lambda, sigma };

struct Sensitivity {
    double value{0.0};
    bool converged{true};  // false when the two step sizes disagree beyond 1e-6
};

/// Partial derivative of the optimal leverage by central differences with
/// Richardson extrapolation at steps (h, h/2).
Sensitivity glm_leverage_sensitivity(const LevyModel& model, double lambda,
                                     double sigma, GlmInput which);

}  // namespace levmap
