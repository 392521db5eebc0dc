#pragma once

namespace levmap {

/// Standard normal density.
double norm_pdf(double x);

/// Standard normal CDF, absolute error below 1e-13. Evaluated from the
/// positive-term error-function series in the body and the Mills-ratio
/// continued fraction in the tails; no external special-function source.
double norm_cdf(double x);

/// Inverse of norm_cdf via bracketed bisection on the forward CDF.
/// Requires p in (0,1).
double inverse_norm_cdf(double p);

}  // namespace levmap
