#pragma once

namespace ordsep {

// Standard normal distribution function Phi, evaluated with the rational
// Chebyshev approximations of Cody (1969, 1993).  Absolute error is below
// 1e-15 over the whole real line; the lower and upper tails keep full
// relative accuracy down to the underflow threshold.
double std_normal_cdf(double z);

// Upper tail 1 - Phi(z), computed without cancellation for large z.
double std_normal_upper_tail(double z);

// Inverse of std_normal_cdf.  Rational initial guess (Acklam) followed by
// one Halley refinement against std_normal_cdf.  Throws std::domain_error
// unless 0 < p < 1.
double std_normal_quantile(double p);

}  // namespace ordsep
