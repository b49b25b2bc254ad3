#pragma once

namespace spindlelab {

double normal_pdf(double x);
double normal_cdf(double x);
// Inverse of normal_cdf, accurate to ~1e-15 after a Halley refinement step.
double normal_quantile(double p);

// Regularized upper incomplete gamma Q(a, x); chi-square survival function
// with k degrees of freedom is gamma_q(k/2, x/2).
double gamma_q(double a, double x);

}  // namespace spindlelab
