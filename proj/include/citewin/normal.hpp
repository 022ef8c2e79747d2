#pragma once

namespace citewin {

// Standard normal density.
double normal_pdf(double x);

// Standard normal CDF via the complementary error function.
// normal_cdf(0) == 0.5 exactly.
double normal_cdf(double x);

// Upper-tail probability 1 - CDF(x), evaluated directly so it keeps full
// relative precision for large positive x (where 1 - normal_cdf(x) would
// be swamped by rounding of values near 1).
double normal_sf(double x);

// Inverse CDF: rational initial approximation refined by Newton steps
// against normal_cdf/normal_sf. Requires 0 < p < 1 (std::domain_error
// otherwise). normal_quantile(0.5) == 0 exactly.
double normal_quantile(double p);

} // namespace citewin
