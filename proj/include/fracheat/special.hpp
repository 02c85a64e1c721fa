#pragma once

namespace fracheat {

/// Standard normal CDF. In-house series/continued-fraction evaluation,
/// absolute error below 1e-13 on the real line.
double normal_cdf(double x);

/// Complementary error function, same in-house routines as normal_cdf.
double erfc_inhouse(double x);

/// Modified Bessel function of the first kind, order 0.
/// Power series for moderate arguments, asymptotic expansion beyond.
double bessel_i0(double x);

} // namespace fracheat
