#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>

namespace calibre {

inline constexpr double kPi = 3.14159265358979323846;

// Standard normal CDF via the complementary error function.
// Absolute error is bounded by that of std::erfc (well below 1e-12).
inline double normal_cdf(double x) {
  return 0.5 * std::erfc(-x * 0.70710678118654752440);
}

// Standard normal quantile, Wichura's algorithm AS 241 (PPND16 variant).
// Relative error below 1e-15 on (0,1); returns +/-inf at the endpoints.
inline double normal_quantile(double p) {
  if (p <= 0.0) return -std::numeric_limits<double>::infinity();
  if (p >= 1.0) return std::numeric_limits<double>::infinity();

  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                 6.7265770927008700853e4) *
                    r +
                4.5921953931549871457e4) *
                   r +
               1.3731693765509461125e4) *
                  r +
              1.9715909503065514427e3) *
                 r +
             1.3314166789178437745e2) *
                r +
            3.3871328727963666080e0) /
           (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                 3.9307895800092710610e4) *
                    r +
                2.1213794301586595867e4) *
                   r +
               5.3941960214247511077e3) *
                  r +
              6.8718700749205790830e2) *
                 r +
             4.2313330701600911252e1) *
                r +
            1.0);
  }

  double r = (q < 0.0) ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double value;
  if (r <= 5.0) {
    r -= 1.6;
    value = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) *
                      r +
                  2.41780725177450611770e-1) *
                     r +
                 1.27045825245236838258e0) *
                    r +
                3.64784832476320460504e0) *
                   r +
               5.76949722146069140550e0) *
                  r +
              4.63033784615654529590e0) *
                 r +
             1.42343711074968357734e0) /
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) *
                      r +
                  1.51986665636164571966e-2) *
                     r +
                 1.48103976427480074590e-1) *
                    r +
                6.89767334985100004550e-1) *
                   r +
               1.67638483018380384940e0) *
                  r +
              2.05319162663775882187e0) *
                 r +
             1.0);
  } else {
    r -= 5.0;
    value = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) *
                      r +
                  1.24266094738807843860e-3) *
                     r +
                 2.65321895265761230930e-2) *
                    r +
                2.96560571828504891230e-1) *
                   r +
               1.78482653991729133580e0) *
                  r +
              5.46378491116411436990e0) *
                 r +
             6.65790464350110377720e0) /
            (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) *
                      r +
                  1.84631831751005468180e-5) *
                     r +
                 7.86869131145613259100e-4) *
                    r +
                1.48753612908506148525e-2) *
                   r +
               1.36929880922735805310e-1) *
                  r +
              5.99832206555887937690e-1) *
                 r +
             1.0);
  }
  return (q < 0.0) ? -value : value;
}

namespace detail {

template <class Term>
double pairwise_sum_range(std::size_t lo, std::size_t hi, Term&& term) {
  if (hi - lo <= 16) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += term(i);
    return s;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum_range(lo, mid, term) + pairwise_sum_range(mid, hi, term);
}

}  // namespace detail

// Sum of term(i) over [0, n) with a fixed pairwise reduction tree.
// The tree depends only on n, so the result is independent of how the
// terms are produced (sequentially or by several workers).
template <class Term>
double pairwise_sum(std::size_t n, Term&& term) {
  if (n == 0) return 0.0;
  return detail::pairwise_sum_range(0, n, term);
}

inline double pairwise_sum(std::span<const double> values) {
  return pairwise_sum(values.size(), [&](std::size_t i) { return values[i]; });
}

inline double mean(std::span<const double> values) {
  return pairwise_sum(values) / static_cast<double>(values.size());
}

// Unbiased sample variance, (n-1) denominator.
inline double sample_variance(std::span<const double> values) {
  const std::size_t n = values.size();
  const double m = mean(values);
  const double ss =
      pairwise_sum(n, [&](std::size_t i) { return (values[i] - m) * (values[i] - m); });
  return ss / static_cast<double>(n - 1);
}

inline double pearson_correlation(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  const double ma = mean(a);
  const double mb = mean(b);
  const double sab =
      pairwise_sum(n, [&](std::size_t i) { return (a[i] - ma) * (b[i] - mb); });
  const double saa =
      pairwise_sum(n, [&](std::size_t i) { return (a[i] - ma) * (a[i] - ma); });
  const double sbb =
      pairwise_sum(n, [&](std::size_t i) { return (b[i] - mb) * (b[i] - mb); });
  return sab / std::sqrt(saa * sbb);
}

}  // namespace calibre
