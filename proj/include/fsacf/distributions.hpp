#pragma once

namespace fsacf {

/// P(chi^2(k) > x), via the regularized upper incomplete gamma Q(k/2, x/2).
[[nodiscard]] double chi2_sf(double x, int k);

/// Inverse standard normal CDF.
[[nodiscard]] double normal_quantile(double p);

/// Inverse CDF of Student's t with df degrees of freedom.
[[nodiscard]] double student_t_quantile(double p, double df);

}  // namespace fsacf
