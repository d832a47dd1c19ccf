#include "fsacf/distributions.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <stdexcept>

namespace fsacf {

double chi2_sf(double x, int k) {
    if (k < 1) throw std::domain_error("chi2_sf: degrees of freedom must be positive");
    if (!(x >= 0.0)) throw std::domain_error("chi2_sf: x must be nonnegative");
    if (x == 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    return boost::math::gamma_q(0.5 * k, 0.5 * x);
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("normal_quantile: p must lie in (0,1)");
    return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

double student_t_quantile(double p, double df) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("student_t_quantile: p must lie in (0,1)");
    if (!(df > 0.0)) throw std::domain_error("student_t_quantile: df must be positive");
    return boost::math::quantile(boost::math::students_t_distribution<double>(df), p);
}

}  // namespace fsacf
