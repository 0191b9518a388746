#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <string>

#include "kgstark/util.hpp"

namespace kgstark {

// Adaptive Gauss-Kronrod for smooth integrands. Throws NumericError when the
// requested tolerance cannot be certified.
template <class F>
double integrate_gk(const F& f, double a, double b, double rel_tol = 1e-10) {
    if (a == b) return 0.0;
    double err = 0.0;
    double val = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 15, rel_tol, &err);
    double scale = std::max(std::abs(val), 1e-300);
    if (!(std::isfinite(val)) || err > 100 * rel_tol * scale + 1e-14) {
        throw NumericError("quadrature did not converge on [" + format_double(a) + "," + format_double(b) +
                           "]: value=" + format_double(val) + " err=" + format_double(err));
    }
    return val;
}

// Double-exponential rule; handles integrable endpoint singularities such as
// t^(g-1) with g in (0,1).
template <class F>
double integrate_de(const F& f, double a, double b, double tol = 1e-12) {
    if (a == b) return 0.0;
    boost::math::quadrature::tanh_sinh<double> integrator;
    double err = 0.0, l1 = 0.0;
    double val = integrator.integrate(f, a, b, tol, &err, &l1);
    if (!std::isfinite(val)) {
        throw NumericError("singular-endpoint quadrature failed on [" + format_double(a) + "," + format_double(b) + "]");
    }
    return val;
}

}  // namespace kgstark
