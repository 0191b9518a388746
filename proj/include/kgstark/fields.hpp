#pragma once

#include <array>
#include <string>
#include <vector>

#include "kgstark/util.hpp"

namespace kgstark {

// Particle constants. mc^2 > 0 keeps the dispersion bounded away from zero.
struct PhysicalParams {
    double c = 1.0;
    double m = 1.0;
    double q = 1.0;
    int n = 1;

    void validate() const;
    double mc2() const { return m * c * c; }
};

enum class FieldKind { constant, power_law, logarithmic, sinusoidal, tabulated };

std::string to_string(FieldKind k);

// Time-dependent homogeneous electric field together with the exact impulse
// primitive b(t) = integral of qE over [0,t] and its first two derivatives.
// Immutable after construction; all evaluation is const and thread-safe.
class FieldModel {
public:
    static FieldModel constant(std::vector<double> field);
    // b = coeff * t^gamma + rho(t) + theta(t) along one axis. rho is a
    // polynomial in log(1+t) given by coefficients for log^1, log^2, ...;
    // theta is a sum of a_k*sin(w_k t) terms and is accepted only for gamma=1.
    static FieldModel power_law(double gamma, double coeff, std::vector<double> rho_log_coeffs = {},
                                std::vector<std::array<double, 2>> theta_trig = {});
    static FieldModel logarithmic(double e3, double e4);
    // Negative-test model on two axes: b1 = c1*t^gamma, b2 = c2*t^(gamma/2)
    // + amplitude*sin(omega t). The AC component keeps b'' from decaying.
    static FieldModel sinusoidal(double gamma = 0.5, double c1 = 1.0, double c2 = 1.0, double amplitude = 1.0,
                                 double omega = 1.0);
    // One-axis sampled field E(t); monotone cubic interpolation. The sample
    // range must contain t=0 so b(0)=0 holds exactly.
    static FieldModel tabulated(std::vector<double> times, std::vector<double> field);

    FieldKind kind() const { return kind_; }
    int dimension() const { return dim_; }

    // True when |E| or |E'| blows up as t -> 0+ (fractional power laws).
    // Derivative sups and tail integrals are then taken over [t_regular, inf).
    bool origin_singular() const;
    double t_regular() const { return origin_singular() ? 1.0 : 0.0; }

    Vec eval_field(double t, double q) const;     // E(t)
    Vec eval_b(double t, double q) const;         // b(t), b(0)=0 exactly
    Vec eval_b_prime(double t, double q) const;   // b'(t) = qE(t)
    Vec eval_b_second(double t, double q) const;  // b''(t)

    // sup over admissible t of sum_j |b_j^(k)(t)| for k in {1,2}; the field
    // bounds E_{0,0}, E_{0,1} are these divided by |q|.
    double b_prime_sup(double q) const;
    double b_second_sup(double q) const;

    double tab_t_min() const;
    double tab_t_max() const;
    // Oscillation period estimate used by region scans; +inf when aperiodic.
    double period_estimate() const;

private:
    FieldModel() = default;

    double deriv_sup(int k, double q) const;

    FieldKind kind_ = FieldKind::constant;
    int dim_ = 1;

    std::vector<double> const_field_;

    double gamma_ = 0.0;
    double coeff_ = 0.0;
    std::vector<double> rho_;
    std::vector<std::array<double, 2>> theta_;

    double e3_ = 0.0, e4_ = 0.0;

    double sin_gamma_ = 0.5, sin_c1_ = 1.0, sin_c2_ = 1.0, sin_amp_ = 1.0, sin_omega_ = 1.0;

    std::vector<double> tab_t_, tab_e_, tab_slope_, tab_cum_;
};

enum class E1Verdict { PASS, FAIL, NOT_APPLICABLE };

std::string to_string(E1Verdict v);

// Outcome of the integral-condition audit at increasing horizons.
struct E1Report {
    double e0_estimate = 0.0;
    double e1_estimate = 0.0;
    double horizon = 0.0;
    bool growth_flag = false;
    E1Verdict verdict = E1Verdict::NOT_APPLICABLE;

    std::vector<double> horizons;
    std::vector<double> e0_by_horizon;
    std::vector<double> e1_by_horizon;
    std::vector<double> b_sup_by_horizon;
    double sublevel_radius = 0.0;
};

// Audits the two integral conditions for the offset vector a over the given
// horizons (strictly increasing, at least two). FAIL when the estimates are
// still growing (>1% relative) at the last horizon; NOT_APPLICABLE when |b|
// shows no growth at all.
E1Report audit_e1(const FieldModel& model, const PhysicalParams& params, const Vec& a,
                  const std::vector<double>& horizons);

}  // namespace kgstark
