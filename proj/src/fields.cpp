#include "kgstark/fields.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kgstark/quadrature.hpp"

namespace kgstark {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// t^g with fast paths for the catalog defaults.
inline double pow_frac(double t, double g) {
    if (g == 1.0) return t;
    if (g == 0.5) return std::sqrt(t);
    if (g == 0.25) return std::sqrt(std::sqrt(t));
    return std::pow(t, g);
}

// rho(t) = sum_k r_k log^k(1+t), k starting at 1.
double rho_eval(const std::vector<double>& r, double t, int deriv) {
    if (r.empty()) return 0.0;
    double L = std::log1p(t);
    double u = 1.0 + t;
    double out = 0.0;
    for (size_t j = 0; j < r.size(); ++j) {
        double k = static_cast<double>(j + 1);
        double lk2 = (j >= 1) ? std::pow(L, static_cast<double>(j - 1)) : 0.0;
        double lk1 = (j >= 1) ? lk2 * L : 1.0;
        double lk = lk1 * L;
        switch (deriv) {
            case 0: out += r[j] * lk; break;
            case 1: out += r[j] * k * lk1 / u; break;
            case 2: out += r[j] * k * ((k - 1.0) * lk2 - lk1) / (u * u); break;
        }
    }
    return out;
}

double theta_eval(const std::vector<std::array<double, 2>>& th, double t, int deriv) {
    double out = 0.0;
    for (const auto& aw : th) {
        double a = aw[0], w = aw[1];
        switch (deriv) {
            case 0: out += a * std::sin(w * t); break;
            case 1: out += a * w * std::cos(w * t); break;
            case 2: out -= a * w * w * std::sin(w * t); break;
        }
    }
    return out;
}

double theta_sup(const std::vector<std::array<double, 2>>& th, int deriv) {
    double out = 0.0;
    for (const auto& aw : th) out += std::abs(aw[0]) * std::pow(std::abs(aw[1]), deriv);
    return out;
}

// sup of |f| over [lo, inf) estimated on a log-spaced sample; used for the
// perturbation terms that have no closed-form extremum.
template <class F>
double sampled_sup(const F& f, double lo) {
    double s = 0.0;
    double t = std::max(lo, 1e-6);
    for (int i = 0; i <= 2000; ++i) {
        double tt = t * std::pow(1e6 / t, i / 2000.0);
        s = std::max(s, std::abs(f(tt)));
    }
    return s;
}

}  // namespace

void PhysicalParams::validate() const {
    if (!(m > 0.0)) throw std::invalid_argument("params.m > 0 violated");
    if (!(c > 0.0)) throw std::invalid_argument("params.c > 0 violated");
    if (q == 0.0) throw std::invalid_argument("params.q != 0 violated");
    if (n != 1 && n != 2) throw std::invalid_argument("params.n must be 1 or 2");
}

std::string to_string(FieldKind k) {
    switch (k) {
        case FieldKind::constant: return "constant";
        case FieldKind::power_law: return "power_law";
        case FieldKind::logarithmic: return "logarithmic";
        case FieldKind::sinusoidal: return "sinusoidal";
        case FieldKind::tabulated: return "tabulated";
    }
    return "?";
}

std::string to_string(E1Verdict v) {
    switch (v) {
        case E1Verdict::PASS: return "PASS";
        case E1Verdict::FAIL: return "FAIL";
        case E1Verdict::NOT_APPLICABLE: return "NOT_APPLICABLE";
    }
    return "?";
}

FieldModel FieldModel::constant(std::vector<double> field) {
    if (field.empty() || field.size() > 2) throw std::invalid_argument("constant field needs 1 or 2 components");
    FieldModel m;
    m.kind_ = FieldKind::constant;
    m.dim_ = static_cast<int>(field.size());
    m.const_field_ = std::move(field);
    return m;
}

FieldModel FieldModel::power_law(double gamma, double coeff, std::vector<double> rho_log_coeffs,
                                 std::vector<std::array<double, 2>> theta_trig) {
    if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("power_law gamma must be in (0,1]");
    if (coeff == 0.0) throw std::invalid_argument("power_law coefficient must be nonzero");
    if (!theta_trig.empty() && gamma != 1.0)
        throw std::invalid_argument("bounded theta term admissible only for gamma = 1");
    FieldModel m;
    m.kind_ = FieldKind::power_law;
    m.dim_ = 1;
    m.gamma_ = gamma;
    m.coeff_ = coeff;
    m.rho_ = std::move(rho_log_coeffs);
    m.theta_ = std::move(theta_trig);
    return m;
}

FieldModel FieldModel::logarithmic(double e3, double e4) {
    if (e3 == 0.0) throw std::invalid_argument("logarithmic e3 must be nonzero");
    if (!(e4 > 0.0)) throw std::invalid_argument("logarithmic e4 must be positive");
    FieldModel m;
    m.kind_ = FieldKind::logarithmic;
    m.dim_ = 1;
    m.e3_ = e3;
    m.e4_ = e4;
    return m;
}

FieldModel FieldModel::sinusoidal(double gamma, double c1, double c2, double amplitude, double omega) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("sinusoidal gamma must be in (0,1)");
    if (!(omega > 0.0)) throw std::invalid_argument("sinusoidal omega must be positive");
    FieldModel m;
    m.kind_ = FieldKind::sinusoidal;
    m.dim_ = 2;
    m.sin_gamma_ = gamma;
    m.sin_c1_ = c1;
    m.sin_c2_ = c2;
    m.sin_amp_ = amplitude;
    m.sin_omega_ = omega;
    return m;
}

FieldModel FieldModel::tabulated(std::vector<double> times, std::vector<double> field) {
    if (times.size() != field.size() || times.size() < 4)
        throw std::invalid_argument("tabulated model needs >= 4 (t,E) samples");
    for (size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1])) throw std::invalid_argument("tabulated times must be strictly increasing");
    if (times.front() > 0.0 || times.back() < 0.0)
        throw std::invalid_argument("tabulated range must contain t=0");

    FieldModel m;
    m.kind_ = FieldKind::tabulated;
    m.dim_ = 1;
    m.tab_t_ = std::move(times);
    m.tab_e_ = std::move(field);

    // Fritsch-Carlson slopes: C^1 interpolant, no overshoot on monotone runs.
    size_t n = m.tab_t_.size();
    std::vector<double> h(n - 1), d(n - 1);
    for (size_t i = 0; i + 1 < n; ++i) {
        h[i] = m.tab_t_[i + 1] - m.tab_t_[i];
        d[i] = (m.tab_e_[i + 1] - m.tab_e_[i]) / h[i];
    }
    m.tab_slope_.assign(n, 0.0);
    m.tab_slope_[0] = d[0];
    m.tab_slope_[n - 1] = d[n - 2];
    for (size_t i = 1; i + 1 < n; ++i) {
        if (d[i - 1] * d[i] <= 0.0) {
            m.tab_slope_[i] = 0.0;
        } else {
            double w1 = 2 * h[i] + h[i - 1], w2 = h[i] + 2 * h[i - 1];
            m.tab_slope_[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
        }
    }

    // cumulative integral of E at the knots; Hermite cubics integrate exactly
    double acc = 0.0;
    m.tab_cum_.assign(n, 0.0);
    for (size_t i = 0; i + 1 < n; ++i) {
        double e0 = m.tab_e_[i], e1 = m.tab_e_[i + 1];
        double s0 = m.tab_slope_[i], s1 = m.tab_slope_[i + 1];
        acc += h[i] * (0.5 * (e0 + e1) + h[i] * (s0 - s1) / 12.0);
        m.tab_cum_[i + 1] = acc;
    }
    return m;
}

bool FieldModel::origin_singular() const {
    if (kind_ == FieldKind::power_law) return gamma_ < 1.0;
    if (kind_ == FieldKind::sinusoidal) return true;
    return false;
}

double FieldModel::tab_t_min() const { return tab_t_.empty() ? -kInf : tab_t_.front(); }
double FieldModel::tab_t_max() const { return tab_t_.empty() ? kInf : tab_t_.back(); }

double FieldModel::period_estimate() const {
    if (kind_ == FieldKind::sinusoidal) return 2.0 * M_PI / sin_omega_;
    double p = kInf;
    if (kind_ == FieldKind::power_law)
        for (const auto& aw : theta_) p = std::min(p, 2.0 * M_PI / std::abs(aw[1]));
    return p;
}

Vec FieldModel::eval_field(double t, double q) const {
    Vec b1 = eval_b_prime(t, q);
    Vec e = Vec::zero(dim_);
    for (int i = 0; i < dim_; ++i) e[i] = b1[i] / q;
    return e;
}

Vec FieldModel::eval_b(double t, double q) const {
    Vec out = Vec::zero(dim_);
    switch (kind_) {
        case FieldKind::constant:
            for (int i = 0; i < dim_; ++i) out[i] = q * const_field_[static_cast<size_t>(i)] * t;
            return out;
        case FieldKind::power_law:
            out[0] = coeff_ * pow_frac(t, gamma_) + rho_eval(rho_, t, 0) + theta_eval(theta_, t, 0);
            return out;
        case FieldKind::logarithmic:
            out[0] = e3_ * std::log1p(e4_ * std::abs(t));
            return out;
        case FieldKind::sinusoidal:
            out[0] = sin_c1_ * pow_frac(t, sin_gamma_);
            out[1] = sin_c2_ * pow_frac(t, 0.5 * sin_gamma_) + sin_amp_ * std::sin(sin_omega_ * t);
            return out;
        case FieldKind::tabulated: {
            if (t < tab_t_.front() || t > tab_t_.back())
                throw RangeError("tabulated field queried at t=" + format_double(t) + " outside sampled range");
            // cumulative at knot + exact Hermite integral over the partial cell
            auto it = std::upper_bound(tab_t_.begin(), tab_t_.end(), t);
            size_t i = static_cast<size_t>(std::max<ptrdiff_t>(0, (it - tab_t_.begin()) - 1));
            if (i + 1 >= tab_t_.size()) i = tab_t_.size() - 2;
            double h = tab_t_[i + 1] - tab_t_[i];
            double u = (t - tab_t_[i]) / h;
            double e0 = tab_e_[i], e1 = tab_e_[i + 1], s0 = tab_slope_[i] * h, s1 = tab_slope_[i + 1] * h;
            // integral of the Hermite basis from 0 to u, scaled by h
            double u2 = u * u, u3 = u2 * u, u4 = u3 * u;
            double ih00 = u - u3 + 0.5 * u4;
            double ih10 = 0.5 * u2 - (2.0 / 3.0) * u3 + 0.25 * u4;
            double ih01 = u3 - 0.5 * u4;
            double ih11 = -(1.0 / 3.0) * u3 + 0.25 * u4;
            double part = h * (e0 * ih00 + s0 * ih10 + e1 * ih01 + s1 * ih11);
            double at_t = tab_cum_[i] + part;
            // reference the cumulative to t=0
            double at_zero = 0.0;
            {
                auto jt = std::upper_bound(tab_t_.begin(), tab_t_.end(), 0.0);
                size_t j = static_cast<size_t>(std::max<ptrdiff_t>(0, (jt - tab_t_.begin()) - 1));
                if (j + 1 >= tab_t_.size()) j = tab_t_.size() - 2;
                double hj = tab_t_[j + 1] - tab_t_[j];
                double uj = (0.0 - tab_t_[j]) / hj;
                double v2 = uj * uj, v3 = v2 * uj, v4 = v3 * uj;
                double j00 = uj - v3 + 0.5 * v4;
                double j10 = 0.5 * v2 - (2.0 / 3.0) * v3 + 0.25 * v4;
                double j01 = v3 - 0.5 * v4;
                double j11 = -(1.0 / 3.0) * v3 + 0.25 * v4;
                at_zero = tab_cum_[j] + hj * (tab_e_[j] * j00 + tab_slope_[j] * hj * j10 + tab_e_[j + 1] * j01 +
                                              tab_slope_[j + 1] * hj * j11);
            }
            out[0] = q * (at_t - at_zero);
            return out;
        }
    }
    return out;
}

Vec FieldModel::eval_b_prime(double t, double q) const {
    Vec out = Vec::zero(dim_);
    switch (kind_) {
        case FieldKind::constant:
            for (int i = 0; i < dim_; ++i) out[i] = q * const_field_[static_cast<size_t>(i)];
            return out;
        case FieldKind::power_law:
            out[0] = coeff_ * gamma_ * ((gamma_ == 1.0) ? 1.0 : pow_frac(t, gamma_ - 1.0)) + rho_eval(rho_, t, 1) +
                     theta_eval(theta_, t, 1);
            return out;
        case FieldKind::logarithmic: {
            double s = (t < 0.0) ? -1.0 : 1.0;
            out[0] = s * e3_ * e4_ / (1.0 + e4_ * std::abs(t));
            return out;
        }
        case FieldKind::sinusoidal:
            out[0] = sin_c1_ * sin_gamma_ * pow_frac(t, sin_gamma_ - 1.0);
            out[1] = sin_c2_ * 0.5 * sin_gamma_ * pow_frac(t, 0.5 * sin_gamma_ - 1.0) +
                     sin_amp_ * sin_omega_ * std::cos(sin_omega_ * t);
            return out;
        case FieldKind::tabulated: {
            if (t < tab_t_.front() || t > tab_t_.back())
                throw RangeError("tabulated field queried at t=" + format_double(t) + " outside sampled range");
            auto it = std::upper_bound(tab_t_.begin(), tab_t_.end(), t);
            size_t i = static_cast<size_t>(std::max<ptrdiff_t>(0, (it - tab_t_.begin()) - 1));
            if (i + 1 >= tab_t_.size()) i = tab_t_.size() - 2;
            double h = tab_t_[i + 1] - tab_t_[i];
            double u = (t - tab_t_[i]) / h;
            double h00 = (1 + 2 * u) * (1 - u) * (1 - u);
            double h10 = u * (1 - u) * (1 - u);
            double h01 = u * u * (3 - 2 * u);
            double h11 = u * u * (u - 1);
            out[0] = q * (h00 * tab_e_[i] + h10 * h * tab_slope_[i] + h01 * tab_e_[i + 1] + h11 * h * tab_slope_[i + 1]);
            return out;
        }
    }
    return out;
}

Vec FieldModel::eval_b_second(double t, double q) const {
    Vec out = Vec::zero(dim_);
    switch (kind_) {
        case FieldKind::constant:
            return out;
        case FieldKind::power_law:
            out[0] = (gamma_ == 1.0 ? 0.0 : coeff_ * gamma_ * (gamma_ - 1.0) * pow_frac(t, gamma_ - 2.0)) +
                     rho_eval(rho_, t, 2) + theta_eval(theta_, t, 2);
            return out;
        case FieldKind::logarithmic: {
            double u = 1.0 + e4_ * std::abs(t);
            out[0] = -e3_ * e4_ * e4_ / (u * u);
            return out;
        }
        case FieldKind::sinusoidal:
            out[0] = sin_c1_ * sin_gamma_ * (sin_gamma_ - 1.0) * pow_frac(t, sin_gamma_ - 2.0);
            out[1] = sin_c2_ * 0.5 * sin_gamma_ * (0.5 * sin_gamma_ - 1.0) * pow_frac(t, 0.5 * sin_gamma_ - 2.0) -
                     sin_amp_ * sin_omega_ * sin_omega_ * std::sin(sin_omega_ * t);
            return out;
        case FieldKind::tabulated: {
            // two-sided differences of qE, one-sided at the range ends
            double span = tab_t_.back() - tab_t_.front();
            double h = span / (8.0 * static_cast<double>(tab_t_.size()));
            double lo = tab_t_.front(), hi = tab_t_.back();
            double tp = std::min(t + h, hi), tm = std::max(t - h, lo);
            Vec fp = eval_b_prime(tp, q), fm = eval_b_prime(tm, q);
            out[0] = (fp[0] - fm[0]) / (tp - tm);
            return out;
        }
    }
    return out;
}

// k = 1 for sup|b'|, k = 2 for sup|b''|; component sums bound the vector norm.
double FieldModel::deriv_sup(int k, double q) const {
    double lo = t_regular();
    switch (kind_) {
        case FieldKind::constant: {
            if (k != 1) return 0.0;
            double s = 0.0;
            for (double e : const_field_) s += std::abs(q * e);
            return s;
        }
        case FieldKind::power_law: {
            double main;
            if (gamma_ == 1.0)
                main = (k == 1) ? std::abs(coeff_) : 0.0;
            else
                // |coeff| g |t^(g-k)| factors are decreasing on [1, inf)
                main = std::abs(coeff_) * gamma_ * ((k == 1) ? 1.0 : (1.0 - gamma_));
            double rho_part = sampled_sup([&](double t) { return rho_eval(rho_, t, k); }, lo);
            return main + rho_part + theta_sup(theta_, k);
        }
        case FieldKind::logarithmic:
            return std::abs(e3_) * std::pow(e4_, k);
        case FieldKind::sinusoidal: {
            double g = sin_gamma_;
            double a1, a2;
            if (k == 1) {
                a1 = std::abs(sin_c1_) * g;
                a2 = std::abs(sin_c2_) * 0.5 * g + sin_amp_ * sin_omega_;
            } else {
                a1 = std::abs(sin_c1_) * g * (1.0 - g);
                a2 = std::abs(sin_c2_) * 0.5 * g * std::abs(0.5 * g - 1.0) + sin_amp_ * sin_omega_ * sin_omega_;
            }
            return a1 + a2;
        }
        case FieldKind::tabulated: {
            double s = 0.0;
            size_t n = tab_t_.size();
            for (size_t i = 0; i + 1 < n; ++i) {
                for (int j = 0; j < 8; ++j) {
                    double t = tab_t_[i] + (tab_t_[i + 1] - tab_t_[i]) * (j / 8.0);
                    double v = (k == 1) ? eval_b_prime(t, q)[0] : eval_b_second(t, q)[0];
                    s = std::max(s, std::abs(v));
                }
            }
            return s;
        }
    }
    return 0.0;
}

double FieldModel::b_prime_sup(double q) const { return deriv_sup(1, q); }
double FieldModel::b_second_sup(double q) const { return deriv_sup(2, q); }

namespace {

// Locate {s in [0,T]: |a + b(s)| <= r} by sign scanning plus bisection.
std::vector<std::pair<double, double>> sublevel_intervals(const FieldModel& model, double q, const Vec& a, double r,
                                                          double T) {
    auto g = [&](double s) {
        Vec b = model.eval_b(s, q);
        Vec w = a;
        w += b;
        return w.norm() - r;
    };
    double step = std::min(1.0, model.period_estimate()) / 8.0;
    std::vector<std::pair<double, double>> out;
    double s0 = 0.0;
    double g0 = g(s0);
    bool inside = g0 <= 0.0;
    double start = inside ? 0.0 : -1.0;
    while (s0 < T) {
        double s1 = std::min(s0 + step, T);
        double g1 = g(s1);
        if ((g0 <= 0.0) != (g1 <= 0.0)) {
            // refine the crossing to 1e-10
            double lo = s0, hi = s1;
            for (int it = 0; it < 200 && hi - lo > 1e-10; ++it) {
                double mid = 0.5 * (lo + hi);
                if ((g(mid) <= 0.0) == (g0 <= 0.0))
                    lo = mid;
                else
                    hi = mid;
            }
            double root = 0.5 * (lo + hi);
            if (inside) {
                out.emplace_back(start, root);
                inside = false;
            } else {
                start = root;
                inside = true;
            }
        }
        s0 = s1;
        g0 = g1;
    }
    if (inside) out.emplace_back(start, T);
    return out;
}

}  // namespace

E1Report audit_e1(const FieldModel& model, const PhysicalParams& params, const Vec& a,
                  const std::vector<double>& horizons) {
    params.validate();
    if (horizons.size() < 2) throw std::invalid_argument("audit_e1 needs at least two horizons");
    for (size_t i = 1; i < horizons.size(); ++i)
        if (!(horizons[i] > horizons[i - 1])) throw std::invalid_argument("audit horizons must be strictly increasing");
    for (int i = 0; i < a.n; ++i)
        if (!std::isfinite(a[i])) throw std::invalid_argument("audit offset must be finite");

    const double q = params.q;
    const double mc2 = params.mc2();
    const double b_sup_prime = model.b_prime_sup(q);
    const double radius = 2.0 * b_sup_prime / mc2;
    const double t_lo = model.t_regular();

    E1Report rep;
    rep.sublevel_radius = radius;
    rep.horizons = horizons;

    Vec aa = a;
    aa.n = model.dimension();

    auto b_sup_on = [&](double T) {
        double s = 0.0;
        int samples = 4096;
        for (int i = 0; i <= samples; ++i) {
            double t = T * (static_cast<double>(i) / samples);
            s = std::max(s, model.eval_b(t, q).norm());
        }
        return s;
    };

    // hypot: the integrand can reach ~1e240 near the singular origin, where
    // squaring would overflow before the square root
    auto e0_integrand = [&](double s) {
        Vec bp = model.eval_b_prime(s, q);
        return (bp.n == 1) ? std::abs(bp[0]) : std::hypot(bp[0], bp[1]);
    };
    auto e1_integrand = [&](double s) {
        Vec b1 = model.eval_b_prime(s, q);
        Vec b2 = model.eval_b_second(s, q);
        Vec w = aa;
        w += model.eval_b(s, q);
        double denom = params.c * params.c * w.norm2() + mc2 * mc2;
        return (b1.norm2() + b2.norm()) / denom;
    };

    double prev_e0 = 0.0, prev_e1 = 0.0;
    for (size_t hidx = 0; hidx < horizons.size(); ++hidx) {
        double T = horizons[hidx];
        double e0 = 0.0;
        if (radius > 0.0) {
            for (const auto& [lo, hi] : sublevel_intervals(model, q, aa, radius, T)) {
                if (hi <= lo) continue;
                if (lo == 0.0 && model.origin_singular())
                    e0 += integrate_de(e0_integrand, lo, hi);
                else
                    e0 += integrate_gk(e0_integrand, lo, hi, 1e-9);
            }
        }
        double e1 = (T > t_lo) ? integrate_gk(e1_integrand, t_lo, T, 1e-9) : 0.0;
        rep.e0_by_horizon.push_back(e0);
        rep.e1_by_horizon.push_back(e1);
        rep.b_sup_by_horizon.push_back(b_sup_on(T));
        if (hidx + 1 == horizons.size()) {
            double inc0 = (e0 - prev_e0) / std::max(prev_e0, 1e-300);
            double inc1 = (e1 - prev_e1) / std::max(prev_e1, 1e-300);
            rep.growth_flag = (prev_e0 > 0.0 && inc0 > 0.01) || (prev_e1 > 0.0 && inc1 > 0.01);
        }
        prev_e0 = e0;
        prev_e1 = e1;
    }

    rep.e0_estimate = rep.e0_by_horizon.back();
    rep.e1_estimate = rep.e1_by_horizon.back();
    rep.horizon = horizons.back();

    double b_first = rep.b_sup_by_horizon.front();
    double b_last = rep.b_sup_by_horizon.back();
    bool b_grows = b_last > 1e-12 && (b_first <= 1e-12 || b_last / b_first > 1.1);
    if (!b_grows)
        rep.verdict = E1Verdict::NOT_APPLICABLE;
    else if (rep.growth_flag)
        rep.verdict = E1Verdict::FAIL;
    else
        rep.verdict = E1Verdict::PASS;
    return rep;
}

}  // namespace kgstark
