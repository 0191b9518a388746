#include "kgstark/modes.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace kgstark {

std::string to_string(Route r) { return r == Route::direct ? "direct" : "amplitude_phase"; }

size_t ModeTrajectory::index_of(double t) const {
    auto it = std::lower_bound(times.begin(), times.end(), t);
    for (auto probe : {it, it == times.begin() ? it : it - 1}) {
        if (probe != times.end()) {
            double s = *probe;
            if (std::abs(s - t) <= 1e-9 * std::max({1.0, std::abs(s), std::abs(t)}))
                return static_cast<size_t>(probe - times.begin());
        }
    }
    throw RangeError("trajectory does not cover t=" + format_double(t));
}

namespace {

void check_tol(double tol) {
    if (!(tol >= 1e-13 && tol <= 1e-4)) throw std::invalid_argument("solver tol must lie in [1e-13, 1e-4]");
}

std::vector<double> prepare_samples(double t_end, const std::vector<double>& sample_times) {
    std::vector<double> s = sample_times;
    if (s.empty()) s = {t_end};
    for (size_t i = 1; i < s.size(); ++i)
        if (!(s[i] > s[i - 1])) throw std::invalid_argument("sample times must be strictly increasing");
    if (s.front() < 0.0 || s.back() > t_end * (1 + 1e-12))
        throw std::invalid_argument("sample times must lie in [0, t_end]");
    s.back() = std::min(s.back(), t_end);
    return s;
}

void reserve_columns(ModeTrajectory& tr, size_t n) {
    tr.times.assign(n, 0.0);
    tr.zeta0.assign(n, 0.0);
    tr.zeta0p.assign(n, 0.0);
    tr.zeta1.assign(n, 0.0);
    tr.zeta1p.assign(n, 0.0);
    tr.A.assign(n, 0.0);
    tr.B.assign(n, 0.0);
    tr.C.assign(n, 0.0);
    tr.D.assign(n, 0.0);
    tr.G0.assign(n, 0.0);
    tr.G1.assign(n, 0.0);
    tr.Q.assign(n, 0.0);
}

// continue the phase onto the branch nearest the previous sample
inline double unwrap_near(double raw, double prev) {
    return raw + 2.0 * M_PI * std::round((prev - raw) / (2.0 * M_PI));
}

}  // namespace

ModeTrajectory integrate_direct(const Dispersion& disp, const Vec& xi, double t_end, double tol,
                                const std::vector<double>& sample_times) {
    check_tol(tol);
    if (!(t_end > 0.0)) throw std::invalid_argument("t_end must be positive");
    auto samples = prepare_samples(t_end, sample_times);

    ModeTrajectory tr;
    tr.xi = xi;
    tr.method = Route::direct;
    reserve_columns(tr, samples.size());

    auto rhs = [&](double t, const double* y, double* dy) {
        double l = disp.L(t, xi);
        dy[0] = y[1];
        dy[1] = -l * y[0];
        dy[2] = y[3];
        dy[3] = -l * y[2];
    };
    auto ceiling = [&](double t) { return 0.25 / disp.Q(t, xi); };

    // local errors on the oscillator accumulate secularly; the per-step
    // tolerance is tightened so the global Wronskian drift stays near tol
    double tol_step = std::max(tol / 64.0, 1e-14);
    std::array<double, 4> y0{1.0, 0.0, 0.0, 1.0};
    tr.stats = integrate_dopri5<4>(rhs, 0.0, y0, t_end, tol_step, ceiling, samples,
                                   [&](size_t i, double t, const std::array<double, 4>& y) {
                                       tr.times[i] = t;
                                       tr.zeta0[i] = y[0];
                                       tr.zeta0p[i] = y[1];
                                       tr.zeta1[i] = y[2];
                                       tr.zeta1p[i] = y[3];
                                   });

    // back-fill the representation columns from the samples
    const double q0 = disp.Q(0.0, xi);
    double prevB = 0.0, prevD = 0.0;
    for (size_t i = 0; i < tr.size(); ++i) {
        double q = disp.Q(tr.times[i], xi);
        tr.Q[i] = q;
        double u0 = tr.zeta0[i], v0 = -tr.zeta0p[i] / q;
        double u1 = tr.zeta1p[i] / q, v1 = tr.zeta1[i];
        tr.A[i] = std::hypot(u0, v0);
        tr.C[i] = std::hypot(u1, v1);
        double rawB = std::atan2(v0, u0);
        double rawD = std::atan2(v1, u1);
        tr.B[i] = (i == 0) ? rawB : unwrap_near(rawB, prevB);
        tr.D[i] = (i == 0) ? rawD : unwrap_near(rawD, prevD);
        prevB = tr.B[i];
        prevD = tr.D[i];
        tr.G0[i] = tr.A[i] * std::sqrt(q / q0);
        tr.G1[i] = tr.C[i] * std::sqrt(q * q0);
    }
    return tr;
}

ModeTrajectory integrate_amplitude_phase(const Dispersion& disp, const Vec& xi, double t_end, double tol,
                                         const std::vector<double>& sample_times) {
    check_tol(tol);
    if (!(t_end > 0.0)) throw std::invalid_argument("t_end must be positive");
    auto samples = prepare_samples(t_end, sample_times);

    ModeTrajectory tr;
    tr.xi = xi;
    tr.method = Route::amplitude_phase;
    reserve_columns(tr, samples.size());

    const double q0 = disp.Q(0.0, xi);
    const double logq0 = std::log(q0);

    auto rhs = [&](double t, const double* y, double* dy) {
        auto ev = disp.eval(t, xi);
        double s2b, c2b, s2d, c2d;
        // libm performs the large-argument reduction in extended precision
        s2b = std::sin(2.0 * y[1]);
        c2b = std::cos(2.0 * y[1]);
        s2d = std::sin(2.0 * y[3]);
        c2d = std::cos(2.0 * y[3]);
        double half_r = 0.5 * ev.Qlog;
        dy[0] = -half_r * (1.0 - c2b);  // (log A)' = -(Q'/Q) sin^2 B
        dy[1] = ev.Q - half_r * s2b;
        dy[2] = -half_r * (1.0 + c2d);  // (log C)' = -(Q'/Q) cos^2 D
        dy[3] = ev.Q + half_r * s2d;
    };
    auto ceiling = [&](double t) { return 0.25 / disp.Q(t, xi); };

    // Fractional power-law impulses have integrable |b'| blowup at t=0+; the
    // system starts just past the origin from the leading-order expansion
    // (errors O(eps^{1+gamma}), below every supported tolerance).
    double t_start = 0.0;
    std::array<double, 4> y0{0.0, 0.0, -logq0, 0.0};
    if (disp.field().origin_singular()) {
        t_start = 1e-8;
        double q_eps = disp.Q(t_start, xi);
        y0 = {0.0, q0 * t_start, -std::log(q_eps), q0 * t_start};
    }

    auto fill = [&](size_t i, double t, const std::array<double, 4>& y) {
        double qv = disp.Q(t, xi);
        double a = std::exp(y[0]);
        double c = std::exp(y[2]);
        double sb = std::sin(y[1]), cb = std::cos(y[1]);
        double sd = std::sin(y[3]), cd = std::cos(y[3]);
        tr.times[i] = t;
        tr.Q[i] = qv;
        tr.A[i] = a;
        tr.B[i] = y[1];
        tr.C[i] = c;
        tr.D[i] = y[3];
        tr.zeta0[i] = a * cb;
        tr.zeta0p[i] = -a * qv * sb;
        tr.zeta1[i] = c * sd;
        tr.zeta1p[i] = c * qv * cd;
        tr.G0[i] = std::exp(y[0] + 0.5 * (std::log(qv) - logq0));
        tr.G1[i] = std::exp(y[2] + 0.5 * (std::log(qv) + logq0));
    };

    std::vector<double> tail_samples;
    size_t head = 0;
    for (double s : samples) {
        if (s < t_start)
            ++head;
        else
            tail_samples.push_back(s);
    }
    // samples below the start point get the expansion values directly
    for (size_t i = 0; i < head; ++i) {
        double t = samples[i];
        std::array<double, 4> y{0.0, q0 * t, -std::log(disp.Q(t, xi)), q0 * t};
        fill(i, t, y);
    }
    tr.stats = integrate_dopri5<4>(rhs, t_start, y0, t_end, tol, ceiling, tail_samples,
                                   [&](size_t i, double t, const std::array<double, 4>& y) { fill(head + i, t, y); });
    return tr;
}

ModeTrajectory solve_mode(const Dispersion& disp, const Vec& xi, double t_end, const SolveOptions& opts,
                          const std::vector<double>& sample_times) {
    return opts.route == Route::direct ? integrate_direct(disp, xi, t_end, opts.tol, sample_times)
                                       : integrate_amplitude_phase(disp, xi, t_end, opts.tol, sample_times);
}

double wronskian_deviation(const ModeTrajectory& traj) {
    if (traj.size() == 0) throw std::invalid_argument("empty trajectory");
    double dev = 0.0;
    for (size_t i = 0; i < traj.size(); ++i) {
        double w = traj.zeta0[i] * traj.zeta1p[i] - traj.zeta0p[i] * traj.zeta1[i];
        dev = std::max(dev, std::abs(w - 1.0));
    }
    return dev;
}

EnvelopeExtrema envelope_check(const ModeTrajectory& traj) {
    if (traj.size() == 0) throw std::invalid_argument("empty trajectory");
    EnvelopeExtrema e{0.0, std::numeric_limits<double>::infinity(), 0.0, std::numeric_limits<double>::infinity()};
    for (size_t i = 0; i < traj.size(); ++i) {
        if (!(traj.A[i] > 0.0) || !(traj.C[i] > 0.0) || !(traj.G0[i] > 0.0) || !(traj.G1[i] > 0.0))
            throw NumericError("amplitude positivity violated at t=" + format_double(traj.times[i]));
        e.g0_sup = std::max(e.g0_sup, traj.G0[i]);
        e.g0_inf = std::min(e.g0_inf, traj.G0[i]);
        e.g1_sup = std::max(e.g1_sup, traj.G1[i]);
        e.g1_inf = std::min(e.g1_inf, traj.G1[i]);
    }
    return e;
}

std::string trajectory_csv(const ModeTrajectory& traj) {
    std::ostringstream os;
    os << "t,zeta0,zeta0p,zeta1,zeta1p,A,B,C,D,G0,G1,Q\n";
    for (size_t i = 0; i < traj.size(); ++i) {
        os << format_double(traj.times[i]) << ',' << format_double(traj.zeta0[i]) << ','
           << format_double(traj.zeta0p[i]) << ',' << format_double(traj.zeta1[i]) << ','
           << format_double(traj.zeta1p[i]) << ',' << format_double(traj.A[i]) << ',' << format_double(traj.B[i])
           << ',' << format_double(traj.C[i]) << ',' << format_double(traj.D[i]) << ',' << format_double(traj.G0[i])
           << ',' << format_double(traj.G1[i]) << ',' << format_double(traj.Q[i]) << '\n';
    }
    return os.str();
}

std::vector<double> linspace(double a, double b, int count) {
    if (count < 1) throw std::invalid_argument("linspace needs count >= 1");
    std::vector<double> out(static_cast<size_t>(count));
    if (count == 1) {
        out[0] = b;
        return out;
    }
    for (int i = 0; i < count; ++i) out[static_cast<size_t>(i)] = a + (b - a) * (static_cast<double>(i) / (count - 1));
    out.back() = b;
    return out;
}

std::vector<double> logspace(double a, double b, int count) {
    if (!(a > 0.0 && b > a)) throw std::invalid_argument("logspace needs 0 < a < b");
    if (count < 2) throw std::invalid_argument("logspace needs count >= 2");
    std::vector<double> out(static_cast<size_t>(count));
    double la = std::log(a), lb = std::log(b);
    for (int i = 0; i < count; ++i)
        out[static_cast<size_t>(i)] = std::exp(la + (lb - la) * (static_cast<double>(i) / (count - 1)));
    out.front() = a;
    out.back() = b;
    return out;
}

}  // namespace kgstark
