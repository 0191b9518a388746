#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "kgstark/util.hpp"

namespace kgstark {

struct StepStats {
    uint64_t accepted = 0;
    uint64_t rejected = 0;
    uint64_t rhs_evals = 0;
};

// Dormand-Prince 5(4) with the standard continuous extension. The right-hand
// side is resolved at oscillation scale through the caller-supplied step
// ceiling, so dense output stays accurate between accepted steps.
//
// System: void rhs(double t, const double* y, double* dy) with N components.
// Ceiling: double(double t) -> max step allowed at t (return +inf for none).
// Samples must be sorted ascending within [t0, t1]; on_sample(i, t, y) fires
// once per requested time.
template <size_t N, class Rhs, class Ceiling, class OnSample>
StepStats integrate_dopri5(Rhs&& rhs, double t0, const std::array<double, N>& y0, double t1, double tol,
                           Ceiling&& ceiling, const std::vector<double>& samples, OnSample&& on_sample) {
    static_assert(N >= 1);
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                     a65 = -5103.0 / 18656;
    constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784, a76 = 11.0 / 84;
    // embedded 4th-order weights
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                     e6 = 22.0 / 525, e7 = -1.0 / 40;
    // dense-output weights
    constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                     d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                     d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

    StepStats stats;
    if (!(t1 > t0)) {
        if (t1 == t0) {
            for (size_t si = 0; si < samples.size(); ++si)
                if (samples[si] == t0) on_sample(si, t0, y0);
            return stats;
        }
        throw SolverError("integration requires t1 > t0", t0);
    }

    std::array<double, N> y = y0, ynew{}, k1{}, k2{}, k3{}, k4{}, k5{}, k6{}, k7{}, work{};
    double t = t0;
    rhs(t, y.data(), k1.data());
    ++stats.rhs_evals;

    size_t sample_idx = 0;
    while (sample_idx < samples.size() && samples[sample_idx] < t0) ++sample_idx;
    if (sample_idx < samples.size() && samples[sample_idx] == t0) {
        on_sample(sample_idx, t0, y0);
        ++sample_idx;
    }

    // initial step guess, bounded by the oscillation ceiling
    double fnorm = 0;
    for (size_t i = 0; i < N; ++i) fnorm = std::max(fnorm, std::abs(k1[i]));
    double h = std::min({0.01 * (t1 - t0), 0.1 / (fnorm + 1e-12), ceiling(t0)});
    h = std::max(h, 1e-12);

    const double facmin = 0.2, facmax_normal = 5.0, safety = 0.9;
    double facmax = facmax_normal;

    while (t < t1) {
        h = std::min(h, ceiling(t));
        bool last = false;
        if (t + 1.0001 * h >= t1) {
            h = t1 - t;
            last = true;
        }
        if (!last && h < 16 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t), 1.0)) {
            throw SolverError("step size underflow (oscillation unresolvable at tol) at t=" + format_double(t), t);
        }

        for (size_t i = 0; i < N; ++i) work[i] = y[i] + h * a21 * k1[i];
        rhs(t + c2 * h, work.data(), k2.data());
        for (size_t i = 0; i < N; ++i) work[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        rhs(t + c3 * h, work.data(), k3.data());
        for (size_t i = 0; i < N; ++i) work[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs(t + c4 * h, work.data(), k4.data());
        for (size_t i = 0; i < N; ++i) work[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        rhs(t + c5 * h, work.data(), k5.data());
        for (size_t i = 0; i < N; ++i)
            work[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        rhs(t + h, work.data(), k6.data());
        for (size_t i = 0; i < N; ++i)
            ynew[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
        rhs(t + h, ynew.data(), k7.data());
        stats.rhs_evals += 6;

        double err = 0;
        for (size_t i = 0; i < N; ++i) {
            double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            double sc = tol + tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            double r = ei / sc;
            err += r * r;
        }
        err = std::sqrt(err / static_cast<double>(N));

        if (err <= 1.0) {
            double t_next = last ? t1 : t + h;
            // serve dense output inside the accepted interval
            if (sample_idx < samples.size() && samples[sample_idx] <= t_next) {
                std::array<double, N> r1{}, r2{}, r3{}, r4{}, r5{};
                for (size_t i = 0; i < N; ++i) {
                    double dy = ynew[i] - y[i];
                    double bspl = h * k1[i] - dy;
                    r1[i] = y[i];
                    r2[i] = dy;
                    r3[i] = bspl;
                    r4[i] = dy - h * k7[i] - bspl;
                    r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
                }
                while (sample_idx < samples.size() && samples[sample_idx] <= t_next) {
                    double ts = samples[sample_idx];
                    double theta = std::clamp((ts - t) / h, 0.0, 1.0), th1 = 1.0 - theta;
                    std::array<double, N> ys{};
                    for (size_t i = 0; i < N; ++i)
                        ys[i] = r1[i] + theta * (r2[i] + th1 * (r3[i] + theta * (r4[i] + th1 * r5[i])));
                    on_sample(sample_idx, ts, ys);
                    ++sample_idx;
                }
            }
            t = t_next;
            y = ynew;
            k1 = k7;  // FSAL
            ++stats.accepted;
            double fac = safety * std::pow(std::max(err, 1e-10), -0.2);
            h *= std::clamp(fac, facmin, facmax);
            facmax = facmax_normal;
        } else {
            ++stats.rejected;
            double fac = safety * std::pow(err, -0.2);
            h *= std::clamp(fac, facmin, 1.0);
            facmax = 1.0;
        }
    }
    return stats;
}

}  // namespace kgstark
