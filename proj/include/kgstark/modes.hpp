#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kgstark/fields.hpp"
#include "kgstark/ode.hpp"
#include "kgstark/util.hpp"

namespace kgstark {

// Shifted relativistic dispersion: L(t,xi) = c^2 |xi + b(t)|^2 + (mc^2)^2.
class Dispersion {
public:
    Dispersion(PhysicalParams params, FieldModel model) : params_(params), model_(std::move(model)) {
        params_.validate();
    }

    const PhysicalParams& params() const { return params_; }
    const FieldModel& field() const { return model_; }

    double L(double t, const Vec& xi) const {
        Vec w = model_.eval_b(t, params_.q);
        w.n = xi.n;
        w += xi;
        double mc2 = params_.mc2();
        return params_.c * params_.c * w.norm2() + mc2 * mc2;
    }
    double Q(double t, const Vec& xi) const { return std::sqrt(L(t, xi)); }

    // (L, Q, Q'/Q); the logarithmic derivative obeys |Q'/Q| <= c|b'|/(mc^2).
    struct Eval {
        double L;
        double Q;
        double Qlog;
    };
    Eval eval(double t, const Vec& xi) const {
        Vec b = model_.eval_b(t, params_.q);
        Vec bp = model_.eval_b_prime(t, params_.q);
        b.n = xi.n;
        bp.n = xi.n;
        Vec w = xi;
        w += b;
        double c2 = params_.c * params_.c;
        double mc2 = params_.mc2();
        double l = c2 * w.norm2() + mc2 * mc2;
        return {l, std::sqrt(l), c2 * dot(w, bp) / l};
    }

private:
    PhysicalParams params_;
    FieldModel model_;
};

enum class Route { direct, amplitude_phase };

std::string to_string(Route r);

// Per-mode solution samples. zeta0/zeta1 solve z'' + L(t,xi) z = 0 with
// initial data (1,0) and (0,1); the amplitude-phase quantities A,B,C,D
// satisfy zeta0 = A cos B, zeta0' = -A Q sin B, zeta1 = C sin D,
// zeta1' = C Q cos D. Phases are stored unwrapped.
struct ModeTrajectory {
    Vec xi;
    std::vector<double> times;
    std::vector<double> zeta0, zeta0p, zeta1, zeta1p;
    std::vector<double> A, B, C, D;
    std::vector<double> G0, G1;  // Q-rescaled envelopes
    std::vector<double> Q;
    Route method = Route::direct;
    StepStats stats;

    size_t size() const { return times.size(); }
    // index of the sample at time t (relative tolerance 1e-9); RangeError if absent
    size_t index_of(double t) const;
};

struct SolveOptions {
    double tol = 1e-10;
    Route route = Route::amplitude_phase;
};

// Adaptive Runge-Kutta on the first-order system for (zeta0, zeta0',
// zeta1, zeta1'); amplitude/phase columns are back-filled from the samples.
ModeTrajectory integrate_direct(const Dispersion& disp, const Vec& xi, double t_end, double tol,
                                const std::vector<double>& sample_times);

// Integrates (log A, B, log C, D); positivity of the amplitudes is
// structural and zeta columns are reconstructed from the representation.
ModeTrajectory integrate_amplitude_phase(const Dispersion& disp, const Vec& xi, double t_end, double tol,
                                         const std::vector<double>& sample_times);

ModeTrajectory solve_mode(const Dispersion& disp, const Vec& xi, double t_end, const SolveOptions& opts,
                          const std::vector<double>& sample_times);

// max over samples of |zeta0 zeta1' - zeta0' zeta1 - 1|
double wronskian_deviation(const ModeTrajectory& traj);

struct EnvelopeExtrema {
    double g0_sup, g0_inf;
    double g1_sup, g1_inf;
};

// Extrema of the Q-rescaled envelopes over the trajectory; asserts positivity.
EnvelopeExtrema envelope_check(const ModeTrajectory& traj);

// CSV export (columns t, zeta0, zeta0p, zeta1, zeta1p, A, B, C, D, G0, G1, Q).
std::string trajectory_csv(const ModeTrajectory& traj);

std::vector<double> linspace(double a, double b, int count);
std::vector<double> logspace(double a, double b, int count);

}  // namespace kgstark
