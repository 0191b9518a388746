#pragma once

#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace kgstark {

// Spatial/frequency vector, dimension 1 or 2.
struct Vec {
    std::array<double, 2> c{0.0, 0.0};
    int n = 1;

    Vec() = default;
    Vec(double x) : c{x, 0.0}, n(1) {}
    Vec(double x, double y) : c{x, y}, n(2) {}

    double& operator[](int i) { return c[static_cast<size_t>(i)]; }
    double operator[](int i) const { return c[static_cast<size_t>(i)]; }

    double norm2() const {
        double s = 0;
        for (int i = 0; i < n; ++i) s += c[static_cast<size_t>(i)] * c[static_cast<size_t>(i)];
        return s;
    }
    double norm() const { return std::sqrt(norm2()); }
    double abs_sum() const {
        double s = 0;
        for (int i = 0; i < n; ++i) s += std::abs(c[static_cast<size_t>(i)]);
        return s;
    }

    Vec& operator+=(const Vec& o) {
        for (int i = 0; i < n; ++i) c[static_cast<size_t>(i)] += o.c[static_cast<size_t>(i)];
        return *this;
    }
    friend Vec operator+(Vec a, const Vec& b) { return a += b; }
    friend Vec operator*(double s, Vec a) {
        for (int i = 0; i < a.n; ++i) a.c[static_cast<size_t>(i)] *= s;
        return a;
    }
    friend double dot(const Vec& a, const Vec& b) {
        double s = 0;
        for (int i = 0; i < a.n; ++i) s += a.c[static_cast<size_t>(i)] * b.c[static_cast<size_t>(i)];
        return s;
    }
    static Vec zero(int dim) {
        Vec v;
        v.n = dim;
        return v;
    }
};

// Error taxonomy shared across modules.
struct RangeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SolverError : std::runtime_error {
    double t_reached;
    SolverError(const std::string& msg, double t) : std::runtime_error(msg), t_reached(t) {}
};
struct AliasingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Run fn(i) for i in [0, count) on up to `workers` threads. Results must be
// written to per-index slots; reductions happen afterwards in index order so
// output is independent of scheduling.
inline void parallel_for(size_t count, int workers, const std::function<void(size_t)>& fn) {
    if (workers <= 1 || count <= 1) {
        for (size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    unsigned hw = std::thread::hardware_concurrency();
    size_t nthreads = std::min<size_t>(static_cast<size_t>(workers), std::min(count, static_cast<size_t>(hw ? hw : 1)));
    if (nthreads <= 1) {
        for (size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    std::atomic<bool> failed{false};
    std::string first_error;
    std::mutex err_mutex;
    for (size_t w = 0; w < nthreads; ++w) {
        pool.emplace_back([&]() {
            for (;;) {
                size_t i = next.fetch_add(1);
                if (i >= count) break;
                try {
                    fn(i);
                } catch (const std::exception& e) {
                    std::lock_guard<std::mutex> lk(err_mutex);
                    if (!failed.exchange(true)) first_error = e.what();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failed) throw NumericError("parallel task failed: " + first_error);
}

// Deterministic uniform doubles in [0,1) from a 64-bit state; avoids the
// implementation-defined std distributions so seeds replay identically.
class SplitMix64 {
public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}
    uint64_t next_u64() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

private:
    uint64_t state_;
};

// Shortest round-trip formatting for doubles; CSV and JSON artifacts use this
// so identical runs are byte-identical.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
}

// FNV-1a; used to digest canonical config text into run-directory names.
inline uint64_t fnv1a64(const std::string& s) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::string hex64(uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return std::string(buf);
}

}  // namespace kgstark
