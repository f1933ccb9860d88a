// Exact inverse of constant-coefficient cell-centered operators
//     J0 = a0 I + a1 (-lap_h) + a2 (-lap_h)^2
// by diagonalizing the 5-point Laplacian in the transform basis matching the
// ghost closure: DCT-II (REDFT10) for the Neumann mirror, a separable Hartley
// transform for the periodic wrap.  Used as a preconditioner for the Newton
// systems of the phase equation; the Krylov solver still certifies the true
// residual, so this is purely an acceleration.

#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include <fftw3.h>

#include "chns/field.hpp"
#include "chns/solvers.hpp"

namespace chns {

namespace detail {

struct FftwBuffer {
    explicit FftwBuffer(size_t m) : p(static_cast<double*>(fftw_malloc(sizeof(double) * m))) {}
    ~FftwBuffer() { fftw_free(p); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;
    double* p;
};

struct FftwPlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
    ~FftwPlanPair() {
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
    }
};

inline std::mutex& fftw_plan_mutex() {
    static std::mutex m;
    return m;
}

// Plans are cached per (n, mode); fftw plan creation is not thread-safe, the
// new-array execute below is.
inline std::shared_ptr<FftwPlanPair> plans_for(int n, BcMode mode) {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex());
    static std::map<std::pair<int, int>, std::shared_ptr<FftwPlanPair>> cache;
    auto key = std::make_pair(n, (int)mode);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    auto pp = std::make_shared<FftwPlanPair>();
    FftwBuffer tmp((size_t)n * n);
    if (mode == BcMode::PhysicalNeumannFreeSlip) {
        pp->fwd = fftw_plan_r2r_2d(n, n, tmp.p, tmp.p, FFTW_REDFT10, FFTW_REDFT10, FFTW_ESTIMATE);
        pp->bwd = fftw_plan_r2r_2d(n, n, tmp.p, tmp.p, FFTW_REDFT01, FFTW_REDFT01, FFTW_ESTIMATE);
    } else {
        pp->fwd = fftw_plan_r2r_2d(n, n, tmp.p, tmp.p, FFTW_DHT, FFTW_DHT, FFTW_ESTIMATE);
        pp->bwd = fftw_plan_r2r_2d(n, n, tmp.p, tmp.p, FFTW_DHT, FFTW_DHT, FFTW_ESTIMATE);
    }
    cache[key] = pp;
    return pp;
}

} // namespace detail

class CellSpectralInverse {
public:
    CellSpectralInverse(int n, BcMode mode, double a0, double a1, double a2)
        : n_(n), plans_(detail::plans_for(n, mode)), buf_((size_t)n * n) {
        const double h = 1.0 / n;
        const double c = 4.0 / (h * h);
        std::vector<double> lam1d(n);
        for (int k = 0; k < n; ++k) {
            constexpr double pi = 3.14159265358979323846;
            const double s = (mode == BcMode::PhysicalNeumannFreeSlip)
                                 ? std::sin(0.5 * pi * k / n)
                                 : std::sin(pi * k / n);
            lam1d[k] = c * s * s;
        }
        const double norm = (mode == BcMode::PhysicalNeumannFreeSlip)
                                ? 1.0 / (4.0 * (double)n * n)
                                : 1.0 / ((double)n * n);
        inv_symbol_.resize((size_t)n * n);
        for (int kj = 0; kj < n; ++kj)
            for (int ki = 0; ki < n; ++ki) {
                const double lam = lam1d[ki] + lam1d[kj];
                const double sigma = a0 + a1 * lam + a2 * lam * lam;
                inv_symbol_[(size_t)ki + (size_t)n * kj] = norm / sigma;
            }
    }

    void apply(const Vec& in, Vec& out) const {
        const size_t m = (size_t)n_ * n_;
        for (size_t i = 0; i < m; ++i) buf_.p[i] = in[i];
        fftw_execute_r2r(plans_->fwd, buf_.p, buf_.p);
        for (size_t i = 0; i < m; ++i) buf_.p[i] *= inv_symbol_[i];
        fftw_execute_r2r(plans_->bwd, buf_.p, buf_.p);
        out.resize(m);
        for (size_t i = 0; i < m; ++i) out[i] = buf_.p[i];
    }

    PrecondFn as_preconditioner() const {
        return [this](const Vec& x, Vec& y) { this->apply(x, y); };
    }

private:
    int n_;
    std::shared_ptr<detail::FftwPlanPair> plans_;
    mutable detail::FftwBuffer buf_;
    std::vector<double> inv_symbol_;
};

} // namespace chns
