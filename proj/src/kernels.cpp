#include "epsim/kernels.hpp"

#include <atomic>
#include <cmath>

namespace epsim::kernels {

namespace detail {

void axpy_scalar(std::size_t n, cplx a, const cplx* x, cplx* y) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void xpay_scalar(std::size_t n, const cplx* x, cplx a, const cplx* k, cplx* y) {
    for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + a * k[i];
}

void matvec_scalar(std::size_t n, const cplx* a, const cplx* x, cplx* y) {
    for (std::size_t i = 0; i < n; ++i) {
        cplx acc(0.0, 0.0);
        const cplx* row = a + i * n;
        for (std::size_t j = 0; j < n; ++j) acc += row[j] * x[j];
        y[i] = acc;
    }
}

void rk4_combine_scalar(std::size_t n, const cplx* x, cplx a, const cplx* k1,
                        const cplx* k2, const cplx* k3, const cplx* k4, cplx* y) {
    for (std::size_t i = 0; i < n; ++i)
        y[i] = x[i] + a * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

double norm2_scalar(std::size_t n, const cplx* x) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::norm(x[i]);
    return std::sqrt(s);
}

cplx dot_scalar(std::size_t n, const cplx* a, const cplx* b) {
    cplx s(0.0, 0.0);
    for (std::size_t i = 0; i < n; ++i) s += std::conj(a[i]) * b[i];
    return s;
}

#if defined(__x86_64__) || defined(_M_X64)
#define EPSIM_HAVE_AVX2_TU 1
void axpy_avx2(std::size_t, cplx, const cplx*, cplx*);
void xpay_avx2(std::size_t, const cplx*, cplx, const cplx*, cplx*);
void matvec_avx2(std::size_t, const cplx*, const cplx*, cplx*);
void rk4_combine_avx2(std::size_t, const cplx*, cplx, const cplx*, const cplx*,
                      const cplx*, const cplx*, cplx*);
double norm2_avx2(std::size_t, const cplx*);
cplx dot_avx2(std::size_t, const cplx*, const cplx*);
#endif

#if defined(__aarch64__) || defined(__ARM_NEON)
#define EPSIM_HAVE_NEON_TU 1
void axpy_neon(std::size_t, cplx, const cplx*, cplx*);
void xpay_neon(std::size_t, const cplx*, cplx, const cplx*, cplx*);
void matvec_neon(std::size_t, const cplx*, const cplx*, cplx*);
void rk4_combine_neon(std::size_t, const cplx*, cplx, const cplx*, const cplx*,
                      const cplx*, const cplx*, cplx*);
double norm2_neon(std::size_t, const cplx*);
cplx dot_neon(std::size_t, const cplx*, const cplx*);
#endif

struct Dispatch {
    void (*axpy)(std::size_t, cplx, const cplx*, cplx*) = axpy_scalar;
    void (*xpay)(std::size_t, const cplx*, cplx, const cplx*, cplx*) = xpay_scalar;
    void (*matvec)(std::size_t, const cplx*, const cplx*, cplx*) = matvec_scalar;
    void (*rk4_combine)(std::size_t, const cplx*, cplx, const cplx*, const cplx*,
                        const cplx*, const cplx*, cplx*) = rk4_combine_scalar;
    double (*norm2)(std::size_t, const cplx*) = norm2_scalar;
    cplx (*dot)(std::size_t, const cplx*, const cplx*) = dot_scalar;
    std::string name = "scalar";
};

bool avx2_available() {
#if defined(EPSIM_HAVE_AVX2_TU)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

bool neon_available() {
#if defined(EPSIM_HAVE_NEON_TU)
    return true;
#else
    return false;
#endif
}

Dispatch make_dispatch(const std::string& name) {
    Dispatch d;
#if defined(EPSIM_HAVE_AVX2_TU)
    if (name == "avx2") {
        d.axpy = axpy_avx2;
        d.xpay = xpay_avx2;
        d.matvec = matvec_avx2;
        d.rk4_combine = rk4_combine_avx2;
        d.norm2 = norm2_avx2;
        d.dot = dot_avx2;
        d.name = "avx2";
    }
#endif
#if defined(EPSIM_HAVE_NEON_TU)
    if (name == "neon") {
        d.axpy = axpy_neon;
        d.xpay = xpay_neon;
        d.matvec = matvec_neon;
        d.rk4_combine = rk4_combine_neon;
        d.norm2 = norm2_neon;
        d.dot = dot_neon;
        d.name = "neon";
    }
#endif
    return d;
}

Dispatch& dispatch() {
    static Dispatch d = [] {
        if (avx2_available()) return make_dispatch("avx2");
        if (neon_available()) return make_dispatch("neon");
        return make_dispatch("scalar");
    }();
    return d;
}

}  // namespace detail

void axpy(std::size_t n, cplx a, const cplx* x, cplx* y) {
    detail::dispatch().axpy(n, a, x, y);
}

void xpay(std::size_t n, const cplx* x, cplx a, const cplx* k, cplx* y) {
    detail::dispatch().xpay(n, x, a, k, y);
}

void matvec(std::size_t n, const cplx* a, const cplx* x, cplx* y) {
    detail::dispatch().matvec(n, a, x, y);
}

void rk4_combine(std::size_t n, const cplx* x, cplx a, const cplx* k1,
                 const cplx* k2, const cplx* k3, const cplx* k4, cplx* y) {
    detail::dispatch().rk4_combine(n, x, a, k1, k2, k3, k4, y);
}

double norm2(std::size_t n, const cplx* x) { return detail::dispatch().norm2(n, x); }

cplx dot(std::size_t n, const cplx* a, const cplx* b) {
    return detail::dispatch().dot(n, a, b);
}

std::string backend() { return detail::dispatch().name; }

bool select_backend(const std::string& name) {
    if (name == "scalar") {
        detail::dispatch() = detail::make_dispatch("scalar");
        return true;
    }
    if (name == "avx2") {
        if (!detail::avx2_available()) return false;
        detail::dispatch() = detail::make_dispatch("avx2");
        return true;
    }
    if (name == "neon") {
        if (!detail::neon_available()) return false;
        detail::dispatch() = detail::make_dispatch("neon");
        return true;
    }
    if (name == "auto") {
        if (detail::avx2_available())
            detail::dispatch() = detail::make_dispatch("avx2");
        else if (detail::neon_available())
            detail::dispatch() = detail::make_dispatch("neon");
        else
            detail::dispatch() = detail::make_dispatch("scalar");
        return true;
    }
    return false;
}

}  // namespace epsim::kernels
