// NEON kernel variants for AArch64. One float64x2_t holds one complex double.

#if defined(__aarch64__) || defined(__ARM_NEON)

#include <arm_neon.h>

#include <cmath>
#include <complex>
#include <cstddef>

namespace epsim::kernels {

using cplx = std::complex<double>;

namespace detail {

namespace {

inline const double* dptr(const cplx* p) { return reinterpret_cast<const double*>(p); }
inline double* dptr(cplx* p) { return reinterpret_cast<double*>(p); }

// u*v for one [re,im] pair.
inline float64x2_t cmul(float64x2_t u, float64x2_t v) {
    float64x2_t u_re = vdupq_laneq_f64(u, 0);
    float64x2_t u_im = vdupq_laneq_f64(u, 1);
    float64x2_t v_sw = vextq_f64(v, v, 1);
    // [ur*vr - ui*vi, ur*vi + ui*vr]
    float64x2_t t = vmulq_f64(u_im, v_sw);
    t = vsetq_lane_f64(-vgetq_lane_f64(t, 0), t, 0);
    return vfmaq_f64(t, u_re, v);
}

// conj(u)*v for one pair.
inline float64x2_t cmul_conj(float64x2_t u, float64x2_t v) {
    float64x2_t u_re = vdupq_laneq_f64(u, 0);
    float64x2_t u_im = vdupq_laneq_f64(u, 1);
    float64x2_t v_sw = vextq_f64(v, v, 1);
    // [ur*vr + ui*vi, ur*vi - ui*vr]
    float64x2_t t = vmulq_f64(u_im, v_sw);
    t = vsetq_lane_f64(-vgetq_lane_f64(t, 1), t, 1);
    return vfmaq_f64(t, u_re, v);
}

inline cplx to_cplx(float64x2_t v) {
    return {vgetq_lane_f64(v, 0), vgetq_lane_f64(v, 1)};
}

}  // namespace

void axpy_neon(std::size_t n, cplx a, const cplx* x, cplx* y) {
    const float64x2_t av = vld1q_f64(dptr(&a));
    for (std::size_t i = 0; i < n; ++i) {
        float64x2_t xv = vld1q_f64(dptr(x + i));
        float64x2_t yv = vld1q_f64(dptr(y + i));
        vst1q_f64(dptr(y + i), vaddq_f64(yv, cmul(av, xv)));
    }
}

void xpay_neon(std::size_t n, const cplx* x, cplx a, const cplx* k, cplx* y) {
    const float64x2_t av = vld1q_f64(dptr(&a));
    for (std::size_t i = 0; i < n; ++i) {
        float64x2_t xv = vld1q_f64(dptr(x + i));
        float64x2_t kv = vld1q_f64(dptr(k + i));
        vst1q_f64(dptr(y + i), vaddq_f64(xv, cmul(av, kv)));
    }
}

void matvec_neon(std::size_t n, const cplx* a, const cplx* x, cplx* y) {
    for (std::size_t i = 0; i < n; ++i) {
        const cplx* row = a + i * n;
        float64x2_t acc = vdupq_n_f64(0.0);
        for (std::size_t j = 0; j < n; ++j) {
            float64x2_t rv = vld1q_f64(dptr(row + j));
            float64x2_t xv = vld1q_f64(dptr(x + j));
            acc = vaddq_f64(acc, cmul(rv, xv));
        }
        y[i] = to_cplx(acc);
    }
}

void rk4_combine_neon(std::size_t n, const cplx* x, cplx a, const cplx* k1,
                      const cplx* k2, const cplx* k3, const cplx* k4, cplx* y) {
    const float64x2_t av = vld1q_f64(dptr(&a));
    const float64x2_t two = vdupq_n_f64(2.0);
    for (std::size_t i = 0; i < n; ++i) {
        float64x2_t s = vld1q_f64(dptr(k1 + i));
        s = vfmaq_f64(s, two, vld1q_f64(dptr(k2 + i)));
        s = vfmaq_f64(s, two, vld1q_f64(dptr(k3 + i)));
        s = vaddq_f64(s, vld1q_f64(dptr(k4 + i)));
        float64x2_t xv = vld1q_f64(dptr(x + i));
        vst1q_f64(dptr(y + i), vaddq_f64(xv, cmul(av, s)));
    }
}

double norm2_neon(std::size_t n, const cplx* x) {
    float64x2_t acc = vdupq_n_f64(0.0);
    for (std::size_t i = 0; i < n; ++i) {
        float64x2_t xv = vld1q_f64(dptr(x + i));
        acc = vfmaq_f64(acc, xv, xv);
    }
    return std::sqrt(vaddvq_f64(acc));
}

cplx dot_neon(std::size_t n, const cplx* a, const cplx* b) {
    float64x2_t acc = vdupq_n_f64(0.0);
    for (std::size_t i = 0; i < n; ++i) {
        float64x2_t av = vld1q_f64(dptr(a + i));
        float64x2_t bv = vld1q_f64(dptr(b + i));
        acc = vaddq_f64(acc, cmul_conj(av, bv));
    }
    return to_cplx(acc);
}

}  // namespace detail
}  // namespace epsim::kernels

#endif  // AArch64 / NEON
