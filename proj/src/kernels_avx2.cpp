// AVX2+FMA kernel variants. This translation unit is compiled with
// -mavx2 -mfma and is only reached after a runtime cpuid check.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>
#include <complex>
#include <cstddef>

namespace epsim::kernels {

using cplx = std::complex<double>;

namespace detail {

namespace {

inline const double* dptr(const cplx* p) { return reinterpret_cast<const double*>(p); }
inline double* dptr(cplx* p) { return reinterpret_cast<double*>(p); }

// Complex multiply of two interleaved [re,im] pairs: u*v per lane pair.
inline __m256d cmul(__m256d u, __m256d v) {
    __m256d u_re = _mm256_movedup_pd(u);
    __m256d u_im = _mm256_permute_pd(u, 0xF);
    __m256d v_sw = _mm256_permute_pd(v, 0x5);
    return _mm256_fmaddsub_pd(v, u_re, _mm256_mul_pd(v_sw, u_im));
}

// conj(u)*v per lane pair.
inline __m256d cmul_conj(__m256d u, __m256d v) {
    __m256d u_re = _mm256_movedup_pd(u);
    __m256d u_im = _mm256_permute_pd(u, 0xF);
    __m256d v_sw = _mm256_permute_pd(v, 0x5);
    return _mm256_fmsubadd_pd(v, u_re, _mm256_mul_pd(v_sw, u_im));
}

inline cplx reduce_pairs(__m256d acc) {
    __m128d lo = _mm256_castpd256_pd128(acc);
    __m128d hi = _mm256_extractf128_pd(acc, 1);
    __m128d s = _mm_add_pd(lo, hi);
    alignas(16) double out[2];
    _mm_store_pd(out, s);
    return {out[0], out[1]};
}

}  // namespace

void axpy_avx2(std::size_t n, cplx a, const cplx* x, cplx* y) {
    const __m256d av = _mm256_setr_pd(a.real(), a.imag(), a.real(), a.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d xv = _mm256_loadu_pd(dptr(x + i));
        __m256d yv = _mm256_loadu_pd(dptr(y + i));
        _mm256_storeu_pd(dptr(y + i), _mm256_add_pd(yv, cmul(av, xv)));
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void xpay_avx2(std::size_t n, const cplx* x, cplx a, const cplx* k, cplx* y) {
    const __m256d av = _mm256_setr_pd(a.real(), a.imag(), a.real(), a.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d xv = _mm256_loadu_pd(dptr(x + i));
        __m256d kv = _mm256_loadu_pd(dptr(k + i));
        _mm256_storeu_pd(dptr(y + i), _mm256_add_pd(xv, cmul(av, kv)));
    }
    for (; i < n; ++i) y[i] = x[i] + a * k[i];
}

void matvec_avx2(std::size_t n, const cplx* a, const cplx* x, cplx* y) {
    for (std::size_t i = 0; i < n; ++i) {
        const cplx* row = a + i * n;
        __m256d acc = _mm256_setzero_pd();
        std::size_t j = 0;
        for (; j + 2 <= n; j += 2) {
            __m256d rv = _mm256_loadu_pd(dptr(row + j));
            __m256d xv = _mm256_loadu_pd(dptr(x + j));
            acc = _mm256_add_pd(acc, cmul(rv, xv));
        }
        cplx s = reduce_pairs(acc);
        for (; j < n; ++j) s += row[j] * x[j];
        y[i] = s;
    }
}

void rk4_combine_avx2(std::size_t n, const cplx* x, cplx a, const cplx* k1,
                      const cplx* k2, const cplx* k3, const cplx* k4, cplx* y) {
    const __m256d av = _mm256_setr_pd(a.real(), a.imag(), a.real(), a.imag());
    const __m256d two = _mm256_set1_pd(2.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d s = _mm256_loadu_pd(dptr(k1 + i));
        s = _mm256_fmadd_pd(two, _mm256_loadu_pd(dptr(k2 + i)), s);
        s = _mm256_fmadd_pd(two, _mm256_loadu_pd(dptr(k3 + i)), s);
        s = _mm256_add_pd(s, _mm256_loadu_pd(dptr(k4 + i)));
        __m256d xv = _mm256_loadu_pd(dptr(x + i));
        _mm256_storeu_pd(dptr(y + i), _mm256_add_pd(xv, cmul(av, s)));
    }
    for (; i < n; ++i)
        y[i] = x[i] + a * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

double norm2_avx2(std::size_t n, const cplx* x) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d xv = _mm256_loadu_pd(dptr(x + i));
        acc = _mm256_fmadd_pd(xv, xv, acc);
    }
    __m128d lo = _mm256_castpd256_pd128(acc);
    __m128d hi = _mm256_extractf128_pd(acc, 1);
    __m128d s2 = _mm_add_pd(lo, hi);
    alignas(16) double out[2];
    _mm_store_pd(out, s2);
    double s = out[0] + out[1];
    for (; i < n; ++i) s += std::norm(x[i]);
    return std::sqrt(s);
}

cplx dot_avx2(std::size_t n, const cplx* a, const cplx* b) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d av = _mm256_loadu_pd(dptr(a + i));
        __m256d bv = _mm256_loadu_pd(dptr(b + i));
        acc = _mm256_add_pd(acc, cmul_conj(av, bv));
    }
    cplx s = reduce_pairs(acc);
    for (; i < n; ++i) s += std::conj(a[i]) * b[i];
    return s;
}

}  // namespace detail
}  // namespace epsim::kernels

#endif  // x86-64
