#pragma once

#include <complex>
#include <cstddef>
#include <string>

namespace epsim::kernels {

using cplx = std::complex<double>;

// Data-parallel complex kernels used by the propagator and the dense solver
// inner loops. A scalar reference implementation always exists; on x86-64 an
// AVX2+FMA variant is selected at runtime when the CPU supports it, and on
// AArch64 a NEON variant is compiled in. All variants are equivalence-tested
// against the scalar reference.

// y += a*x
void axpy(std::size_t n, cplx a, const cplx* x, cplx* y);

// y = x + a*k  (x, k, y may not alias unless y == x)
void xpay(std::size_t n, const cplx* x, cplx a, const cplx* k, cplx* y);

// y = A*x for dense row-major n-by-n A
void matvec(std::size_t n, const cplx* a, const cplx* x, cplx* y);

// y = x + a*(k1 + 2*k2 + 2*k3 + k4)
void rk4_combine(std::size_t n, const cplx* x, cplx a, const cplx* k1,
                 const cplx* k2, const cplx* k3, const cplx* k4, cplx* y);

// Euclidean norm
double norm2(std::size_t n, const cplx* x);

// <a|b> = sum_i conj(a_i) * b_i
cplx dot(std::size_t n, const cplx* a, const cplx* b);

// Active backend name: "scalar", "avx2" or "neon".
std::string backend();

// Force a backend ("scalar", "avx2", "neon" or "auto"). Returns false and
// leaves the selection unchanged if the requested backend is unavailable.
bool select_backend(const std::string& name);

}  // namespace epsim::kernels
