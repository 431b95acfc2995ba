#pragma once

// Test-only oracles, independent of the library's eigensolver path:
// characteristic polynomial via Faddeev-LeVerrier and roots via the
// Durand-Kerner (Weierstrass) simultaneous iteration.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "epsim/complex_matrix.hpp"

namespace oracles {

using epsim::ComplexMatrix;
using epsim::cplx;

// Monic characteristic polynomial coefficients c, p(z) = z^n + c[0] z^{n-1} + ... + c[n-1].
inline std::vector<cplx> char_poly(const ComplexMatrix& a) {
    const int n = a.dim();
    std::vector<cplx> c(n);
    ComplexMatrix m = a;
    c[0] = -m.trace();
    for (int k = 2; k <= n; ++k) {
        ComplexMatrix shifted = m;
        for (int i = 0; i < n; ++i) shifted.at(i, i) += c[k - 2];
        m = a * shifted;
        c[k - 1] = -m.trace() / static_cast<double>(k);
    }
    return c;
}

inline cplx horner(const std::vector<cplx>& c, cplx z) {
    cplx v(1.0, 0.0);
    for (const cplx& ck : c) v = v * z + ck;
    return v;
}

inline std::vector<cplx> durand_kerner(const std::vector<cplx>& c, int max_iter = 2000) {
    const int n = static_cast<int>(c.size());
    double radius = 1.0;
    for (int k = 0; k < n; ++k)
        radius = std::max(radius, 2.0 * std::pow(std::abs(c[k]), 1.0 / (k + 1)));
    std::vector<cplx> z(n);
    for (int k = 0; k < n; ++k) {
        const double ang = 2.0 * M_PI * k / n + 0.4;
        z[k] = radius * cplx(std::cos(ang), std::sin(ang));
    }
    for (int it = 0; it < max_iter; ++it) {
        double moved = 0.0;
        for (int k = 0; k < n; ++k) {
            cplx denom(1.0, 0.0);
            for (int j = 0; j < n; ++j)
                if (j != k) denom *= (z[k] - z[j]);
            const cplx step = horner(c, z[k]) / denom;
            z[k] -= step;
            moved = std::max(moved, std::abs(step));
        }
        if (moved < 1e-14 * std::max(1.0, radius)) break;
    }
    return z;
}

inline std::vector<cplx> eigenvalues(const ComplexMatrix& a) {
    return durand_kerner(char_poly(a));
}

// Max distance under optimal greedy matching of two equally sized value sets.
inline double match_distance(std::vector<cplx> a, std::vector<cplx> b) {
    double worst = 0.0;
    for (const cplx& va : a) {
        double best = 1e300;
        std::size_t bj = 0;
        for (std::size_t j = 0; j < b.size(); ++j) {
            const double d = std::abs(va - b[j]);
            if (d < best) {
                best = d;
                bj = j;
            }
        }
        worst = std::max(worst, best);
        b.erase(b.begin() + bj);
    }
    return worst;
}

inline epsim::ComplexMatrix random_matrix(int n, unsigned seed, double scale = 1.0) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    epsim::ComplexMatrix m(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m.at(i, j) = scale * cplx(u(rng), u(rng));
    return m;
}

}  // namespace oracles
