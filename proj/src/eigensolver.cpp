#include "epsim/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "epsim/errors.hpp"
#include "epsim/kernels.hpp"

namespace epsim {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Hessenberg reduction by Householder reflections (transforms not accumulated;
// eigenvectors come from inverse iteration on the original matrix).
void hessenberg(ComplexMatrix& a) {
    const int n = a.dim();
    for (int k = 0; k + 2 < n; ++k) {
        double xnorm = 0.0;
        for (int i = k + 1; i < n; ++i) xnorm += std::norm(a.at(i, k));
        xnorm = std::sqrt(xnorm);
        if (xnorm == 0.0) continue;
        const cplx x0 = a.at(k + 1, k);
        const cplx beta = (x0 == cplx(0.0, 0.0)) ? cplx(-xnorm, 0.0) : -(x0 / std::abs(x0)) * xnorm;
        cvector v(n, cplx(0.0, 0.0));
        for (int i = k + 1; i < n; ++i) v[i] = a.at(i, k);
        v[k + 1] -= beta;
        double vnorm = 0.0;
        for (int i = k + 1; i < n; ++i) vnorm += std::norm(v[i]);
        vnorm = std::sqrt(vnorm);
        if (vnorm == 0.0) continue;
        for (int i = k + 1; i < n; ++i) v[i] /= vnorm;
        // A <- (I - 2vv^H) A
        for (int j = k; j < n; ++j) {
            cplx s(0.0, 0.0);
            for (int i = k + 1; i < n; ++i) s += std::conj(v[i]) * a.at(i, j);
            s *= 2.0;
            for (int i = k + 1; i < n; ++i) a.at(i, j) -= s * v[i];
        }
        // A <- A (I - 2vv^H)
        for (int i = 0; i < n; ++i) {
            cplx s(0.0, 0.0);
            for (int j = k + 1; j < n; ++j) s += a.at(i, j) * v[j];
            s *= 2.0;
            for (int j = k + 1; j < n; ++j) a.at(i, j) -= s * std::conj(v[j]);
        }
        a.at(k + 1, k) = beta;
        for (int i = k + 2; i < n; ++i) a.at(i, k) = 0.0;
    }
}

struct Givens {
    double c;
    cplx s;
};

Givens make_givens(cplx f, cplx g) {
    if (g == cplx(0.0, 0.0)) return {1.0, cplx(0.0, 0.0)};
    if (f == cplx(0.0, 0.0)) return {0.0, std::conj(g) / std::abs(g)};
    const double fa = std::abs(f), ga = std::abs(g);
    const double r = std::hypot(fa, ga);
    return {fa / r, (f / fa) * std::conj(g) / r};
}

// Eigenvalues of upper Hessenberg by explicit single-shift QR with Wilkinson
// shifts; iteration cap per deflated eigenvalue.
std::vector<cplx> qr_eigenvalues(ComplexMatrix h, int max_iterations) {
    const int n = h.dim();
    std::vector<cplx> values(n);
    const double hnorm = h.frobenius_norm();
    auto negligible = [&](int m) {
        double tol = kEps * (std::abs(h.at(m - 1, m - 1)) + std::abs(h.at(m, m)));
        if (tol == 0.0) tol = kEps * hnorm;
        return std::abs(h.at(m, m - 1)) <= tol;
    };
    int hi = n - 1;
    int iters = 0;
    while (hi >= 0) {
        if (hi == 0) {
            values[0] = h.at(0, 0);
            break;
        }
        if (negligible(hi)) {
            h.at(hi, hi - 1) = 0.0;
            values[hi] = h.at(hi, hi);
            --hi;
            iters = 0;
            continue;
        }
        int lo = hi;
        while (lo > 0 && !negligible(lo)) --lo;
        if (lo > 0) h.at(lo, lo - 1) = 0.0;

        if (++iters > max_iterations)
            throw NoConvergenceError("qr_eigenvalues: iteration cap reached");

        // Wilkinson shift from the trailing 2x2 of the active window.
        const cplx a = h.at(hi - 1, hi - 1), b = h.at(hi - 1, hi);
        const cplx c = h.at(hi, hi - 1), d = h.at(hi, hi);
        cplx sigma;
        if (iters % 15 == 0) {
            sigma = d + 0.75 * std::abs(h.at(hi, hi - 1));
        } else {
            const cplx tr = a + d;
            const cplx disc = std::sqrt(tr * tr - 4.0 * (a * d - b * c));
            const cplx mu1 = 0.5 * (tr + disc), mu2 = 0.5 * (tr - disc);
            sigma = (std::abs(mu1 - d) < std::abs(mu2 - d)) ? mu1 : mu2;
        }

        for (int i = lo; i <= hi; ++i) h.at(i, i) -= sigma;
        std::vector<Givens> rots(hi - lo);
        for (int i = lo; i < hi; ++i) {
            Givens g = make_givens(h.at(i, i), h.at(i + 1, i));
            rots[i - lo] = g;
            for (int j = i; j <= hi; ++j) {
                const cplx t1 = h.at(i, j), t2 = h.at(i + 1, j);
                h.at(i, j) = g.c * t1 + g.s * t2;
                h.at(i + 1, j) = -std::conj(g.s) * t1 + g.c * t2;
            }
        }
        for (int i = lo; i < hi; ++i) {
            const Givens& g = rots[i - lo];
            const int rmax = std::min(i + 2, hi);
            for (int r = lo; r <= rmax; ++r) {
                const cplx t1 = h.at(r, i), t2 = h.at(r, i + 1);
                h.at(r, i) = g.c * t1 + std::conj(g.s) * t2;
                h.at(r, i + 1) = -g.s * t1 + g.c * t2;
            }
        }
        for (int i = lo; i <= hi; ++i) h.at(i, i) += sigma;
    }
    return values;
}

// One eigenvector by inverse iteration; `avoid` spans previously found
// vectors of the same cluster, projected out to reach new directions.
cvector inverse_iterate(const ComplexMatrix& m, cplx sigma, double scale,
                        const std::vector<cvector>& avoid, unsigned seed) {
    const int n = m.dim();
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    cvector v(n);
    for (auto& x : v) x = cplx(u(rng), u(rng));
    auto deflate = [&](cvector& w) {
        for (const auto& p : avoid) {
            const cplx ov = vec_dot(p, w);
            for (int i = 0; i < n; ++i) w[i] -= ov * p[i];
        }
    };
    deflate(v);
    vec_normalize(v);

    double jitter = 0.0;
    for (int attempt = 0; attempt < 4; ++attempt) {
        ComplexMatrix shifted = m;
        const cplx sj = sigma + cplx(jitter, 0.0);
        for (int i = 0; i < n; ++i) shifted.at(i, i) -= sj;
        LuFactor lu(shifted);
        if (lu.singular() || lu.min_pivot() < 1e-300) {
            jitter = (jitter == 0.0) ? 1e-13 * std::max(1.0, scale) : 10.0 * jitter;
            continue;
        }
        cvector w = v;
        for (int it = 0; it < 5; ++it) {
            w = lu.solve(w);
            deflate(w);
            const double nw = vec_norm(w);
            if (nw == 0.0 || !std::isfinite(nw)) break;
            for (auto& x : w) x /= nw;
            // Residual check against the unshifted matrix.
            cvector hv = m.apply(w);
            kernels::axpy(hv.size(), -sigma, w.data(), hv.data());
            if (vec_norm(hv) < 1e-11 * std::max(1.0, scale) && it >= 1) return w;
        }
        const double nw = vec_norm(w);
        if (nw > 0.0 && std::isfinite(nw)) {
            for (auto& x : w) x /= nw;
            return w;
        }
        jitter = (jitter == 0.0) ? 1e-13 * std::max(1.0, scale) : 10.0 * jitter;
    }
    // Fall back to the deflated start direction.
    vec_normalize(v);
    return v;
}

// Greedy assignment of cluster vectors onto reference positions by overlap.
std::vector<int> greedy_assign(const std::vector<cvector>& refs,
                               const std::vector<const cvector*>& vecs) {
    const int m = static_cast<int>(vecs.size());
    std::vector<int> pos_of_vec(m, -1);
    std::vector<bool> pos_used(m, false), vec_used(m, false);
    for (int round = 0; round < m; ++round) {
        double best = -1.0;
        int bp = -1, bv = -1;
        for (int p = 0; p < m; ++p) {
            if (pos_used[p]) continue;
            for (int v = 0; v < m; ++v) {
                if (vec_used[v]) continue;
                const double ov = std::abs(vec_dot(refs[p], *vecs[v]));
                if (ov > best) {
                    best = ov;
                    bp = p;
                    bv = v;
                }
            }
        }
        pos_used[bp] = true;
        vec_used[bv] = true;
        pos_of_vec[bv] = bp;
    }
    std::vector<int> vec_at_pos(m);
    for (int v = 0; v < m; ++v) vec_at_pos[pos_of_vec[v]] = v;
    return vec_at_pos;
}

}  // namespace

double EigenSystem::max_abs_imag() const {
    double m = 0.0;
    for (double v : eigenvalues_imag) m = std::max(m, std::abs(v));
    return m;
}

double EigenSystem::spectral_radius() const {
    double m = 0.0;
    for (int k = 0; k < dim; ++k) m = std::max(m, std::abs(value(k)));
    return m;
}

std::vector<cplx> eigenvalues_only(const ComplexMatrix& h, int max_iterations) {
    ComplexMatrix work = h;
    hessenberg(work);
    return qr_eigenvalues(std::move(work), max_iterations);
}

EigenSystem eigensystem_sorted(const ComplexMatrix& h, const EigenSystem* continuity_hint,
                               const EigenOptions& opts) {
    const int n = h.dim();
    if (n < 1 || n > 64) throw ConfigError("eigensystem_sorted: dim must be in [1, 64]");

    std::vector<cplx> raw = eigenvalues_only(h, opts.max_iterations);

    double radius = 0.0;
    for (const auto& v : raw) radius = std::max(radius, std::abs(v));

    EigenSystem out;
    out.dim = n;
    out.eigenvalues.resize(n);
    out.eigenvalues_imag.resize(n);

    for (auto& v : raw)
        if (std::abs(v.imag()) < opts.reality_tol * radius) v = cplx(v.real(), 0.0);
    std::sort(raw.begin(), raw.end(), [](const cplx& a, const cplx& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    for (int k = 0; k < n; ++k) {
        out.eigenvalues[k] = raw[k].real();
        out.eigenvalues_imag[k] = raw[k].imag();
        if (raw[k].imag() != 0.0) out.complex_spectrum = true;
    }
    if (!opts.compute_vectors) return out;

    out.right_vectors.assign(n, cvector());
    out.left_vectors.assign(n, cvector());

    if (radius == 0.0) {
        // Zero matrix: any orthonormal basis serves; use coordinates.
        for (int k = 0; k < n; ++k) {
            cvector e(n, cplx(0.0, 0.0));
            e[k] = 1.0;
            out.right_vectors[k] = e;
            out.left_vectors[k] = e;
        }
        return out;
    }

    const ComplexMatrix hadj = h.adjoint();
    const double cluster_tol = opts.degeneracy_tol * std::max(1.0, radius);

    int k = 0;
    int cluster_index = 0;
    while (k < n) {
        int m = k;
        while (m + 1 < n && std::abs(raw[m + 1] - raw[k]) <= cluster_tol) ++m;
        const int csize = m - k + 1;

        std::vector<cvector> rights, lefts;
        for (int j = 0; j < csize; ++j) {
            const unsigned seed = 12345u + 977u * cluster_index + 13u * j;
            rights.push_back(inverse_iterate(h, raw[k + j], radius, rights, seed));
            lefts.push_back(
                inverse_iterate(hadj, std::conj(raw[k + j]), radius, lefts, seed + 7u));
        }

        if (csize > 1) {
            // Reference vectors at the cluster positions: continuity hint,
            // the label basis, or coordinates.
            std::vector<cvector> refs;
            if (continuity_hint && continuity_hint->dim == n) {
                for (int j = 0; j < csize; ++j)
                    refs.push_back(continuity_hint->right_vectors[k + j]);
            } else if (opts.label_basis && static_cast<int>(opts.label_basis->size()) == n) {
                for (int j = 0; j < csize; ++j) refs.push_back((*opts.label_basis)[k + j]);
            } else {
                for (int j = 0; j < csize; ++j) {
                    cvector e(n, cplx(0.0, 0.0));
                    e[k + j] = 1.0;
                    refs.push_back(e);
                }
            }

            double spread = 0.0;
            for (int j = 0; j < csize; ++j) spread = std::max(spread, std::abs(raw[k + j] - raw[k]));
            if (spread <= 1e-10 * std::max(1.0, radius)) {
                // Genuinely degenerate: any basis of the eigenspace is valid.
                // Build an orthonormal subspace basis, then align it to the
                // reference vectors so the labeling is deterministic and the
                // block is orthonormalized.
                std::vector<cvector> q = rights;
                for (int j = 0; j < csize; ++j) {
                    for (int p = 0; p < j; ++p) {
                        const cplx ov = vec_dot(q[p], q[j]);
                        for (int i = 0; i < n; ++i) q[j][i] -= ov * q[p][i];
                    }
                    vec_normalize(q[j]);
                }
                std::vector<cvector> aligned;
                for (int j = 0; j < csize; ++j) {
                    cvector v(n, cplx(0.0, 0.0));
                    for (int p = 0; p < csize; ++p) {
                        const cplx ov = vec_dot(q[p], refs[j]);
                        for (int i = 0; i < n; ++i) v[i] += ov * q[p][i];
                    }
                    for (const auto& prev : aligned) {
                        const cplx ov = vec_dot(prev, v);
                        for (int i = 0; i < n; ++i) v[i] -= ov * prev[i];
                    }
                    if (vec_norm(v) < 1e-6) v = q[j];  // reference missed the subspace
                    for (const auto& prev : aligned) {
                        const cplx ov = vec_dot(prev, v);
                        for (int i = 0; i < n; ++i) v[i] -= ov * prev[i];
                    }
                    vec_normalize(v);
                    aligned.push_back(std::move(v));
                }
                rights = std::move(aligned);
                // Biorthogonal left block: L' = L (G^H)^{-1} with G = L^H R.
                ComplexMatrix g(csize);
                for (int r = 0; r < csize; ++r)
                    for (int cidx = 0; cidx < csize; ++cidx)
                        g.at(r, cidx) = vec_dot(lefts[r], rights[cidx]);
                LuFactor lu(g.adjoint());
                if (!lu.singular() && lu.min_pivot() > 1e-12) {
                    std::vector<cvector> fixed(csize, cvector(n, cplx(0.0, 0.0)));
                    for (int j = 0; j < csize; ++j) {
                        cvector ej(csize, cplx(0.0, 0.0));
                        ej[j] = 1.0;
                        cvector coef = lu.solve(ej);
                        for (int r = 0; r < csize; ++r)
                            for (int i = 0; i < n; ++i) fixed[j][i] += coef[r] * lefts[r][i];
                        vec_normalize(fixed[j]);
                    }
                    lefts = std::move(fixed);
                }
            } else {
                // Close but distinct eigenvalues: leave the vectors untouched
                // and only resolve the ordering by overlap.
                std::vector<const cvector*> vptr;
                for (const auto& v : rights) vptr.push_back(&v);
                const std::vector<int> order = greedy_assign(refs, vptr);
                std::vector<cvector> r2(csize), l2(csize);
                for (int p = 0; p < csize; ++p) {
                    r2[p] = rights[order[p]];
                    l2[p] = lefts[order[p]];
                }
                rights = std::move(r2);
                lefts = std::move(l2);
            }
        }

        for (int j = 0; j < csize; ++j) {
            out.right_vectors[k + j] = std::move(rights[j]);
            out.left_vectors[k + j] = std::move(lefts[j]);
        }
        k = m + 1;
        ++cluster_index;
    }
    return out;
}

HermitianEigen hermitian_eigensystem(const ComplexMatrix& a) {
    const int n = a.dim();
    ComplexMatrix m = a;
    std::vector<cvector> v(n, cvector(n, cplx(0.0, 0.0)));
    for (int i = 0; i < n; ++i) v[i][i] = 1.0;

    const double norm = m.frobenius_norm();
    const double tol = 1e-15 * std::max(1.0, norm);
    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += std::norm(m.at(p, q));
        if (std::sqrt(off) < tol) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const cplx apq = m.at(p, q);
                if (std::abs(apq) < 1e-300) continue;
                const double app = m.at(p, p).real(), aqq = m.at(q, q).real();
                const cplx phase = apq / std::abs(apq);
                const double theta = 0.5 * std::atan2(2.0 * std::abs(apq), app - aqq);
                const double c = std::cos(theta);
                const cplx s = std::sin(theta) * std::conj(phase);
                for (int i = 0; i < n; ++i) {
                    const cplx mip = m.at(i, p), miq = m.at(i, q);
                    m.at(i, p) = c * mip + s * miq;
                    m.at(i, q) = -std::conj(s) * mip + c * miq;
                }
                for (int j = 0; j < n; ++j) {
                    const cplx mpj = m.at(p, j), mqj = m.at(q, j);
                    m.at(p, j) = c * mpj + std::conj(s) * mqj;
                    m.at(q, j) = -s * mpj + c * mqj;
                }
                for (int i = 0; i < n; ++i) {
                    const cplx vip = v[i][p], viq = v[i][q];
                    v[i][p] = c * vip + s * viq;
                    v[i][q] = -std::conj(s) * vip + c * viq;
                }
            }
        }
    }

    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(),
              [&](int i, int j) { return m.at(i, i).real() < m.at(j, j).real(); });
    HermitianEigen out;
    out.eigenvalues.resize(n);
    out.eigenvectors.assign(n, cvector(n));
    for (int k = 0; k < n; ++k) {
        out.eigenvalues[k] = m.at(idx[k], idx[k]).real();
        for (int i = 0; i < n; ++i) out.eigenvectors[k][i] = v[i][idx[k]];
        vec_normalize(out.eigenvectors[k]);
    }
    return out;
}

ComplexMatrix sqrt_psd(const ComplexMatrix& a) {
    const HermitianEigen eig = hermitian_eigensystem(a);
    const int n = a.dim();
    ComplexMatrix out(n);
    for (int k = 0; k < n; ++k) {
        const double lam = std::max(0.0, eig.eigenvalues[k]);
        const double root = std::sqrt(lam);
        if (root == 0.0) continue;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                out.at(i, j) += root * eig.eigenvectors[k][i] * std::conj(eig.eigenvectors[k][j]);
    }
    return out;
}

}  // namespace epsim
