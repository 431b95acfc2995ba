#include "epsim/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>

#include "epsim/errors.hpp"

namespace epsim {

SingleQubitEigenpair single_qubit_eigenpair(cplx phi) {
    const cplx s = std::sin(phi / 2.0), c = std::cos(phi / 2.0);
    const ComplexMatrix r = chart_rotation();
    auto rotate = [&r](cplx a, cplx b) {
        return cvector{r.at(0, 0) * a + r.at(0, 1) * b, r.at(1, 0) * a + r.at(1, 1) * b};
    };
    const cplx cot = std::cos(phi) / std::sin(phi);
    const AlphaResult alpha = compute_alpha(cot.real(), cot.imag());
    SingleQubitEigenpair out;
    out.psi1 = rotate(-s, c);
    out.psi2 = rotate(c, s);
    out.e1 = -alpha.value;
    out.e2 = alpha.value;
    return out;
}

std::vector<cvector> analytic_product_basis(const SystemConfig& config, const FieldPoint& point) {
    const int n = config.n_qubits;
    const int dim = config.dim();
    const SingleQubitEigenpair pair = single_qubit_eigenpair(point.phi);
    cvector q1 = pair.psi1, q2 = pair.psi2;
    vec_normalize(q1);
    vec_normalize(q2);

    struct Entry {
        double energy;
        int bits;  // bit (n-k) set means qubit k occupies psi2
    };
    std::vector<Entry> entries(dim);
    for (int b = 0; b < dim; ++b) {
        double e = 0.0;
        for (int k = 1; k <= n; ++k) {
            const bool upper = (b >> (n - k)) & 1;
            e += config.field_scales[k - 1] * point.alpha * (upper ? 1.0 : -1.0);
        }
        entries[b] = {e, b};
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.energy != b.energy) return a.energy < b.energy;
        return a.bits < b.bits;
    });

    std::vector<cvector> basis;
    basis.reserve(dim);
    for (const Entry& ent : entries) {
        cvector v = {cplx(1.0, 0.0)};
        for (int k = 1; k <= n; ++k) {
            const cvector& q = ((ent.bits >> (n - k)) & 1) ? q2 : q1;
            cvector next(v.size() * 2);
            for (std::size_t i = 0; i < v.size(); ++i) {
                next[2 * i] = v[i] * q[0];
                next[2 * i + 1] = v[i] * q[1];
            }
            v = std::move(next);
        }
        vec_normalize(v);
        basis.push_back(std::move(v));
    }
    return basis;
}

EigenSystem eigensystem_at(const SystemConfig& config, const FieldPoint& point,
                           const std::optional<Couplings>& couplings_override,
                           const EigenSystem* hint) {
    const ComplexMatrix h = build_nhh(config, point, couplings_override);
    const std::vector<cvector> labels = analytic_product_basis(config, point);
    EigenOptions opts;
    opts.label_basis = &labels;
    return eigensystem_sorted(h, hint, opts);
}

SheetGrid sheet_grid(const SystemConfig& config, std::pair<double, double> x_range,
                     std::pair<double, double> y_range, int resolution,
                     double couplings_scale, int threads) {
    if (resolution < 2) throw ConfigError("sheet_grid: resolution must be >= 2 per axis");
    SheetGrid grid;
    grid.dim = config.dim();
    grid.x_samples.resize(resolution);
    grid.y_samples.resize(resolution);
    for (int i = 0; i < resolution; ++i) {
        grid.x_samples[i] =
            x_range.first + (x_range.second - x_range.first) * i / (resolution - 1);
        grid.y_samples[i] =
            y_range.first + (y_range.second - y_range.first) * i / (resolution - 1);
    }
    grid.energies.assign(static_cast<std::size_t>(resolution) * resolution * grid.dim, 0.0);
    grid.mask.assign(static_cast<std::size_t>(resolution) * resolution, false);

    Couplings scaled = config.couplings;
    for (auto& row : scaled)
        for (auto& v : row) v *= couplings_scale;

    auto run_rows = [&](int ix_begin, int ix_end) {
        for (int ix = ix_begin; ix < ix_end; ++ix) {
            for (int iy = 0; iy < resolution; ++iy) {
                const std::size_t cell = static_cast<std::size_t>(ix) * resolution + iy;
                try {
                    const FieldPoint p = field_point(config, grid.x_samples[ix], grid.y_samples[iy]);
                    const EigenSystem eig = eigensystem_at(config, p, scaled);
                    for (int s = 0; s < grid.dim; ++s)
                        grid.energies[cell * grid.dim + s] = eig.eigenvalues[s];
                } catch (const DivergentFieldError&) {
                    grid.mask[cell] = true;
                } catch (const NoConvergenceError&) {
                    grid.mask[cell] = true;
                }
            }
        }
    };

    if (threads <= 1) {
        run_rows(0, resolution);
    } else {
        std::vector<std::future<void>> futs;
        const int chunk = (resolution + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            const int b = t * chunk, e = std::min(resolution, b + chunk);
            if (b >= e) break;
            futs.push_back(std::async(std::launch::async, run_rows, b, e));
        }
        for (auto& f : futs) f.get();
    }
    return grid;
}

std::vector<std::pair<int, int>> branch_cut_couplings(
    const SystemConfig& config, double y_probe, const std::optional<Couplings>& couplings_override,
    double delta, double region) {
    if (y_probe <= 1.0) throw ConfigError("branch_cut_couplings: y_probe must exceed 1");
    if (!(region >= delta)) throw ConfigError("branch_cut_couplings: region must be >= delta");
    const int dim = config.dim();

    // The exchange is not confined to x = 0: symmetry-protected exact
    // crossings adjacent to the cut also swap sorted labels (they are what
    // turns the bare-cut reversal into the observed effective pairing), so
    // the continuation is chained from -region to +region with the innermost
    // points at +-delta.
    std::vector<double> xs;
    const int geo_steps = 24;
    for (int k = 0; k <= geo_steps; ++k)
        xs.push_back(-region * std::pow(delta / region, static_cast<double>(k) / geo_steps));
    for (int k = geo_steps; k >= 0; --k)
        xs.push_back(region * std::pow(delta / region, static_cast<double>(k) / geo_steps));

    // Frames are orthonormal in the metric inner product (w_i = eta^{1/2} r_i),
    // where continuity matching of a quasi-Hermitian eigenbasis is sharp.
    // Degeneracy clustering is disabled: near the cut the slow sheet pairs
    // split only at O(alpha^3) and must keep their own eigenvectors.
    auto metric_frame = [&](double x) {
        const FieldPoint p = field_point(config, x, y_probe);
        const ComplexMatrix h = build_nhh(config, p, couplings_override);
        const std::vector<cvector> labels = analytic_product_basis(config, p);
        EigenOptions opts;
        opts.label_basis = &labels;
        opts.degeneracy_tol = 1e-12;
        const EigenSystem eig = eigensystem_sorted(h, nullptr, opts);
        const ComplexMatrix root = sqrt_psd(build_metric(config, p));
        std::vector<cvector> w(dim);
        for (int i = 0; i < dim; ++i) {
            w[i] = root.apply(eig.right_vectors[i]);
            vec_normalize(w[i]);
        }
        return w;
    };

    auto match = [&](const std::vector<cvector>& a, const std::vector<cvector>& b) {
        std::vector<int> step(dim, -1);
        std::vector<bool> used(dim, false);
        for (int round = 0; round < dim; ++round) {
            double best = -1.0;
            int bi = -1, bj = -1;
            for (int i = 0; i < dim; ++i) {
                if (step[i] >= 0) continue;
                for (int j = 0; j < dim; ++j) {
                    if (used[j]) continue;
                    const double ov = std::abs(vec_dot(a[i], b[j]));
                    if (ov > best) {
                        best = ov;
                        bi = i;
                        bj = j;
                    }
                }
            }
            if (best < 0.9)
                throw AmbiguousPairingError("branch_cut_couplings: best overlap " +
                                            std::to_string(best) + " below 0.9");
            step[bi] = bj;
            used[bj] = true;
        }
        return step;
    };

    std::vector<int> sigma(dim);
    for (int i = 0; i < dim; ++i) sigma[i] = i;
    std::vector<cvector> prev = metric_frame(xs.front());
    for (std::size_t k = 1; k < xs.size(); ++k) {
        std::vector<cvector> cur = metric_frame(xs[k]);
        const std::vector<int> step = match(prev, cur);
        for (int i = 0; i < dim; ++i) sigma[i] = step[sigma[i]];
        prev = std::move(cur);
    }

    for (int i = 0; i < dim; ++i)
        if (sigma[sigma[i]] != i)
            throw AmbiguousPairingError("branch_cut_couplings: matching is not an involution");

    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < dim; ++i)
        if (sigma[i] > i) pairs.emplace_back(i + 1, sigma[i] + 1);
    return pairs;
}

Extended3x3 extended_3x3(double x, double y, double delta) {
    Extended3x3 out;
    out.delta = delta;
    out.matrix = ComplexMatrix(3);
    out.eigenvalues.assign(3, cplx(0.0, 0.0));
    if (std::hypot(x, y - 1.0) < kEpEvalRadius) {
        // Second-order EP: the upper 2x2 block becomes the nilpotent
        // Delta*[[i, 1], [1, -i]] and all three eigenvalues vanish.
        const cplx i_unit(0.0, 1.0);
        out.matrix.at(0, 0) = delta * i_unit;
        out.matrix.at(0, 1) = delta;
        out.matrix.at(1, 0) = delta;
        out.matrix.at(1, 1) = -delta * i_unit;
        return out;
    }
    const cplx phi = compute_phi(x, y);
    const cplx sp = std::sin(phi);
    const cplx cot = std::cos(phi) / sp;
    const double g = delta * std::sin(phi.real());
    out.matrix.at(0, 0) = g * cot;
    out.matrix.at(0, 1) = g;
    out.matrix.at(1, 0) = g;
    out.matrix.at(1, 1) = -g * cot;
    out.matrix.at(2, 2) = std::sin(phi.imag()) / sp;
    out.eigenvalues[0] = g / sp;
    out.eigenvalues[1] = -g / sp;
    out.eigenvalues[2] = std::sin(phi.imag()) / sp;
    return out;
}

}  // namespace epsim
