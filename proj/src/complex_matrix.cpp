#include "epsim/complex_matrix.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "epsim/kernels.hpp"

namespace epsim {

ComplexMatrix::ComplexMatrix(int dim, cvector entries) : dim_(dim), a_(std::move(entries)) {
    if (a_.size() != static_cast<std::size_t>(dim) * dim)
        throw std::invalid_argument("ComplexMatrix: entry count does not match dim^2");
}

ComplexMatrix ComplexMatrix::identity(int dim) {
    ComplexMatrix m(dim);
    for (int i = 0; i < dim; ++i) m.at(i, i) = 1.0;
    return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
    assert(dim_ == rhs.dim_);
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += rhs.a_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
    assert(dim_ == rhs.dim_);
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= rhs.a_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
    for (auto& v : a_) v *= s;
    return *this;
}

void ComplexMatrix::add_scaled(cplx s, const ComplexMatrix& rhs) {
    assert(dim_ == rhs.dim_);
    kernels::axpy(a_.size(), s, rhs.a_.data(), a_.data());
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix m(dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) m.at(i, j) = std::conj(at(j, i));
    return m;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix m(dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) m.at(i, j) = at(j, i);
    return m;
}

ComplexMatrix ComplexMatrix::conj() const {
    ComplexMatrix m(dim_);
    for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] = std::conj(a_[i]);
    return m;
}

double ComplexMatrix::frobenius_norm() const {
    return kernels::norm2(a_.size(), a_.data());
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& v : a_) m = std::max(m, std::abs(v));
    return m;
}

cplx ComplexMatrix::trace() const {
    cplx t(0.0, 0.0);
    for (int i = 0; i < dim_; ++i) t += at(i, i);
    return t;
}

cvector ComplexMatrix::apply(const cvector& x) const {
    assert(static_cast<int>(x.size()) == dim_);
    cvector y(dim_);
    kernels::matvec(dim_, a_.data(), x.data(), y.data());
    return y;
}

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) {
    lhs += rhs;
    return lhs;
}

ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) {
    lhs -= rhs;
    return lhs;
}

ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
    assert(lhs.dim() == rhs.dim());
    const int n = lhs.dim();
    ComplexMatrix out(n);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            const cplx v = lhs.at(i, k);
            if (v == cplx(0.0, 0.0)) continue;
            kernels::axpy(n, v, &rhs.at(k, 0), &out.at(i, 0));
        }
    }
    return out;
}

ComplexMatrix operator*(cplx s, ComplexMatrix m) {
    m *= s;
    return m;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    const int na = a.dim(), nb = b.dim();
    ComplexMatrix out(na * nb);
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < na; ++j) {
            const cplx v = a.at(i, j);
            if (v == cplx(0.0, 0.0)) continue;
            for (int k = 0; k < nb; ++k)
                for (int l = 0; l < nb; ++l) out.at(i * nb + k, j * nb + l) = v * b.at(k, l);
        }
    return out;
}

LuFactor::LuFactor(const ComplexMatrix& m) : n_(m.dim()), lu_(m.entries()), piv_(m.dim()) {
    min_pivot_ = std::numeric_limits<double>::infinity();
    for (int k = 0; k < n_; ++k) {
        int p = k;
        double best = std::abs(lu_[static_cast<std::size_t>(k) * n_ + k]);
        for (int i = k + 1; i < n_; ++i) {
            double v = std::abs(lu_[static_cast<std::size_t>(i) * n_ + k]);
            if (v > best) {
                best = v;
                p = i;
            }
        }
        piv_[k] = p;
        if (p != k)
            for (int j = 0; j < n_; ++j)
                std::swap(lu_[static_cast<std::size_t>(k) * n_ + j],
                          lu_[static_cast<std::size_t>(p) * n_ + j]);
        const cplx pivot = lu_[static_cast<std::size_t>(k) * n_ + k];
        min_pivot_ = std::min(min_pivot_, std::abs(pivot));
        if (pivot == cplx(0.0, 0.0)) {
            singular_ = true;
            min_pivot_ = 0.0;
            continue;
        }
        for (int i = k + 1; i < n_; ++i) {
            cplx f = lu_[static_cast<std::size_t>(i) * n_ + k] / pivot;
            lu_[static_cast<std::size_t>(i) * n_ + k] = f;
            if (f == cplx(0.0, 0.0)) continue;
            for (int j = k + 1; j < n_; ++j)
                lu_[static_cast<std::size_t>(i) * n_ + j] -= f * lu_[static_cast<std::size_t>(k) * n_ + j];
        }
    }
    if (n_ == 0) min_pivot_ = 0.0;
}

cvector LuFactor::solve(const cvector& b) const {
    if (singular_) throw std::runtime_error("LuFactor::solve: singular matrix");
    cvector x = b;
    for (int k = 0; k < n_; ++k) {
        if (piv_[k] != k) std::swap(x[k], x[piv_[k]]);
        for (int i = k + 1; i < n_; ++i) x[i] -= lu_[static_cast<std::size_t>(i) * n_ + k] * x[k];
    }
    for (int i = n_ - 1; i >= 0; --i) {
        for (int j = i + 1; j < n_; ++j) x[i] -= lu_[static_cast<std::size_t>(i) * n_ + j] * x[j];
        x[i] /= lu_[static_cast<std::size_t>(i) * n_ + i];
    }
    return x;
}

ComplexMatrix LuFactor::solve(const ComplexMatrix& b) const {
    ComplexMatrix out(n_);
    cvector col(n_);
    for (int j = 0; j < n_; ++j) {
        for (int i = 0; i < n_; ++i) col[i] = b.at(i, j);
        cvector x = solve(col);
        for (int i = 0; i < n_; ++i) out.at(i, j) = x[i];
    }
    return out;
}

ComplexMatrix LuFactor::inverse() const { return solve(ComplexMatrix::identity(n_)); }

double vec_norm(const cvector& v) { return kernels::norm2(v.size(), v.data()); }

void vec_normalize(cvector& v) {
    double n = vec_norm(v);
    if (n == 0.0) return;
    for (auto& x : v) x /= n;
}

cplx vec_dot(const cvector& a, const cvector& b) {
    assert(a.size() == b.size());
    return kernels::dot(a.size(), a.data(), b.data());
}

}  // namespace epsim
