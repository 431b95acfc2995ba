#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace epsim {

using cplx = std::complex<double>;
using cvector = std::vector<cplx>;

// Dense square complex matrix, row-major.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(int dim) : dim_(dim), a_(static_cast<std::size_t>(dim) * dim) {}
    ComplexMatrix(int dim, cvector entries);

    static ComplexMatrix identity(int dim);

    int dim() const { return dim_; }
    cplx& at(int i, int j) { return a_[static_cast<std::size_t>(i) * dim_ + j]; }
    const cplx& at(int i, int j) const { return a_[static_cast<std::size_t>(i) * dim_ + j]; }
    cplx* data() { return a_.data(); }
    const cplx* data() const { return a_.data(); }
    const cvector& entries() const { return a_; }

    ComplexMatrix& operator+=(const ComplexMatrix& rhs);
    ComplexMatrix& operator-=(const ComplexMatrix& rhs);
    ComplexMatrix& operator*=(cplx s);

    // this += s * rhs
    void add_scaled(cplx s, const ComplexMatrix& rhs);

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;
    ComplexMatrix conj() const;

    double frobenius_norm() const;
    double max_abs() const;
    cplx trace() const;

    cvector apply(const cvector& x) const;  // matrix * vector

private:
    int dim_ = 0;
    cvector a_;
};

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs);
ComplexMatrix operator*(cplx s, ComplexMatrix m);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// LU factorization with partial pivoting, for solves against many right-hand
// sides (inverse iteration, block recovery in the dilation).
class LuFactor {
public:
    explicit LuFactor(const ComplexMatrix& m);

    bool singular() const { return singular_; }
    // Smallest |pivot| encountered; 0 for an exactly singular matrix.
    double min_pivot() const { return min_pivot_; }

    cvector solve(const cvector& b) const;
    ComplexMatrix solve(const ComplexMatrix& b) const;  // column-wise
    ComplexMatrix inverse() const;

private:
    int n_;
    cvector lu_;
    std::vector<int> piv_;
    bool singular_ = false;
    double min_pivot_ = 0.0;
};

// Euclidean norm / normalization helpers for state vectors.
double vec_norm(const cvector& v);
void vec_normalize(cvector& v);
cplx vec_dot(const cvector& a, const cvector& b);  // <a|b>

}  // namespace epsim
