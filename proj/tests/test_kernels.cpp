#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "epsim/complex_matrix.hpp"
#include "epsim/kernels.hpp"

using namespace epsim;
namespace k = epsim::kernels;

namespace {

cvector random_vec(std::size_t n, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    cvector v(n);
    for (auto& x : v) x = cplx(u(rng), u(rng));
    return v;
}

bool close(const cvector& a, const cvector& b, double tol = 1e-14) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double scale = std::max(1.0, std::abs(a[i]));
        if (std::abs(a[i] - b[i]) > tol * scale) return false;
    }
    return true;
}

struct BackendGuard {
    ~BackendGuard() { k::select_backend("auto"); }
};

}  // namespace

TEST_CASE("backend selection") {
    BackendGuard guard;
    CHECK(k::select_backend("scalar"));
    CHECK(k::backend() == "scalar");
    CHECK_FALSE(k::select_backend("nonsense"));
    CHECK(k::select_backend("auto"));
}

TEST_CASE("simd variants match the scalar reference") {
    BackendGuard guard;
    k::select_backend("auto");
    const std::string fast = k::backend();
    if (fast == "scalar") return;  // nothing to compare on this host

    // Odd lengths exercise the scalar tails.
    for (std::size_t n : {1, 2, 3, 7, 8, 16, 33, 64}) {
        const cvector x = random_vec(n, 10 + n), y0 = random_vec(n, 20 + n);
        const cvector a_mat = random_vec(n * n, 30 + n);
        const cvector k1 = random_vec(n, 40 + n), k2 = random_vec(n, 50 + n),
                      k3 = random_vec(n, 60 + n), k4 = random_vec(n, 70 + n);
        const cplx alpha(0.3, -0.7);

        k::select_backend(fast);
        cvector y_fast = y0;
        k::axpy(n, alpha, x.data(), y_fast.data());
        cvector xp_fast(n);
        k::xpay(n, x.data(), alpha, k1.data(), xp_fast.data());
        cvector mv_fast(n);
        k::matvec(n, a_mat.data(), x.data(), mv_fast.data());
        cvector rk_fast(n);
        k::rk4_combine(n, x.data(), alpha, k1.data(), k2.data(), k3.data(), k4.data(),
                       rk_fast.data());
        const double norm_fast = k::norm2(n, x.data());
        const cplx dot_fast = k::dot(n, x.data(), k1.data());

        k::select_backend("scalar");
        cvector y_ref = y0;
        k::axpy(n, alpha, x.data(), y_ref.data());
        cvector xp_ref(n);
        k::xpay(n, x.data(), alpha, k1.data(), xp_ref.data());
        cvector mv_ref(n);
        k::matvec(n, a_mat.data(), x.data(), mv_ref.data());
        cvector rk_ref(n);
        k::rk4_combine(n, x.data(), alpha, k1.data(), k2.data(), k3.data(), k4.data(),
                       rk_ref.data());
        const double norm_ref = k::norm2(n, x.data());
        const cplx dot_ref = k::dot(n, x.data(), k1.data());

        CHECK(close(y_fast, y_ref));
        CHECK(close(xp_fast, xp_ref));
        CHECK(close(mv_fast, mv_ref, 1e-13));
        CHECK(close(rk_fast, rk_ref));
        CHECK(norm_fast == doctest::Approx(norm_ref).epsilon(1e-14));
        CHECK(std::abs(dot_fast - dot_ref) < 1e-13 * std::max(1.0, std::abs(dot_ref)));
    }
}

TEST_CASE("xpay supports y aliasing x") {
    BackendGuard guard;
    for (const char* name : {"scalar", "auto"}) {
        k::select_backend(name);
        cvector x = random_vec(9, 5);
        const cvector kvec = random_vec(9, 6);
        cvector expected(9);
        for (std::size_t i = 0; i < 9; ++i) expected[i] = x[i] + cplx(0.5, 0.5) * kvec[i];
        k::xpay(9, x.data(), cplx(0.5, 0.5), kvec.data(), x.data());
        CHECK(close(x, expected));
    }
}
