#include <doctest.h>

#include <cmath>
#include <random>

#include "hg/hessian.hpp"
#include "hg/solver.hpp"

using namespace hg;
using doctest::Approx;

namespace {

cplx det(const HermitianMatrix& H)
{
    if (H.size() == 1)
        return H(0, 0);
    if (H.size() == 2)
        return H(0, 0) * H(1, 1) - H(0, 1) * H(1, 0);
    return H(0, 0) * (H(1, 1) * H(2, 2) - H(1, 2) * H(2, 1)) -
           H(0, 1) * (H(1, 0) * H(2, 2) - H(1, 2) * H(2, 0)) +
           H(0, 2) * (H(1, 0) * H(2, 1) - H(1, 1) * H(2, 0));
}

double binomial(int n, int k)
{
    double b = 1;
    for (int i = 1; i <= k; ++i)
        b = b * (n - k + i) / i;
    return b;
}

SmoothSample inverse_square()
{
    return {[](const Point& z) { return -1.0 / (z[0] * z[0] + z[1] * z[1] + z[2] * z[2] + z[3] * z[3]); }, 0};
}

}  // namespace

TEST_CASE("eigenvalue examples")
{
    HermitianMatrix I(3);
    for (int j = 0; j < 3; ++j)
        I.set(j, j, 1);
    auto e = eigenvalues(I);
    for (double x : e)
        CHECK(x == Approx(1).epsilon(1e-14));

    HermitianMatrix A(2, {1, cplx(0, 1), cplx(0, -1), 1});
    auto a = eigenvalues(A);
    CHECK(a[0] == Approx(0).epsilon(1e-14).scale(1));
    CHECK(a[1] == Approx(2).epsilon(1e-14));

    HermitianMatrix D(3);
    D.set(0, 0, 3);
    D.set(1, 1, -1);
    D.set(2, 2, 2);
    auto d = eigenvalues(D);
    CHECK(d[0] == Approx(-1).epsilon(1e-14));
    CHECK(d[1] == Approx(2).epsilon(1e-14));
    CHECK(d[2] == Approx(3).epsilon(1e-14));
}

TEST_CASE("eigenvalues match trace and determinant on random matrices")
{
    std::mt19937_64 rng(17);
    std::normal_distribution<double> g;
    for (int i = 0; i < 1000; ++i) {
        int n = 1 + i % 3;
        HermitianMatrix H(n);
        for (int j = 0; j < n; ++j) {
            H.set(j, j, g(rng));
            for (int k = j + 1; k < n; ++k)
                H.set(j, k, cplx(g(rng), g(rng)));
        }
        auto e = eigenvalues(H);
        double sum = 0, prod = 1, scale = 0;
        for (double x : e) {
            sum += x;
            prod *= x;
            scale = std::max(scale, std::abs(x));
        }
        CHECK(std::abs(sum - H.trace()) <= 1e-10 * std::max(1.0, scale));
        CHECK(std::abs(prod - det(H).real()) <= 1e-10 * std::max(1.0, std::pow(scale, n)));
        for (std::size_t k = 1; k < e.size(); ++k)
            CHECK(e[k - 1] <= e[k]);
    }
}

TEST_CASE("sigma_k examples and binomial property")
{
    CHECK(sigma_k({1, 1, 1}, 2) == 3);
    CHECK(sigma_k({0, 2}, 2) == 0);
    CHECK(sigma_k({-1, 1}, 1) == 0);
    CHECK(sigma_k({-1, 1}, 2) == -1);
    for (int n = 1; n <= 8; ++n)
        for (int k = 0; k <= n; ++k)
            CHECK(sigma_k(std::vector<double>(n, 1.0), k) == binomial(n, k));
    CHECK_THROWS(sigma_k({1, 2}, 3));
}

TEST_CASE("finite difference complex hessian")
{
    SmoothSample sq{[](const Point& z) { return norm(z) * norm(z); }, 0};
    auto H = complex_hessian_fd(sq, {0.3, -0.2, 0.7, 0.1});
    CHECK(std::abs(H(0, 0) - 1.0) < 1e-6);
    CHECK(std::abs(H(1, 1) - 1.0) < 1e-6);
    CHECK(std::abs(H(0, 1)) < 1e-6);

    auto K = complex_hessian_fd(inverse_square(), {1, 0, 0, 0});
    CHECK(std::abs(K(0, 0) - (-1.0)) < 1e-5);
    CHECK(std::abs(K(1, 1) - 1.0) < 1e-5);
    CHECK(std::abs(K(0, 1)) < 1e-5);

    // Independent formula for d^2/dz_j dzbar_k: delta_jk / rho^2 - 2 conj(z_j) z_k / rho^3, rho = |z|^2.
    Point z{0.4, 0.3, -0.5, 0.6};
    cplx w[2] = {cplx(z[0], z[1]), cplx(z[2], z[3])};
    double rho = std::norm(w[0]) + std::norm(w[1]);
    auto F = complex_hessian_fd(inverse_square(), z);
    for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) {
            cplx exact = (j == k ? 1.0 / (rho * rho) : 0.0) - 2.0 * std::conj(w[j]) * w[k] / (rho * rho * rho);
            CHECK(std::abs(F(j, k) - exact) < 1e-5);
        }

    SmoothSample ph{[](const Point& z) { return z[0] * z[0] - z[1] * z[1]; }, 0};
    CHECK(complex_hessian_fd(ph, {0.2, 0.5, -0.1, 0.3}).frobenius() < 1e-6);
}

TEST_CASE("msh_test")
{
    std::vector<Point> ring;
    std::mt19937_64 rng(2);
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> rad(0.5, 2.0);
    for (int i = 0; i < 200; ++i) {
        Point e(4);
        for (double& x : e)
            x = g(rng);
        double s = rad(rng) / norm(e);
        for (double& x : e)
            x *= s;
        ring.push_back(e);
    }
    SmoothSample sq{[](const Point& z) { return norm(z) * norm(z); }, 0};
    CHECK(msh_test(sq, make_params(2, 2), ring).ok);

    auto m1 = msh_test(inverse_square(), make_params(1, 2), ring);
    CHECK(m1.ok);
    CHECK(std::abs(m1.worst_value) < 1e-5);

    auto m2 = msh_test(inverse_square(), make_params(2, 2), {{1, 0, 0, 0}});
    CHECK_FALSE(m2.ok);
    CHECK(m2.worst_k == 2);
    CHECK(m2.worst_value == Approx(-1.0).epsilon(1e-5));
    CHECK(m2.witness == Point{1, 0, 0, 0});
}

TEST_CASE("msh cone nesting on random quadratic forms")
{
    std::mt19937_64 rng(23);
    std::normal_distribution<double> g;
    for (int i = 0; i < 100; ++i) {
        double c[6];
        for (double& x : c)
            x = g(rng);
        SmoothSample u{[c](const Point& z) {
                           return c[0] * (z[0] * z[0] + z[1] * z[1]) + c[1] * (z[2] * z[2] + z[3] * z[3]) +
                                  c[2] * (z[4] * z[4] + z[5] * z[5]) + c[3] * (z[0] * z[2] + z[1] * z[3]) +
                                  c[4] * (z[2] * z[4] + z[3] * z[5]) + c[5] * z[0] * z[4];
                       },
                       0};
        std::vector<Point> pts{{0.1, 0.2, 0.3, -0.1, 0.5, 0.2}, {-0.4, 0.1, 0.0, 0.3, 0.2, -0.6}};
        for (int m = 3; m >= 2; --m)
            if (msh_test(u, make_params(m, 3), pts).ok)
                CHECK(msh_test(u, make_params(m - 1, 3), pts).ok);
    }
}

TEST_CASE("lelong numbers of model functions")
{
    auto p11 = make_params(1, 1, 4.0);
    SmoothSample lg{[](const Point& z) { return std::log(norm(z)); }, 0};
    CHECK(lelong_number(lg, p11, {0, 0}, geometric_radii(0.1)).estimate == Approx(1.0).epsilon(1e-3));

    auto p12 = make_params(1, 2);
    SmoothSample three{[p12](const Point& z) { return 3 * phi(p12, norm(z)); }, 0};
    CHECK(lelong_number(three, p12, {0, 0, 0, 0}, geometric_radii(0.1)).estimate == Approx(3.0).epsilon(1e-3));

    PoleSet A({{{0.5, 0}, 2}});
    SmoothSample green{[A](const Point& z) { return green_disk_oracle(A, z); }, 0};
    double est = lelong_number(green, p11, {0.5, 0}, geometric_radii(0.05)).estimate;
    CHECK(std::abs(est - 2.0) <= 1e-3);

    SmoothSample bumped{[A](const Point& z) { return green_disk_oracle(A, z) + norm(z) * norm(z); }, 0};
    double est2 = lelong_number(bumped, p11, {0.5, 0}, geometric_radii(0.05)).estimate;
    CHECK(std::abs(est2 - est) <= 1e-3);
}
