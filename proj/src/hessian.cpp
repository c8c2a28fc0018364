#include "hg/hessian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "hg/grid.hpp"

namespace hg {

HermitianMatrix::HermitianMatrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * n)
{
    if (n < 1)
        throw std::invalid_argument("HermitianMatrix: size must be positive");
}

HermitianMatrix::HermitianMatrix(int n, std::vector<cplx> entries) : HermitianMatrix(n)
{
    if (entries.size() != a_.size())
        throw std::invalid_argument("HermitianMatrix: wrong entry count");
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            a_[j * n + k] = 0.5 * (entries[j * n + k] + std::conj(entries[k * n + j]));
}

void HermitianMatrix::set(int j, int k, cplx v)
{
    if (j == k) {
        a_[j * n_ + j] = v.real();
        return;
    }
    a_[j * n_ + k] = v;
    a_[k * n_ + j] = std::conj(v);
}

double HermitianMatrix::trace() const
{
    double t = 0;
    for (int j = 0; j < n_; ++j)
        t += a_[j * n_ + j].real();
    return t;
}

double HermitianMatrix::frobenius() const
{
    double s = 0;
    for (const auto& x : a_)
        s += std::norm(x);
    return std::sqrt(s);
}

std::vector<double> eigenvalues(const HermitianMatrix& H)
{
    // Real symmetric embedding [[Re, -Im], [Im, Re]] has every eigenvalue twice.
    const int n = H.size();
    const int N = 2 * n;
    std::vector<double> S(static_cast<std::size_t>(N) * N);
    auto at = [&](int i, int j) -> double& { return S[i * N + j]; };
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            cplx v = H(j, k);
            at(j, k) = v.real();
            at(j + n, k + n) = v.real();
            at(j, k + n) = -v.imag();
            at(j + n, k) = v.imag();
        }

    double scale = H.frobenius() * std::sqrt(2.0);
    auto off_norm = [&] {
        double s = 0;
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j)
                if (i != j)
                    s += at(i, j) * at(i, j);
        return std::sqrt(s);
    };

    const int max_sweeps = 100;
    int sweep = 0;
    for (; sweep < max_sweeps; ++sweep) {
        double off = off_norm();
        if (off <= 1e-15 * scale || off == 0)
            break;
        for (int p = 0; p < N - 1; ++p)
            for (int q = p + 1; q < N; ++q) {
                double apq = at(p, q);
                if (apq == 0)
                    continue;
                double app = at(p, p), aqq = at(q, q);
                double tau = (aqq - app) / (2 * apq);
                double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1 + tau * tau));
                double c = 1 / std::sqrt(1 + t * t), s = t * c;
                for (int k = 0; k < N; ++k) {
                    double akp = at(k, p), akq = at(k, q);
                    at(k, p) = c * akp - s * akq;
                    at(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < N; ++k) {
                    double apk = at(p, k), aqk = at(q, k);
                    at(p, k) = c * apk - s * aqk;
                    at(q, k) = s * apk + c * aqk;
                }
            }
    }
    if (off_norm() > 1e-12 * scale)
        throw std::runtime_error("eigenvalues: Jacobi sweeps did not converge");

    std::vector<double> d(N);
    for (int i = 0; i < N; ++i)
        d[i] = at(i, i);
    std::sort(d.begin(), d.end());
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i)
        out[i] = 0.5 * (d[2 * i] + d[2 * i + 1]);
    return out;
}

double sigma_k(const std::vector<double>& eigs, int k)
{
    if (k < 0 || k > static_cast<int>(eigs.size()))
        throw std::invalid_argument("sigma_k: k out of range");
    std::vector<double> e(k + 1, 0.0);
    e[0] = 1;
    for (double l : eigs)
        for (int j = k; j >= 1; --j)
            e[j] += l * e[j - 1];
    return e[k];
}

HermitianMatrix complex_hessian_fd(const SmoothSample& u, const Point& z)
{
    const int N = static_cast<int>(z.size());
    if (N == 0 || N % 2 != 0)
        throw std::invalid_argument("complex_hessian_fd: point needs 2n coordinates");
    const int n = N / 2;
    double h = u.h > 0 ? u.h : std::pow(std::numeric_limits<double>::epsilon(), 0.25) * (1 + norm(z));

    auto eval = [&](const Point& x) {
        double v = u.u(x);
        if (!std::isfinite(v))
            throw std::runtime_error("complex_hessian_fd: evaluator returned a non-finite value");
        return v;
    };

    const double u0 = eval(z);
    std::vector<double> D(static_cast<std::size_t>(N) * N);
    Point x = z;
    for (int i = 0; i < N; ++i) {
        x[i] = z[i] + h;
        double up = eval(x);
        x[i] = z[i] - h;
        double um = eval(x);
        x[i] = z[i];
        D[i * N + i] = (up - 2 * u0 + um) / (h * h);
        for (int j = i + 1; j < N; ++j) {
            double s[4];
            int idx = 0;
            for (int a : {1, -1})
                for (int b : {1, -1}) {
                    x[i] = z[i] + a * h;
                    x[j] = z[j] + b * h;
                    s[idx++] = eval(x);
                }
            x[i] = z[i];
            x[j] = z[j];
            D[i * N + j] = D[j * N + i] = (s[0] - s[1] - s[2] + s[3]) / (4 * h * h);
        }
    }

    // d^2/dz_j dzbar_k = (u_xjxk + u_yjyk + i (u_xjyk - u_yjxk)) / 4
    std::vector<cplx> H(static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            int xj = 2 * j, yj = 2 * j + 1, xk = 2 * k, yk = 2 * k + 1;
            double re = D[xj * N + xk] + D[yj * N + yk];
            double im = D[xj * N + yk] - D[yj * N + xk];
            H[j * n + k] = 0.25 * cplx(re, im);
        }
    return HermitianMatrix(n, std::move(H));
}

MshResult msh_test(const SmoothSample& u, const HessianParams& p, const std::vector<Point>& points)
{
    p.validate();
    MshResult res;
    double worst_rel = 0;
    for (const auto& z : points) {
        if (static_cast<int>(z.size()) != 2 * p.n)
            throw std::invalid_argument("msh_test: point dimension does not match n");
        auto eigs = eigenvalues(complex_hessian_fd(u, z));
        double scale = 0;
        for (double l : eigs)
            scale = std::max(scale, std::abs(l));
        scale = std::max(scale, std::numeric_limits<double>::min());
        for (int k = 1; k <= p.m; ++k) {
            double sk = sigma_k(eigs, k);
            double tol = 1e-6 * std::pow(scale, k);
            double rel = sk / std::pow(scale, k);
            if (sk < -tol)
                res.ok = false;
            if (res.witness.empty() || rel < worst_rel) {
                worst_rel = rel;
                res.worst_k = k;
                res.worst_value = sk;
                res.witness = z;
            }
        }
    }
    return res;
}

std::vector<double> geometric_radii(double r_start, int count)
{
    if (!(r_start > 0) || count < 3)
        throw std::invalid_argument("geometric_radii: need r_start > 0 and at least 3 radii");
    std::vector<double> r(count);
    for (int k = 0; k < count; ++k)
        r[k] = std::ldexp(r_start, -k);
    return r;
}

namespace {

std::vector<Point> sphere_directions(int dim_real)
{
    std::vector<Point> dirs;
    if (dim_real == 2) {
        const int K = 720;
        for (int k = 0; k < K; ++k) {
            double t = 2 * M_PI * k / K;
            dirs.push_back({std::cos(t), std::sin(t)});
        }
        return dirs;
    }
    for (int i = 0; i < dim_real; ++i)
        for (double sgn : {1.0, -1.0}) {
            Point e(dim_real, 0.0);
            e[i] = sgn;
            dirs.push_back(e);
        }
    std::mt19937_64 rng(20240607);
    std::normal_distribution<double> g;
    for (int k = 0; k < 2048; ++k) {
        Point e(dim_real);
        for (double& x : e)
            x = g(rng);
        double s = norm(e);
        for (double& x : e)
            x /= s;
        dirs.push_back(e);
    }
    return dirs;
}

// Fits q = nu + c / t + d * r / t through the last three ladder points.
LelongResult finish_lelong(const HessianParams& p, std::vector<double> radii,
                           std::vector<double> maxima)
{
    LelongResult res;
    res.radii = radii;
    for (std::size_t k = 0; k < radii.size(); ++k)
        res.ratios.push_back(maxima[k] / phi(p, radii[k]));

    const auto& q = res.ratios;
    std::size_t K = q.size();
    double scale = 0;
    for (double v : q)
        scale = std::max(scale, std::abs(v));
    double tol = 1e-6 * std::max(scale, 1.0);
    double trend = q.back() - q.front();
    for (std::size_t k = 1; k < K; ++k) {
        double step = q[k] - q[k - 1];
        if ((trend >= 0 && step < -tol) || (trend < 0 && step > tol))
            throw std::runtime_error("lelong_number: ratios are not monotone along the radius ladder");
    }

    double A[3][4];
    for (int i = 0; i < 3; ++i) {
        std::size_t k = K - 3 + i;
        double t = phi(p, radii[k]);
        A[i][0] = 1;
        A[i][1] = 1 / t;
        A[i][2] = radii[k] / t;
        A[i][3] = q[k];
    }
    for (int c = 0; c < 3; ++c) {
        int piv = c;
        for (int r = c + 1; r < 3; ++r)
            if (std::abs(A[r][c]) > std::abs(A[piv][c]))
                piv = r;
        for (int j = 0; j < 4; ++j)
            std::swap(A[c][j], A[piv][j]);
        for (int r = 0; r < 3; ++r) {
            if (r == c || A[c][c] == 0)
                continue;
            double f = A[r][c] / A[c][c];
            for (int j = c; j < 4; ++j)
                A[r][j] -= f * A[c][j];
        }
    }
    double est = A[0][0] != 0 ? A[0][3] / A[0][0] : q.back();
    res.estimate = std::isfinite(est) ? est : q.back();
    return res;
}

void check_radii(const std::vector<double>& radii)
{
    if (radii.size() < 3)
        throw std::invalid_argument("lelong_number: need at least three radii");
    for (std::size_t k = 1; k < radii.size(); ++k)
        if (!(radii[k] < radii[k - 1]) || !(radii[k] > 0))
            throw std::invalid_argument("lelong_number: radii must be positive and decreasing");
}

}  // namespace

LelongResult lelong_number(const SmoothSample& u, const HessianParams& p, const Point& a,
                           const std::vector<double>& radii)
{
    check_radii(radii);
    auto dirs = sphere_directions(static_cast<int>(a.size()));
    std::vector<double> maxima;
    Point z(a.size());
    for (double r : radii) {
        double best = -std::numeric_limits<double>::infinity();
        for (const auto& e : dirs) {
            for (std::size_t i = 0; i < a.size(); ++i)
                z[i] = a[i] + r * e[i];
            best = std::max(best, u.u(z));
        }
        maxima.push_back(best);
    }
    return finish_lelong(p, radii, maxima);
}

LelongResult lelong_number(const GridFunction& u, const HessianParams& p, const Point& a,
                           const std::vector<double>& radii)
{
    check_radii(radii);
    const Grid& g = u.grid();
    if (radii.back() < g.h)
        throw std::invalid_argument("lelong_number: radii below the grid spacing");
    std::vector<double> maxima;
    for (double r : radii) {
        double best = -std::numeric_limits<double>::infinity();
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                std::size_t k = g.index(i, j);
                if (g.kind[k] == NodeKind::Exterior || at_pole(u[k]))
                    continue;
                if (std::hypot(g.x(i) - a[0], g.y(j) - a[1]) <= r)
                    best = std::max(best, u[k]);
            }
        if (!std::isfinite(best))
            throw std::invalid_argument("lelong_number: no grid nodes inside a ball");
        maxima.push_back(best);
    }
    return finish_lelong(p, radii, maxima);
}

}  // namespace hg
