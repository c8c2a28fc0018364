#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "hg/kernel.hpp"
#include "hg/poles.hpp"

namespace hg {

using cplx = std::complex<double>;

class GridFunction;

class HermitianMatrix {
public:
    explicit HermitianMatrix(int n);
    // Input is averaged with its conjugate transpose.
    HermitianMatrix(int n, std::vector<cplx> entries);

    int size() const { return n_; }
    cplx operator()(int j, int k) const { return a_[j * n_ + k]; }
    void set(int j, int k, cplx v);
    double trace() const;
    double frobenius() const;

private:
    int n_;
    std::vector<cplx> a_;
};

std::vector<double> eigenvalues(const HermitianMatrix& H);
double sigma_k(const std::vector<double>& eigs, int k);

struct SmoothSample {
    std::function<double(const Point&)> u;
    double h = 0;  // 0 selects eps^(1/4) * (1 + |z|)
};

HermitianMatrix complex_hessian_fd(const SmoothSample& u, const Point& z);

struct MshResult {
    bool ok = true;
    int worst_k = 0;
    double worst_value = 0;
    Point witness;
};

MshResult msh_test(const SmoothSample& u, const HessianParams& p, const std::vector<Point>& points);

struct LelongResult {
    double estimate = 0;
    std::vector<double> radii;
    std::vector<double> ratios;
};

std::vector<double> geometric_radii(double r_start, int count = 11);

LelongResult lelong_number(const SmoothSample& u, const HessianParams& p, const Point& a,
                           const std::vector<double>& radii);
LelongResult lelong_number(const GridFunction& u, const HessianParams& p, const Point& a,
                           const std::vector<double>& radii);

}  // namespace hg
