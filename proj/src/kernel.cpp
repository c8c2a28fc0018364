#include "hg/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hg {

namespace {

void require_finite(double x, const char* what)
{
    if (!std::isfinite(x))
        throw std::domain_error(std::string(what) + ": non-finite input");
}

}  // namespace

void HessianParams::validate() const
{
    if (m < 1 || n < m)
        throw std::invalid_argument("HessianParams: need 1 <= m <= n");
    if (!(R0 > 0) || !std::isfinite(R0))
        throw std::invalid_argument("HessianParams: R0 must be positive");
}

HessianParams make_params(int m, int n, double R0)
{
    HessianParams p{m, n, R0};
    p.validate();
    return p;
}

double default_R0(double diam) { return 2.0 * diam + 1.0; }

void FamilyParams::validate() const
{
    if (!(delta0 > 0) || !(sigma0 > 0))
        throw std::invalid_argument("FamilyParams: delta0 and sigma0 must be positive");
    if (!(gamma0 > 0) || !(gamma1 > gamma0))
        throw std::invalid_argument("FamilyParams: need 0 < gamma0 < gamma1");
}

double phi(const HessianParams& p, double r)
{
    require_finite(r, "phi");
    if (!(r > 0))
        throw std::domain_error("phi: radius must be positive");
    if (p.logarithmic()) {
        if (r > p.R0)
            throw std::domain_error("phi: radius exceeds R0 for the logarithmic kernel");
        return std::log(r / p.R0);
    }
    return -std::pow(r, -2.0 * p.s());
}

double phi_prime(const HessianParams& p, double r)
{
    require_finite(r, "phi_prime");
    if (!(r > 0))
        throw std::domain_error("phi_prime: radius must be positive");
    if (p.logarithmic())
        return 1.0 / r;
    double s = p.s();
    return 2.0 * s * std::pow(r, -2.0 * s - 1.0);
}

double phi_inv(const HessianParams& p, double t)
{
    require_finite(t, "phi_inv");
    if (p.logarithmic()) {
        if (t > 0)
            throw std::domain_error("phi_inv: value above 0 is outside the range");
        return p.R0 * std::exp(t);
    }
    if (!(t < 0))
        throw std::domain_error("phi_inv: value must be negative");
    return std::pow(-t, -1.0 / (2.0 * p.s()));
}

double theta(const HessianParams& p, double delta, double nu)
{
    require_finite(delta, "theta");
    require_finite(nu, "theta");
    if (!(delta > 0) || !(nu > 0))
        throw std::domain_error("theta: delta and nu must be positive");
    if (p.logarithmic()) {
        if (delta > p.R0)
            throw std::domain_error("theta: delta exceeds R0");
        return p.R0 * std::pow(delta / p.R0, 1.0 / nu);
    }
    return std::pow(nu, 1.0 / (2.0 * p.s())) * delta;
}

double f_mod(const HessianParams& p, double gamma0, double t)
{
    require_finite(t, "f_mod");
    if (!(t > 0))
        throw std::domain_error("f_mod: t must be positive");
    if (p.logarithmic()) {
        if (!(gamma0 > 0))
            throw std::domain_error("f_mod: gamma0 must be positive");
        return std::pow(t, -1.0 / gamma0);
    }
    return std::pow(t, -2.0 * p.s() - 1.0);
}

LipschitzConstants lipschitz_constants(const HessianParams& p, const FamilyParams& f)
{
    p.validate();
    f.validate();
    if (p.logarithmic()) {
        double L = f.gamma1 * std::pow(p.R0, 1.0 / f.gamma0);
        return {L, L};
    }
    double s = p.s();
    double a = 2.0 * s * f.gamma1 * std::pow(f.gamma0, -(2.0 * s + 1.0) / (2.0 * s));
    return {std::max(a, f.delta0 / f.gamma0),
            std::max(a, f.gamma1 * f.delta0 / (f.gamma0 * f.gamma0))};
}

double tau_of_alpha(const HessianParams& p, double alpha)
{
    double s = p.s();
    return (1.0 - alpha) * 2.0 * s / (2.0 * s + 1.0);
}

double schedule_r0(const HessianParams& p, const FamilyParams& f)
{
    p.validate();
    f.validate();
    if (!p.logarithmic()) {
        double s = p.s();
        double a = std::pow(2.0, -(2.0 * s + 1.0) / (2.0 * s)) *
                   std::pow(f.gamma0, (2.0 * s + 1.0) / (4.0 * s * s));
        return std::min(a, std::pow(f.delta0, 2.0 * s + 1.0));
    }
    // Largest r0 <= 1 with r0*delta <= theta(delta,nu) - theta(delta/2,nu) for all
    // nu in [gamma0, gamma1] at delta = delta0.
    double d = std::min(f.delta0, p.R0) / p.R0;
    double r0 = 1.0;
    const int steps = 256;
    for (int i = 0; i <= steps; ++i) {
        double nu = f.gamma0 + (f.gamma1 - f.gamma0) * i / steps;
        double g = (1.0 - std::pow(2.0, -1.0 / nu)) * std::pow(d, 1.0 / nu - 1.0);
        r0 = std::min(r0, g);
    }
    return r0;
}

Schedule perturbation_schedule(const HessianParams& p, const FamilyParams& f, double C0, double C1,
                               double r, double alpha)
{
    require_finite(r, "perturbation_schedule");
    if (!(alpha >= 0 && alpha < 1))
        throw std::domain_error("perturbation_schedule: alpha must lie in [0, 1)");
    double r0 = schedule_r0(p, f);
    if (!(r > 0) || r > r0)
        throw std::domain_error("perturbation_schedule: r outside (0, r0]");
    Schedule out{};
    out.r0 = r0;
    out.tau = tau_of_alpha(p, alpha);
    if (!p.logarithmic()) {
        double s = p.s();
        out.delta = std::pow(r, 1.0 / (2.0 * s + 1.0));
        out.eps = (C0 + C1) * std::pow(r, 2.0 * s / (2.0 * s + 1.0));
        out.R1 = 0.0;
        return out;
    }
    out.R1 = std::pow(p.R0, 1.0 / f.gamma0);
    if (!(r < out.R1))
        throw std::domain_error("perturbation_schedule: r must be below R1");
    out.delta = std::pow(r0, -f.gamma0) * std::pow(r, f.gamma0);
    out.eps = (C0 + C1) / std::log(out.R1 / r);
    return out;
}

}  // namespace hg
