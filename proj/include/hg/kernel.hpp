#pragma once

namespace hg {

// Order m, complex dimension n and the scale radius of the logarithmic kernel.
struct HessianParams {
    int m = 1;
    int n = 1;
    double R0 = 4.0;

    double s() const { return static_cast<double>(n - m) / m; }
    bool logarithmic() const { return m == n; }
    void validate() const;
};

HessianParams make_params(int m, int n, double R0 = 4.0);

// Scale used when none is given: keeps the closure of the domain inside B(0, R0/2).
double default_R0(double diam);

struct FamilyParams {
    double delta0 = 0.1;
    double gamma0 = 1.0;
    double gamma1 = 2.0;
    double sigma0 = 0.1;

    void validate() const;
};

double phi(const HessianParams& p, double r);
double phi_prime(const HessianParams& p, double r);
double phi_inv(const HessianParams& p, double t);
double theta(const HessianParams& p, double delta, double nu);
double f_mod(const HessianParams& p, double gamma0, double t);

struct LipschitzConstants {
    double L;
    double Lp;
};

LipschitzConstants lipschitz_constants(const HessianParams& p, const FamilyParams& f);

double tau_of_alpha(const HessianParams& p, double alpha);
double schedule_r0(const HessianParams& p, const FamilyParams& f);

struct Schedule {
    double delta;
    double eps;
    double tau;
    double r0;
    double R1;
};

// For m = n the constant C2 of the logarithmic schedule is C0 + C1.
Schedule perturbation_schedule(const HessianParams& p, const FamilyParams& f, double C0, double C1,
                               double r, double alpha = 0.0);

}  // namespace hg
