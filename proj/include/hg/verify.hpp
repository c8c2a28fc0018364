#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "hg/poles.hpp"
#include "hg/report.hpp"
#include "hg/solver.hpp"

namespace hg {

// Halton sequence in [0,1)^dim, skipping the first 'skip' points.
class Halton {
public:
    explicit Halton(int dim, std::uint64_t skip = 0);
    std::vector<double> next();

private:
    int dim_;
    std::uint64_t index_;
};

// Scrambles the starting index of a Halton stream from a seed.
std::uint64_t halton_skip(std::uint64_t seed);

// FIneq1 outside A_delta, FIneq2 inside A_delta, FIneq3 everywhere. Throws when delta
// exceeds theta(sigma_A, 1/gamma1) and A has more than one pole.
Report check_lemma31(const HessianParams& p, const PoleSet& A, double delta, std::size_t samples,
                     std::uint64_t seed);

// FIneq6 and FIneq7 over pairs z outside A_delta, z' outside A'_delta inside the domain.
Report check_lemma42(const HessianParams& p, const DomainSpec& dom, const FamilyParams& f,
                     const PoleSet& A, const PoleSet& Ap, double delta, std::size_t samples,
                     std::uint64_t seed);

// Both sandwich chains. Grid carriers are checked at every non-singular interior node with
// a per-node allowance 5h(1 + |grad psi|); closed-form carriers at Halton samples.
// 'fault' is added to G before comparison (harness self-test).
Report check_sandwich(const GreenResult& G, std::size_t samples, std::uint64_t seed,
                      double fault = 0.0);

// Flux mass in a disk of the given radius around each pole of a grid carrier.
Report residual_mass_check(const GreenResult& G, const std::vector<double>& radii);

// Uniform barrier C*rho <= G <= 0 on shells |z - c| = t*R near the boundary of a disk.
Report boundary_decay_check(const HessianParams& p, const DomainSpec& dom,
                            const std::vector<PoleSet>& family_sample, const FamilyParams& f,
                            double delta1, const std::vector<double>& shells);

enum class ModulusMode { Space, Poles, Joint };

struct ModulusProblem {
    std::string id = "modulus";
    HessianParams p;
    DomainSpec dom;
    FamilyParams f;
    ModulusMode mode = ModulusMode::Joint;
    // tau for m < n, alpha for m = n.
    double exponent = 0.5;
    // exp G(z, A).
    std::function<double(const Point&, const PoleSet&)> exp_green;
    // Base pair (z, A) with z in the domain and A in F.
    std::function<std::pair<Point, PoleSet>(std::mt19937_64&)> base;
    // A' near A with d_H(A, A') <= eta.
    std::function<PoleSet(const PoleSet&, double, std::mt19937_64&)> perturb;
};

// Dyadic levels r_k = r_max * 2^-k; per level the sup and the 99% quantile of the
// normalized increment. The slope of log sup against log(1/r) gates the report.
Report modulus_fit(const ModulusProblem& prob, double r_max, int levels, std::size_t per_level,
                   std::uint64_t seed);

}  // namespace hg
