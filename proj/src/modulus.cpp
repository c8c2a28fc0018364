#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hg/verify.hpp"

namespace hg {

Report modulus_fit(const ModulusProblem& prob, double r_max, int levels, std::size_t per_level,
                   std::uint64_t seed)
{
    const auto& p = prob.p;
    p.validate();
    prob.f.validate();
    if (!prob.exp_green || !prob.base)
        throw std::invalid_argument("modulus_fit: evaluator and base sampler are required");
    if (prob.mode != ModulusMode::Space && !prob.perturb)
        throw std::invalid_argument("modulus_fit: pole modes need a perturbation sampler");
    if (levels < 3 || per_level == 0)
        throw std::invalid_argument("modulus_fit: need at least 3 levels and one sample per level");
    if (!(prob.exponent > 0 && prob.exponent < 1))
        throw std::invalid_argument("modulus_fit: exponent must lie in (0, 1)");
    const double r1 = schedule_r0(p, prob.f);
    if (!(r_max > 0) || r_max > r1)
        throw std::domain_error("modulus_fit: r_max beyond the schedule radius r1");
    double R1 = 0;
    if (p.logarithmic()) {
        R1 = std::pow(p.R0, 1.0 / prob.f.gamma0);
        if (!(r_max < R1))
            throw std::domain_error("modulus_fit: r_max must be below R1");
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::normal_distribution<double> nd;

    Report rep;
    rep.id = prob.id;
    rep.seed = seed;
    rep.columns = {"r", "sup_ratio", "q99_ratio"};
    std::vector<double> xs, ys;
    double M = 0;
    std::size_t total = 0;
    for (int k = 0; k < levels; ++k) {
        const double r = r_max * std::ldexp(1.0, -k);
        std::vector<double> ratios;
        ratios.reserve(per_level);
        std::size_t tries = 0;
        while (ratios.size() < per_level) {
            if (++tries > 100 * per_level + 1000)
                throw std::runtime_error("modulus_fit: sampler rejected too many pairs");
            auto [z, A] = prob.base(rng);
            if (!family_check(p, prob.dom, A, prob.f).in_F)
                throw std::invalid_argument("modulus_fit: base sampler produced a pole set outside F");
            double lambda = prob.mode == ModulusMode::Space ? 1.0
                            : prob.mode == ModulusMode::Poles ? 0.0
                                                              : uni(rng);
            Point zp = z;
            if (lambda > 0) {
                Point e(z.size());
                for (double& x : e)
                    x = nd(rng);
                double en = norm(e);
                for (std::size_t i = 0; i < z.size(); ++i)
                    zp[i] += lambda * r * e[i] / en;
            }
            if (!prob.dom.contains(zp))
                continue;
            PoleSet Ap = lambda < 1 ? prob.perturb(A, (1 - lambda) * r, rng) : A;
            if (!family_check(p, prob.dom, Ap, prob.f).in_F)
                throw std::invalid_argument("modulus_fit: sampler produced a pole set outside F");
            double rr = distance(z, zp) + d_hausdorff(A, Ap);
            if (rr > r * (1 + 1e-9) + 1e-15)
                throw std::invalid_argument("modulus_fit: sampled pair beyond the level radius");
            if (!(rr > 0))
                continue;
            double diff = std::abs(prob.exp_green(zp, Ap) - prob.exp_green(z, A));
            double ratio = p.logarithmic() ? diff * std::pow(std::log(R1 / rr), prob.exponent)
                                           : diff / std::pow(rr, prob.exponent);
            ratios.push_back(ratio);
        }
        total += ratios.size();
        std::sort(ratios.begin(), ratios.end());
        double sup = ratios.back();
        double q99 = ratios[static_cast<std::size_t>(std::floor(0.99 * (ratios.size() - 1)))];
        M = std::max(M, sup);
        rep.rows.push_back({r, sup, q99});
        xs.push_back(std::log(1 / r));
        ys.push_back(std::log(std::max(sup, std::numeric_limits<double>::min())));
    }

    // Least-squares slope of log(sup ratio) against log(1/r).
    const double n = static_cast<double>(xs.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i] / n;
        my += ys[i] / n;
    }
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    double slope = sxy / sxx;

    rep.samples = total;
    rep.M = M;
    rep.slope = slope;
    rep.max_violation = slope;
    rep.budget = 0.05;
    rep.params = {{"m", p.m}, {"n", p.n}, {"R0", p.R0},
                  {"mode", prob.mode == ModulusMode::Space ? "space"
                           : prob.mode == ModulusMode::Poles ? "poles" : "joint"},
                  {p.logarithmic() ? "alpha" : "tau", prob.exponent},
                  {"r_max", r_max}, {"levels", levels}, {"per_level", per_level}, {"r1", r1}};
    rep.finalize();
    return rep;
}

}  // namespace hg
