#include "hg/poles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hg {

double distance(const Point& a, const Point& b)
{
    if (a.size() != b.size())
        throw std::invalid_argument("distance: dimension mismatch");
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

double norm(const Point& a)
{
    double s = 0;
    for (double x : a)
        s += x * x;
    return std::sqrt(s);
}

PoleSet::PoleSet(std::vector<WeightedPole> poles) : poles_(std::move(poles))
{
    if (poles_.empty())
        throw std::invalid_argument("PoleSet: at least one pole required");
    std::size_t d = poles_[0].a.size();
    if (d == 0 || d % 2 != 0)
        throw std::invalid_argument("PoleSet: positions need 2n real coordinates");
    for (const auto& q : poles_) {
        if (q.a.size() != d)
            throw std::invalid_argument("PoleSet: mixed dimensions");
        if (!(q.nu > 0) || !std::isfinite(q.nu))
            throw std::invalid_argument("PoleSet: weights must be positive and finite");
        for (double x : q.a)
            if (!std::isfinite(x))
                throw std::invalid_argument("PoleSet: non-finite coordinate");
    }
    for (std::size_t i = 0; i < poles_.size(); ++i)
        for (std::size_t j = i + 1; j < poles_.size(); ++j)
            if (poles_[i].a == poles_[j].a)
                throw std::invalid_argument("PoleSet: duplicate pole position");
}

double PoleSet::total_weight() const
{
    double s = 0;
    for (const auto& q : poles_)
        s += q.nu;
    return s;
}

double PoleSet::min_weight() const
{
    double s = std::numeric_limits<double>::infinity();
    for (const auto& q : poles_)
        s = std::min(s, q.nu);
    return s;
}

DomainSpec DomainSpec::disk(double cx, double cy, double R)
{
    DomainSpec d;
    d.kind = Kind::Disk;
    d.center = {cx, cy};
    d.R = R;
    d.validate();
    return d;
}

DomainSpec DomainSpec::rectangle(double x0, double x1, double y0, double y1)
{
    DomainSpec d;
    d.kind = Kind::Rectangle;
    d.xmin = x0;
    d.xmax = x1;
    d.ymin = y0;
    d.ymax = y1;
    d.center = {(x0 + x1) / 2, (y0 + y1) / 2};
    d.validate();
    return d;
}

DomainSpec DomainSpec::ball(Point c, double R)
{
    DomainSpec d;
    d.kind = Kind::Ball;
    d.center = std::move(c);
    d.R = R;
    d.validate();
    return d;
}

void DomainSpec::validate() const
{
    if (kind == Kind::Rectangle) {
        if (!(xmax > xmin) || !(ymax > ymin))
            throw std::invalid_argument("DomainSpec: degenerate rectangle");
        return;
    }
    if (!(R > 0) || !std::isfinite(R))
        throw std::invalid_argument("DomainSpec: radius must be positive");
    if (center.empty() || center.size() % 2 != 0)
        throw std::invalid_argument("DomainSpec: center needs 2n coordinates");
    if (kind == Kind::Disk && center.size() != 2)
        throw std::invalid_argument("DomainSpec: disk lives in C^1");
}

int DomainSpec::dim() const
{
    return kind == Kind::Rectangle ? 1 : static_cast<int>(center.size() / 2);
}

double DomainSpec::diam() const
{
    if (kind == Kind::Rectangle)
        return std::hypot(xmax - xmin, ymax - ymin);
    return 2 * R;
}

double DomainSpec::rho(const Point& z) const
{
    if (kind == Kind::Rectangle) {
        double a = (z[0] - xmin) * (z[0] - xmax);
        double b = (z[1] - ymin) * (z[1] - ymax);
        return std::max(a, b);
    }
    double r = distance(z, center);
    return r * r - R * R;
}

double DomainSpec::lipschitz_M() const
{
    if (kind == Kind::Rectangle)
        return std::max(xmax - xmin, ymax - ymin);
    return 2 * R;
}

double DomainSpec::signed_distance(const Point& z) const
{
    if (kind == Kind::Rectangle) {
        double dx = std::min(z[0] - xmin, xmax - z[0]);
        double dy = std::min(z[1] - ymin, ymax - z[1]);
        if (dx >= 0 && dy >= 0)
            return std::min(dx, dy);
        return -std::hypot(std::min(dx, 0.0), std::min(dy, 0.0));
    }
    return R - distance(z, center);
}

double DomainSpec::boundary_distance(const Point& z) const { return signed_distance(z); }

double min_separation(const PoleSet& A)
{
    if (A.size() < 2)
        return std::numeric_limits<double>::infinity();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < A.size(); ++i)
        for (std::size_t j = i + 1; j < A.size(); ++j)
            best = std::min(best, distance(A[i].a, A[j].a));
    return 0.5 * best;
}

double weighted_distance(const HessianParams& p, const DomainSpec& dom, const PoleSet& A)
{
    double best = std::numeric_limits<double>::infinity();
    for (const auto& q : A.poles()) {
        double d = dom.boundary_distance(q.a);
        if (!(d > 0))
            throw std::domain_error("weighted_distance: pole on or outside the boundary");
        best = std::min(best, theta(p, d, 1.0 / q.nu));
    }
    return best;
}

double phi_weight(const HessianParams& p, const PoleSet& A, const Point& z)
{
    double best = std::numeric_limits<double>::infinity();
    for (const auto& q : A.poles()) {
        double r = distance(z, q.a);
        if (r == 0)
            return kPoleSentinel;
        best = std::min(best, q.nu * phi(p, r));
    }
    return best;
}

double psi_weight(const HessianParams& p, const PoleSet& A, const Point& z)
{
    double s = 0;
    for (const auto& q : A.poles()) {
        double r = distance(z, q.a);
        if (r == 0)
            return kPoleSentinel;
        s += q.nu * phi(p, r);
    }
    return s;
}

double psi_gradient_norm(const HessianParams& p, const PoleSet& A, const Point& z)
{
    Point g(z.size(), 0.0);
    for (const auto& q : A.poles()) {
        double r = distance(z, q.a);
        if (r == 0)
            return std::numeric_limits<double>::infinity();
        double c = q.nu * phi_prime(p, r) / r;
        for (std::size_t i = 0; i < z.size(); ++i)
            g[i] += c * (z[i] - q.a[i]);
    }
    return norm(g);
}

bool sublevel_contains(const HessianParams& p, const PoleSet& A, double delta, const Point& z)
{
    if (!(delta > 0))
        throw std::domain_error("sublevel_contains: delta must be positive");
    double t = phi(p, delta);
    for (const auto& q : A.poles()) {
        double r = distance(z, q.a);
        if (r == 0)
            return true;
        if (p.logarithmic() && r > p.R0)
            continue;
        if (q.nu * phi(p, r) < t)
            return true;
    }
    return false;
}

bool sublevel_contains_balls(const HessianParams& p, const PoleSet& A, double delta, const Point& z)
{
    for (const auto& q : A.poles())
        if (distance(z, q.a) < theta(p, delta, q.nu))
            return true;
    return false;
}

double d_one(const WeightedPole& x, const WeightedPole& y)
{
    return distance(x.a, y.a) + std::abs(x.nu - y.nu);
}

namespace {

double directed_hausdorff(const PoleSet& A, const PoleSet& B)
{
    double worst = 0;
    for (const auto& x : A.poles()) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& y : B.poles())
            best = std::min(best, d_one(x, y));
        worst = std::max(worst, best);
    }
    return worst;
}

}  // namespace

double d_hausdorff(const PoleSet& A, const PoleSet& Ap)
{
    if (A.empty() || Ap.empty())
        throw std::invalid_argument("d_hausdorff: empty set");
    if (A.dim() != Ap.dim())
        throw std::invalid_argument("d_hausdorff: dimension mismatch");
    return std::max(directed_hausdorff(A, Ap), directed_hausdorff(Ap, A));
}

double d_lelong(const PoleSet& A, const PoleSet& Ap)
{
    if (A.size() != Ap.size())
        throw std::invalid_argument("d_lelong: length mismatch");
    if (A.dim() != Ap.dim())
        throw std::invalid_argument("d_lelong: dimension mismatch");
    // Positions are compared coordinatewise: sum of the moduli of the complex coordinates.
    double s = 0;
    for (std::size_t k = 0; k < A.size(); ++k) {
        const auto& a = A[k].a;
        const auto& b = Ap[k].a;
        for (std::size_t i = 0; i + 1 < a.size(); i += 2)
            s += std::hypot(a[i] - b[i], a[i + 1] - b[i + 1]);
        s += std::abs(A[k].nu - Ap[k].nu);
    }
    return s;
}

FamilyCheck family_check(const HessianParams& p, const DomainSpec& dom, const PoleSet& A,
                         const FamilyParams& f)
{
    FamilyCheck c;
    c.card = A.size();
    c.min_nu = A.min_weight();
    c.sum_nu = A.total_weight();
    c.sigma_A = min_separation(A);
    bool interior = true;
    for (const auto& q : A.poles())
        interior = interior && dom.boundary_distance(q.a) > 0;
    c.delta_A = interior ? weighted_distance(p, dom, A) : 0.0;
    c.in_E = interior && c.delta_A >= f.delta0 && c.min_nu >= f.gamma0 && c.sum_nu <= f.gamma1;
    c.in_F = c.in_E && c.sigma_A >= f.sigma0;
    c.card_bound_ok = !c.in_E || static_cast<double>(c.card) <= f.gamma1 / f.gamma0;
    return c;
}

FamilyParams tight_family(const HessianParams& p, const DomainSpec& dom, const PoleSet& A)
{
    FamilyParams f;
    f.delta0 = weighted_distance(p, dom, A);
    f.gamma0 = A.min_weight();
    f.gamma1 = A.total_weight();
    if (!(f.gamma1 > f.gamma0))
        f.gamma1 = f.gamma0 * (1 + 1e-12) + 1e-300;
    double sigma = min_separation(A);
    f.sigma0 = std::isfinite(sigma) ? sigma : dom.diam();
    return f;
}

}  // namespace hg
