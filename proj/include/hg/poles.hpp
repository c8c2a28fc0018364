#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "hg/kernel.hpp"

namespace hg {

// Real coordinates (Re z_1, Im z_1, ..., Re z_n, Im z_n).
using Point = std::vector<double>;

// Value standing for -infinity at a pole. Consumers test with at_pole().
inline constexpr double kPoleSentinel = std::numeric_limits<double>::lowest();
inline bool at_pole(double v) { return v == kPoleSentinel; }

double distance(const Point& a, const Point& b);
double norm(const Point& a);

struct WeightedPole {
    Point a;
    double nu;
};

class PoleSet {
public:
    PoleSet() = default;
    explicit PoleSet(std::vector<WeightedPole> poles);

    const std::vector<WeightedPole>& poles() const { return poles_; }
    const WeightedPole& operator[](std::size_t i) const { return poles_[i]; }
    std::size_t size() const { return poles_.size(); }
    bool empty() const { return poles_.empty(); }
    int dim() const { return poles_.empty() ? 0 : static_cast<int>(poles_[0].a.size() / 2); }
    double total_weight() const;
    double min_weight() const;

private:
    std::vector<WeightedPole> poles_;
};

struct DomainSpec {
    enum class Kind { Disk, Rectangle, Ball };

    Kind kind = Kind::Disk;
    Point center{0.0, 0.0};
    double R = 1.0;
    double xmin = -1, xmax = 1, ymin = -1, ymax = 1;

    static DomainSpec disk(double cx, double cy, double R);
    static DomainSpec rectangle(double x0, double x1, double y0, double y1);
    static DomainSpec ball(Point c, double R);

    int dim() const;
    double diam() const;
    // Exhaustion: |z-c|^2 - R^2 on balls, max of the two edge quadratics on rectangles.
    double rho(const Point& z) const;
    double lipschitz_M() const;
    // Distance to the boundary, positive inside and negative outside.
    double signed_distance(const Point& z) const;
    double boundary_distance(const Point& z) const;
    bool contains(const Point& z) const { return signed_distance(z) > 0; }
    void validate() const;
};

double min_separation(const PoleSet& A);
double weighted_distance(const HessianParams& p, const DomainSpec& dom, const PoleSet& A);
double phi_weight(const HessianParams& p, const PoleSet& A, const Point& z);
double psi_weight(const HessianParams& p, const PoleSet& A, const Point& z);
double psi_gradient_norm(const HessianParams& p, const PoleSet& A, const Point& z);
bool sublevel_contains(const HessianParams& p, const PoleSet& A, double delta, const Point& z);
bool sublevel_contains_balls(const HessianParams& p, const PoleSet& A, double delta, const Point& z);

double d_one(const WeightedPole& x, const WeightedPole& y);
double d_hausdorff(const PoleSet& A, const PoleSet& Ap);
double d_lelong(const PoleSet& A, const PoleSet& Ap);

struct FamilyCheck {
    bool in_E = false;
    bool in_F = false;
    bool card_bound_ok = false;
    double delta_A = 0;
    double min_nu = 0;
    double sum_nu = 0;
    double sigma_A = 0;
    std::size_t card = 0;
};

FamilyCheck family_check(const HessianParams& p, const DomainSpec& dom, const PoleSet& A,
                         const FamilyParams& f);

// Tightest family constants containing A.
FamilyParams tight_family(const HessianParams& p, const DomainSpec& dom, const PoleSet& A);

PoleSet read_poles_csv(std::istream& in);
void write_poles_csv(std::ostream& out, const PoleSet& A);
PoleSet read_poles_json(std::istream& in);
void write_poles_json(std::ostream& out, const PoleSet& A);
PoleSet load_poles(const std::string& path);
void save_poles(const std::string& path, const PoleSet& A);
// "inline:x1,y1,...,nu;x1,y1,...,nu" or a file path.
PoleSet parse_poles_arg(const std::string& arg);

}  // namespace hg
