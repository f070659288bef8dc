#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "wso/discrete.hpp"
#include "wso/errors.hpp"
#include "wso/expr.hpp"
#include "wso/prng.hpp"

namespace wso {

using Point = std::vector<double>;

// Coefficient evaluator over the model domain.
using CoeffFn = std::function<double(const Point&)>;

// Sup-norm distance; the natural metric for coordinatewise dynamics, and the
// one all neighborhood radii below refer to.
double sup_dist(const Point& a, const Point& b);

// ---------------------------------------------------------------------------
// Interval diffeomorphisms gamma : [0,1] -> [0,1]
// ---------------------------------------------------------------------------

// Validated increasing diffeomorphism of [0,1] with gamma(0) = 0,
// gamma(1) = 1 and gamma(x) > x strictly inside. The inverse falls back to
// bisection (60 steps) when no closed form is supplied; the derivative falls
// back to a central difference with h = 1e-6.
class IntervalMap {
public:
    double operator()(double x) const { return forward_(x); }
    double inverse(double y) const;
    double derivative(double x) const;

    bool has_closed_inverse() const { return static_cast<bool>(inverse_); }
    const std::string& name() const { return name_; }

private:
    friend IntervalMap make_mobius(double c);
    friend IntervalMap make_interval_map(const Expr& formula);
    friend IntervalMap make_interval_map(std::function<double(double)> forward,
                                         std::function<double(double)> inverse,
                                         std::function<double(double)> derivative,
                                         std::string name);
    IntervalMap() = default;
    void validate() const;

    std::function<double(double)> forward_;
    std::function<double(double)> inverse_;     // optional closed form
    std::function<double(double)> derivative_;  // optional closed form
    std::string name_;
};

// Named family mobius(c): gamma(x) = c x / (1 + (c-1) x), c > 1. Closed-form
// inverse y / (c - (c-1) y) and derivative c / (1 + (c-1) x)^2.
IntervalMap make_mobius(double c);

// One-variable formula in x1; inverse by bisection, derivative by central
// difference.
IntervalMap make_interval_map(const Expr& formula);

// Fully explicit evaluators (used by tests and bespoke families).
IntervalMap make_interval_map(std::function<double(double)> forward,
                              std::function<double(double)> inverse,
                              std::function<double(double)> derivative, std::string name);

// ---------------------------------------------------------------------------
// Morse-Smale map models
// ---------------------------------------------------------------------------

enum class FixedPointKind { Attracting, Repelling, Saddle };

struct FixedPoint {
    int id = 0;
    Point coords;
    FixedPointKind kind = FixedPointKind::Saddle;
};

const char* to_string(FixedPointKind k);

// Black-box invertible map with declared fixed points. The membership test
// and sampler describe the domain; the sampler must reach every face that
// carries orbits, or edge discovery will miss them.
struct BlackBoxModel {
    int dimension = 0;
    std::function<Point(const Point&)> forward;
    std::function<Point(const Point&)> inverse;
    std::vector<Point> declared_fixed_points;
    std::function<bool(const Point&)> contains;
    std::function<Point(Prng&)> sample;
    // Optional: domain point within the given sup-ball. Required when the
    // domain is a null set of the ambient box (a face), where rejection
    // sampling from the ball cannot land.
    std::function<Point(const Point& center, double radius, Prng&)> sample_near;
};

// Coordinatewise product of one interval map on the ordered simplex
// X = {0 <= x_1 <= ... <= x_m <= 1}, or a black-box map. Immutable after
// construction; all operations on it are pure.
class MapModel {
public:
    static MapModel simplex(int m, IntervalMap gamma);
    static MapModel black_box(BlackBoxModel spec);

    int dimension() const;
    bool is_simplex() const { return std::holds_alternative<SimplexModel>(impl_); }
    bool contains(const Point& x, double tol = 1e-9) const;

    Point apply(const Point& x) const;
    Point apply_inverse(const Point& x) const;

    // The simplex variant's interval map; throws for black boxes.
    const IntervalMap& gamma() const;

    // The black-box spec, or nullptr for the simplex variant.
    const BlackBoxModel* black_box_spec() const;

private:
    struct SimplexModel {
        int m;
        std::shared_ptr<const IntervalMap> gamma;
    };
    std::variant<SimplexModel, BlackBoxModel> impl_;
    MapModel() = default;
};

// alpha^n(x); n < 0 uses the inverse map.
Point iterate(const MapModel& model, Point x, long n);

struct LimitOptions {
    double tol = 1e-9;
    int confirm_steps = 5;
    long max_iter = 100000;
};

// Id of the fixed point the forward (resp. backward) orbit of x converges
// to: first time the orbit comes within tol of a fixed point and stays
// there for confirm_steps more steps. Throws NoConvergence when the budget
// runs out, which signals a too-tight tolerance rather than divergence.
int forward_limit(const MapModel& model, const std::vector<FixedPoint>& fps, const Point& x,
                  const LimitOptions& opt = {});
int backward_limit(const MapModel& model, const std::vector<FixedPoint>& fps, const Point& x,
                   const LimitOptions& opt = {});

struct KindOptions {
    int ball_samples = 50;
    double ball_radius = 1e-3;
    LimitOptions limits;
};

// Fixed points with kinds. The simplex variant enumerates the m+1 corners
// F(k) analytically (k = 0 repelling, k = m attracting, saddles between).
// The black-box variant verifies each declared point to 1e-10 and classifies
// it by sampling forward/backward limits in a small ball.
std::vector<FixedPoint> fixed_points(const MapModel& model);
std::vector<FixedPoint> fixed_points(const MapModel& model, Prng& rng,
                                     const KindOptions& opt = {});

// One orbit class: every orbit with backward limit F_source and forward
// limit F_sink. base_point is a representative.
struct OrbitBlock {
    int source = 0;
    int sink = 0;
    Point base_point;
};

// Canonical representative of the block for the simplex family: zeros,
// then equal interior coordinates t, then ones.
OrbitBlock simplex_block(const MapModel& model, int source, int sink, double t = 0.5);

// One random point of a face class of the ordered simplex: `zeros` leading
// coordinates pinned at 0, `ones` trailing pinned at 1, the rest interior
// and sorted. The class carries the orbits F(ones) -> F(m - zeros).
Point sample_simplex_face(int m, int zeros, int ones, Prng& rng);

// Half-open section [c, gamma(c)) on the block's leading active coordinate.
// Iterating it tiles the block: alpha^k(Theta) are pairwise disjoint and
// every orbit crosses exactly once.
struct FundamentalDomain {
    int source = 0;
    int sink = 0;
    int lead_coordinate = 0;
    double lower = 0.0;  // c
    double upper = 0.0;  // gamma(c)

    bool contains(const Point& x) const {
        const double v = x[static_cast<std::size_t>(lead_coordinate)];
        return lower <= v && v < upper;
    }
};

FundamentalDomain fundamental_domain(const MapModel& model, const OrbitBlock& block,
                                     double anchor);

// The unique n with alpha^n(x) in the domain's section.
long entry_index(const MapModel& model, const FundamentalDomain& domain, const Point& x,
                 long budget = 100000);

// Coefficient sequence a(alpha^k(tau)) for k in [-K, K], with limits set to
// the coefficient values at the block's fixed points.
CoeffSeq coeff_sequence(const MapModel& model, const std::vector<FixedPoint>& fps,
                        const CoeffFn& a, const Point& tau, long window_radius);

// Pairwise disjoint sup-balls around the fixed points.
struct Neighborhoods {
    std::vector<FixedPoint> centers;
    std::vector<double> radii;

    // index of the ball containing x, or -1
    int locate(const Point& x) const;
    void validate_disjoint() const;
};

// Largest number of orbit points outside every neighborhood, over the given
// sample orbits.
struct ResidenceResult {
    int bound = 0;
    std::size_t samples = 0;
};
ResidenceResult residence_bound(const MapModel& model, const Neighborhoods& nbhd,
                                const std::vector<Point>& samples, long budget = 100000);

// A point whose orbit spends more than S steps in both endpoint
// neighborhoods of the edge and visits no other neighborhood in between.
Point dwell_witness(const MapModel& model, const Neighborhoods& nbhd, int source, int sink,
                    int dwell_steps, Prng& rng, long budget = 100000);

// Orbit statistics used to check a dwell witness.
struct DwellCheck {
    long visits_source = 0;
    long visits_sink = 0;
    bool clean_transit = false;  // no other neighborhood between the two
};
DwellCheck check_dwell(const MapModel& model, const Neighborhoods& nbhd, int source, int sink,
                       const Point& x, long budget = 100000);

}  // namespace wso
