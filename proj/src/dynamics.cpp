#include "wso/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wso {

double sup_dist(const Point& a, const Point& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

const char* to_string(FixedPointKind k) {
    switch (k) {
        case FixedPointKind::Attracting: return "Attracting";
        case FixedPointKind::Repelling: return "Repelling";
        case FixedPointKind::Saddle: return "Saddle";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// IntervalMap
// ---------------------------------------------------------------------------

namespace {
constexpr double kEndpointTol = 1e-12;
constexpr int kBisectionSteps = 60;
constexpr double kDerivStep = 1e-6;
constexpr int kValidationGrid = 1000;
}  // namespace

void IntervalMap::validate() const {
    if (std::abs(forward_(0.0)) > kEndpointTol)
        throw ValidationError(name_ + ": gamma(0) != 0");
    if (std::abs(forward_(1.0) - 1.0) > kEndpointTol)
        throw ValidationError(name_ + ": gamma(1) != 1");
    double prev = forward_(0.0);
    for (int i = 1; i <= kValidationGrid; ++i) {
        const double x = static_cast<double>(i) / kValidationGrid;
        const double y = forward_(x);
        if (!(y > prev))
            throw ValidationError(name_ + ": not strictly increasing near x = " +
                                  std::to_string(x));
        if (i < kValidationGrid && !(y > x))
            throw ValidationError(name_ + ": gamma(x) <= x at x = " + std::to_string(x));
        prev = y;
    }
}

double IntervalMap::inverse(double y) const {
    if (inverse_) return inverse_(y);
    if (y <= 0.0) return 0.0;
    if (y >= 1.0) return 1.0;
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < kBisectionSteps; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (forward_(mid) < y)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double IntervalMap::derivative(double x) const {
    if (derivative_) return derivative_(x);
    const double h = kDerivStep;
    if (x >= h && x <= 1.0 - h) return (forward_(x + h) - forward_(x - h)) / (2.0 * h);
    if (x < h)  // second-order one-sided difference at the left edge
        return (-3.0 * forward_(x) + 4.0 * forward_(x + h) - forward_(x + 2.0 * h)) / (2.0 * h);
    return (3.0 * forward_(x) - 4.0 * forward_(x - h) + forward_(x - 2.0 * h)) / (2.0 * h);
}

IntervalMap make_mobius(double c) {
    if (!(c > 1.0)) throw ValidationError("mobius family requires c > 1");
    IntervalMap m;
    m.forward_ = [c](double x) { return c * x / (1.0 + (c - 1.0) * x); };
    m.inverse_ = [c](double y) { return y / (c - (c - 1.0) * y); };
    m.derivative_ = [c](double x) {
        const double d = 1.0 + (c - 1.0) * x;
        return c / (d * d);
    };
    m.name_ = "mobius(" + std::to_string(c) + ")";
    m.validate();
    return m;
}

IntervalMap make_interval_map(const Expr& formula) {
    if (formula.arity() > 1) throw ValidationError("map formula must use only x1");
    IntervalMap m;
    Expr f = formula.arity() == 1 ? formula : formula.with_arity(1);
    m.forward_ = [f](double x) { return f.eval_scalar(x); };
    m.name_ = "formula " + formula.str();
    m.validate();
    return m;
}

IntervalMap make_interval_map(std::function<double(double)> forward,
                              std::function<double(double)> inverse,
                              std::function<double(double)> derivative, std::string name) {
    IntervalMap m;
    m.forward_ = std::move(forward);
    m.inverse_ = std::move(inverse);
    m.derivative_ = std::move(derivative);
    m.name_ = std::move(name);
    m.validate();
    return m;
}

// ---------------------------------------------------------------------------
// MapModel
// ---------------------------------------------------------------------------

MapModel MapModel::simplex(int m, IntervalMap gamma) {
    if (m < 1) throw ValidationError("simplex dimension must be >= 1");
    MapModel model;
    model.impl_ = SimplexModel{m, std::make_shared<const IntervalMap>(std::move(gamma))};
    return model;
}

MapModel MapModel::black_box(BlackBoxModel spec) {
    if (spec.dimension < 1) throw ValidationError("black box dimension must be >= 1");
    if (!spec.forward || !spec.inverse) throw ValidationError("black box needs both maps");
    if (!spec.contains) throw ValidationError("black box needs a membership test");
    if (spec.declared_fixed_points.empty())
        throw ValidationError("black box needs declared fixed points");
    MapModel model;
    model.impl_ = std::move(spec);
    return model;
}

int MapModel::dimension() const {
    if (const auto* s = std::get_if<SimplexModel>(&impl_)) return s->m;
    return std::get<BlackBoxModel>(impl_).dimension;
}

const IntervalMap& MapModel::gamma() const {
    if (const auto* s = std::get_if<SimplexModel>(&impl_)) return *s->gamma;
    throw ValidationError("black-box models have no interval map");
}

const BlackBoxModel* MapModel::black_box_spec() const {
    return std::get_if<BlackBoxModel>(&impl_);
}

bool MapModel::contains(const Point& x, double tol) const {
    if (static_cast<int>(x.size()) != dimension()) return false;
    if (std::holds_alternative<SimplexModel>(impl_)) {
        double prev = -tol;
        for (double v : x) {
            if (v < prev - tol || v > 1.0 + tol) return false;
            prev = v;
        }
        return x.front() >= -tol;
    }
    return std::get<BlackBoxModel>(impl_).contains(x);
}

Point MapModel::apply(const Point& x) const {
    if (const auto* s = std::get_if<SimplexModel>(&impl_)) {
        Point y(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            // endpoints are exact fixed values of gamma; pin them so faces
            // stay faces under iteration
            y[i] = (x[i] == 0.0 || x[i] == 1.0) ? x[i] : (*s->gamma)(x[i]);
        }
        return y;
    }
    return std::get<BlackBoxModel>(impl_).forward(x);
}

Point MapModel::apply_inverse(const Point& x) const {
    if (const auto* s = std::get_if<SimplexModel>(&impl_)) {
        Point y(x.size());
        for (std::size_t i = 0; i < x.size(); ++i)
            y[i] = (x[i] == 0.0 || x[i] == 1.0) ? x[i] : s->gamma->inverse(x[i]);
        return y;
    }
    return std::get<BlackBoxModel>(impl_).inverse(x);
}

Point iterate(const MapModel& model, Point x, long n) {
    if (!model.contains(x)) throw ValidationError("point outside the model domain");
    for (; n > 0; --n) x = model.apply(x);
    for (; n < 0; ++n) x = model.apply_inverse(x);
    return x;
}

// ---------------------------------------------------------------------------
// Limits and fixed points
// ---------------------------------------------------------------------------

namespace {

int limit_scan(const MapModel& model, const std::vector<FixedPoint>& fps, Point cur,
               bool forward, const LimitOptions& opt) {
    int candidate = -1;
    int streak = 0;
    for (long it = 0; it <= opt.max_iter; ++it) {
        int nearest = -1;
        double best = std::numeric_limits<double>::infinity();
        for (const FixedPoint& fp : fps) {
            const double d = sup_dist(cur, fp.coords);
            if (d < best) {
                best = d;
                nearest = fp.id;
            }
        }
        if (best < opt.tol) {
            if (nearest == candidate)
                ++streak;
            else {
                candidate = nearest;
                streak = 1;
            }
            if (streak >= opt.confirm_steps + 1) return candidate;
        } else {
            candidate = -1;
            streak = 0;
        }
        cur = forward ? model.apply(cur) : model.apply_inverse(cur);
    }
    throw NoConvergence("orbit did not settle near a fixed point within the budget");
}

}  // namespace

int forward_limit(const MapModel& model, const std::vector<FixedPoint>& fps, const Point& x,
                  const LimitOptions& opt) {
    return limit_scan(model, fps, x, true, opt);
}

int backward_limit(const MapModel& model, const std::vector<FixedPoint>& fps, const Point& x,
                   const LimitOptions& opt) {
    return limit_scan(model, fps, x, false, opt);
}

std::vector<FixedPoint> fixed_points(const MapModel& model) {
    if (!model.is_simplex())
        throw ValidationError("black-box models need a PRNG to classify fixed points");
    const int m = model.dimension();
    std::vector<FixedPoint> fps;
    fps.reserve(static_cast<std::size_t>(m) + 1);
    for (int k = 0; k <= m; ++k) {
        FixedPoint fp;
        fp.id = k;
        fp.coords.assign(static_cast<std::size_t>(m), 0.0);
        for (int i = m - k; i < m; ++i) fp.coords[static_cast<std::size_t>(i)] = 1.0;
        fp.kind = (k == 0)   ? FixedPointKind::Repelling
                  : (k == m) ? FixedPointKind::Attracting
                             : FixedPointKind::Saddle;
        fps.push_back(std::move(fp));
    }
    return fps;
}

std::vector<FixedPoint> fixed_points(const MapModel& model, Prng& rng, const KindOptions& opt) {
    if (model.is_simplex()) return fixed_points(model);
    const BlackBoxModel& bb = *model.black_box_spec();

    // verify the declared points, then classify kinds by limit sampling in
    // a small ball
    std::vector<FixedPoint> fps;
    int id = 0;
    for (const Point& p : bb.declared_fixed_points) {
        if (sup_dist(model.apply(p), p) > 1e-10)
            throw ValidationError("declared point " + std::to_string(id) +
                                  " fails the fixed-point check");
        FixedPoint fp;
        fp.id = id++;
        fp.coords = p;
        fps.push_back(std::move(fp));
    }

    auto sample_near = [&](const Point& center) {
        if (bb.sample_near) return bb.sample_near(center, opt.ball_radius, rng);
        for (int tries = 0; tries < 200; ++tries) {
            Point q(center.size());
            for (std::size_t i = 0; i < q.size(); ++i)
                q[i] = center[i] + rng.uniform(-opt.ball_radius, opt.ball_radius);
            if (bb.contains(q)) return q;
        }
        throw ValidationError("could not sample the domain near a declared fixed point");
    };

    for (FixedPoint& fp : fps) {
        bool all_forward = true, all_backward = true;
        for (int s = 0; s < opt.ball_samples && (all_forward || all_backward); ++s) {
            const Point q = sample_near(fp.coords);
            if (all_forward && forward_limit(model, fps, q, opt.limits) != fp.id)
                all_forward = false;
            if (all_backward && backward_limit(model, fps, q, opt.limits) != fp.id)
                all_backward = false;
        }
        fp.kind = all_forward    ? FixedPointKind::Attracting
                  : all_backward ? FixedPointKind::Repelling
                                 : FixedPointKind::Saddle;
    }
    return fps;
}

// ---------------------------------------------------------------------------
// Orbit blocks and fundamental domains
// ---------------------------------------------------------------------------

Point sample_simplex_face(int m, int zeros, int ones, Prng& rng) {
    if (zeros < 0 || ones < 0 || zeros + ones > m - 1)
        throw ValidationError("face class needs at least one interior coordinate");
    Point x(static_cast<std::size_t>(m));
    const int interior = m - zeros - ones;
    std::vector<double> mid(static_cast<std::size_t>(interior));
    for (auto& v : mid) v = rng.uniform(1e-6, 1.0 - 1e-6);
    std::sort(mid.begin(), mid.end());
    for (int i = 0; i < zeros; ++i) x[static_cast<std::size_t>(i)] = 0.0;
    for (int i = 0; i < interior; ++i)
        x[static_cast<std::size_t>(zeros + i)] = mid[static_cast<std::size_t>(i)];
    for (int i = 0; i < ones; ++i) x[static_cast<std::size_t>(zeros + interior + i)] = 1.0;
    return x;
}

OrbitBlock simplex_block(const MapModel& model, int source, int sink, double t) {
    if (!model.is_simplex()) throw ValidationError("orbit blocks need the simplex model");
    const int m = model.dimension();
    if (source < 0 || sink > m || source >= sink)
        throw ValidationError("block needs fixed point ids with source < sink");
    if (!(t > 0.0 && t < 1.0)) throw ValidationError("block parameter must be inside (0,1)");
    OrbitBlock b;
    b.source = source;
    b.sink = sink;
    b.base_point.assign(static_cast<std::size_t>(m), 0.0);
    for (int i = m - sink; i < m - source; ++i) b.base_point[static_cast<std::size_t>(i)] = t;
    for (int i = m - source; i < m; ++i) b.base_point[static_cast<std::size_t>(i)] = 1.0;
    return b;
}

FundamentalDomain fundamental_domain(const MapModel& model, const OrbitBlock& block,
                                     double anchor) {
    if (!model.is_simplex())
        throw ValidationError("fundamental domains are built for the simplex family");
    if (!(anchor > 0.0 && anchor < 1.0))
        throw ValidationError("anchor must lie strictly inside the basin (0,1)");
    FundamentalDomain dom;
    dom.source = block.source;
    dom.sink = block.sink;
    dom.lead_coordinate = model.dimension() - block.sink;  // first active coordinate
    dom.lower = anchor;
    dom.upper = model.gamma()(anchor);
    return dom;
}

long entry_index(const MapModel& model, const FundamentalDomain& domain, const Point& x,
                 long budget) {
    if (!model.is_simplex())
        throw ValidationError("entry_index is built for the simplex family");
    double v = x[static_cast<std::size_t>(domain.lead_coordinate)];
    if (!(v > 0.0 && v < 1.0))
        throw ValidationError("leading coordinate must be strictly inside (0,1)");
    const IntervalMap& g = model.gamma();
    long n = 0;
    while (v < domain.lower) {
        v = g(v);
        if (++n > budget) throw NoConvergence("entry_index forward budget exhausted");
    }
    while (v >= domain.upper) {
        v = g.inverse(v);
        if (--n < -budget) throw NoConvergence("entry_index backward budget exhausted");
    }
    return n;
}

CoeffSeq coeff_sequence(const MapModel& model, const std::vector<FixedPoint>& fps,
                        const CoeffFn& a, const Point& tau, long window_radius) {
    const int src = backward_limit(model, fps, tau);
    const int snk = forward_limit(model, fps, tau);

    const std::size_t n = static_cast<std::size_t>(2 * window_radius + 1);
    std::vector<double> values(n);
    values[static_cast<std::size_t>(window_radius)] = a(tau);
    Point fwd = tau, bwd = tau;
    for (long k = 1; k <= window_radius; ++k) {
        fwd = model.apply(fwd);
        bwd = model.apply_inverse(bwd);
        values[static_cast<std::size_t>(window_radius + k)] = a(fwd);
        values[static_cast<std::size_t>(window_radius - k)] = a(bwd);
    }
    const double a_minus = a(fps[static_cast<std::size_t>(src)].coords);
    const double a_plus = a(fps[static_cast<std::size_t>(snk)].coords);
    return CoeffSeq(std::move(values), a_minus, a_plus);
}

// ---------------------------------------------------------------------------
// Neighborhoods, residence bound, dwell witnesses
// ---------------------------------------------------------------------------

int Neighborhoods::locate(const Point& x) const {
    for (std::size_t i = 0; i < centers.size(); ++i)
        if (sup_dist(x, centers[i].coords) < radii[i]) return static_cast<int>(i);
    return -1;
}

void Neighborhoods::validate_disjoint() const {
    if (centers.size() != radii.size())
        throw ValidationError("one radius per fixed point required");
    for (std::size_t i = 0; i < centers.size(); ++i)
        for (std::size_t j = i + 1; j < centers.size(); ++j)
            if (sup_dist(centers[i].coords, centers[j].coords) < radii[i] + radii[j])
                throw ValidationError("neighborhoods overlap");
}

namespace {

constexpr double kSettleTol = 1e-12;

// Count orbit points outside every neighborhood, scanning one direction
// until the orbit numerically reaches a fixed point.
int count_outside(const MapModel& model, const Neighborhoods& nbhd, Point cur, bool forward,
                  bool count_start, long budget) {
    int count = 0;
    for (long it = 0; it <= budget; ++it) {
        if (it > 0 || count_start) {
            if (nbhd.locate(cur) < 0) ++count;
        }
        double nearest = std::numeric_limits<double>::infinity();
        for (const FixedPoint& fp : nbhd.centers)
            nearest = std::min(nearest, sup_dist(cur, fp.coords));
        if (nearest < kSettleTol) return count;
        cur = forward ? model.apply(cur) : model.apply_inverse(cur);
    }
    throw NoConvergence("residence scan did not settle within the budget");
}

}  // namespace

ResidenceResult residence_bound(const MapModel& model, const Neighborhoods& nbhd,
                                const std::vector<Point>& samples, long budget) {
    nbhd.validate_disjoint();
    int bound = 0;
    for (const Point& tau : samples) {
        const int fwd = count_outside(model, nbhd, tau, true, true, budget);
        const int bwd = count_outside(model, nbhd, model.apply_inverse(tau), false, true, budget);
        bound = std::max(bound, fwd + bwd);
    }
    return {bound, samples.size()};
}

DwellCheck check_dwell(const MapModel& model, const Neighborhoods& nbhd, int source, int sink,
                       const Point& x, long budget) {
    DwellCheck res;
    // classifications along the orbit, oldest first
    std::vector<int> where;
    auto settled = [&](const Point& p) {
        for (const FixedPoint& fp : nbhd.centers)
            if (sup_dist(p, fp.coords) < kSettleTol) return true;
        return false;
    };
    {
        std::vector<int> back;
        Point cur = model.apply_inverse(x);
        for (long it = 0; it < budget; ++it) {
            back.push_back(nbhd.locate(cur));
            if (settled(cur)) break;
            cur = model.apply_inverse(cur);
        }
        where.assign(back.rbegin(), back.rend());
    }
    Point cur = x;
    for (long it = 0; it < budget; ++it) {
        where.push_back(nbhd.locate(cur));
        if (settled(cur)) break;
        cur = model.apply(cur);
    }

    long last_source = -1, first_sink_after = -1;
    for (std::size_t i = 0; i < where.size(); ++i) {
        if (where[i] == source) {
            res.visits_source++;
            last_source = static_cast<long>(i);
        } else if (where[i] == sink) {
            res.visits_sink++;
            if (first_sink_after < 0) first_sink_after = static_cast<long>(i);
        }
    }
    res.clean_transit = last_source >= 0 && first_sink_after > last_source;
    if (res.clean_transit)
        for (long i = last_source + 1; i < first_sink_after; ++i)
            if (where[static_cast<std::size_t>(i)] != -1) res.clean_transit = false;
    return res;
}

Point dwell_witness(const MapModel& model, const Neighborhoods& nbhd, int source, int sink,
                    int dwell_steps, Prng& rng, long budget) {
    nbhd.validate_disjoint();
    if (dwell_steps < 0) throw ValidationError("dwell count must be nonnegative");

    auto refine = [&](Point y) -> std::optional<Point> {
        // pull the transit point back until it sits inside V_source, then
        // dwell_steps + 1 further so the forward orbit stays there > S steps
        long n0 = 0;
        const Point& c = nbhd.centers[static_cast<std::size_t>(source)].coords;
        const double r = nbhd.radii[static_cast<std::size_t>(source)];
        while (sup_dist(y, c) >= r) {
            y = model.apply_inverse(y);
            if (++n0 > budget) return std::nullopt;
        }
        for (int i = 0; i <= dwell_steps; ++i) y = model.apply_inverse(y);
        DwellCheck chk = check_dwell(model, nbhd, source, sink, y, budget);
        if (chk.visits_source > dwell_steps && chk.visits_sink > dwell_steps &&
            chk.clean_transit)
            return y;
        return std::nullopt;
    };

    if (model.is_simplex()) {
        // canonical block point with equal interior coordinates: its transit
        // keeps sup-distance >= 1/2 from every other corner
        const OrbitBlock block = simplex_block(model, source, sink, 0.5);
        if (auto w = refine(block.base_point)) return *w;
        throw WitnessNotFound("dwell refinement failed on the canonical block point");
    }

    const BlackBoxModel& bb = *model.black_box_spec();
    for (int tries = 0; tries < 500; ++tries) {
        Point cand = bb.sample(rng);
        try {
            if (backward_limit(model, nbhd.centers, cand) != source) continue;
            if (forward_limit(model, nbhd.centers, cand) != sink) continue;
        } catch (const NoConvergence&) {
            continue;
        }
        if (auto w = refine(cand)) return *w;
    }
    throw WitnessNotFound("search budget exhausted; no orbit satisfied the dwell condition");
}

}  // namespace wso
