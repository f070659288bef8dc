#include "wso/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace wso {

namespace {

bool circle_hit(double w, double modulus, double tol) {
    return std::abs(w - modulus) <= tol * std::max(w, modulus);
}

std::vector<double> graph_weights(const FixedPointGraph& graph) {
    std::vector<double> w;
    w.reserve(graph.vertices.size());
    for (const GraphVertex& v : graph.vertices) w.push_back(v.weight);
    return w;
}

}  // namespace

Annulus annulus(const std::vector<double>& weights) {
    if (weights.empty()) throw ValidationError("weights must be nonempty");
    for (double w : weights)
        if (!(w > 0.0))
            throw ValidationError("weights must be positive (a(x) != 0 everywhere)");
    const auto [lo, hi] = std::minmax_element(weights.begin(), weights.end());
    return {*lo, *hi};
}

std::vector<double> circles(const std::vector<double>& weights) {
    std::vector<double> c = weights;
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    return c;
}

WeightOrder weight_order(const std::vector<double>& weights, double lambda_modulus) {
    WeightOrder wo;
    wo.order.resize(weights.size());
    std::iota(wo.order.begin(), wo.order.end(), 0);
    std::sort(wo.order.begin(), wo.order.end(),
              [&](int a, int b) { return weights[static_cast<std::size_t>(a)] <
                                         weights[static_cast<std::size_t>(b)]; });
    for (std::size_t i = 1; i < wo.order.size(); ++i)
        if (weights[static_cast<std::size_t>(wo.order[i - 1])] ==
            weights[static_cast<std::size_t>(wo.order[i])])
            throw ValidationError("weight ordering needs pairwise distinct weights");
    for (double w : weights) wo.below_count += w < lambda_modulus;
    return wo;
}

bool simplex_theorem_applies(const FixedPointGraph& graph) {
    const int n = static_cast<int>(graph.vertices.size());
    if (n < 2 || !graph.density_flag) return false;
    for (int i = 0; i < n; ++i)
        if (graph.vertices[static_cast<std::size_t>(i)].id != i) return false;

    std::vector<std::pair<int, int>> tournament;
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k) tournament.emplace_back(j, k);
    if (graph.edges != tournament) return false;

    std::vector<double> w = graph_weights(graph);
    std::set<double> distinct(w.begin(), w.end());
    if (distinct.size() != w.size()) return false;
    if (std::any_of(w.begin(), w.end(), [](double x) { return !(x > 0.0); })) return false;
    return w.front() < w.back();
}

std::optional<Classification> merge_classifications(const Classification& a,
                                                    const Classification& b) {
    if (a.status != b.status) return std::nullopt;

    auto join_kernel = [](KernelVerdict x, KernelVerdict y) -> std::optional<KernelVerdict> {
        if (x == y) return x;
        if (x == KernelVerdict::Unknown) return y;
        if (y == KernelVerdict::Unknown) return x;
        return std::nullopt;
    };
    auto join_range = [](RangeVerdict x, RangeVerdict y) -> std::optional<RangeVerdict> {
        if (x == y) return x;
        if (x == RangeVerdict::Unknown) return y;
        if (y == RangeVerdict::Unknown) return x;
        auto refines = [](RangeVerdict coarse, RangeVerdict fine) {
            return (coarse == RangeVerdict::NotClosed && fine == RangeVerdict::DenseNotClosed) ||
                   (coarse == RangeVerdict::Closed && fine == RangeVerdict::ClosedNotDense);
        };
        if (refines(x, y)) return y;
        if (refines(y, x)) return x;
        return std::nullopt;
    };

    auto kernel = join_kernel(a.kernel, b.kernel);
    auto range = join_range(a.range, b.range);
    if (!kernel || !range) return std::nullopt;

    Classification out = a;
    out.kernel = *kernel;
    out.range = *range;
    out.provenance = a.provenance == b.provenance ? a.provenance : Provenance::Both;
    if (out.circle_hits.empty()) out.circle_hits = b.circle_hits;
    return out;
}

Classification classify_main(const FixedPointGraph& graph, Complex lambda, double circle_tol) {
    const std::vector<double> weights = graph_weights(graph);
    const Annulus ring = annulus(weights);
    const double L = std::abs(lambda);

    Classification c;
    c.lambda = lambda;
    c.provenance = Provenance::MainTheorem;

    const Decomposition dec = decompose(graph, L, circle_tol);
    if (!dec.valid()) {
        c.status = ClassStatus::OnCircle;
        c.circle_hits = dec.circle_hits;
        c.kernel = KernelVerdict::Unknown;
        // not one-sided invertible on a circle; with a dense orbit class the
        // range cannot be closed either
        c.range = graph.density_flag ? RangeVerdict::NotClosed : RangeVerdict::Unknown;
    } else if (L < ring.r || L > ring.R) {
        c.status = ClassStatus::OutsideSpectrum;
        c.kernel = KernelVerdict::Zero;
        c.range = RangeVerdict::Closed;
    } else {
        switch (orientation(graph, dec)) {
            case Orientation::NoCross:
                // no block obstructs: resolvent point (possible only when
                // the graph is disconnected across the partition)
                c.status = ClassStatus::OutsideSpectrum;
                c.kernel = KernelVerdict::Zero;
                c.range = RangeVerdict::Closed;
                break;
            case Orientation::RightOriented:
                c.status = ClassStatus::RightInvertible;
                c.kernel = KernelVerdict::InfiniteDim;  // surjective, non-invertible
                c.range = RangeVerdict::Closed;
                break;
            case Orientation::LeftOriented:
                c.status = ClassStatus::LeftInvertible;
                c.kernel = KernelVerdict::Zero;
                c.range = RangeVerdict::ClosedNotDense;  // proper closed subspace
                break;
            case Orientation::Mixed:
                c.status = ClassStatus::NotOneSided;
                c.kernel = KernelVerdict::Unknown;
                c.range = graph.density_flag ? RangeVerdict::NotClosed : RangeVerdict::Unknown;
                break;
        }
    }

    return c;
}

Classification classify(const FixedPointGraph& graph, Complex lambda, double circle_tol) {
    Classification c = classify_main(graph, lambda, circle_tol);
    if (simplex_theorem_applies(graph)) {
        const Classification s = classify_simplex(graph_weights(graph), lambda, circle_tol);
        auto merged = merge_classifications(c, s);
        if (!merged)
            throw Error("graph and simplex classifications contradict; this is a bug");
        merged->provenance = Provenance::Both;
        return *merged;
    }
    return c;
}

Classification classify_simplex(const std::vector<double>& weights, Complex lambda,
                                double circle_tol) {
    const Annulus ring = annulus(weights);
    const int m = static_cast<int>(weights.size()) - 1;
    const double w_first = weights.front();
    const double w_last = weights.back();
    {
        std::set<double> distinct(weights.begin(), weights.end());
        if (distinct.size() != weights.size())
            throw ValidationError("simplex classifier assumes pairwise distinct weights");
    }
    if (!(w_first < w_last))
        throw ValidationError("simplex classifier assumes |a(F0)| < |a(Fm)|");

    const double L = std::abs(lambda);
    Classification c;
    c.lambda = lambda;
    c.provenance = Provenance::SimplexTheorem;

    std::vector<int> hits;
    for (int i = 0; i <= m; ++i)
        if (circle_hit(weights[static_cast<std::size_t>(i)], L, circle_tol)) hits.push_back(i);

    if (!hits.empty()) {
        c.status = ClassStatus::OnCircle;
        c.circle_hits = hits;
        const bool boundary_case = hits.front() == 0 || hits.back() == m;
        if (boundary_case) {
            // |lambda| = |a(F0)| or |a(Fm)|: the range is not closed; the
            // theorem says nothing further here
            c.kernel = KernelVerdict::Unknown;
            c.range = RangeVerdict::NotClosed;
        } else if (w_first < L && L < w_last) {
            // interior circle inside the middle band: kernel statement of
            // the band still applies, and density plus no one-sided inverse
            // rules out a closed range
            c.kernel = KernelVerdict::InfiniteDim;
            c.range = RangeVerdict::DenseNotClosed;
        } else {
            c.kernel = KernelVerdict::Zero;
            c.range = RangeVerdict::DenseNotClosed;
        }
        return c;
    }

    if (L < ring.r || L > ring.R) {
        c.status = ClassStatus::OutsideSpectrum;
        c.kernel = KernelVerdict::Zero;
        c.range = RangeVerdict::Closed;
        return c;
    }

    if (w_first < L && L < w_last) {
        // middle band: infinite-dimensional kernel; right-invertible exactly
        // when the below-threshold weights occupy the leading vertex ids
        c.kernel = KernelVerdict::InfiniteDim;
        const WeightOrder wo = weight_order(weights, L);
        bool prefix_invariant = true;
        for (int i = 0; i < wo.below_count; ++i)
            if (wo.order[static_cast<std::size_t>(i)] >= wo.below_count) prefix_invariant = false;
        if (prefix_invariant) {
            c.status = ClassStatus::RightInvertible;
            c.range = RangeVerdict::Closed;
        } else {
            c.status = ClassStatus::NotOneSided;
            c.range = RangeVerdict::DenseNotClosed;
        }
        return c;
    }

    // outer bands [r, w_first) and (w_last, R]: injective, dense non-closed
    // range, no one-sided inverse
    c.status = ClassStatus::NotOneSided;
    c.kernel = KernelVerdict::Zero;
    c.range = RangeVerdict::DenseNotClosed;
    return c;
}

// ---------------------------------------------------------------------------
// Reduced coefficient and spectral radius
// ---------------------------------------------------------------------------

double radon_nikodym(const MapModel& model, const Point& y) {
    const IntervalMap& g = model.gamma();  // throws for black boxes
    double rho = 1.0;
    for (double yi : y) {
        const double pre = g.inverse(yi);
        const double d = g.derivative(pre);
        if (!(d > 0.0)) throw EvalError("derivative evaluation failed: nonpositive slope");
        rho /= d;  // (gamma^{-1})'(y_i) = 1 / gamma'(gamma^{-1}(y_i))
    }
    if (!(rho > 0.0)) throw EvalError("zero density");
    return rho;
}

CoeffFn reduced_coefficient(const Expr& a0, const MapModel& model) {
    if (!model.is_simplex())
        throw ValidationError("reduced coefficient needs the simplex model's interval map");
    if (a0.arity() != model.dimension())
        throw ValidationError("coefficient arity does not match the model dimension");
    return [a0, model](const Point& x) {
        return std::abs(a0.eval(x)) / std::sqrt(radon_nikodym(model, x));
    };
}

CoeffFn barycentric_coefficient(const MapModel& model, const std::vector<double>& corner_values) {
    if (!model.is_simplex())
        throw ValidationError("corner interpolation needs the simplex model");
    const int m = model.dimension();
    if (static_cast<int>(corner_values.size()) != m + 1)
        throw ValidationError("need one corner value per fixed point");
    for (double w : corner_values)
        if (!(w > 0.0)) throw ValidationError("corner values must be positive");
    std::vector<double> w = corner_values;
    // x = sum_k beta_k F(k) with beta_0 = 1 - x_m, beta_k = x_{m-k+1} - x_{m-k},
    // beta_m = x_1 (coordinates ascending, F(k) has k trailing ones)
    return [m, w](const Point& x) {
        double value = (1.0 - x[static_cast<std::size_t>(m - 1)]) * w[0];
        for (int k = 1; k < m; ++k)
            value += (x[static_cast<std::size_t>(m - k)] - x[static_cast<std::size_t>(m - k - 1)]) *
                     w[static_cast<std::size_t>(k)];
        value += x[0] * w[static_cast<std::size_t>(m)];
        return value;
    };
}

double spectral_radius_estimate(const MapModel& model, const CoeffFn& a, int window, Prng& rng,
                                const RadiusEstimateOptions& opt) {
    if (window < 1) throw ValidationError("window must be positive");
    const int m = model.dimension();

    std::vector<Point> bases;
    if (model.is_simplex()) {
        std::vector<std::pair<int, int>> classes;
        for (int z = 0; z <= m; ++z)
            for (int o = 0; z + o <= m - 1; ++o) classes.emplace_back(z, o);
        for (int i = 0; i < opt.orbit_count; ++i) {
            const auto& [z, o] = classes[static_cast<std::size_t>(i) % classes.size()];
            bases.push_back(sample_simplex_face(m, z, o, rng));
        }
    } else {
        const BlackBoxModel& bb = *model.black_box_spec();
        for (int i = 0; i < opt.orbit_count; ++i) bases.push_back(bb.sample(rng));
    }

    const long reach = static_cast<long>(window) + opt.settle_steps;
    double best_logmean = -std::numeric_limits<double>::infinity();
    for (const Point& base : bases) {
        // log |a| along the two-sided orbit window
        std::vector<double> logs(static_cast<std::size_t>(2 * reach + 1));
        Point fwd = base, bwd = base;
        logs[static_cast<std::size_t>(reach)] = std::log(std::abs(a(base)));
        for (long k = 1; k <= reach; ++k) {
            fwd = model.apply(fwd);
            bwd = model.apply_inverse(bwd);
            logs[static_cast<std::size_t>(reach + k)] = std::log(std::abs(a(fwd)));
            logs[static_cast<std::size_t>(reach - k)] = std::log(std::abs(a(bwd)));
        }
        for (double v : logs)
            if (!std::isfinite(v))
                throw EvalError("coefficient vanished along a sampled orbit");

        double sum = 0.0;
        for (long i = 0; i < window; ++i) sum += logs[static_cast<std::size_t>(i)];
        best_logmean = std::max(best_logmean, sum / window);
        for (std::size_t i = static_cast<std::size_t>(window); i < logs.size(); ++i) {
            sum += logs[i] - logs[i - static_cast<std::size_t>(window)];
            best_logmean = std::max(best_logmean, sum / window);
        }
    }
    return std::exp(best_logmean);
}

}  // namespace wso
