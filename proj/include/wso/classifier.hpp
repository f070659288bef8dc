#pragma once

#include <optional>
#include <vector>

#include "wso/dynamics.hpp"
#include "wso/errors.hpp"
#include "wso/expr.hpp"
#include "wso/graph.hpp"
#include "wso/verdict.hpp"

namespace wso {

// Spectrum ring radii from the fixed-point weights. Throws on nonpositive
// weights (the standing assumption is a(x) != 0 everywhere).
Annulus annulus(const std::vector<double>& weights);

// Sorted distinct circle radii |a(F)|; these split the ring into subrings.
std::vector<double> circles(const std::vector<double>& weights);

// Permutation sorting the weights increasingly plus the count of weights
// below a given |lambda|. Requires pairwise distinct weights.
struct WeightOrder {
    std::vector<int> order;  // order[i] = vertex id of the i-th smallest weight
    int below_count = 0;     // #{ id : w(id) < |lambda| }
};
WeightOrder weight_order(const std::vector<double>& weights, double lambda_modulus);

// Verdict for B - lambda I from the graph decomposition and its
// orientation alone (no simplex-specific refinement).
Classification classify_main(const FixedPointGraph& graph, Complex lambda,
                             double circle_tol = 1e-12);

// Full verdict for B - lambda I. When the graph is recognizably the simplex
// family (vertices 0..m, tournament edges, dense interior class, distinct
// weights with w(F0) < w(Fm)), the graph verdict is refined through the
// simplex-specific classifier and carries provenance Both.
Classification classify(const FixedPointGraph& graph, Complex lambda, double circle_tol = 1e-12);

// Case-based classifier for the simplex family. Preconditions: distinct
// positive weights and w(F0) < w(Fm); throws ValidationError otherwise
// (callers fall back to classify).
Classification classify_simplex(const std::vector<double>& weights, Complex lambda,
                                double circle_tol = 1e-12);

// Whether classify_simplex's preconditions hold for this graph.
bool simplex_theorem_applies(const FixedPointGraph& graph);

// Join of two verdicts in the refinement order (Unknown below everything,
// NotClosed refinable to DenseNotClosed, Closed to ClosedNotDense).
// Returns nullopt when the verdicts genuinely contradict.
std::optional<Classification> merge_classifications(const Classification& a,
                                                    const Classification& b);

// The Radon-Nikodym density of the pulled-back Lebesgue measure on the
// simplex: rho(y) = prod_i (gamma^{-1})'(y_i).
double radon_nikodym(const MapModel& model, const Point& y);

// Reduced coefficient a(x) = |a0(x)| rho(x)^{-1/2}; all spectral criteria
// depend on this quantity, not on a0 itself.
CoeffFn reduced_coefficient(const Expr& a0, const MapModel& model);

// Canonical coefficient with prescribed values at the corners: the ordered
// simplex is the convex hull of its fixed points, so barycentric
// interpolation of the corner values gives a positive continuous
// coefficient realizing exactly those weights.
CoeffFn barycentric_coefficient(const MapModel& model, const std::vector<double>& corner_values);

// Largest windowed geometric mean of |a| along sampled orbits; approaches
// max_F |a(F)| as the window grows. Orbits are sampled from every face
// class so saddle weights are reachable.
struct RadiusEstimateOptions {
    int orbit_count = 64;
    long settle_steps = 150;  // tail length beyond the window on both sides
};
double spectral_radius_estimate(const MapModel& model, const CoeffFn& a, int window, Prng& rng,
                                const RadiusEstimateOptions& opt = {});

}  // namespace wso
