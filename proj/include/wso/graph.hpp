#pragma once

#include <string>
#include <utility>
#include <vector>

#include "wso/dynamics.hpp"
#include "wso/errors.hpp"
#include "wso/prng.hpp"

namespace wso {

struct GraphVertex {
    int id = 0;
    FixedPointKind kind = FixedPointKind::Saddle;
    double weight = 0.0;  // |a(F)|
};

// Oriented graph of fixed points: edge (j, k) present iff some orbit runs
// from F_j (backward limit) to F_k (forward limit). Immutable once built.
struct FixedPointGraph {
    std::vector<GraphVertex> vertices;
    std::vector<std::pair<int, int>> edges;  // (source, sink), sorted, no self-loops
    bool density_flag = false;  // some orbit class is dense in the whole space

    const GraphVertex& vertex(int id) const;
    void set_weights(const std::vector<double>& weights);
};

// The analytic graph of the simplex family: vertices F(0..m), the full
// transitive tournament {(j,k): j < k}, and a dense interior orbit class.
FixedPointGraph simplex_graph(int m, const std::vector<double>& weights);

// Monte-Carlo edge discovery via limit sampling; weights stay zero and are
// attached later. For the simplex variant the sampling is stratified over
// all face types so no edge class is missed.
FixedPointGraph discover_edges(const MapModel& model, const std::vector<FixedPoint>& fps,
                               std::size_t sample_count, Prng& rng,
                               std::vector<std::string>* warnings = nullptr);

// Vertex partition by |a(F)| against |lambda|, with a relative-tolerance
// band for circle hits. Valid (usable for orientation) iff no circle hits.
struct Decomposition {
    double lambda_modulus = 0.0;
    std::vector<int> g_minus;      // |a(F)| < |lambda|
    std::vector<int> g_plus;       // |a(F)| > |lambda|
    std::vector<int> circle_hits;  // |a(F)| = |lambda| within tolerance

    bool valid() const { return circle_hits.empty(); }
};

Decomposition decompose(const FixedPointGraph& graph, double lambda_modulus, double tol = 1e-12);

enum class Orientation { RightOriented, LeftOriented, Mixed, NoCross };

const char* to_string(Orientation o);

// RightOriented iff every edge crossing the partition runs G- -> G+,
// LeftOriented iff every one runs G+ -> G-, NoCross iff none crosses.
// Throws ValidationError when the decomposition has circle hits.
Orientation orientation(const FixedPointGraph& graph, const Decomposition& dec);

// DOT rendering; with a decomposition, G- vertices are filled lightblue,
// G+ salmon, and cross edges drawn with penwidth=2.
std::string to_dot(const FixedPointGraph& graph, const Decomposition* dec = nullptr);

}  // namespace wso
