#include "wso/graph.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "wso/format.hpp"

namespace wso {

const char* to_string(Orientation o) {
    switch (o) {
        case Orientation::RightOriented: return "RightOriented";
        case Orientation::LeftOriented: return "LeftOriented";
        case Orientation::Mixed: return "Mixed";
        case Orientation::NoCross: return "NoCross";
    }
    return "?";
}

const GraphVertex& FixedPointGraph::vertex(int id) const {
    for (const GraphVertex& v : vertices)
        if (v.id == id) return v;
    throw ValidationError("unknown vertex id " + std::to_string(id));
}

void FixedPointGraph::set_weights(const std::vector<double>& weights) {
    if (weights.size() != vertices.size())
        throw ValidationError("expected " + std::to_string(vertices.size()) + " weights, got " +
                              std::to_string(weights.size()));
    for (std::size_t i = 0; i < weights.size(); ++i) vertices[i].weight = weights[i];
}

FixedPointGraph simplex_graph(int m, const std::vector<double>& weights) {
    if (m < 1) throw ValidationError("simplex dimension must be >= 1");
    if (static_cast<int>(weights.size()) != m + 1)
        throw ValidationError("expected " + std::to_string(m + 1) + " weights, got " +
                              std::to_string(weights.size()));
    FixedPointGraph g;
    for (int k = 0; k <= m; ++k) {
        GraphVertex v;
        v.id = k;
        v.kind = (k == 0)   ? FixedPointKind::Repelling
                 : (k == m) ? FixedPointKind::Attracting
                            : FixedPointKind::Saddle;
        v.weight = weights[static_cast<std::size_t>(k)];
        g.vertices.push_back(v);
    }
    for (int j = 0; j <= m; ++j)
        for (int k = j + 1; k <= m; ++k) g.edges.emplace_back(j, k);
    g.density_flag = true;  // the interior class runs F(0) -> F(m) and is dense
    return g;
}

FixedPointGraph discover_edges(const MapModel& model, const std::vector<FixedPoint>& fps,
                               std::size_t sample_count, Prng& rng,
                               std::vector<std::string>* warnings) {
    FixedPointGraph g;
    for (const FixedPoint& fp : fps) g.vertices.push_back({fp.id, fp.kind, 0.0});
    g.density_flag = model.is_simplex();

    if (sample_count == 0) {
        if (warnings) warnings->push_back("discover_edges: 0 samples requested, edge set empty");
        return g;
    }

    std::set<std::pair<int, int>> found;
    if (model.is_simplex()) {
        const int m = model.dimension();
        // stratify over face classes (zeros, ones) with at least one
        // interior coordinate; class (z, o) carries the orbits F(o) -> F(m-z)
        std::vector<std::pair<int, int>> classes;
        for (int z = 0; z <= m; ++z)
            for (int o = 0; z + o <= m - 1; ++o) classes.emplace_back(z, o);
        const std::size_t per_class = std::max<std::size_t>(1, sample_count / classes.size());
        for (const auto& [z, o] : classes) {
            for (std::size_t s = 0; s < per_class; ++s) {
                const Point x = sample_simplex_face(m, z, o, rng);
                const int j = backward_limit(model, fps, x);
                const int k = forward_limit(model, fps, x);
                if (j != k) found.insert({j, k});
            }
        }
    } else {
        const BlackBoxModel& bb = *model.black_box_spec();
        for (std::size_t s = 0; s < sample_count; ++s) {
            const Point x = bb.sample(rng);
            try {
                const int j = backward_limit(model, fps, x);
                const int k = forward_limit(model, fps, x);
                if (j != k) found.insert({j, k});
            } catch (const NoConvergence&) {
                if (warnings) warnings->push_back("discover_edges: a sample did not converge");
            }
        }
    }
    g.edges.assign(found.begin(), found.end());
    return g;
}

Decomposition decompose(const FixedPointGraph& graph, double lambda_modulus, double tol) {
    if (lambda_modulus < 0.0) throw ValidationError("|lambda| must be nonnegative");
    Decomposition d;
    d.lambda_modulus = lambda_modulus;
    for (const GraphVertex& v : graph.vertices) {
        if (std::abs(v.weight - lambda_modulus) <= tol * std::max(v.weight, lambda_modulus))
            d.circle_hits.push_back(v.id);
        else if (v.weight < lambda_modulus)
            d.g_minus.push_back(v.id);
        else
            d.g_plus.push_back(v.id);
    }
    return d;
}

Orientation orientation(const FixedPointGraph& graph, const Decomposition& dec) {
    if (!dec.valid())
        throw ValidationError("decomposition has circle hits; orientation undefined");
    auto in = [](const std::vector<int>& set, int id) {
        return std::find(set.begin(), set.end(), id) != set.end();
    };
    bool any_right = false, any_left = false;
    for (const auto& [j, k] : graph.edges) {
        const bool j_minus = in(dec.g_minus, j);
        const bool k_minus = in(dec.g_minus, k);
        if (j_minus && !k_minus) any_right = true;
        if (!j_minus && k_minus) any_left = true;
    }
    if (!any_right && !any_left) return Orientation::NoCross;
    if (any_right && any_left) return Orientation::Mixed;
    return any_right ? Orientation::RightOriented : Orientation::LeftOriented;
}

std::string to_dot(const FixedPointGraph& graph, const Decomposition* dec) {
    auto in = [](const std::vector<int>& set, int id) {
        return std::find(set.begin(), set.end(), id) != set.end();
    };
    std::string out = "digraph G {\n";
    for (const GraphVertex& v : graph.vertices) {
        out += "  F" + std::to_string(v.id) + " [label=\"F" + std::to_string(v.id) +
               " (w=" + format_double(v.weight) + ")\"";
        if (dec) {
            if (in(dec->g_minus, v.id))
                out += ", style=filled, fillcolor=lightblue";
            else if (in(dec->g_plus, v.id))
                out += ", style=filled, fillcolor=salmon";
        }
        out += "];\n";
    }
    for (const auto& [j, k] : graph.edges) {
        out += "  F" + std::to_string(j) + " -> F" + std::to_string(k);
        if (dec) {
            const bool jm = in(dec->g_minus, j), km = in(dec->g_minus, k);
            const bool jp = in(dec->g_plus, j), kp = in(dec->g_plus, k);
            if ((jm && kp) || (jp && km)) out += " [penwidth=2]";
        }
        out += ";\n";
    }
    out += "}\n";
    return out;
}

}  // namespace wso
