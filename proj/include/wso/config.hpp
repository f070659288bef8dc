#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wso/dynamics.hpp"
#include "wso/errors.hpp"

namespace wso {

// Parsed and validated run configuration. The source format is a single
// JSON document; unknown keys are rejected with their JSON pointer so typos
// fail loudly instead of silently changing a run.
struct Config {
    struct Gamma {
        std::string family;   // "mobius" with parameter c, or empty
        double c = 0.0;
        std::string formula;  // expression in x1, or empty
    };
    struct BlackBox {
        int dimension = 0;
        std::vector<std::string> forward;  // one expression per coordinate
        std::vector<std::string> inverse;
        std::vector<Point> fixed_points;
        std::string domain = "box";  // "box" or "simplex"
    };
    struct Sampling {
        std::uint64_t seed = 42;
        std::size_t edge_samples = 10000;
        int kind_samples = 50;
        int radius_orbits = 64;
    };
    struct Tolerances {
        double circle_tol = 1e-12;
        double limit_tol = 1e-9;
    };
    struct Scan {
        double modulus_min = 0.0;
        double modulus_max = 0.0;
        int steps = 1;
        int phases = 0;
    };

    bool simplex = true;
    int m = 0;          // simplex dimension
    Gamma gamma;        // simplex variant
    BlackBox black_box; // black-box variant

    std::optional<std::string> a0;
    std::optional<std::vector<double>> weights;

    Sampling sampling;
    Tolerances tolerances;
    std::optional<Scan> scan;

    std::string config_hash;  // FNV-1a of the canonical serialization

    static Config parse_text(const std::string& json_text);
    static Config load(const std::string& path);

    MapModel build_model() const;
};

}  // namespace wso
