#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "wso/config.hpp"
#include "wso/verdict.hpp"

namespace wso {

inline constexpr const char* kVersion = "0.1.0";

// Exit codes: 0 success, 1 validation error (thrown as exceptions),
// 2 classifier/oracle disagreement, 3 numerical non-convergence (thrown).
struct CommandOutcome {
    std::string text;
    int exit_code = 0;
    std::vector<std::string> warnings;
};

// Annulus, circles, and (for coefficient-based configs) the orbit estimate
// of the spectral radius.
CommandOutcome cmd_spectrum(const Config& cfg);

// Full classification of B - lambda I, cross-checked between the graph
// route and the simplex cases when both apply. Disagreement is a hard
// error (exit 2) reporting both verdicts.
CommandOutcome cmd_classify(const Config& cfg, Complex lambda);

// Classification swept over the configured modulus grid (CSV). With
// phases > 0, emits (re, im, status_code) triples instead.
CommandOutcome cmd_scan(const Config& cfg);

// Discrete-oracle verification of every orbit block at one lambda.
// window = 0 picks the coefficient window from the residence bound.
// ladder_csv switches the report from JSON to the per-block sigma ladder
// as CSV columns (edge, n, sigma_min, second_smallest).
CommandOutcome cmd_verify(const Config& cfg, Complex lambda, const std::vector<int>& truncations,
                          long window = 0, bool ladder_csv = false);

// DOT rendering of the fixed-point graph, optionally colored by the
// decomposition at |lambda|; discover = true uses Monte-Carlo edges.
CommandOutcome cmd_graph(const Config& cfg, bool discover,
                         std::optional<double> lambda_modulus);

// CSV dump of the two-sided orbit of a point with the coefficient values.
CommandOutcome cmd_orbit(const Config& cfg, const Point& start, long window);

}  // namespace wso
