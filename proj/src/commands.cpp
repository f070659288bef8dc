#include "wso/commands.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "wso/classifier.hpp"
#include "wso/discrete.hpp"
#include "wso/format.hpp"
#include "wso/graph.hpp"
#include "wso/parallel.hpp"

namespace wso {

namespace {

using nlohmann::json;

constexpr int kEstimateWindow = 200;
constexpr double kNeighborhoodRadius = 0.1;
constexpr int kResidenceSamples = 200;

json provenance_json(const Config& cfg) {
    return json{{"config_hash", cfg.config_hash}, {"seed", cfg.sampling.seed},
                {"version", kVersion}};
}

json graph_json(const FixedPointGraph& g) {
    json vertices = json::array();
    for (const GraphVertex& v : g.vertices)
        vertices.push_back({{"id", v.id}, {"kind", to_string(v.kind)}, {"weight", v.weight}});
    json edges = json::array();
    for (const auto& [j, k] : g.edges) edges.push_back(json::array({j, k}));
    return json{{"vertices", vertices}, {"edges", edges}, {"density_flag", g.density_flag}};
}

json classification_json(const Classification& c, const std::string& config_hash) {
    return json{{"lambda", {{"re", c.lambda.real()}, {"im", c.lambda.imag()}}},
                {"modulus", std::abs(c.lambda)},
                {"status", to_string(c.status)},
                {"kernel", to_string(c.kernel)},
                {"range", to_string(c.range)},
                {"provenance", to_string(c.provenance)},
                {"circle_hits", c.circle_hits},
                {"config_hash", config_hash}};
}

json oracle_report_json(const OracleReport& rep) {
    json ladder = json::array();
    for (const auto& e : rep.ladder)
        ladder.push_back({{"n", e.half_width},
                          {"sigma_min", e.sigma_min},
                          {"second_smallest", e.second_smallest}});
    json observed = {{"kernel_dim_estimate", rep.kernel_dim_estimate},
                     {"coker_dim_estimate", rep.coker_dim_estimate},
                     {"index_estimate", rep.index_estimate},
                     {"sigma_ladder", ladder}};
    if (rep.right_inverse_residual >= 0.0) {
        observed["right_inverse_residual"] = rep.right_inverse_residual;
        observed["right_inverse_norm_ratio"] = rep.right_inverse_norm_ratio;
    }
    if (rep.recovery_error >= 0.0) {
        observed["recovery_error"] = rep.recovery_error;
        observed["shooting_mismatch"] = rep.shooting_mismatch;
    }
    return json{{"predicted",
                 {{"status", to_string(rep.predicted.status)},
                  {"index", rep.predicted.expected_index}}},
                {"observed", observed},
                {"agreement", rep.agreement},
                {"diagnostics", rep.diagnostics}};
}

int status_code(ClassStatus s) {
    switch (s) {
        case ClassStatus::OutsideSpectrum: return 0;
        case ClassStatus::RightInvertible: return 1;
        case ClassStatus::LeftInvertible: return 2;
        case ClassStatus::NotOneSided: return 3;
        case ClassStatus::OnCircle: return 4;
    }
    return -1;
}

// Everything the commands derive from a config, built once.
struct Bundle {
    MapModel model;
    std::vector<FixedPoint> fps;
    std::vector<double> weights;
    std::optional<CoeffFn> coeff;  // reduced (a0) or corner-interpolated (weights)
    FixedPointGraph graph;
};

Bundle resolve(const Config& cfg, bool discover_graph = false) {
    Prng rng(cfg.sampling.seed);
    LimitOptions limits;
    limits.tol = cfg.tolerances.limit_tol;

    MapModel model = cfg.build_model();
    std::vector<FixedPoint> fps;
    if (cfg.simplex) {
        fps = fixed_points(model);
    } else {
        KindOptions kind_opt;
        kind_opt.ball_samples = cfg.sampling.kind_samples;
        kind_opt.limits = limits;
        fps = fixed_points(model, rng, kind_opt);
    }

    Bundle b{std::move(model), std::move(fps), {}, std::nullopt, {}};

    if (cfg.a0) {
        if (!cfg.simplex)
            throw ConfigError("/a0", "reduced coefficients need the simplex model; "
                                     "give explicit weights instead");
        CoeffFn a = reduced_coefficient(Expr::parse(*cfg.a0, b.model.dimension()), b.model);
        for (const FixedPoint& fp : b.fps) b.weights.push_back(a(fp.coords));
        b.coeff = std::move(a);
    } else {
        b.weights = *cfg.weights;
        if (cfg.simplex) b.coeff = barycentric_coefficient(b.model, b.weights);
    }

    if (cfg.simplex && !discover_graph) {
        b.graph = simplex_graph(b.model.dimension(), b.weights);
    } else {
        b.graph = discover_edges(b.model, b.fps, cfg.sampling.edge_samples, rng);
        b.graph.set_weights(b.weights);
    }
    return b;
}

}  // namespace

CommandOutcome cmd_spectrum(const Config& cfg) {
    Bundle b = resolve(cfg);
    const Annulus ring = annulus(b.weights);

    json out;
    out["provenance"] = provenance_json(cfg);
    out["weights"] = b.weights;
    out["annulus"] = {{"r", ring.r}, {"R", ring.R}};
    out["circles"] = circles(b.weights);
    out["graph"] = graph_json(b.graph);
    if (b.coeff) {
        Prng rng(cfg.sampling.seed);
        RadiusEstimateOptions opt;
        opt.orbit_count = cfg.sampling.radius_orbits;
        const double est = spectral_radius_estimate(b.model, *b.coeff, kEstimateWindow, rng, opt);
        out["spectral_radius"] = {{"estimate", est},
                                  {"outer_radius", ring.R},
                                  {"relative_gap", std::abs(est - ring.R) / ring.R}};
    }
    return {out.dump(2) + "\n", 0, {}};
}

CommandOutcome cmd_classify(const Config& cfg, Complex lambda) {
    Bundle b = resolve(cfg);
    const double tol = cfg.tolerances.circle_tol;

    const Classification main = classify_main(b.graph, lambda, tol);
    json out;
    out["provenance"] = provenance_json(cfg);
    out["graph"] = graph_json(b.graph);

    if (simplex_theorem_applies(b.graph)) {
        const Classification simplex = classify_simplex(b.weights, lambda, tol);
        auto merged = merge_classifications(main, simplex);
        if (!merged) {
            out["error"] = "classifier disagreement";
            out["main_theorem"] = classification_json(main, cfg.config_hash);
            out["simplex_theorem"] = classification_json(simplex, cfg.config_hash);
            return {out.dump(2) + "\n", 2, {"main and simplex classifiers disagree"}};
        }
        merged->provenance = Provenance::Both;
        out["classification"] = classification_json(*merged, cfg.config_hash);
    } else {
        out["classification"] = classification_json(main, cfg.config_hash);
    }
    return {out.dump(2) + "\n", 0, {}};
}

CommandOutcome cmd_scan(const Config& cfg) {
    if (!cfg.scan) throw ConfigError("/scan", "scan command needs a scan spec");
    Bundle b = resolve(cfg);
    const Config::Scan& scan = *cfg.scan;
    const double tol = cfg.tolerances.circle_tol;

    std::vector<double> moduli(static_cast<std::size_t>(scan.steps));
    for (int i = 0; i < scan.steps; ++i)
        moduli[static_cast<std::size_t>(i)] =
            scan.steps == 1 ? scan.modulus_min
                            : scan.modulus_min + (scan.modulus_max - scan.modulus_min) * i /
                                  (scan.steps - 1);

    std::string out;
    if (scan.phases == 0) {
        out += "# wso scan v1: modulus,status,kernel,range\n";
        std::vector<std::string> rows(moduli.size());
        parallel_for(moduli.size(), [&](std::size_t i) {
            const Classification c = classify(b.graph, {moduli[i], 0.0}, tol);
            rows[i] = format_double(moduli[i]) + "," + to_string(c.status) + "," +
                      to_string(c.kernel) + "," + to_string(c.range) + "\n";
        });
        for (const std::string& r : rows) out += r;
    } else {
        out += "# wso scan v1: re,im,status_code\n";
        out += "# status codes: 0=OutsideSpectrum,1=RightInvertible,2=LeftInvertible,"
               "3=NotOneSided,4=OnCircle\n";
        const std::size_t total = moduli.size() * static_cast<std::size_t>(scan.phases);
        std::vector<std::string> rows(total);
        parallel_for(total, [&](std::size_t idx) {
            const std::size_t i = idx / static_cast<std::size_t>(scan.phases);
            const int p = static_cast<int>(idx % static_cast<std::size_t>(scan.phases));
            const double theta = 2.0 * 3.14159265358979323846 * p / scan.phases;
            const Complex lam = std::polar(moduli[i], theta);
            const Classification c = classify(b.graph, lam, tol);
            rows[idx] = format_double(lam.real()) + "," + format_double(lam.imag()) + "," +
                        std::to_string(status_code(c.status)) + "\n";
        });
        for (const std::string& r : rows) out += r;
    }
    return {out, 0, {}};
}

CommandOutcome cmd_verify(const Config& cfg, Complex lambda, const std::vector<int>& truncations,
                          long window, bool ladder_csv) {
    if (!cfg.simplex)
        throw ConfigError("/model", "verify needs the simplex model: orbit blocks and "
                                    "fundamental domains are built from its interval map");
    if (truncations.empty()) throw ValidationError("at least one truncation required");
    Bundle b = resolve(cfg);
    CommandOutcome outcome;

    // coefficient windows must clear the residence transient so the
    // limit-padding of the sequences is exact
    Neighborhoods nbhd;
    nbhd.centers = b.fps;
    nbhd.radii.assign(b.fps.size(), kNeighborhoodRadius);
    Prng res_rng(cfg.sampling.seed ^ 0x5eedbeefULL);
    std::vector<Point> samples;
    const int m = b.model.dimension();
    for (int i = 0; i < kResidenceSamples; ++i) {
        for (int z = 0; z <= m; ++z)
            for (int o = 0; z + o <= m - 1; ++o)
                samples.push_back(sample_simplex_face(m, z, o, res_rng));
    }
    const ResidenceResult res = residence_bound(b.model, nbhd, samples);

    long K = res.bound + 32;
    if (window > 0) {
        if (window < res.bound) {
            outcome.warnings.push_back("window " + std::to_string(window) +
                                       " is below the residence bound " +
                                       std::to_string(res.bound) + "; raising to " +
                                       std::to_string(K));
        } else {
            K = window;
        }
    }

    const double tol = cfg.tolerances.circle_tol;
    Prng rng(cfg.sampling.seed);
    std::vector<json> blocks(b.graph.edges.size());
    std::vector<OracleReport> reports(b.graph.edges.size());
    std::vector<bool> ok(b.graph.edges.size(), false);
    std::vector<Prng> streams;
    for (std::size_t e = 0; e < b.graph.edges.size(); ++e) streams.push_back(rng.split(e));

    parallel_for(b.graph.edges.size(), [&](std::size_t e) {
        const auto [j, k] = b.graph.edges[e];
        Prng& edge_rng = streams[e];

        const OrbitBlock block = simplex_block(b.model, j, k);
        const FundamentalDomain dom = fundamental_domain(b.model, block, 0.5);
        // sample tau inside the section: lead coordinate in [c, gamma(c)),
        // remaining interior coordinates above it, sorted
        Point tau = block.base_point;
        const double lead = edge_rng.uniform(dom.lower, dom.upper);
        std::vector<double> interior{lead};
        for (int q = 1; q < k - j; ++q) interior.push_back(edge_rng.uniform(lead, 1.0 - 1e-6));
        std::sort(interior.begin(), interior.end());
        for (int q = 0; q < k - j; ++q)
            tau[static_cast<std::size_t>(m - k + q)] = interior[static_cast<std::size_t>(q)];

        const CoeffSeq seq = coeff_sequence(b.model, b.fps, *b.coeff, tau, K);
        const BlockPrediction predicted =
            predict_block(b.weights[static_cast<std::size_t>(j)],
                          b.weights[static_cast<std::size_t>(k)], lambda, tol);
        const OracleReport rep = verify_block(seq, lambda, predicted, truncations, edge_rng);

        json entry;
        entry["edge"] = json::array({j, k});
        entry["tau"] = tau;
        entry["window"] = K;
        entry["report"] = oracle_report_json(rep);
        blocks[e] = std::move(entry);
        reports[e] = rep;
        ok[e] = rep.agreement;
    });

    const bool all_ok = std::all_of(ok.begin(), ok.end(), [](bool v) { return v; });
    if (ladder_csv) {
        std::string csv = "# wso verify v1: edge_source,edge_sink,n,sigma_min,second_smallest\n";
        for (std::size_t e = 0; e < b.graph.edges.size(); ++e) {
            const auto [j, k] = b.graph.edges[e];
            for (const SigmaLadderEntry& le : reports[e].ladder)
                csv += std::to_string(j) + "," + std::to_string(k) + "," +
                       std::to_string(le.half_width) + "," + format_double(le.sigma_min) + "," +
                       format_double(le.second_smallest) + "\n";
        }
        outcome.text = csv;
        outcome.exit_code = all_ok ? 0 : 2;
        return outcome;
    }
    json out;
    out["provenance"] = provenance_json(cfg);
    out["lambda"] = {{"re", lambda.real()}, {"im", lambda.imag()}};
    out["residence_bound"] = res.bound;
    out["window"] = K;
    out["truncations"] = truncations;
    out["blocks"] = blocks;
    out["agreement"] = all_ok;
    outcome.text = out.dump(2) + "\n";
    outcome.exit_code = all_ok ? 0 : 2;
    if (!all_ok) outcome.warnings.push_back("oracle disagreement on at least one block");
    return outcome;
}

CommandOutcome cmd_graph(const Config& cfg, bool discover, std::optional<double> lambda_modulus) {
    Bundle b = resolve(cfg, discover);
    if (lambda_modulus) {
        const Decomposition dec = decompose(b.graph, *lambda_modulus, cfg.tolerances.circle_tol);
        return {to_dot(b.graph, &dec), 0, {}};
    }
    return {to_dot(b.graph), 0, {}};
}

CommandOutcome cmd_orbit(const Config& cfg, const Point& start, long window) {
    Bundle b = resolve(cfg);
    if (!b.model.contains(start)) throw ValidationError("start point outside the model domain");
    if (window < 0) throw ValidationError("window must be nonnegative");

    std::string header = "# wso orbit v1: k";
    for (int i = 1; i <= b.model.dimension(); ++i) header += ",x_" + std::to_string(i);
    header += ",a_value\n";

    std::vector<Point> points(static_cast<std::size_t>(2 * window + 1));
    points[static_cast<std::size_t>(window)] = start;
    Point fwd = start, bwd = start;
    for (long k = 1; k <= window; ++k) {
        fwd = b.model.apply(fwd);
        bwd = b.model.apply_inverse(bwd);
        points[static_cast<std::size_t>(window + k)] = fwd;
        points[static_cast<std::size_t>(window - k)] = bwd;
    }

    std::string out = header;
    for (long k = -window; k <= window; ++k) {
        out += std::to_string(k);
        const Point& p = points[static_cast<std::size_t>(k + window)];
        for (double v : p) out += "," + format_double(v);
        out += ",";
        if (b.coeff) out += format_double((*b.coeff)(p));
        out += "\n";
    }
    return {out, 0, {}};
}

}  // namespace wso
