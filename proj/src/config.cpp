#include "wso/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "wso/expr.hpp"

namespace wso {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::string& pointer,
                         std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (std::find_if(allowed.begin(), allowed.end(),
                         [&](const char* k) { return key == k; }) == allowed.end())
            throw ConfigError(pointer + "/" + key, "unknown key");
    }
}

double require_number(const json& obj, const std::string& pointer, const char* key) {
    if (!obj.contains(key)) throw ConfigError(pointer + "/" + key, "missing");
    if (!obj[key].is_number()) throw ConfigError(pointer + "/" + key, "must be a number");
    return obj[key].get<double>();
}

int require_int(const json& obj, const std::string& pointer, const char* key) {
    if (!obj.contains(key)) throw ConfigError(pointer + "/" + key, "missing");
    if (!obj[key].is_number_integer()) throw ConfigError(pointer + "/" + key, "must be an integer");
    return obj[key].get<int>();
}

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[v & 0xF];
        v >>= 4;
    }
    return out;
}

}  // namespace

Config Config::parse_text(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError("", std::string("invalid JSON: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError("", "config must be a JSON object");
    reject_unknown_keys(root, "",
                        {"model", "a0", "weights", "measure", "sampling", "tolerances", "scan"});

    Config cfg;

    if (!root.contains("model")) throw ConfigError("/model", "missing");
    const json& model = root["model"];
    if (!model.is_object()) throw ConfigError("/model", "must be an object");
    if (!model.contains("type")) throw ConfigError("/model/type", "missing");
    const std::string type = model["type"].get<std::string>();

    if (type == "simplex") {
        cfg.simplex = true;
        reject_unknown_keys(model, "/model", {"type", "m", "gamma"});
        cfg.m = require_int(model, "/model", "m");
        if (cfg.m < 1) throw ConfigError("/model/m", "must be >= 1");
        if (!model.contains("gamma")) throw ConfigError("/model/gamma", "missing");
        const json& gamma = model["gamma"];
        reject_unknown_keys(gamma, "/model/gamma", {"family", "c", "formula"});
        const bool has_family = gamma.contains("family");
        const bool has_formula = gamma.contains("formula");
        if (has_family == has_formula)
            throw ConfigError("/model/gamma", "exactly one of family/formula required");
        if (has_family) {
            cfg.gamma.family = gamma["family"].get<std::string>();
            if (cfg.gamma.family != "mobius")
                throw ConfigError("/model/gamma/family", "unknown family");
            cfg.gamma.c = require_number(gamma, "/model/gamma", "c");
        } else {
            cfg.gamma.formula = gamma["formula"].get<std::string>();
        }
    } else if (type == "blackbox") {
        cfg.simplex = false;
        reject_unknown_keys(model, "/model",
                            {"type", "dimension", "forward", "inverse", "fixed_points", "domain"});
        cfg.black_box.dimension = require_int(model, "/model", "dimension");
        const int dim = cfg.black_box.dimension;
        if (dim < 1) throw ConfigError("/model/dimension", "must be >= 1");
        for (const char* key : {"forward", "inverse"}) {
            if (!model.contains(key) || !model[key].is_array() ||
                static_cast<int>(model[key].size()) != dim)
                throw ConfigError(std::string("/model/") + key,
                                  "must list one expression per coordinate");
        }
        for (const auto& e : model["forward"]) cfg.black_box.forward.push_back(e.get<std::string>());
        for (const auto& e : model["inverse"]) cfg.black_box.inverse.push_back(e.get<std::string>());
        if (!model.contains("fixed_points") || !model["fixed_points"].is_array() ||
            model["fixed_points"].empty())
            throw ConfigError("/model/fixed_points", "must be a nonempty array of points");
        for (const auto& p : model["fixed_points"]) {
            if (!p.is_array() || static_cast<int>(p.size()) != dim)
                throw ConfigError("/model/fixed_points", "each point needs one value per coordinate");
            cfg.black_box.fixed_points.push_back(p.get<Point>());
        }
        if (model.contains("domain")) {
            cfg.black_box.domain = model["domain"].get<std::string>();
            if (cfg.black_box.domain != "box" && cfg.black_box.domain != "simplex")
                throw ConfigError("/model/domain", "must be \"box\" or \"simplex\"");
        }
    } else {
        throw ConfigError("/model/type", "must be \"simplex\" or \"blackbox\"");
    }

    const bool has_a0 = root.contains("a0");
    const bool has_weights = root.contains("weights");
    if (has_a0 == has_weights)
        throw ConfigError("", "exactly one of a0/weights required");
    if (has_a0) {
        if (!root["a0"].is_string()) throw ConfigError("/a0", "must be an expression string");
        cfg.a0 = root["a0"].get<std::string>();
    } else {
        if (!root["weights"].is_array() || root["weights"].empty())
            throw ConfigError("/weights", "must be a nonempty array");
        std::vector<double> w = root["weights"].get<std::vector<double>>();
        for (double v : w)
            if (!(v > 0.0)) throw ConfigError("/weights", "weights must be positive");
        if (cfg.simplex && static_cast<int>(w.size()) != cfg.m + 1)
            throw ConfigError("/weights", "simplex model needs m+1 weights");
        if (!cfg.simplex &&
            w.size() != cfg.black_box.fixed_points.size())
            throw ConfigError("/weights", "need one weight per declared fixed point");
        cfg.weights = std::move(w);
    }

    if (root.contains("measure")) {
        if (root["measure"].get<std::string>() != "lebesgue")
            throw ConfigError("/measure", "only \"lebesgue\" is supported");
    }

    if (root.contains("sampling")) {
        const json& s = root["sampling"];
        reject_unknown_keys(s, "/sampling",
                            {"seed", "edge_samples", "kind_samples", "radius_orbits"});
        if (s.contains("seed")) cfg.sampling.seed = s["seed"].get<std::uint64_t>();
        if (s.contains("edge_samples"))
            cfg.sampling.edge_samples = s["edge_samples"].get<std::size_t>();
        if (s.contains("kind_samples")) cfg.sampling.kind_samples = require_int(s, "/sampling", "kind_samples");
        if (s.contains("radius_orbits"))
            cfg.sampling.radius_orbits = require_int(s, "/sampling", "radius_orbits");
    }

    if (root.contains("tolerances")) {
        const json& t = root["tolerances"];
        reject_unknown_keys(t, "/tolerances", {"circle_tol", "limit_tol"});
        if (t.contains("circle_tol")) cfg.tolerances.circle_tol = require_number(t, "/tolerances", "circle_tol");
        if (t.contains("limit_tol")) cfg.tolerances.limit_tol = require_number(t, "/tolerances", "limit_tol");
        if (!(cfg.tolerances.circle_tol >= 0.0))
            throw ConfigError("/tolerances/circle_tol", "must be nonnegative");
    }

    if (root.contains("scan")) {
        const json& s = root["scan"];
        reject_unknown_keys(s, "/scan", {"modulus_min", "modulus_max", "steps", "phases"});
        Config::Scan scan;
        scan.modulus_min = require_number(s, "/scan", "modulus_min");
        scan.modulus_max = require_number(s, "/scan", "modulus_max");
        if (s.contains("steps")) scan.steps = require_int(s, "/scan", "steps");
        if (s.contains("phases")) scan.phases = require_int(s, "/scan", "phases");
        if (scan.modulus_min < 0.0) throw ConfigError("/scan/modulus_min", "must be nonnegative");
        if (scan.modulus_max < scan.modulus_min)
            throw ConfigError("/scan/modulus_max", "must be >= modulus_min");
        if (scan.steps < 1) throw ConfigError("/scan/steps", "must be >= 1");
        if (scan.phases < 0) throw ConfigError("/scan/phases", "must be >= 0");
        cfg.scan = scan;
    }

    cfg.config_hash = hex64(fnv1a(root.dump()));
    return cfg;
}

Config Config::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot open config file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_text(buf.str());
}

MapModel Config::build_model() const {
    if (simplex) {
        IntervalMap g = gamma.family == "mobius" ? make_mobius(gamma.c)
                                                 : make_interval_map(Expr::parse(gamma.formula, 1));
        return MapModel::simplex(m, std::move(g));
    }

    const int dim = black_box.dimension;
    std::vector<Expr> fwd, inv;
    for (const std::string& s : black_box.forward) fwd.push_back(Expr::parse(s, dim));
    for (const std::string& s : black_box.inverse) inv.push_back(Expr::parse(s, dim));

    auto apply_all = [dim](const std::vector<Expr>& exprs, const Point& x) {
        Point y(static_cast<std::size_t>(dim));
        for (int i = 0; i < dim; ++i) y[static_cast<std::size_t>(i)] = exprs[static_cast<std::size_t>(i)].eval(x);
        return y;
    };

    BlackBoxModel bb;
    bb.dimension = dim;
    bb.forward = [fwd, apply_all](const Point& x) { return apply_all(fwd, x); };
    bb.inverse = [inv, apply_all](const Point& x) { return apply_all(inv, x); };
    bb.declared_fixed_points = black_box.fixed_points;
    const bool sorted_domain = black_box.domain == "simplex";
    bb.contains = [sorted_domain](const Point& x) {
        double prev = 0.0;
        for (double v : x) {
            if (v < 0.0 || v > 1.0) return false;
            if (sorted_domain && v < prev) return false;
            prev = v;
        }
        return true;
    };
    bb.sample = [dim, sorted_domain](Prng& rng) {
        Point x(static_cast<std::size_t>(dim));
        for (auto& v : x) v = rng.uniform();
        if (sorted_domain) std::sort(x.begin(), x.end());
        return x;
    };
    bb.sample_near = [sorted_domain](const Point& center, double radius, Prng& rng) {
        Point x(center.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] = center[i] + rng.uniform(-radius, radius);
            x[i] = std::clamp(x[i], 0.0, 1.0);
        }
        if (sorted_domain) std::sort(x.begin(), x.end());
        return x;
    };
    return MapModel::black_box(std::move(bb));
}

}  // namespace wso
