#include <complex>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wso/commands.hpp"

namespace {

using wso::CommandOutcome;
using wso::Complex;
using wso::Config;

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
    return out;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

void check_format(const std::string& requested, const std::string& natural) {
    if (!requested.empty() && requested != natural)
        throw wso::ValidationError("this command emits " + natural + ", not " + requested);
}

int emit(const CommandOutcome& outcome, const std::string& out_path) {
    for (const std::string& w : outcome.warnings) std::cerr << "warning: " << w << "\n";
    if (out_path.empty()) {
        std::cout << outcome.text;
    } else {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) throw wso::ValidationError("cannot open output file " + out_path);
        f << outcome.text;
    }
    return outcome.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral classifier for weighted shift operators over "
                 "Morse-Smale dynamics"};
    app.require_subcommand(1);
    app.fallthrough();  // accept global flags after the subcommand name

    std::string config_path, out_path, format;
    std::optional<std::uint64_t> seed_override;
    app.add_option("--config", config_path, "Config file (JSON)")->required();
    app.add_option("--seed", seed_override, "Override the sampling seed");
    app.add_option("--out", out_path, "Write the report here instead of stdout");
    app.add_option("--format", format, "Output format check: json, csv, or dot")
        ->check(CLI::IsMember({"json", "csv", "dot"}));

    double lambda_re = 0.0, lambda_im = 0.0, modulus = -1.0, graph_lambda = -1.0;
    std::string truncations_text = "50,100,200,400", point_text;
    long window = 0;
    bool discover = false;

    CLI::App* spectrum = app.add_subcommand("spectrum", "Annulus, circles, radius estimate");
    CLI::App* classify = app.add_subcommand("classify", "Classify B - lambda I");
    classify->add_option("--lambda-re", lambda_re, "Re(lambda)");
    classify->add_option("--lambda-im", lambda_im, "Im(lambda)");
    classify->add_option("--modulus", modulus, "|lambda| (alternative to re/im)");
    int phases_override = -1;
    CLI::App* scan = app.add_subcommand("scan", "Sweep the modulus grid from the config");
    scan->add_option("--phases", phases_override,
                     "Override the phase count; > 0 emits (re, im, status_code) triples");
    CLI::App* verify = app.add_subcommand("verify", "Check every orbit block numerically");
    verify->add_option("--lambda-re", lambda_re, "Re(lambda)");
    verify->add_option("--lambda-im", lambda_im, "Im(lambda)");
    verify->add_option("--modulus", modulus, "|lambda| (alternative to re/im)");
    verify->add_option("--truncations", truncations_text, "Finite-section sizes")
        ->capture_default_str();
    verify->add_option("--window", window, "Coefficient window (0 = from residence bound)");
    CLI::App* graph = app.add_subcommand("graph", "Emit the fixed-point graph as DOT");
    graph->add_flag("--discover", discover, "Monte-Carlo edges instead of analytic");
    graph->add_option("--lambda", graph_lambda, "Colorize the decomposition at |lambda|");
    CLI::App* orbit = app.add_subcommand("orbit", "Dump a two-sided orbit as CSV");
    orbit->add_option("--point", point_text, "Start point, comma-separated")->required();
    orbit->add_option("--window", window, "Orbit window radius")->default_val(20);

    CLI11_PARSE(app, argc, argv);

    try {
        Config cfg = Config::load(config_path);
        if (seed_override) cfg.sampling.seed = *seed_override;

        const Complex lambda =
            modulus >= 0.0 ? Complex(modulus, 0.0) : Complex(lambda_re, lambda_im);

        if (spectrum->parsed()) {
            check_format(format, "json");
            return emit(wso::cmd_spectrum(cfg), out_path);
        }
        if (classify->parsed()) {
            check_format(format, "json");
            return emit(wso::cmd_classify(cfg, lambda), out_path);
        }
        if (scan->parsed()) {
            check_format(format, "csv");
            if (phases_override >= 0) {
                if (!cfg.scan) throw wso::ConfigError("/scan", "scan command needs a scan spec");
                cfg.scan->phases = phases_override;
            }
            return emit(wso::cmd_scan(cfg), out_path);
        }
        if (verify->parsed()) {
            if (!format.empty() && format != "json" && format != "csv")
                throw wso::ValidationError("verify emits json or the sigma ladder as csv");
            return emit(wso::cmd_verify(cfg, lambda, parse_int_list(truncations_text), window,
                                        format == "csv"),
                        out_path);
        }
        if (graph->parsed()) {
            check_format(format, "dot");
            std::optional<double> lam;
            if (graph_lambda >= 0.0) lam = graph_lambda;
            return emit(wso::cmd_graph(cfg, discover, lam), out_path);
        }
        if (orbit->parsed()) {
            check_format(format, "csv");
            return emit(wso::cmd_orbit(cfg, parse_double_list(point_text), window), out_path);
        }
        std::cerr << "error: no subcommand\n";
        return 1;
    } catch (const wso::NoConvergence& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const wso::WitnessNotFound& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
