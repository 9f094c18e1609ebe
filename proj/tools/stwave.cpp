#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "stwave/estimators.hpp"
#include "stwave/io.hpp"
#include "stwave/noise.hpp"
#include "stwave/simulation.hpp"

namespace {

using namespace stwave;
using nlohmann::ordered_json;

constexpr int kExitBadFlags = 2;
constexpr int kExitIo = 3;
constexpr int kExitNumeric = 4;

struct DenoiseArgs {
    std::string input;
    std::string output;
    std::string method = "block";
    std::string sigma = "auto";
    double delta = kDefaultDelta;
    std::string wavelet{kDefaultWavelet};
    std::string wavelet_time;
    std::string mode = "hard";
    std::string mad_bands = "all";
    std::optional<int> j1;
    std::optional<int> m2;
    std::optional<double> s1;
    std::optional<double> s2;
    bool practical = false;
};

int run_denoise(const DenoiseArgs& a) {
    const SpaceTimeVolume volume = read_volume(a.input);
    const Shape& shape = volume.shape();

    DenoiseOptions options = default_denoise_options(parse_method(a.method));
    options.delta = a.delta;
    options.practical = a.practical;
    options.threshold_mode = parse_threshold_mode(a.mode);
    options.w_space = wavelet_by_name(a.wavelet);
    options.w_time = wavelet_by_name(a.wavelet_time.empty() ? a.wavelet : a.wavelet_time);
    options.j1 = a.j1;
    options.m2 = a.m2;

    double sigma = 0.0;
    std::string sigma_source = "given";
    if (a.sigma == "auto") {
        if (a.mad_bands != "all" && a.mad_bands != "diagonal")
            throw std::invalid_argument("--mad-bands must be all or diagonal");
        const MadBands bands = a.mad_bands == "all" ? MadBands::AllFinest : MadBands::DiagonalOnly;
        sigma = mad_sigma_volume(volume, options.w_space, bands);
        sigma_source = "mad";
    } else {
        std::size_t used = 0;
        try {
            sigma = std::stod(a.sigma, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != a.sigma.size() || !(sigma >= 0.0))
            throw std::invalid_argument("--sigma must be 'auto' or a non-negative number");
    }

    if (options.method == Method::Linear && (a.s1 || a.s2)) {
        if (!a.s1 || !a.s2) throw std::invalid_argument("--s1 and --s2 go together");
        const LevelPair levels = linear_levels(epsilon_from_sigma(sigma, shape), *a.s1, *a.s2, shape.d,
                                               shape.space_levels() - 1, shape.time_levels() - 1);
        if (!options.j1) options.j1 = levels.j1;
        if (!options.m2) options.m2 = levels.m2;
    }

    const DenoiseResult result = denoise(volume, options, sigma);
    write_volume(result.volume, a.output);

    const DenoiseSummary& s = result.summary;
    ordered_json j;
    j["method"] = std::string(to_string(s.method));
    j["sigma"] = s.sigma;
    j["sigma_source"] = sigma_source;
    j["epsilon"] = s.epsilon;
    j["j1"] = s.j1;
    j["m2"] = s.m2;
    j["block_length"] = s.block_length;
    j["threshold"] = s.threshold;
    j["delta"] = s.delta;
    j["wavelet_space"] = options.w_space.name;
    j["wavelet_time"] = options.w_time.name;
    j["mode"] = std::string(to_string(options.threshold_mode));
    j["output"] = a.output;
    std::cout << j.dump() << '\n';
    return 0;
}

struct SimulateArgs {
    std::size_t N = 0;
    std::size_t n = 0;
    int M = 0;
    std::vector<double> snr;
    std::uint64_t seed = SimConfig{}.seed;
    std::string out = "results.csv";
    bool full_scale = false;
    double delta = kStudyDelta;
    std::string wavelet = "haar";
    std::string wavelet_time;
    std::string mode = "hard";
    std::vector<std::string> methods;
};

int run_simulate(const SimulateArgs& a) {
    SimConfig config = a.full_scale ? SimConfig::full_scale() : SimConfig{};
    if (a.N) config.N = a.N;
    if (a.n) config.n = a.n;
    if (a.M) config.M = a.M;
    if (!a.snr.empty()) config.snr_list = a.snr;
    config.seed = a.seed;
    config.delta = a.delta;
    config.practical = a.delta <= theoretical_delta_floor();
    config.wavelet_space = a.wavelet;
    config.wavelet_time = a.wavelet_time.empty() ? a.wavelet : a.wavelet_time;
    config.threshold_mode = parse_threshold_mode(a.mode);
    if (!a.methods.empty()) {
        config.methods.clear();
        for (const std::string& m : a.methods) config.methods.push_back(parse_method(m));
    }
    wavelet_by_name(config.wavelet_space);
    wavelet_by_name(config.wavelet_time);

    const StudyResult result = run_study(config);
    write_results_csv(result.records, a.out);
    write_text(study_metadata_json(config, result), sidecar_path(a.out));

    ordered_json j;
    j["rows"] = result.records.size();
    j["out"] = a.out;
    j["metadata"] = sidecar_path(a.out).string();
    ordered_json medians = ordered_json::object();
    for (Method m : config.methods) {
        ordered_json per_snr = ordered_json::object();
        for (double snr : config.snr_list) {
            try {
                per_snr[std::to_string(snr)] = median_mse(result.records, m, snr);
            } catch (const std::invalid_argument&) {
                per_snr[std::to_string(snr)] = nullptr;
            }
        }
        medians[std::string(to_string(m))] = per_snr;
    }
    j["median_mse"] = medians;
    std::cout << j.dump() << '\n';
    return 0;
}

struct RateArgs {
    RateConfig config;
    std::string out;
};

int run_rate(const RateArgs& a) {
    const RateResult result = rate_experiment(a.config);
    if (!a.out.empty()) {
        write_rate_csv(result, a.out);
        write_text(rate_metadata_json(a.config, result), sidecar_path(a.out));
    }
    ordered_json j;
    j["slope"] = result.slope;
    j["theoretical_slope"] = result.theoretical_slope;
    ordered_json pts = ordered_json::array();
    for (const RatePoint& p : result.points) pts.push_back({{"epsilon", p.epsilon}, {"risk", p.risk}});
    j["points"] = pts;
    std::cout << j.dump() << '\n';
    return 0;
}

struct DeviationArgs {
    std::vector<double> delta;
    std::vector<double> eps;
    long trials = 100000;
    std::uint64_t seed = 1;
};

int run_deviation(const DeviationArgs& a) {
    for (double delta : a.delta) {
        for (double eps : a.eps) {
            const DeviationResult r = deviation_check(delta, eps, a.trials, a.seed);
            std::printf("%s delta=%g eps=%g L=%zu empirical=%.6g bound=%.6g se=%.3g\n", r.pass ? "PASS" : "FAIL",
                        r.delta, r.epsilon, r.block_length, r.empirical, r.bound, r.standard_error);
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Space-time wavelet denoising"};
    app.require_subcommand(1);

    DenoiseArgs den;
    auto* cmd_denoise = app.add_subcommand("denoise", "Denoise a volume file");
    cmd_denoise->add_option("--input", den.input, "Input volume (STVOL1)")->required();
    cmd_denoise->add_option("--output", den.output, "Output volume")->required();
    cmd_denoise->add_option("--method", den.method, "block | linear | pixel1d | slice2d")
        ->check(CLI::IsMember({"block", "linear", "pixel1d", "slice2d"}));
    cmd_denoise->add_option("--sigma", den.sigma, "Noise level, or 'auto' for the MAD estimate");
    cmd_denoise->add_option("--delta", den.delta, "Block threshold constant");
    cmd_denoise->add_option("--wavelet", den.wavelet, "haar | daub4 | sym8")
        ->check(CLI::IsMember(wavelet_names()));
    cmd_denoise->add_option("--wavelet-time", den.wavelet_time, "Temporal wavelet (defaults to --wavelet)")
        ->check(CLI::IsMember(wavelet_names()));
    cmd_denoise->add_option("--mode", den.mode, "Baseline thresholding: hard | soft")
        ->check(CLI::IsMember({"hard", "soft"}));
    cmd_denoise->add_option("--mad-bands", den.mad_bands, "Bands for --sigma auto: all | diagonal")
        ->check(CLI::IsMember({"all", "diagonal"}));
    cmd_denoise->add_option("--j1", den.j1, "Spatial cutoff level");
    cmd_denoise->add_option("--m2", den.m2, "Temporal cutoff level");
    cmd_denoise->add_option("--s1", den.s1, "Spatial smoothness (linear cutoffs)");
    cmd_denoise->add_option("--s2", den.s2, "Temporal smoothness (linear cutoffs)");
    cmd_denoise->add_flag("--practical", den.practical, "Allow delta below the theoretical floor");

    SimulateArgs sim;
    auto* cmd_sim = app.add_subcommand("simulate", "Phantom study: observe, denoise, score");
    cmd_sim->add_option("--N", sim.N, "Image side");
    cmd_sim->add_option("--n", sim.n, "Number of time points");
    cmd_sim->add_option("--M", sim.M, "Replications");
    cmd_sim->add_option("--snr", sim.snr, "SNR value (repeatable)");
    cmd_sim->add_option("--seed", sim.seed, "Seed");
    cmd_sim->add_option("--out", sim.out, "Results CSV; metadata goes to <stem>.json");
    cmd_sim->add_flag("--full-scale", sim.full_scale, "N=64, n=128, M=100, SNR {7,5,3}");
    cmd_sim->add_option("--delta", sim.delta, "Block threshold constant");
    cmd_sim->add_option("--wavelet", sim.wavelet, "Spatial wavelet")->check(CLI::IsMember(wavelet_names()));
    cmd_sim->add_option("--wavelet-time", sim.wavelet_time, "Temporal wavelet")
        ->check(CLI::IsMember(wavelet_names()));
    cmd_sim->add_option("--mode", sim.mode, "Baseline thresholding")->check(CLI::IsMember({"hard", "soft"}));
    cmd_sim->add_option("--method", sim.methods, "Method (repeatable)")
        ->check(CLI::IsMember({"block", "linear", "pixel1d", "slice2d"}));

    RateArgs rate;
    auto* cmd_rate = app.add_subcommand("rate", "Risk-versus-epsilon slope on synthesized ball members");
    cmd_rate->add_option("--d", rate.config.d, "Spatial dimension")->check(CLI::IsMember({1, 2}));
    cmd_rate->add_option("--s1", rate.config.s1, "Spatial smoothness");
    cmd_rate->add_option("--s2", rate.config.s2, "Temporal smoothness");
    cmd_rate->add_option("--eps", rate.config.eps_grid, "Epsilon grid");
    cmd_rate->add_option("--reps", rate.config.reps, "Replications per epsilon");
    cmd_rate->add_option("--seed", rate.config.seed, "Seed");
    cmd_rate->add_option("--N", rate.config.N, "Spatial size");
    cmd_rate->add_option("--n", rate.config.n, "Temporal size");
    cmd_rate->add_option("--A", rate.config.A1, "Ball radius (A1 = A2)")->each([&](const std::string&) {
        rate.config.A2 = rate.config.A1;
    });
    cmd_rate->add_option("--delta", rate.config.delta, "Block threshold constant");
    cmd_rate->add_option("--out", rate.out, "CSV of epsilon,risk; metadata goes to <stem>.json");

    DeviationArgs dev;
    auto* cmd_dev = app.add_subcommand("deviation", "Tail probability of a pure-noise block");
    cmd_dev->add_option("--delta", dev.delta, "delta (repeatable)")->required();
    cmd_dev->add_option("--eps", dev.eps, "epsilon (repeatable)")->required();
    cmd_dev->add_option("--trials", dev.trials, "Trials per cell");
    cmd_dev->add_option("--seed", dev.seed, "Seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << app.help();
        return kExitBadFlags;
    }

    try {
        if (*cmd_denoise) return run_denoise(den);
        if (*cmd_sim) return run_simulate(sim);
        if (*cmd_rate) return run_rate(rate);
        if (*cmd_dev) return run_deviation(dev);
    } catch (const VolumeFileError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n' << app.help();
        return kExitBadFlags;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumeric;
    }
    return kExitBadFlags;
}
