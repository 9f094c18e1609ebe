#include "stwave/simulation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <tuple>

#include "stwave/besov.hpp"
#include "stwave/noise.hpp"
#include "stwave/rng.hpp"

namespace stwave {

SimConfig SimConfig::full_scale() {
    SimConfig config;
    config.N = 64;
    config.n = 128;
    config.M = 100;
    config.snr_list = {7.0, 5.0, 3.0};
    return config;
}

void validate(const SimConfig& config) {
    validate_shape(Shape{2, config.N, config.n});
    if (config.M < 1) throw std::invalid_argument("M must be >= 1");
    if (config.snr_list.empty()) throw std::invalid_argument("need at least one SNR");
    for (double snr : config.snr_list)
        if (!(snr > 0.0)) throw std::invalid_argument("SNR must be positive");
    if (config.methods.empty()) throw std::invalid_argument("need at least one method");
}

double mse(const SpaceTimeVolume& estimate, const SpaceTimeVolume& truth) {
    if (!(estimate.shape() == truth.shape())) throw std::invalid_argument("shape mismatch");
    const auto a = estimate.data();
    const auto b = truth.data();
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += (a[i] - b[i]) * (a[i] - b[i]);
    return sum / static_cast<double>(a.size());
}

StudyResult run_study(const SimConfig& config) {
    validate(config);
    const Phantom ph = phantom(config.N, config.n);
    const SpaceTimeVolume& truth = ph.volume;

    DenoiseOptions options;
    options.delta = config.delta;
    options.practical = config.practical;
    options.threshold_mode = config.threshold_mode;
    options.w_space = wavelet_by_name(config.wavelet_space);
    options.w_time = wavelet_by_name(config.wavelet_time);

    StudyResult result;
    for (std::size_t si = 0; si < config.snr_list.size(); ++si) {
        const double snr = config.snr_list[si];
        const double sigma = snr_to_sigma(truth, snr);
        result.sigmas.push_back(sigma);
        result.block_lengths.push_back(block_length(epsilon_from_sigma(sigma, truth.shape())));
        for (int rep = 0; rep < config.M; ++rep) {
            const std::uint64_t stream = (static_cast<std::uint64_t>(si) << 32) | static_cast<std::uint32_t>(rep);
            const SpaceTimeVolume noisy = observe_volume(truth, sigma, config.seed, stream);
            result.calibration.push_back({snr, rep, sigma, mse(noisy, truth)});
            for (Method method : config.methods) {
                options.method = method;
                MseRecord record{method, snr, rep, 0.0, 0.0, false};
                const auto start = std::chrono::steady_clock::now();
                try {
                    const DenoiseResult out = denoise(noisy, options, sigma);
                    record.mse = mse(out.volume, truth);
                    if (!std::isfinite(record.mse)) throw std::runtime_error("non-finite MSE");
                } catch (const std::exception&) {
                    record.mse = std::numeric_limits<double>::quiet_NaN();
                    record.failed = true;
                }
                record.runtime_s =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
                result.records.push_back(record);
            }
        }
    }
    std::sort(result.records.begin(), result.records.end(), [](const MseRecord& a, const MseRecord& b) {
        return std::make_tuple(to_string(a.method), a.snr, a.rep) < std::make_tuple(to_string(b.method), b.snr, b.rep);
    });
    return result;
}

double median_mse(const std::vector<MseRecord>& records, Method method, double snr) {
    std::vector<double> values;
    for (const MseRecord& r : records)
        if (r.method == method && r.snr == snr && !r.failed) values.push_back(r.mse);
    if (values.empty()) throw std::invalid_argument("no records for method/snr");
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("need at least two points");
    double mx = 0.0, my = 0.0;
    const double k = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw std::invalid_argument("log-log fit needs positive values");
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= k;
    my /= k;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    if (sxx == 0.0) throw std::invalid_argument("degenerate abscissae");
    return sxy / sxx;
}

RateResult rate_experiment(const RateConfig& config) {
    if (config.eps_grid.size() < 3) throw std::invalid_argument("epsilon grid needs at least three points");
    const auto [lo, hi] = std::minmax_element(config.eps_grid.begin(), config.eps_grid.end());
    if (!(*lo > 0.0) || std::log2(*hi / *lo) < 3.0 - 1e-12)
        throw std::invalid_argument("epsilon grid must be positive and span at least three octaves");
    if (config.reps < 1) throw std::invalid_argument("reps must be >= 1");

    const Shape shape{config.d, config.N, config.n};
    validate_shape(shape);
    const BesovParams params = make_besov_params(config.s1, 2.0, 2.0, config.A1, config.s2, 2.0, 2.0, config.A2,
                                                 config.d, shape.space_levels() - 1);
    const WaveletSpec w_time = wavelet_by_name(config.wavelet_time);

    std::vector<double> risk(config.eps_grid.size(), 0.0);
    for (int rep = 0; rep < config.reps; ++rep) {
        const CoeffCube truth = synthesize_member(params, shape, config.seed + static_cast<std::uint64_t>(rep), w_time);
        for (std::size_t e = 0; e < config.eps_grid.size(); ++e) {
            EstimatorConfig est;
            est.epsilon = config.eps_grid[e];
            est.delta = config.delta;
            est.d = config.d;
            est.method = Method::Block;
            const std::uint64_t stream = (static_cast<std::uint64_t>(e + 1) << 32) | static_cast<std::uint32_t>(rep);
            const CoeffCube y = observe_sequence(truth, NoiseModel::from_epsilon(est.epsilon, shape, config.seed, stream));
            const CoeffCube fit = block_threshold_estimate(y, est);
            double loss = 0.0;
            for (std::size_t i = 0; i < fit.data().size(); ++i) {
                const double diff = fit[i] - truth[i];
                loss += diff * diff;
            }
            risk[e] += loss / config.reps;
        }
    }

    RateResult result;
    for (std::size_t e = 0; e < config.eps_grid.size(); ++e) result.points.push_back({config.eps_grid[e], risk[e]});
    result.slope = loglog_slope(config.eps_grid, risk);
    result.theoretical_slope = rate_exponent(config.s1, config.s2, config.d);
    return result;
}

DeviationResult deviation_check(double delta, double epsilon, long trials, std::uint64_t seed) {
    if (!(delta > 1.0)) throw std::invalid_argument("delta must exceed 1");
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    if (trials < 10000) throw std::invalid_argument("need at least 10^4 trials");

    DeviationResult r{};
    r.delta = delta;
    r.epsilon = epsilon;
    r.trials = trials;
    r.block_length = block_length(epsilon);
    const double threshold = block_threshold(epsilon, delta);
    const GaussianStream z(seed, 0xDE71A7E5ull);

    long hits = 0;
    std::uint64_t index = 0;
    for (long t = 0; t < trials; ++t) {
        double sum = 0.0;
        for (std::size_t i = 0; i < r.block_length; ++i) {
            const double e = epsilon * z(index++);
            sum += e * e;
        }
        if (sum >= threshold) ++hits;
    }
    r.empirical = static_cast<double>(hits) / static_cast<double>(trials);
    r.bound = std::pow(epsilon, (delta - 1.0) * (delta - 1.0));
    r.standard_error = std::sqrt(r.empirical * (1.0 - r.empirical) / static_cast<double>(trials));
    r.pass = r.empirical <= r.bound + 3.0 * r.standard_error;
    return r;
}

}  // namespace stwave
