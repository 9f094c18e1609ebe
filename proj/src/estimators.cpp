#include "stwave/estimators.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "stwave/besov.hpp"
#include "stwave/noise.hpp"

namespace stwave {

std::string_view to_string(Method m) {
    switch (m) {
        case Method::Linear: return "linear";
        case Method::Block: return "block";
        case Method::Pixel1d: return "pixel1d";
        case Method::Slice2d: return "slice2d";
    }
    return "?";
}

std::string_view to_string(ThresholdMode m) { return m == ThresholdMode::Hard ? "hard" : "soft"; }

Method parse_method(std::string_view s) {
    if (s == "linear") return Method::Linear;
    if (s == "block") return Method::Block;
    if (s == "pixel1d") return Method::Pixel1d;
    if (s == "slice2d") return Method::Slice2d;
    throw std::invalid_argument("unknown method: " + std::string(s));
}

ThresholdMode parse_threshold_mode(std::string_view s) {
    if (s == "hard") return ThresholdMode::Hard;
    if (s == "soft") return ThresholdMode::Soft;
    throw std::invalid_argument("unknown threshold mode: " + std::string(s));
}

double theoretical_delta_floor() { return 2.0 * (2.0 * std::sqrt(2.0) + 1.0); }

void validate(const EstimatorConfig& config) {
    if (config.d != 1 && config.d != 2) throw std::invalid_argument("d must be 1 or 2");
    if (!(config.epsilon >= 0.0)) throw std::invalid_argument("epsilon must be non-negative");
    if (config.method == Method::Block) {
        if (!(config.epsilon > 0.0)) throw std::invalid_argument("block thresholding needs epsilon > 0");
        if (!(config.delta > 0.0)) throw std::invalid_argument("delta must be positive");
        if (!config.practical && !(config.delta > theoretical_delta_floor()))
            throw std::invalid_argument("delta must exceed 2(2 sqrt 2 + 1) unless practical mode is set");
    }
}

int dyadic_level(double x) {
    if (!(x >= 1.0)) return -1;
    if (x >= 0x1.0p62) return 61;
    const auto u = static_cast<std::uint64_t>(std::floor(x));
    return static_cast<int>(std::bit_width(u)) - 2;
}

LevelPair linear_levels(double epsilon, double s1, double s2, int d, int max_j, int max_m) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    const double s = smoothness_index(s1, s2, d);
    const double denom = 2.0 * s + d + 1.0;
    // powers that land on 2^k should not drop a level through rounding
    const double slack = 1.0 + 1e-12;
    const int j1 = dyadic_level(slack * std::pow(epsilon, -2.0 * s / (denom * s1)));
    const int m2 = dyadic_level(slack * std::pow(epsilon, -2.0 * s / (denom * s2)));
    return {std::clamp(j1, -1, max_j), std::clamp(m2, -1, max_m)};
}

LevelPair block_levels(double epsilon, int max_j, int max_m) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    const int level = dyadic_level(1.0 / (epsilon * epsilon));
    return {std::clamp(level, -1, max_j), std::clamp(level, -1, max_m)};
}

std::size_t block_length(double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    const double extra = std::floor(std::log(1.0 / (epsilon * epsilon)));
    return extra < 0.0 ? 1 : 1 + static_cast<std::size_t>(extra);
}

double block_threshold(double epsilon, double delta) {
    return delta * delta * epsilon * epsilon * static_cast<double>(block_length(epsilon));
}

namespace {

std::size_t level_count(int m) { return m < 0 ? 1 : std::size_t{1} << m; }
std::size_t level_offset(int m) { return m < 0 ? 0 : std::size_t{1} << m; }

void require_full_depth(const CoeffCube& y) {
    if (!y.full_depth()) throw std::invalid_argument("estimators need a full-depth coefficient cube");
}

}  // namespace

BlockPartition block_partition(int m, double epsilon) {
    if (m < -1) throw std::invalid_argument("time level must be >= -1");
    BlockPartition part;
    part.level = m;
    part.block_length = block_length(epsilon);
    const std::size_t count = level_count(m);
    for (std::size_t begin = 0; begin < count; begin += part.block_length)
        part.blocks.push_back({begin, std::min(begin + part.block_length, count)});
    return part;
}

double block_energy(const CoeffCube& y, std::size_t space_flat, int m, std::size_t block_index, double epsilon) {
    require_full_depth(y);
    const Shape& shape = y.shape();
    const std::size_t S = shape.slice_size();
    if (space_flat >= S) throw std::invalid_argument("spatial index out of range");
    if (m < -1 || m >= shape.time_levels()) throw std::invalid_argument("time level out of range");
    const BlockPartition part = block_partition(m, epsilon);
    if (block_index >= part.blocks.size()) throw std::invalid_argument("block index out of range");
    const Block& b = part.blocks[block_index];
    const std::size_t base = level_offset(m);
    double energy = 0.0;
    for (std::size_t ell = b.begin; ell < b.end; ++ell) {
        const double v = y[(base + ell) * S + space_flat];
        energy += v * v;
    }
    return energy;
}

CoeffCube linear_estimate(const CoeffCube& y, const EstimatorConfig& config) {
    validate(config);
    require_full_depth(y);
    const Shape& shape = y.shape();
    const int j1 = std::clamp(config.j1.value_or(shape.space_levels() - 1), -1, shape.space_levels() - 1);
    const int m2 = std::clamp(config.m2.value_or(shape.time_levels() - 1), -1, shape.time_levels() - 1);
    CoeffCube out(shape, y.depth_space(), y.depth_time());
    for_each_coeff(y, [&](const CoeffIndex& idx, double v) {
        if (idx.space_level <= j1 && idx.time_level <= m2) out[idx.flat] = v;
    });
    return out;
}

CoeffCube block_threshold_estimate(const CoeffCube& y, const EstimatorConfig& config) {
    validate(config);
    require_full_depth(y);
    const Shape& shape = y.shape();
    const std::size_t S = shape.slice_size();
    const LevelPair rule = block_levels(config.epsilon, shape.space_levels() - 1, shape.time_levels() - 1);
    const int j1 = std::clamp(config.j1.value_or(rule.j1), -1, shape.space_levels() - 1);
    const int m2 = std::clamp(config.m2.value_or(rule.m2), -1, shape.time_levels() - 1);
    const double threshold = block_threshold(config.epsilon, config.delta);

    std::vector<BlockPartition> partitions;
    for (int m = -1; m <= m2; ++m) partitions.push_back(block_partition(m, config.epsilon));

    CoeffCube out(shape, y.depth_space(), y.depth_time());
    for (std::size_t q = 0; q < S; ++q) {
        const std::size_t k1 = shape.d == 2 ? q / shape.N : q;
        const std::size_t k2 = shape.d == 2 ? q % shape.N : 0;
        if (space_label(shape, y.depth_space(), k1, k2).level > j1) continue;
        for (const BlockPartition& part : partitions) {
            const std::size_t base = level_offset(part.level);
            for (const Block& b : part.blocks) {
                double energy = 0.0;
                for (std::size_t ell = b.begin; ell < b.end; ++ell) {
                    const double v = y[(base + ell) * S + q];
                    energy += v * v;
                }
                if (energy >= threshold) {
                    for (std::size_t ell = b.begin; ell < b.end; ++ell) {
                        const std::size_t i = (base + ell) * S + q;
                        out[i] = y[i];
                    }
                }
            }
        }
    }
    return out;
}

double apply_threshold(double c, double threshold, ThresholdMode mode) {
    const double mag = std::abs(c);
    if (mode == ThresholdMode::Hard) return mag > threshold ? c : 0.0;
    return mag > threshold ? std::copysign(mag - threshold, c) : 0.0;
}

SpaceTimeVolume pixel1d_denoise(const SpaceTimeVolume& volume, double sigma, const WaveletSpec& w_time,
                                ThresholdMode mode) {
    if (sigma < 0.0) throw std::invalid_argument("sigma must be non-negative");
    const Shape& shape = volume.shape();
    const std::size_t S = shape.slice_size();
    const double threshold = sigma * std::sqrt(2.0 * std::log(static_cast<double>(shape.n)));
    SpaceTimeVolume out = volume;
    dwt_time_inplace(out.data(), shape, w_time, shape.time_levels());
    // every row l >= 1 holds detail coefficients of all trajectories
    auto values = out.data();
    for (std::size_t i = S; i < values.size(); ++i) values[i] = apply_threshold(values[i], threshold, mode);
    idwt_time_inplace(out.data(), shape, w_time, shape.time_levels());
    return out;
}

SpaceTimeVolume slice2d_denoise(const SpaceTimeVolume& volume, double sigma, const WaveletSpec& w_space,
                                ThresholdMode mode) {
    if (sigma < 0.0) throw std::invalid_argument("sigma must be non-negative");
    const Shape& shape = volume.shape();
    const std::size_t S = shape.slice_size();
    const double threshold = sigma * std::sqrt(2.0 * std::log(static_cast<double>(S)));
    const int depth = shape.space_levels();
    SpaceTimeVolume out = volume;
    for (std::size_t l = 0; l < shape.n; ++l) {
        auto slice = out.slice(l);
        dwt_slice(slice, shape.d, shape.N, w_space, depth);
        for (std::size_t q = 1; q < S; ++q) slice[q] = apply_threshold(slice[q], threshold, mode);
        idwt_slice(slice, shape.d, shape.N, w_space, depth);
    }
    return out;
}

CoeffCube to_sequence_space(const SpaceTimeVolume& volume, const WaveletSpec& w_space, const WaveletSpec& w_time) {
    CoeffCube cube = dwt_spacetime(volume, w_space, w_time);
    const double inv = 1.0 / sequence_scale(volume.shape());
    for (double& v : cube.values()) v *= inv;
    return cube;
}

SpaceTimeVolume from_sequence_space(const CoeffCube& cube, const WaveletSpec& w_space, const WaveletSpec& w_time) {
    CoeffCube scaled = cube;
    const double scale = sequence_scale(cube.shape());
    for (double& v : scaled.values()) v *= scale;
    return idwt_spacetime(scaled, w_space, w_time);
}

DenoiseOptions default_denoise_options(Method method) {
    DenoiseOptions options;
    options.method = method;
    options.w_space = wavelet_by_name(kDefaultWavelet);
    options.w_time = wavelet_by_name(kDefaultWavelet);
    return options;
}

DenoiseResult denoise(const SpaceTimeVolume& volume, const DenoiseOptions& options, double sigma) {
    if (!(sigma >= 0.0)) throw std::invalid_argument("sigma must be non-negative");
    const Shape& shape = volume.shape();
    DenoiseSummary summary;
    summary.method = options.method;
    summary.sigma = sigma;
    summary.epsilon = epsilon_from_sigma(sigma, shape);
    summary.delta = options.delta;
    summary.j1 = shape.space_levels() - 1;
    summary.m2 = shape.time_levels() - 1;

    switch (options.method) {
        case Method::Linear:
        case Method::Block: {
            EstimatorConfig config;
            config.epsilon = summary.epsilon;
            config.delta = options.delta;
            config.d = shape.d;
            config.j1 = options.j1;
            config.m2 = options.m2;
            config.method = options.method;
            config.threshold_mode = options.threshold_mode;
            config.practical = options.practical;
            validate(config);

            const CoeffCube y = to_sequence_space(volume, options.w_space, options.w_time);
            CoeffCube estimate;
            if (options.method == Method::Linear) {
                estimate = linear_estimate(y, config);
                summary.j1 = std::clamp(options.j1.value_or(summary.j1), -1, summary.j1);
                summary.m2 = std::clamp(options.m2.value_or(summary.m2), -1, summary.m2);
            } else {
                estimate = block_threshold_estimate(y, config);
                const LevelPair rule = block_levels(config.epsilon, summary.j1, summary.m2);
                summary.j1 = std::clamp(options.j1.value_or(rule.j1), -1, summary.j1);
                summary.m2 = std::clamp(options.m2.value_or(rule.m2), -1, summary.m2);
                summary.block_length = block_length(config.epsilon);
                summary.threshold = block_threshold(config.epsilon, config.delta);
            }
            for (double v : estimate.data())
                if (!std::isfinite(v)) throw std::runtime_error("non-finite coefficient in estimate");
            return {from_sequence_space(estimate, options.w_space, options.w_time), summary};
        }
        case Method::Pixel1d:
            summary.threshold = sigma * std::sqrt(2.0 * std::log(static_cast<double>(shape.n)));
            return {pixel1d_denoise(volume, sigma, options.w_time, options.threshold_mode), summary};
        case Method::Slice2d:
            summary.threshold = sigma * std::sqrt(2.0 * std::log(static_cast<double>(shape.slice_size())));
            return {slice2d_denoise(volume, sigma, options.w_space, options.threshold_mode), summary};
    }
    throw std::invalid_argument("unknown method");
}

}  // namespace stwave
