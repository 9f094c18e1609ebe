#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stwave/wavelet.hpp"

namespace stwave {

enum class Method { Linear, Block, Pixel1d, Slice2d };
enum class ThresholdMode { Hard, Soft };

std::string_view to_string(Method m);
std::string_view to_string(ThresholdMode m);
Method parse_method(std::string_view s);
ThresholdMode parse_threshold_mode(std::string_view s);

/// 2(2 sqrt 2 + 1), the smallest delta covered by the block-thresholding risk bound.
double theoretical_delta_floor();
inline constexpr double kDefaultDelta = 7.66;

struct EstimatorConfig {
    double epsilon = 0.0;
    double delta = kDefaultDelta;
    int d = 2;
    /// Cutoffs; when unset the method's rule is used (full depth for linear,
    /// the epsilon^-2 rule for block).
    std::optional<int> j1;
    std::optional<int> m2;
    Method method = Method::Block;
    ThresholdMode threshold_mode = ThresholdMode::Hard;
    /// Allows delta below the theoretical floor.
    bool practical = false;
};

/// Throws std::invalid_argument for non-positive epsilon/delta or a
/// theoretical-mode delta at or below the floor.
void validate(const EstimatorConfig& config);

struct LevelPair {
    int j1;
    int m2;
    bool operator==(const LevelPair&) const = default;
};

/// Largest level with 2^{level+1} <= floor(x), never below -1.
int dyadic_level(double x);

/// Linear-estimator cutoffs from the known smoothness, clamped to
/// [-1, max_j] x [-1, max_m].
LevelPair linear_levels(double epsilon, double s1, double s2, int d, int max_j = 1 << 20, int max_m = 1 << 20);

/// Block-estimator cutoffs 2^{j1+1} = 2^{m2+1} ~ floor(epsilon^-2), clamped.
LevelPair block_levels(double epsilon, int max_j, int max_m);

/// L_eps = 1 + floor(ln(epsilon^-2)), at least 1.
std::size_t block_length(double epsilon);

/// delta^2 epsilon^2 L_eps.
double block_threshold(double epsilon, double delta);

struct Block {
    std::size_t begin;  // first ell in the block
    std::size_t end;    // one past the last
    std::size_t size() const { return end - begin; }
};

/// Contiguous blocks of length L_eps covering the 2^m positions of time level m
/// (one position at m = -1); the last block may be shorter.
struct BlockPartition {
    int level = -1;
    std::size_t block_length = 1;
    std::vector<Block> blocks;
};

BlockPartition block_partition(int m, double epsilon);

/// Sum of y^2 over block `block_index` of time level m for the spatial index
/// `space_flat` of a full-depth cube.
double block_energy(const CoeffCube& y, std::size_t space_flat, int m, std::size_t block_index, double epsilon);

/// Keeps y_{lambda,m,ell} for |lambda| <= j1 and m <= m2.
CoeffCube linear_estimate(const CoeffCube& y, const EstimatorConfig& config);

/// Within the retained levels, keeps a whole temporal block iff its energy
/// reaches delta^2 epsilon^2 L_eps; zero elsewhere.
CoeffCube block_threshold_estimate(const CoeffCube& y, const EstimatorConfig& config);

/// Per-trajectory 1D denoising at the universal threshold sigma sqrt(2 ln n).
SpaceTimeVolume pixel1d_denoise(const SpaceTimeVolume& volume, double sigma, const WaveletSpec& w_time,
                                ThresholdMode mode);

/// Per-slice d-D denoising at the universal threshold sigma sqrt(2 ln N^d).
SpaceTimeVolume slice2d_denoise(const SpaceTimeVolume& volume, double sigma, const WaveletSpec& w_space,
                                ThresholdMode mode);

double apply_threshold(double c, double threshold, ThresholdMode mode);

struct DenoiseOptions {
    Method method = Method::Block;
    double delta = kDefaultDelta;
    bool practical = false;
    ThresholdMode threshold_mode = ThresholdMode::Hard;
    std::optional<int> j1;
    std::optional<int> m2;
    WaveletSpec w_space;
    WaveletSpec w_time;
};

DenoiseOptions default_denoise_options(Method method);

struct DenoiseSummary {
    Method method = Method::Block;
    double sigma = 0.0;
    double epsilon = 0.0;
    std::size_t block_length = 0;  // 0 when not applicable
    double threshold = 0.0;        // block: delta^2 eps^2 L_eps; baselines: universal threshold
    int j1 = -1;
    int m2 = -1;
    double delta = 0.0;
};

struct DenoiseResult {
    SpaceTimeVolume volume;
    DenoiseSummary summary;
};

/// transform -> estimator -> inverse transform. For linear and block the
/// sampled volume is mapped to sequence space with epsilon = sigma / sqrt(n N^d).
DenoiseResult denoise(const SpaceTimeVolume& volume, const DenoiseOptions& options, double sigma);

/// Sequence-space coefficients of a sampled volume: full-depth hybrid transform
/// divided by sqrt(n N^d).
CoeffCube to_sequence_space(const SpaceTimeVolume& volume, const WaveletSpec& w_space, const WaveletSpec& w_time);
SpaceTimeVolume from_sequence_space(const CoeffCube& cube, const WaveletSpec& w_space, const WaveletSpec& w_time);

}  // namespace stwave
