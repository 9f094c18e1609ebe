#pragma once

#include <cstdint>
#include <span>

#include "stwave/wavelet.hpp"

namespace stwave {

/// White-noise intensity epsilon and the equivalent per-sample regression
/// noise sigma, tied by epsilon = sigma / sqrt(n N^d).
struct NoiseModel {
    double epsilon = 0.0;
    double sigma = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;

    static NoiseModel from_sigma(double sigma, const Shape& shape, std::uint64_t seed, std::uint64_t stream = 0);
    static NoiseModel from_epsilon(double epsilon, const Shape& shape, std::uint64_t seed, std::uint64_t stream = 0);
};

/// sigma / sqrt(n N^d).
double epsilon_from_sigma(double sigma, const Shape& shape);
double sigma_from_epsilon(double epsilon, const Shape& shape);

/// Scale between discrete orthonormal coefficients of a sampled volume and
/// sequence-space coefficients: sqrt(n N^d).
double sequence_scale(const Shape& shape);

/// y = truth + epsilon * z, z i.i.d. N(0,1) addressed by (seed, stream, flat index).
CoeffCube observe_sequence(const CoeffCube& truth, const NoiseModel& model);

/// Y = f + sigma * w on every sample.
SpaceTimeVolume observe_volume(const SpaceTimeVolume& truth, double sigma, std::uint64_t seed,
                               std::uint64_t stream = 0);

/// sigma such that sd(truth) / sigma = snr (population sd over all samples).
double snr_to_sigma(const SpaceTimeVolume& truth, double snr);

enum class MadBands { AllFinest, DiagonalOnly };

/// median(|finest detail coefficients|) / 0.6745 of one N^d slice.
double mad_sigma_slice(std::span<const double> slice, int d, std::size_t N, const WaveletSpec& w_space,
                       MadBands bands = MadBands::AllFinest);

/// Maximum of mad_sigma_slice over the time slices.
double mad_sigma_volume(const SpaceTimeVolume& volume, const WaveletSpec& w_space,
                        MadBands bands = MadBands::AllFinest);

inline constexpr double kMadNormalizer = 0.6745;

}  // namespace stwave
