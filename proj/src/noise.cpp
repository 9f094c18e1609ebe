#include "stwave/noise.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "stwave/rng.hpp"

namespace stwave {

double sequence_scale(const Shape& shape) { return std::sqrt(static_cast<double>(shape.size())); }

double epsilon_from_sigma(double sigma, const Shape& shape) { return sigma / sequence_scale(shape); }

double sigma_from_epsilon(double epsilon, const Shape& shape) { return epsilon * sequence_scale(shape); }

NoiseModel NoiseModel::from_sigma(double sigma, const Shape& shape, std::uint64_t seed, std::uint64_t stream) {
    if (sigma < 0.0) throw std::invalid_argument("sigma must be non-negative");
    return {epsilon_from_sigma(sigma, shape), sigma, seed, stream};
}

NoiseModel NoiseModel::from_epsilon(double epsilon, const Shape& shape, std::uint64_t seed, std::uint64_t stream) {
    if (epsilon < 0.0) throw std::invalid_argument("epsilon must be non-negative");
    return {epsilon, sigma_from_epsilon(epsilon, shape), seed, stream};
}

CoeffCube observe_sequence(const CoeffCube& truth, const NoiseModel& model) {
    if (model.epsilon < 0.0) throw std::invalid_argument("epsilon must be non-negative");
    CoeffCube y = truth;
    if (model.epsilon == 0.0) return y;
    const GaussianStream z(model.seed, model.stream);
    auto values = y.data();
    for (std::size_t i = 0; i < values.size(); ++i) values[i] += model.epsilon * z(i);
    return y;
}

SpaceTimeVolume observe_volume(const SpaceTimeVolume& truth, double sigma, std::uint64_t seed, std::uint64_t stream) {
    if (sigma < 0.0) throw std::invalid_argument("sigma must be non-negative");
    SpaceTimeVolume y = truth;
    if (sigma == 0.0) return y;
    const GaussianStream w(seed, stream);
    auto values = y.data();
    for (std::size_t i = 0; i < values.size(); ++i) values[i] += sigma * w(i);
    return y;
}

double snr_to_sigma(const SpaceTimeVolume& truth, double snr) {
    if (!(snr > 0.0)) throw std::invalid_argument("snr must be positive");
    const auto v = truth.data();
    const double count = static_cast<double>(v.size());
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / count;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / count);
    if (!(sd > 0.0)) throw std::invalid_argument("truth is constant; SNR undefined");
    return sd / snr;
}

double mad_sigma_slice(std::span<const double> slice, int d, std::size_t N, const WaveletSpec& w_space, MadBands bands) {
    if (N < 4 || !is_power_of_two(N)) throw std::invalid_argument("MAD estimation needs a dyadic N >= 4");
    const std::size_t S = d == 2 ? N * N : N;
    if (slice.size() != S) throw std::invalid_argument("slice length does not match N^d");

    std::vector<double> coeffs(slice.begin(), slice.end());
    dwt_slice(coeffs, d, N, w_space, 1);

    const std::size_t half = N / 2;
    std::vector<double> finest;
    if (d == 1) {
        for (std::size_t k = half; k < N; ++k) finest.push_back(std::abs(coeffs[k]));
    } else {
        for (std::size_t k1 = 0; k1 < N; ++k1) {
            for (std::size_t k2 = 0; k2 < N; ++k2) {
                const bool hi1 = k1 >= half;
                const bool hi2 = k2 >= half;
                const bool keep = bands == MadBands::DiagonalOnly ? (hi1 && hi2) : (hi1 || hi2);
                if (keep) finest.push_back(std::abs(coeffs[k1 * N + k2]));
            }
        }
    }

    const std::size_t mid = finest.size() / 2;
    std::nth_element(finest.begin(), finest.begin() + static_cast<std::ptrdiff_t>(mid), finest.end());
    double median = finest[mid];
    if (finest.size() % 2 == 0) {
        const double lower = *std::max_element(finest.begin(), finest.begin() + static_cast<std::ptrdiff_t>(mid));
        median = 0.5 * (median + lower);
    }
    return median / kMadNormalizer;
}

double mad_sigma_volume(const SpaceTimeVolume& volume, const WaveletSpec& w_space, MadBands bands) {
    const Shape& shape = volume.shape();
    double best = 0.0;
    for (std::size_t l = 0; l < shape.n; ++l)
        best = std::max(best, mad_sigma_slice(volume.slice(l), shape.d, shape.N, w_space, bands));
    return best;
}

}  // namespace stwave
