#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stwave/estimators.hpp"
#include "stwave/wavelet.hpp"

namespace stwave {

inline constexpr int kPhantomRegions = 6;

/// Region classes of the phantom: background, skull, brain, ventricles,
/// upper ellipse, small ellipses.
struct Phantom {
    std::size_t N = 0;
    std::vector<int> labels;                          // N x N, row-major (k1, k2)
    std::vector<double> intensities;                  // per region
    std::vector<std::vector<double>> region_signals;  // per region, length n
    SpaceTimeVolume volume;                           // n x N x N
};

/// Modified Shepp-Logan geometry split into six regions; every pixel carries
/// the length-n signal of its region (the "default" signal set).
Phantom phantom(std::size_t N, std::size_t n);

/// Signal set name recorded in study metadata.
inline constexpr const char* kSignalSetName = "default-6: constant, step, ramp, bump, two-bump, damped-oscillation";

/// The six temporal shapes sampled at t_l = l / n.
std::vector<std::vector<double>> region_signals(std::size_t n, const std::vector<double>& intensities);

/// Practical block-threshold constant used by the study. The theoretical
/// default keeps almost no block at desk-scale noise levels.
inline constexpr double kStudyDelta = 1.5;

struct SimConfig {
    std::size_t N = 32;
    std::size_t n = 64;
    std::vector<double> snr_list{7.0, 5.0, 3.0};
    int M = 20;
    std::uint64_t seed = 20240601;
    std::vector<Method> methods{Method::Pixel1d, Method::Slice2d, Method::Block};
    // Haar matches the piecewise-constant phantom and the step/ramp signals.
    std::string wavelet_space{"haar"};
    std::string wavelet_time{"haar"};
    double delta = kStudyDelta;
    bool practical = true;
    ThresholdMode threshold_mode = ThresholdMode::Hard;

    /// N = 64, n = 128, M = 100, SNR {7, 5, 3}.
    static SimConfig full_scale();
};

void validate(const SimConfig& config);

struct MseRecord {
    Method method = Method::Block;
    double snr = 0.0;
    int rep = 0;
    double mse = 0.0;   // NaN marks a failed record
    double runtime_s = 0.0;
    bool failed = false;
};

/// Per (snr, rep) check that the noisy input's MSE tracks sigma^2.
struct CalibrationRecord {
    double snr;
    int rep;
    double sigma;
    double input_mse;
};

struct StudyResult {
    std::vector<MseRecord> records;  // sorted by (method, snr, rep)
    std::vector<CalibrationRecord> calibration;
    std::vector<double> sigmas;          // per snr, same order as config.snr_list
    std::vector<std::size_t> block_lengths;  // L_eps per snr
};

/// (1 / n N^d) * sum of squared differences.
double mse(const SpaceTimeVolume& estimate, const SpaceTimeVolume& truth);

/// observe -> denoise -> MSE for every snr x replication x method.
StudyResult run_study(const SimConfig& config);

/// Median MSE of one method at one SNR (failed records skipped).
double median_mse(const std::vector<MseRecord>& records, Method method, double snr);

struct RateConfig {
    double s1 = 2.0;
    double s2 = 2.0;
    int d = 1;
    std::vector<double> eps_grid{0x1.0p-4, 0x1.0p-5, 0x1.0p-6, 0x1.0p-7, 0x1.0p-8};
    int reps = 50;
    std::uint64_t seed = 7;
    double A1 = 16.0;
    double A2 = 16.0;
    std::size_t N = 256;
    std::size_t n = 256;
    double delta = kDefaultDelta;
    std::string wavelet_time{"sym8"};
};

struct RatePoint {
    double epsilon;
    double risk;  // average squared error in sequence space
};

struct RateResult {
    std::vector<RatePoint> points;
    double slope = 0.0;
    double theoretical_slope = 0.0;
};

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Average block-estimator risk over synthesized ball members per epsilon and
/// the fitted log-log slope. The grid must span at least three octaves.
RateResult rate_experiment(const RateConfig& config);

struct DeviationResult {
    double delta;
    double epsilon;
    std::size_t block_length;
    long trials;
    double empirical;  // P(sum (eps z)^2 >= delta^2 eps^2 L_eps)
    double bound;      // eps^{(delta-1)^2}
    double standard_error;
    bool pass;         // empirical <= bound + 3 SE
};

DeviationResult deviation_check(double delta, double epsilon, long trials, std::uint64_t seed);

}  // namespace stwave
