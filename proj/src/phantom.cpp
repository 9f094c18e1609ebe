#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "stwave/simulation.hpp"

namespace stwave {

namespace {

struct Ellipse {
    double a, b, x0, y0, phi_deg;

    bool contains(double x, double y) const {
        const double phi = phi_deg * std::numbers::pi / 180.0;
        const double dx = x - x0;
        const double dy = y - y0;
        const double xr = dx * std::cos(phi) + dy * std::sin(phi);
        const double yr = -dx * std::sin(phi) + dy * std::cos(phi);
        return (xr * xr) / (a * a) + (yr * yr) / (b * b) <= 1.0;
    }
};

// Modified Shepp-Logan geometry on [-1, 1]^2.
constexpr std::array<Ellipse, 10> kEllipses{{
    {0.69, 0.92, 0.0, 0.0, 0.0},
    {0.6624, 0.8740, 0.0, -0.0184, 0.0},
    {0.1100, 0.3100, 0.22, 0.0, -18.0},
    {0.1600, 0.4100, -0.22, 0.0, 18.0},
    {0.2100, 0.2500, 0.0, 0.35, 0.0},
    {0.0460, 0.0460, 0.0, 0.1, 0.0},
    {0.0460, 0.0460, 0.0, -0.1, 0.0},
    {0.0460, 0.0230, -0.08, -0.605, 0.0},
    {0.0230, 0.0230, 0.0, -0.606, 0.0},
    {0.0230, 0.0460, 0.06, -0.605, 0.0},
}};

enum Region { Background = 0, Skull = 1, Brain = 2, Ventricles = 3, UpperEllipse = 4, SmallEllipses = 5 };

int classify(double x, double y) {
    if (!kEllipses[0].contains(x, y)) return Background;
    if (!kEllipses[1].contains(x, y)) return Skull;
    for (std::size_t e = 5; e < 10; ++e)
        if (kEllipses[e].contains(x, y)) return SmallEllipses;
    if (kEllipses[4].contains(x, y)) return UpperEllipse;
    if (kEllipses[2].contains(x, y) || kEllipses[3].contains(x, y)) return Ventricles;
    return Brain;
}

double gauss(double t, double centre, double width) {
    const double u = (t - centre) / width;
    return std::exp(-u * u);
}

}  // namespace

std::vector<std::vector<double>> region_signals(std::size_t n, const std::vector<double>& intensities) {
    if (intensities.size() != kPhantomRegions) throw std::invalid_argument("need one intensity per region");
    std::vector<std::vector<double>> signals(kPhantomRegions, std::vector<double>(n));
    for (std::size_t l = 0; l < n; ++l) {
        const double t = static_cast<double>(l) / static_cast<double>(n);
        const std::array<double, kPhantomRegions> shape{
            0.0,                                                         // constant
            t < 0.5 ? -0.5 : 0.5,                                        // step
            t - 0.5,                                                     // ramp
            1.5 * gauss(t, 0.35, 0.06),                                  // bump
            gauss(t, 0.25, 0.04) + 1.5 * gauss(t, 0.7, 0.05),           // two bumps
            std::exp(-3.0 * t) * std::sin(2.0 * std::numbers::pi * 8.0 * t),  // damped oscillation
        };
        for (int r = 0; r < kPhantomRegions; ++r) signals[r][l] = intensities[r] * (1.0 + shape[r]);
    }
    return signals;
}

Phantom phantom(std::size_t N, std::size_t n) {
    if (N < 32 || !is_power_of_two(N)) throw std::invalid_argument("phantom needs a dyadic N >= 32");
    Phantom ph;
    ph.N = N;
    ph.intensities = {0.0, 1.0, 0.2, 0.1, 0.3, 0.4};
    ph.region_signals = region_signals(n, ph.intensities);
    ph.labels.resize(N * N);
    const double step = 2.0 / static_cast<double>(N);
    for (std::size_t k1 = 0; k1 < N; ++k1) {
        const double y = 1.0 - (static_cast<double>(k1) + 0.5) * step;
        for (std::size_t k2 = 0; k2 < N; ++k2) {
            const double x = -1.0 + (static_cast<double>(k2) + 0.5) * step;
            ph.labels[k1 * N + k2] = classify(x, y);
        }
    }
    ph.volume = SpaceTimeVolume(Shape{2, N, n});
    for (std::size_t l = 0; l < n; ++l)
        for (std::size_t q = 0; q < N * N; ++q) ph.volume.slice(l)[q] = ph.region_signals[ph.labels[q]][l];
    return ph;
}

}  // namespace stwave
