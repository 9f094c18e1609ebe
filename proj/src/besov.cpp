#include "stwave/besov.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "stwave/rng.hpp"

namespace stwave {

RadiusProfile default_radius_profile(double A2, int d, int max_level) {
    if (A2 <= 0.0) throw std::invalid_argument("A2 must be positive");
    if (max_level < -1) throw std::invalid_argument("max_level must be >= -1");
    // level -1 contributes A^2, every level j >= 0 contributes A^2 (1 - 2^{-d})
    const double per_detail_level = 1.0 - std::ldexp(1.0, -d);
    const double A = A2 / std::sqrt(1.0 + (max_level + 1) * per_detail_level);
    RadiusProfile profile;
    profile.lower_bound = A;
    for (int j = -1; j <= max_level; ++j) profile.per_level.push_back(A * std::exp2(-0.5 * d * (j + 1)));
    return profile;
}

namespace {

void check_exponent(Exponent e, const char* what) {
    if (!e.is_infinite() && !(e.value() >= 1.0)) throw std::invalid_argument(std::string(what) + " must lie in [1, inf]");
}

}  // namespace

void validate(const BesovParams& params, int d) {
    if (!(params.s1 > 0.0) || !(params.s2 > 0.0)) throw std::invalid_argument("smoothness must be positive");
    if (!(params.A1 > 0.0) || !(params.A2 > 0.0)) throw std::invalid_argument("radii must be positive");
    check_exponent(params.p1, "p1");
    check_exponent(params.q1, "q1");
    check_exponent(params.p2, "p2");
    check_exponent(params.q2, "q2");
    if (!(params.s1 + d * (0.5 - params.p1.reciprocal()) > 0.0))
        throw std::invalid_argument("s1 + d(1/2 - 1/p1) must be positive");
    if (!(params.s2 + 0.5 - params.p2.reciprocal() > 0.0))
        throw std::invalid_argument("s2 + 1/2 - 1/p2 must be positive");

    const auto& radii = params.radius_profile.per_level;
    if (radii.empty()) throw std::invalid_argument("radius profile is empty");
    double total = 0.0;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        const int j = static_cast<int>(i) - 1;
        if (!(radii[i] > 0.0)) throw std::invalid_argument("radii A_lambda must be positive");
        const double count =
            j < 0 ? 1.0 : std::exp2(static_cast<double>((j + 1) * d)) - std::exp2(static_cast<double>(j * d));
        total += count * radii[i] * radii[i];
        if (radii[i] * std::exp2(0.5 * d * (j + 1)) < params.radius_profile.lower_bound * (1.0 - 1e-12))
            throw std::invalid_argument("A_lambda 2^{d(j+1)/2} falls below the lower bound A");
    }
    if (total > params.A2 * params.A2 * (1.0 + 1e-12))
        throw std::invalid_argument("sum of A_lambda^2 exceeds A2^2");
}

BesovParams make_besov_params(double s1, Exponent p1, Exponent q1, double A1, double s2, Exponent p2, Exponent q2,
                              double A2, int d, int max_space_level) {
    BesovParams params{s1, p1, q1, A1, s2, p2, q2, A2, default_radius_profile(A2, d, max_space_level)};
    validate(params, d);
    return params;
}

double besov_sequence_norm(const std::vector<std::vector<double>>& by_level, double level_exponent, Exponent p,
                           Exponent q) {
    bool any = false;
    double outer = 0.0;
    for (std::size_t i = 0; i < by_level.size(); ++i) {
        const auto& level = by_level[i];
        if (level.empty()) continue;
        any = true;
        double inner = 0.0;
        if (p.is_infinite()) {
            for (double c : level) inner = std::max(inner, std::abs(c));
        } else {
            for (double c : level) inner += std::pow(std::abs(c), p.value());
            inner = std::pow(inner, 1.0 / p.value());
        }
        const int j = static_cast<int>(i) - 1;
        const double term = std::exp2(j * level_exponent) * inner;
        if (q.is_infinite()) {
            outer = std::max(outer, term);
        } else {
            outer += std::pow(term, q.value());
        }
    }
    if (!any) throw std::invalid_argument("no coefficients supplied");
    return q.is_infinite() ? outer : std::pow(outer, 1.0 / q.value());
}

double besov_norm_space(const std::vector<std::vector<double>>& by_level, const BesovParams& params, int d) {
    return besov_sequence_norm(by_level, params.s1 + d * (0.5 - params.p1.reciprocal()), params.p1, params.q1);
}

double besov_norm_time(const std::vector<std::vector<double>>& by_level, const BesovParams& params) {
    return besov_sequence_norm(by_level, params.s2 + 0.5 - params.p2.reciprocal(), params.p2, params.q2);
}

std::vector<std::vector<double>> group_space_levels(std::span<const double> slice, int d, std::size_t N) {
    const Shape shape{d, N, 2};
    const int J = log2_exact(N);
    std::vector<std::vector<double>> by_level(static_cast<std::size_t>(J + 1));
    const std::size_t S = shape.slice_size();
    if (slice.size() != S) throw std::invalid_argument("slice length does not match N^d");
    for (std::size_t q = 0; q < S; ++q) {
        const std::size_t k1 = d == 2 ? q / N : q;
        const std::size_t k2 = d == 2 ? q % N : 0;
        const SpaceLabel label = space_label(shape, J, k1, k2);
        by_level[static_cast<std::size_t>(label.level + 1)].push_back(slice[q]);
    }
    return by_level;
}

std::vector<std::vector<double>> group_time_levels(std::span<const double> coeffs) {
    const int J = log2_exact(coeffs.size());
    std::vector<std::vector<double>> by_level(static_cast<std::size_t>(J + 1));
    for (std::size_t l = 0; l < coeffs.size(); ++l) by_level[static_cast<std::size_t>(axis_level(l, 1) + 1)].push_back(coeffs[l]);
    return by_level;
}

MembershipReport ball_membership(const CoeffCube& cube, const BesovParams& params, const WaveletSpec& w_time) {
    if (!cube.full_depth()) throw std::invalid_argument("ball membership needs a full-depth cube");
    const Shape& shape = cube.shape();
    const std::size_t S = shape.slice_size();
    MembershipReport report;

    // spatial condition, sup over the sample times
    std::vector<double> samples(cube.data().begin(), cube.data().end());
    idwt_time_inplace(samples, shape, w_time, shape.time_levels());
    const double root_n = std::sqrt(static_cast<double>(shape.n));
    for (double& v : samples) v *= root_n;
    for (std::size_t l = 0; l < shape.n; ++l) {
        const auto slice = std::span<const double>(samples).subspan(l * S, S);
        report.worst_slice_norm =
            std::max(report.worst_slice_norm, besov_norm_space(group_space_levels(slice, shape.d, shape.N), params, shape.d));
    }

    // temporal condition, every lambda
    std::vector<double> trajectory(shape.n);
    for (std::size_t q = 0; q < S; ++q) {
        for (std::size_t l = 0; l < shape.n; ++l) trajectory[l] = cube[l * S + q];
        const double norm = besov_norm_time(group_time_levels(trajectory), params);
        const std::size_t k1 = shape.d == 2 ? q / shape.N : q;
        const std::size_t k2 = shape.d == 2 ? q % shape.N : 0;
        const int j = space_label(shape, shape.space_levels(), k1, k2).level;
        const double radius = params.radius_profile.radius(j);
        report.worst_trajectory_ratio = std::max(report.worst_trajectory_ratio, norm / radius);
        if (norm > radius) report.per_lambda_excess.push_back({q, j, norm, radius});
    }

    report.in_ball = report.worst_slice_norm <= params.A1 && report.per_lambda_excess.empty();
    return report;
}

double smoothness_index(double s1, double s2, int d) {
    if (!(s1 > 0.0) || !(s2 > 0.0) || d < 1) throw std::invalid_argument("smoothness_index needs s1, s2 > 0 and d >= 1");
    return (d + 1) / (d / s1 + 1.0 / s2);
}

double rate_exponent(double s1, double s2, int d) {
    const double s = smoothness_index(s1, s2, d);
    return 4.0 * s / (2.0 * s + d + 1.0);
}

CoeffCube synthesize_member(const BesovParams& params, const Shape& shape, std::uint64_t seed,
                            const WaveletSpec& w_time) {
    validate(params, shape.d);
    CoeffCube cube(shape, shape.space_levels(), shape.time_levels());
    const GaussianStream signs(seed, 0x5EEDB0B5ull);
    const double space_decay = params.s1 + 0.5 * shape.d;
    const double time_decay = params.s2 + 0.5;
    for_each_coeff(cube, [&](const CoeffIndex& idx, double) {
        cube[idx.flat] = std::exp2(-idx.space_level * space_decay - idx.time_level * time_decay) * signs.sign(idx.flat);
    });

    const MembershipReport raw = ball_membership(cube, params, w_time);
    const double worst = std::max(raw.worst_slice_norm / params.A1, raw.worst_trajectory_ratio);
    const double factor = 0.95 / worst;
    for (double& v : cube.values()) v *= factor;
    return cube;
}

}  // namespace stwave
