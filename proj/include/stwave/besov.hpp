#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "stwave/wavelet.hpp"

namespace stwave {

/// Lebesgue-type exponent in [1, inf]. Infinity is a tag, not a large float.
class Exponent {
public:
    constexpr Exponent(double value) : value_(value), infinite_(false) {}  // NOLINT: implicit by design of the API
    static constexpr Exponent infinity() { return Exponent(); }

    constexpr bool is_infinite() const { return infinite_; }
    /// 1/p, with 1/inf = 0.
    constexpr double reciprocal() const { return infinite_ ? 0.0 : 1.0 / value_; }
    constexpr double value() const {
        return infinite_ ? std::numeric_limits<double>::infinity() : value_;
    }

private:
    constexpr Exponent() : value_(0.0), infinite_(true) {}
    double value_;
    bool infinite_;
};

/// Radii A_lambda for the temporal Besov balls, one entry per spatial level
/// (index 0 is level -1). `lower_bound` is the constant A in
/// A_lambda * 2^{d(j+1)/2} >= A.
struct RadiusProfile {
    std::vector<double> per_level;
    double lower_bound = 0.0;

    double radius(int j) const { return per_level.at(static_cast<std::size_t>(j + 1)); }
};

/// A_lambda = A * 2^{-d(j+1)/2} for j = -1..max_level, with A chosen so that
/// the (finitely truncated) sum of A_lambda^2 over every lambda equals A2^2.
RadiusProfile default_radius_profile(double A2, int d, int max_level);

struct BesovParams {
    double s1 = 1.0;
    Exponent p1 = 2.0;
    Exponent q1 = 2.0;
    double A1 = 1.0;
    double s2 = 1.0;
    Exponent p2 = 2.0;
    Exponent q2 = 2.0;
    double A2 = 1.0;
    RadiusProfile radius_profile;
};

/// Throws std::invalid_argument when a standing assumption fails: positive
/// smoothness and radii, p,q >= 1, s1 + d(1/2 - 1/p1) > 0, s2 + 1/2 - 1/p2 > 0,
/// the radius sum bound and the lower-bound condition on A_lambda.
void validate(const BesovParams& params, int d);

/// Default ball over a shape: default radius profile at full spatial depth.
BesovParams make_besov_params(double s1, Exponent p1, Exponent q1, double A1, double s2, Exponent p2, Exponent q2,
                              double A2, int d, int max_space_level);

/// Weighted l^q-over-levels of l^p-within-level norm. `by_level[i]` holds the
/// coefficients of level i - 1; level weight is 2^{j * level_exponent}.
double besov_sequence_norm(const std::vector<std::vector<double>>& by_level, double level_exponent, Exponent p,
                           Exponent q);

/// Spatial norm with exponent s1 + d(1/2 - 1/p1). Sums are truncated at the
/// depth present in `by_level`.
double besov_norm_space(const std::vector<std::vector<double>>& by_level, const BesovParams& params, int d);

/// Temporal norm with exponent s2 + 1/2 - 1/p2.
double besov_norm_time(const std::vector<std::vector<double>>& by_level, const BesovParams& params);

/// Groups one full-depth spatial slice of coefficients by level.
std::vector<std::vector<double>> group_space_levels(std::span<const double> slice, int d, std::size_t N);

/// Groups one full-depth 1D coefficient vector by level.
std::vector<std::vector<double>> group_time_levels(std::span<const double> coeffs);

struct LambdaExcess {
    std::size_t space_flat;
    int level;
    double norm;
    double radius;
};

struct MembershipReport {
    bool in_ball = true;
    double worst_slice_norm = 0.0;
    double worst_trajectory_ratio = 0.0;  // max ||alpha_lambda|| / A_lambda
    std::vector<LambdaExcess> per_lambda_excess;
};

/// Checks the two ball conditions on a full-depth cube of sequence-space
/// coefficients. Spatial norms are evaluated at the n sample times using
/// alpha_lambda(t_l) ~= sqrt(n) * (inverse time transform)_l.
MembershipReport ball_membership(const CoeffCube& cube, const BesovParams& params, const WaveletSpec& w_time);

/// 1/s = (d/s1 + 1/s2) / (d + 1).
double smoothness_index(double s1, double s2, int d);

/// Minimax exponent 4s / (2s + d + 1).
double rate_exponent(double s1, double s2, int d);

/// Deterministic pseudo-random cube with
/// |coeff| proportional to 2^{-j(s1+d/2)} 2^{-m(s2+1/2)} and random signs,
/// scaled so ball_membership passes with a 5% margin.
CoeffCube synthesize_member(const BesovParams& params, const Shape& shape, std::uint64_t seed,
                            const WaveletSpec& w_time);

}  // namespace stwave
