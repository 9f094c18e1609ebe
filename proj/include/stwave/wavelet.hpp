#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace stwave {

/// Orthonormal compactly supported filter pair. `g` is derived from `h` by the
/// quadrature-mirror rule g[k] = (-1)^k h[L-1-k].
struct WaveletSpec {
    std::string name;
    std::vector<double> h;
    std::vector<double> g;
    int support_length = 0;
    int vanishing_moments = 0;

    static WaveletSpec from_lowpass(std::string name, std::vector<double> h, int vanishing_moments);
};

WaveletSpec haar();
WaveletSpec daubechies4();
WaveletSpec symmlet8();

/// Accepts "haar", "daub4", "sym8" (the default family).
WaveletSpec wavelet_by_name(std::string_view name);
std::vector<std::string> wavelet_names();
inline constexpr std::string_view kDefaultWavelet = "sym8";

/// Dyadic grid geometry shared by volumes and coefficient cubes.
/// Flat layout: time index slowest, then k1, then k2.
struct Shape {
    int d = 2;
    std::size_t N = 0;
    std::size_t n = 0;

    std::size_t slice_size() const;  // N^d
    std::size_t size() const;        // n * N^d
    int space_levels() const;        // log2(N)
    int time_levels() const;         // log2(n)
    bool operator==(const Shape&) const = default;
};

/// Throws std::invalid_argument unless d in {1,2} and N, n are powers of two >= 2.
void validate_shape(const Shape& shape);

bool is_power_of_two(std::size_t x);
int log2_exact(std::size_t x);

/// n x N^d real samples of f(t, x).
class SpaceTimeVolume {
public:
    SpaceTimeVolume() = default;
    explicit SpaceTimeVolume(Shape shape);
    SpaceTimeVolume(Shape shape, std::vector<double> data);

    const Shape& shape() const { return shape_; }
    std::span<const double> data() const { return data_; }
    std::span<double> data() { return data_; }
    std::vector<double>& values() { return data_; }

    std::span<const double> slice(std::size_t l) const;
    std::span<double> slice(std::size_t l);

    double& at(std::size_t l, std::size_t k1, std::size_t k2 = 0);
    double at(std::size_t l, std::size_t k1, std::size_t k2 = 0) const;

    double energy() const;

private:
    Shape shape_{};
    std::vector<double> data_;
};

/// Hybrid coefficients in per-axis Mallat layout. For every axis transformed
/// to depth J over length P, positions [0, P/2^J) hold scaling coefficients
/// followed by detail bands [2^j, 2^{j+1}) in increasing scale.
class CoeffCube {
public:
    CoeffCube() = default;
    CoeffCube(Shape shape, int depth_space, int depth_time);
    CoeffCube(Shape shape, int depth_space, int depth_time, std::vector<double> data);

    const Shape& shape() const { return shape_; }
    int depth_space() const { return depth_space_; }
    int depth_time() const { return depth_time_; }
    bool full_depth() const;

    std::span<const double> data() const { return data_; }
    std::span<double> data() { return data_; }
    std::vector<double>& values() { return data_; }

    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }

    double energy() const;

private:
    Shape shape_{};
    int depth_space_ = 0;
    int depth_time_ = 0;
    std::vector<double> data_;
};

enum class Orientation { Scaling, HL, LH, HH, Detail1D };

std::string_view to_string(Orientation o);

/// Label of one coefficient in a cube. `space_level` and `time_level` follow
/// the convention that the coarsest scaling block sits at level j0 - 1 (= -1
/// at full depth). For d = 2, HL is high-pass along k1 and low-pass along k2,
/// LH the reverse.
struct CoeffIndex {
    int space_level = -1;
    std::size_t k1 = 0;
    std::size_t k2 = 0;
    Orientation orientation = Orientation::Scaling;
    int time_level = -1;
    std::size_t time_position = 0;  // ell in [0, 2^m) at full depth
    std::size_t space_flat = 0;     // k1 * N + k2
    std::size_t flat = 0;           // index into the cube data
};

/// Level of a Mallat-layout position along one axis whose scaling block has
/// `coarse_size` entries.
int axis_level(std::size_t position, std::size_t coarse_size);

/// Level and orientation of a spatial position.
struct SpaceLabel {
    int level;
    Orientation orientation;
};
SpaceLabel space_label(const Shape& shape, int depth_space, std::size_t k1, std::size_t k2);

/// Number of coefficients per spatial level for a full-depth transform of
/// side N in d dimensions; index 0 is level -1.
std::vector<std::size_t> space_level_counts(int d, std::size_t N);

// 1D periodic transforms --------------------------------------------------

std::vector<double> dwt1d_periodic(std::span<const double> signal, const WaveletSpec& w, int depth);
std::vector<double> idwt1d_periodic(std::span<const double> coeffs, const WaveletSpec& w, int depth);

/// In-place variants on strided data; `scratch` must hold at least `length` doubles.
void dwt1d_strided(double* data, std::size_t length, std::size_t stride, const WaveletSpec& w, int depth,
                   std::span<double> scratch);
void idwt1d_strided(double* data, std::size_t length, std::size_t stride, const WaveletSpec& w, int depth,
                    std::span<double> scratch);

/// Isotropic d-D transform of one N^d slice (d = 1 or 2).
void dwt_slice(std::span<double> slice, int d, std::size_t N, const WaveletSpec& w, int depth);
void idwt_slice(std::span<double> slice, int d, std::size_t N, const WaveletSpec& w, int depth);

// Space-time transforms ---------------------------------------------------

/// Spatial transform of every time slice; result has depth_time = 0.
CoeffCube dwt_space(const SpaceTimeVolume& volume, const WaveletSpec& w_space, int depth);
SpaceTimeVolume idwt_space(const CoeffCube& cube, const WaveletSpec& w_space);

/// 1D transform of every spatial trajectory along time, in place.
void dwt_time_inplace(std::span<double> data, const Shape& shape, const WaveletSpec& w_time, int depth);
void idwt_time_inplace(std::span<double> data, const Shape& shape, const WaveletSpec& w_time, int depth);

CoeffCube dwt_spacetime(const SpaceTimeVolume& volume, const WaveletSpec& w_space, const WaveletSpec& w_time,
                        int depth_space, int depth_time);
/// Full-depth shorthand (j0 = m0 = 0).
CoeffCube dwt_spacetime(const SpaceTimeVolume& volume, const WaveletSpec& w_space, const WaveletSpec& w_time);

/// Same result as dwt_spacetime, computed time axis first.
CoeffCube dwt_timespace(const SpaceTimeVolume& volume, const WaveletSpec& w_space, const WaveletSpec& w_time,
                        int depth_space, int depth_time);

SpaceTimeVolume idwt_spacetime(const CoeffCube& cube, const WaveletSpec& w_space, const WaveletSpec& w_time,
                               int depth_space, int depth_time);
SpaceTimeVolume idwt_spacetime(const CoeffCube& cube, const WaveletSpec& w_space, const WaveletSpec& w_time);

// Level iteration ---------------------------------------------------------

void for_each_coeff(const CoeffCube& cube, const std::function<void(const CoeffIndex&, double)>& visit);

struct LabeledCoeff {
    CoeffIndex index;
    double value;
};
std::vector<LabeledCoeff> iter_levels(const CoeffCube& cube);

}  // namespace stwave
