#include "stwave/wavelet.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <numeric>
#include <stdexcept>

namespace stwave {

bool is_power_of_two(std::size_t x) { return x != 0 && std::has_single_bit(x); }

int log2_exact(std::size_t x) {
    if (!is_power_of_two(x)) throw std::invalid_argument("length is not a power of two");
    return std::countr_zero(x);
}

std::size_t Shape::slice_size() const { return d == 1 ? N : N * N; }
std::size_t Shape::size() const { return n * slice_size(); }
int Shape::space_levels() const { return log2_exact(N); }
int Shape::time_levels() const { return log2_exact(n); }

void validate_shape(const Shape& shape) {
    if (shape.d != 1 && shape.d != 2) throw std::invalid_argument("spatial dimension must be 1 or 2");
    if (shape.N < 2 || !is_power_of_two(shape.N)) throw std::invalid_argument("N must be a power of two >= 2");
    if (shape.n < 2 || !is_power_of_two(shape.n)) throw std::invalid_argument("n must be a power of two >= 2");
}

// Volume / cube -------------------------------------------------------------

SpaceTimeVolume::SpaceTimeVolume(Shape shape) : shape_(shape) {
    validate_shape(shape_);
    data_.assign(shape_.size(), 0.0);
}

SpaceTimeVolume::SpaceTimeVolume(Shape shape, std::vector<double> data) : shape_(shape), data_(std::move(data)) {
    validate_shape(shape_);
    if (data_.size() != shape_.size()) throw std::invalid_argument("volume data length does not match shape");
}

std::span<const double> SpaceTimeVolume::slice(std::size_t l) const {
    return std::span<const double>(data_).subspan(l * shape_.slice_size(), shape_.slice_size());
}

std::span<double> SpaceTimeVolume::slice(std::size_t l) {
    return std::span<double>(data_).subspan(l * shape_.slice_size(), shape_.slice_size());
}

double& SpaceTimeVolume::at(std::size_t l, std::size_t k1, std::size_t k2) {
    return data_[l * shape_.slice_size() + (shape_.d == 2 ? k1 * shape_.N + k2 : k1)];
}

double SpaceTimeVolume::at(std::size_t l, std::size_t k1, std::size_t k2) const {
    return data_[l * shape_.slice_size() + (shape_.d == 2 ? k1 * shape_.N + k2 : k1)];
}

namespace {
double sum_squares(std::span<const double> v) {
    return std::transform_reduce(v.begin(), v.end(), 0.0, std::plus<>(), [](double x) { return x * x; });
}
}  // namespace

double SpaceTimeVolume::energy() const { return sum_squares(data_); }

CoeffCube::CoeffCube(Shape shape, int depth_space, int depth_time)
    : shape_(shape), depth_space_(depth_space), depth_time_(depth_time) {
    validate_shape(shape_);
    if (depth_space < 0 || depth_space > shape_.space_levels() || depth_time < 0 ||
        depth_time > shape_.time_levels()) {
        throw std::invalid_argument("cube depth out of range for shape");
    }
    data_.assign(shape_.size(), 0.0);
}

CoeffCube::CoeffCube(Shape shape, int depth_space, int depth_time, std::vector<double> data)
    : CoeffCube(shape, depth_space, depth_time) {
    if (data.size() != shape_.size()) throw std::invalid_argument("cube data length does not match shape");
    data_ = std::move(data);
}

bool CoeffCube::full_depth() const {
    return depth_space_ == shape_.space_levels() && depth_time_ == shape_.time_levels();
}

double CoeffCube::energy() const { return sum_squares(data_); }

std::string_view to_string(Orientation o) {
    switch (o) {
        case Orientation::Scaling: return "S";
        case Orientation::HL: return "HL";
        case Orientation::LH: return "LH";
        case Orientation::HH: return "HH";
        case Orientation::Detail1D: return "D";
    }
    return "?";
}

// One-level kernels -------------------------------------------------------
//
// A "row block" is P rows of `width` contiguous values, row r starting at
// data + r * stride. The transform acts along the row index, so a single
// pass handles every column of the block.

namespace {

void analysis_step(double* data, std::size_t P, std::size_t width, std::size_t stride, const WaveletSpec& w,
                   double* scratch) {
    const std::size_t half = P / 2;
    const std::size_t L = w.h.size();
    std::fill(scratch, scratch + P * width, 0.0);
    for (std::size_t i = 0; i < half; ++i) {
        double* a = scratch + i * width;
        double* d = scratch + (half + i) * width;
        for (std::size_t k = 0; k < L; ++k) {
            const double* row = data + ((2 * i + k) % P) * stride;
            const double hk = w.h[k];
            const double gk = w.g[k];
            for (std::size_t c = 0; c < width; ++c) {
                a[c] += hk * row[c];
                d[c] += gk * row[c];
            }
        }
    }
    for (std::size_t r = 0; r < P; ++r) std::memcpy(data + r * stride, scratch + r * width, width * sizeof(double));
}

void synthesis_step(double* data, std::size_t P, std::size_t width, std::size_t stride, const WaveletSpec& w,
                    double* scratch) {
    const std::size_t half = P / 2;
    const std::size_t L = w.h.size();
    std::fill(scratch, scratch + P * width, 0.0);
    for (std::size_t i = 0; i < half; ++i) {
        const double* a = data + i * stride;
        const double* d = data + (half + i) * stride;
        for (std::size_t k = 0; k < L; ++k) {
            double* out = scratch + ((2 * i + k) % P) * width;
            const double hk = w.h[k];
            const double gk = w.g[k];
            for (std::size_t c = 0; c < width; ++c) out[c] += hk * a[c] + gk * d[c];
        }
    }
    for (std::size_t r = 0; r < P; ++r) std::memcpy(data + r * stride, scratch + r * width, width * sizeof(double));
}

void check_depth(std::size_t length, int depth, int min_depth) {
    if (length < 2 || !is_power_of_two(length)) throw std::invalid_argument("signal length must be a power of two >= 2");
    if (depth < min_depth || depth > log2_exact(length)) throw std::invalid_argument("depth too large for length");
}

}  // namespace

void dwt1d_strided(double* data, std::size_t length, std::size_t stride, const WaveletSpec& w, int depth,
                   std::span<double> scratch) {
    check_depth(length, depth, 0);
    for (int level = 0; level < depth; ++level) analysis_step(data, length >> level, 1, stride, w, scratch.data());
}

void idwt1d_strided(double* data, std::size_t length, std::size_t stride, const WaveletSpec& w, int depth,
                    std::span<double> scratch) {
    check_depth(length, depth, 0);
    for (int level = depth - 1; level >= 0; --level) synthesis_step(data, length >> level, 1, stride, w, scratch.data());
}

std::vector<double> dwt1d_periodic(std::span<const double> signal, const WaveletSpec& w, int depth) {
    check_depth(signal.size(), depth, 1);
    std::vector<double> out(signal.begin(), signal.end());
    std::vector<double> scratch(out.size());
    dwt1d_strided(out.data(), out.size(), 1, w, depth, scratch);
    return out;
}

std::vector<double> idwt1d_periodic(std::span<const double> coeffs, const WaveletSpec& w, int depth) {
    check_depth(coeffs.size(), depth, 1);
    std::vector<double> out(coeffs.begin(), coeffs.end());
    std::vector<double> scratch(out.size());
    idwt1d_strided(out.data(), out.size(), 1, w, depth, scratch);
    return out;
}

void dwt_slice(std::span<double> slice, int d, std::size_t N, const WaveletSpec& w, int depth) {
    check_depth(N, depth, 0);
    std::vector<double> scratch(d == 1 ? N : N * N);
    if (d == 1) {
        dwt1d_strided(slice.data(), N, 1, w, depth, scratch);
        return;
    }
    for (int level = 0; level < depth; ++level) {
        const std::size_t P = N >> level;
        // along k2 (contiguous), one row at a time
        for (std::size_t r = 0; r < P; ++r) analysis_step(slice.data() + r * N, P, 1, 1, w, scratch.data());
        // along k1, all columns of the low-pass block at once
        analysis_step(slice.data(), P, P, N, w, scratch.data());
    }
}

void idwt_slice(std::span<double> slice, int d, std::size_t N, const WaveletSpec& w, int depth) {
    check_depth(N, depth, 0);
    std::vector<double> scratch(d == 1 ? N : N * N);
    if (d == 1) {
        idwt1d_strided(slice.data(), N, 1, w, depth, scratch);
        return;
    }
    for (int level = depth - 1; level >= 0; --level) {
        const std::size_t P = N >> level;
        synthesis_step(slice.data(), P, P, N, w, scratch.data());
        for (std::size_t r = 0; r < P; ++r) synthesis_step(slice.data() + r * N, P, 1, 1, w, scratch.data());
    }
}

void dwt_time_inplace(std::span<double> data, const Shape& shape, const WaveletSpec& w_time, int depth) {
    check_depth(shape.n, depth, 0);
    const std::size_t S = shape.slice_size();
    std::vector<double> scratch(shape.size());
    for (int level = 0; level < depth; ++level) analysis_step(data.data(), shape.n >> level, S, S, w_time, scratch.data());
}

void idwt_time_inplace(std::span<double> data, const Shape& shape, const WaveletSpec& w_time, int depth) {
    check_depth(shape.n, depth, 0);
    const std::size_t S = shape.slice_size();
    std::vector<double> scratch(shape.size());
    for (int level = depth - 1; level >= 0; --level)
        synthesis_step(data.data(), shape.n >> level, S, S, w_time, scratch.data());
}

CoeffCube dwt_space(const SpaceTimeVolume& volume, const WaveletSpec& w_space, int depth) {
    const Shape& shape = volume.shape();
    check_depth(shape.N, depth, 0);
    CoeffCube cube(shape, depth, 0, std::vector<double>(volume.data().begin(), volume.data().end()));
    const std::size_t S = shape.slice_size();
    for (std::size_t l = 0; l < shape.n; ++l) dwt_slice(cube.data().subspan(l * S, S), shape.d, shape.N, w_space, depth);
    return cube;
}

SpaceTimeVolume idwt_space(const CoeffCube& cube, const WaveletSpec& w_space) {
    const Shape& shape = cube.shape();
    if (cube.depth_time() != 0) throw std::invalid_argument("cube still carries a time transform");
    SpaceTimeVolume volume(shape, std::vector<double>(cube.data().begin(), cube.data().end()));
    for (std::size_t l = 0; l < shape.n; ++l) idwt_slice(volume.slice(l), shape.d, shape.N, w_space, cube.depth_space());
    return volume;
}

CoeffCube dwt_spacetime(const SpaceTimeVolume& volume, const WaveletSpec& w_space, const WaveletSpec& w_time,
                        int depth_space, int depth_time) {
    check_depth(volume.shape().n, depth_time, 0);
    CoeffCube spatial = dwt_space(volume, w_space, depth_space);
    dwt_time_inplace(spatial.data(), spatial.shape(), w_time, depth_time);
    return CoeffCube(spatial.shape(), depth_space, depth_time, std::move(spatial.values()));
}

CoeffCube dwt_spacetime(const SpaceTimeVolume& volume, const WaveletSpec& w_space, const WaveletSpec& w_time) {
    return dwt_spacetime(volume, w_space, w_time, volume.shape().space_levels(), volume.shape().time_levels());
}

CoeffCube dwt_timespace(const SpaceTimeVolume& volume, const WaveletSpec& w_space, const WaveletSpec& w_time,
                        int depth_space, int depth_time) {
    const Shape& shape = volume.shape();
    check_depth(shape.N, depth_space, 0);
    std::vector<double> data(volume.data().begin(), volume.data().end());
    dwt_time_inplace(data, shape, w_time, depth_time);
    const std::size_t S = shape.slice_size();
    for (std::size_t l = 0; l < shape.n; ++l)
        dwt_slice(std::span<double>(data).subspan(l * S, S), shape.d, shape.N, w_space, depth_space);
    return CoeffCube(shape, depth_space, depth_time, std::move(data));
}

SpaceTimeVolume idwt_spacetime(const CoeffCube& cube, const WaveletSpec& w_space, const WaveletSpec& w_time,
                               int depth_space, int depth_time) {
    if (depth_space != cube.depth_space() || depth_time != cube.depth_time()) {
        throw std::invalid_argument("requested depths do not match the cube");
    }
    const Shape& shape = cube.shape();
    std::vector<double> data(cube.data().begin(), cube.data().end());
    idwt_time_inplace(data, shape, w_time, depth_time);
    const std::size_t S = shape.slice_size();
    for (std::size_t l = 0; l < shape.n; ++l)
        idwt_slice(std::span<double>(data).subspan(l * S, S), shape.d, shape.N, w_space, depth_space);
    return SpaceTimeVolume(shape, std::move(data));
}

SpaceTimeVolume idwt_spacetime(const CoeffCube& cube, const WaveletSpec& w_space, const WaveletSpec& w_time) {
    return idwt_spacetime(cube, w_space, w_time, cube.depth_space(), cube.depth_time());
}

// Indexing ----------------------------------------------------------------

int axis_level(std::size_t position, std::size_t coarse_size) {
    if (position < coarse_size) return log2_exact(coarse_size) - 1;
    return std::bit_width(position) - 1;
}

SpaceLabel space_label(const Shape& shape, int depth_space, std::size_t k1, std::size_t k2) {
    const std::size_t coarse = shape.N >> depth_space;
    const int scaling_level = log2_exact(coarse) - 1;
    const int l1 = axis_level(k1, coarse);
    if (shape.d == 1) {
        return {l1, l1 == scaling_level ? Orientation::Scaling : Orientation::Detail1D};
    }
    const int l2 = axis_level(k2, coarse);
    if (l1 == scaling_level && l2 == scaling_level) return {scaling_level, Orientation::Scaling};
    if (l1 == l2) return {l1, Orientation::HH};
    if (l1 > l2) return {l1, Orientation::HL};
    return {l2, Orientation::LH};
}

std::vector<std::size_t> space_level_counts(int d, std::size_t N) {
    const int J = log2_exact(N);
    std::vector<std::size_t> counts;
    counts.push_back(1);
    for (int j = 0; j < J; ++j) {
        const std::size_t hi = std::size_t{1} << ((j + 1) * d);
        const std::size_t lo = std::size_t{1} << (j * d);
        counts.push_back(hi - lo);
    }
    return counts;
}

void for_each_coeff(const CoeffCube& cube, const std::function<void(const CoeffIndex&, double)>& visit) {
    const Shape& shape = cube.shape();
    const std::size_t S = shape.slice_size();
    const std::size_t coarse_t = shape.n >> cube.depth_time();

    std::vector<CoeffIndex> space(S);
    for (std::size_t q = 0; q < S; ++q) {
        CoeffIndex& ci = space[q];
        ci.k1 = shape.d == 2 ? q / shape.N : q;
        ci.k2 = shape.d == 2 ? q % shape.N : 0;
        const SpaceLabel label = space_label(shape, cube.depth_space(), ci.k1, ci.k2);
        ci.space_level = label.level;
        ci.orientation = label.orientation;
        ci.space_flat = q;
    }

    for (std::size_t l = 0; l < shape.n; ++l) {
        const int m = axis_level(l, coarse_t);
        const std::size_t ell = l < coarse_t ? l : l - (std::size_t{1} << m);
        for (std::size_t q = 0; q < S; ++q) {
            CoeffIndex ci = space[q];
            ci.time_level = m;
            ci.time_position = ell;
            ci.flat = l * S + q;
            visit(ci, cube[ci.flat]);
        }
    }
}

std::vector<LabeledCoeff> iter_levels(const CoeffCube& cube) {
    std::vector<LabeledCoeff> out;
    out.reserve(cube.shape().size());
    for_each_coeff(cube, [&](const CoeffIndex& idx, double v) { out.push_back({idx, v}); });
    return out;
}

}  // namespace stwave
