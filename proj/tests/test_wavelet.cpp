#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "stwave/wavelet.hpp"

using namespace stwave;

namespace {

std::vector<double> random_vector(std::size_t len, unsigned seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> z;
    std::vector<double> v(len);
    for (double& x : v) x = z(gen);
    return v;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    REQUIRE(a.size() == b.size());
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double sum_sq(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

// Reference cascade written straight from the periodic filter-bank formulas.
void naive_step(const std::vector<double>& x, const WaveletSpec& w, std::vector<double>& a, std::vector<double>& d) {
    const std::size_t P = x.size();
    a.assign(P / 2, 0.0);
    d.assign(P / 2, 0.0);
    for (std::size_t i = 0; i < P / 2; ++i)
        for (std::size_t k = 0; k < w.h.size(); ++k) {
            a[i] += w.h[k] * x[(2 * i + k) % P];
            d[i] += w.g[k] * x[(2 * i + k) % P];
        }
}

std::vector<double> naive_dwt(std::vector<double> x, const WaveletSpec& w, int depth) {
    std::vector<double> out = x;
    std::size_t P = x.size();
    for (int level = 0; level < depth; ++level) {
        std::vector<double> a, d;
        naive_step(std::vector<double>(out.begin(), out.begin() + static_cast<long>(P)), w, a, d);
        std::copy(a.begin(), a.end(), out.begin());
        std::copy(d.begin(), d.end(), out.begin() + static_cast<long>(P / 2));
        P /= 2;
    }
    return out;
}

// One separable level on the top-left P x P block, rows (k2) then columns (k1).
std::vector<double> naive_dwt2(std::vector<double> img, std::size_t N, const WaveletSpec& w, int depth) {
    std::size_t P = N;
    for (int level = 0; level < depth; ++level) {
        for (std::size_t k1 = 0; k1 < P; ++k1) {
            std::vector<double> row(P);
            for (std::size_t k2 = 0; k2 < P; ++k2) row[k2] = img[k1 * N + k2];
            row = naive_dwt(row, w, 1);
            for (std::size_t k2 = 0; k2 < P; ++k2) img[k1 * N + k2] = row[k2];
        }
        for (std::size_t k2 = 0; k2 < P; ++k2) {
            std::vector<double> col(P);
            for (std::size_t k1 = 0; k1 < P; ++k1) col[k1] = img[k1 * N + k2];
            col = naive_dwt(col, w, 1);
            for (std::size_t k1 = 0; k1 < P; ++k1) img[k1 * N + k2] = col[k1];
        }
        P /= 2;
    }
    return img;
}

const std::vector<WaveletSpec>& all_wavelets() {
    static const std::vector<WaveletSpec> ws{haar(), daubechies4(), symmlet8()};
    return ws;
}

}  // namespace

TEST_CASE("filters are orthonormal QMF pairs") {
    for (const WaveletSpec& w : all_wavelets()) {
        CAPTURE(w.name);
        const std::size_t L = w.h.size();
        CHECK(static_cast<int>(L) == w.support_length);
        double sum = 0.0;
        for (double c : w.h) sum += c;
        CHECK(sum == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
        for (std::size_t shift = 0; shift < L; shift += 2) {
            double hh = 0.0, gg = 0.0;
            for (std::size_t k = 0; k + shift < L; ++k) {
                hh += w.h[k] * w.h[k + shift];
                gg += w.g[k] * w.g[k + shift];
            }
            CHECK(hh == doctest::Approx(shift == 0 ? 1.0 : 0.0).epsilon(1e-12).scale(1.0));
            CHECK(gg == doctest::Approx(shift == 0 ? 1.0 : 0.0).epsilon(1e-12).scale(1.0));
        }
        for (std::size_t k = 0; k < L; ++k)
            CHECK(w.g[k] == doctest::Approx((k % 2 == 0 ? 1.0 : -1.0) * w.h[L - 1 - k]));
    }
}

TEST_CASE("high-pass filters annihilate low-degree polynomials") {
    for (const WaveletSpec& w : all_wavelets()) {
        CAPTURE(w.name);
        for (int p = 0; p < w.vanishing_moments; ++p) {
            double moment = 0.0, scale = 0.0;
            for (std::size_t k = 0; k < w.g.size(); ++k) {
                const double kp = std::pow(static_cast<double>(k), p);
                moment += w.g[k] * kp;
                scale += std::abs(w.g[k]) * kp;
            }
            CAPTURE(p);
            CHECK(std::abs(moment) <= 1e-9 * scale);
        }
    }
}

TEST_CASE("filter lengths and names") {
    CHECK(haar().h.size() == 2);
    CHECK(daubechies4().h.size() == 4);
    CHECK(daubechies4().vanishing_moments == 2);
    CHECK(symmlet8().h.size() == 16);
    CHECK(symmlet8().vanishing_moments == 8);
    CHECK(wavelet_by_name(kDefaultWavelet).name == symmlet8().name);
    CHECK_THROWS_AS(wavelet_by_name("db2"), std::invalid_argument);
    CHECK(symmlet8().h[0] == doctest::Approx(0.0018899503327594609));
}

TEST_CASE("haar cascade on a constant") {
    const std::vector<double> x{1, 1, 1, 1};
    const auto c = dwt1d_periodic(x, haar(), 2);
    CHECK(max_abs_diff(c, std::vector<double>{2, 0, 0, 0}) < 1e-15);
    const auto back = idwt1d_periodic(std::vector<double>{2, 0, 0, 0}, haar(), 2);
    CHECK(max_abs_diff(back, x) < 1e-15);
}

TEST_CASE("zero in, zero out") {
    for (const WaveletSpec& w : all_wavelets()) {
        const std::vector<double> z(8, 0.0);
        for (double v : dwt1d_periodic(z, w, 3)) CHECK(v == 0.0);
        for (double v : idwt1d_periodic(z, w, 3)) CHECK(v == 0.0);
    }
}

TEST_CASE("1D transform matches the reference cascade") {
    for (const WaveletSpec& w : all_wavelets()) {
        for (std::size_t len : {2u, 4u, 8u, 16u, 64u}) {
            const int J = log2_exact(len);
            for (int depth = 1; depth <= J; ++depth) {
                CAPTURE(w.name);
                CAPTURE(len);
                CAPTURE(depth);
                const auto x = random_vector(len, static_cast<unsigned>(len * 10 + depth));
                const auto c = dwt1d_periodic(x, w, depth);
                CHECK(max_abs_diff(c, naive_dwt(x, w, depth)) < 1e-12);
                CHECK(max_abs_diff(idwt1d_periodic(c, w, depth), x) < 1e-12);
            }
        }
    }
}

TEST_CASE("1D Parseval and round trip") {
    for (const WaveletSpec& w : all_wavelets()) {
        const auto x = random_vector(64, 3);
        const auto c = dwt1d_periodic(x, w, 6);
        CHECK(std::abs(sum_sq(c) - sum_sq(x)) <= 1e-10 * sum_sq(x));
        const auto y = random_vector(128, 4);
        CHECK(max_abs_diff(idwt1d_periodic(dwt1d_periodic(y, w, 7), w, 7), y) < 1e-10);
    }
}

TEST_CASE("1D transform rejects bad lengths and depths") {
    const std::vector<double> x(6, 1.0);
    CHECK_THROWS_AS(dwt1d_periodic(x, haar(), 1), std::invalid_argument);
    const std::vector<double> y(8, 1.0);
    CHECK_THROWS_AS(dwt1d_periodic(y, haar(), 4), std::invalid_argument);
    CHECK_THROWS_AS(dwt1d_periodic(y, haar(), 0), std::invalid_argument);
}

TEST_CASE("2D slice transform matches the reference") {
    for (const WaveletSpec& w : all_wavelets()) {
        for (std::size_t N : {2u, 8u, 16u}) {
            const int J = log2_exact(N);
            for (int depth = 1; depth <= J; ++depth) {
                auto img = random_vector(N * N, static_cast<unsigned>(N + depth));
                const auto expected = naive_dwt2(img, N, w, depth);
                dwt_slice(img, 2, N, w, depth);
                CAPTURE(w.name);
                CAPTURE(N);
                CAPTURE(depth);
                CHECK(max_abs_diff(img, expected) < 1e-12);
            }
        }
    }
}

TEST_CASE("orientation labels follow the filter axes") {
    const Shape shape{2, 8, 2};
    // low along k1, high along k2
    CHECK(space_label(shape, 3, 1, 5).orientation == Orientation::LH);
    CHECK(space_label(shape, 3, 5, 1).orientation == Orientation::HL);
    CHECK(space_label(shape, 3, 5, 5).orientation == Orientation::HH);
    CHECK(space_label(shape, 3, 0, 0).orientation == Orientation::Scaling);
    CHECK(space_label(shape, 3, 5, 5).level == 2);
    CHECK(space_label(shape, 3, 1, 1).level == 0);
    CHECK(space_label(shape, 3, 0, 0).level == -1);

    // A vertical edge (varying along k2) shows up in LH at the finest level.
    const std::size_t N = 8;
    std::vector<double> img(N * N, 0.0);
    for (std::size_t k1 = 0; k1 < N; ++k1)
        for (std::size_t k2 = 0; k2 < N; ++k2) img[k1 * N + k2] = (k2 % 2 == 0) ? 1.0 : -1.0;
    dwt_slice(img, 2, N, haar(), 1);
    double lh = 0.0, hl = 0.0;
    for (std::size_t k1 = 0; k1 < N; ++k1)
        for (std::size_t k2 = 0; k2 < N; ++k2) {
            const auto label = space_label(shape, 1, k1, k2);
            if (label.orientation == Orientation::LH) lh += img[k1 * N + k2] * img[k1 * N + k2];
            if (label.orientation == Orientation::HL) hl += img[k1 * N + k2] * img[k1 * N + k2];
        }
    CHECK(lh == doctest::Approx(64.0));
    CHECK(hl == doctest::Approx(0.0));
}

TEST_CASE("constant volume has only scaling coefficients in space") {
    for (const WaveletSpec& w : all_wavelets()) {
        const Shape shape{2, 16, 4};
        const double c = 1.7;
        SpaceTimeVolume v(shape, std::vector<double>(shape.size(), c));
        for (int depth = 1; depth <= 4; ++depth) {
            const CoeffCube cube = dwt_space(v, w, depth);
            const std::size_t P = 16 >> depth;
            for (std::size_t l = 0; l < shape.n; ++l)
                for (std::size_t k1 = 0; k1 < 16; ++k1)
                    for (std::size_t k2 = 0; k2 < 16; ++k2) {
                        const double value = cube[l * 256 + k1 * 16 + k2];
                        if (k1 < P && k2 < P)
                            CHECK(value == doctest::Approx(c * std::pow(2.0, depth * 2 / 2.0)));
                        else
                            CHECK(std::abs(value) <= 1e-8);
                    }
        }
    }
}

TEST_CASE("constant signal leaves no detail energy at any level") {
    for (const WaveletSpec& w : all_wavelets()) {
        const std::vector<double> x(32, -0.25);
        const auto c = dwt1d_periodic(x, w, 5);
        for (std::size_t i = 1; i < c.size(); ++i) CHECK(std::abs(c[i]) <= 1e-8);
    }
}

TEST_CASE("spatial transform keeps energy per slice") {
    const Shape shape{2, 32, 4};
    SpaceTimeVolume v(shape, random_vector(shape.size(), 11));
    const CoeffCube cube = dwt_space(v, symmlet8(), 5);
    for (std::size_t l = 0; l < shape.n; ++l) {
        const double a = sum_sq(v.slice(l));
        const double b = sum_sq(cube.data().subspan(l * shape.slice_size(), shape.slice_size()));
        CHECK(std::abs(a - b) <= 1e-10 * a);
    }
    const SpaceTimeVolume back = idwt_space(cube, symmlet8());
    CHECK(max_abs_diff(back.data(), v.data()) < 1e-10);
}

TEST_CASE("zero volume maps to zero cube and back") {
    const Shape shape{2, 8, 8};
    const SpaceTimeVolume v(shape);
    const CoeffCube cube = dwt_spacetime(v, symmlet8(), symmlet8());
    for (double x : cube.data()) CHECK(x == 0.0);
    const SpaceTimeVolume back = idwt_spacetime(cube, symmlet8(), symmlet8());
    for (double x : back.data()) CHECK(x == 0.0);
}

TEST_CASE("rank-one input gives the outer product of the factor transforms") {
    for (int d : {1, 2}) {
        const Shape shape{d, 16, 32};
        const WaveletSpec ws = daubechies4();
        const WaveletSpec wt = symmlet8();
        const auto u = random_vector(shape.n, 21);
        const auto v = random_vector(shape.slice_size(), 22);
        SpaceTimeVolume vol(shape);
        for (std::size_t l = 0; l < shape.n; ++l)
            for (std::size_t q = 0; q < shape.slice_size(); ++q) vol.slice(l)[q] = u[l] * v[q];
        const CoeffCube cube = dwt_spacetime(vol, ws, wt);
        const auto U = naive_dwt(u, wt, shape.time_levels());
        const auto V = d == 2 ? naive_dwt2(v, shape.N, ws, shape.space_levels()) : naive_dwt(v, ws, shape.space_levels());
        double worst = 0.0;
        for (std::size_t l = 0; l < shape.n; ++l)
            for (std::size_t q = 0; q < shape.slice_size(); ++q)
                worst = std::max(worst, std::abs(cube[l * shape.slice_size() + q] - U[l] * V[q]));
        CAPTURE(d);
        CHECK(worst < 1e-10);
    }
}

TEST_CASE("time-first and space-first orders agree") {
    for (const WaveletSpec& w : all_wavelets()) {
        const Shape shape{2, 16, 32};
        const SpaceTimeVolume vol(shape, random_vector(shape.size(), 31));
        for (auto [js, jt] : {std::pair{4, 5}, std::pair{2, 3}, std::pair{1, 5}}) {
            const CoeffCube a = dwt_spacetime(vol, w, w, js, jt);
            const CoeffCube b = dwt_timespace(vol, w, w, js, jt);
            CHECK(max_abs_diff(a.data(), b.data()) < 1e-10);
        }
    }
}

TEST_CASE("space-time round trip and Parseval at partial depths") {
    for (const WaveletSpec& w : all_wavelets()) {
        const Shape shape{2, 16, 32};
        const SpaceTimeVolume vol(shape, random_vector(shape.size(), 41));
        for (auto [js, jt] : {std::pair{1, 1}, std::pair{3, 2}, std::pair{4, 5}}) {
            const CoeffCube cube = dwt_spacetime(vol, w, w, js, jt);
            CHECK(std::abs(cube.energy() - vol.energy()) <= 1e-10 * vol.energy());
            const SpaceTimeVolume back = idwt_spacetime(cube, w, w, js, jt);
            CHECK(max_abs_diff(back.data(), vol.data()) < 1e-10);
        }
    }
}

TEST_CASE("unit coefficient synthesizes a unit-energy tensor wavelet") {
    const Shape shape{2, 8, 16};
    const WaveletSpec ws = symmlet8();
    const WaveletSpec wt = daubechies4();
    for (std::size_t flat : {0u, 5u, 77u, 300u, 1023u}) {
        CoeffCube cube(shape, 3, 4);
        cube[flat] = 1.0;
        const SpaceTimeVolume atom = idwt_spacetime(cube, ws, wt);
        CHECK(atom.energy() == doctest::Approx(1.0).epsilon(1e-10));

        const std::size_t l0 = flat / 64, q0 = flat % 64;
        std::vector<double> et(16, 0.0), es(64, 0.0);
        et[l0] = 1.0;
        es[q0] = 1.0;
        const auto psi_t = idwt1d_periodic(et, wt, 4);
        auto psi_x = es;
        idwt_slice(psi_x, 2, 8, ws, 3);
        double worst = 0.0;
        for (std::size_t l = 0; l < 16; ++l)
            for (std::size_t q = 0; q < 64; ++q)
                worst = std::max(worst, std::abs(atom.slice(l)[q] - psi_t[l] * psi_x[q]));
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("level multiplicities for an 8x8 d=1 cube") {
    const Shape shape{1, 8, 8};
    const SpaceTimeVolume vol(shape, random_vector(shape.size(), 51));
    const CoeffCube cube = dwt_spacetime(vol, haar(), haar());
    const auto entries = iter_levels(cube);
    CHECK(entries.size() == 64);
    std::map<std::pair<int, int>, int> counts;
    double energy = 0.0;
    for (const auto& e : entries) {
        counts[{e.index.time_level, e.index.space_level}]++;
        energy += e.value * e.value;
        CHECK(e.value == cube[e.index.flat]);
    }
    const std::map<int, int> expected{{-1, 1}, {0, 1}, {1, 2}, {2, 4}};
    for (int m = -1; m <= 2; ++m)
        for (int j = -1; j <= 2; ++j) CHECK(counts[{m, j}] == expected.at(j) * expected.at(m));
    CHECK(energy == doctest::Approx(cube.energy()).epsilon(1e-12));

    const auto c = space_level_counts(1, 8);
    CHECK(c == std::vector<std::size_t>{1, 1, 2, 4});
    const auto c2 = space_level_counts(2, 8);
    CHECK(c2 == std::vector<std::size_t>{1, 3, 12, 48});
}

TEST_CASE("smallest volume has four coefficients") {
    const Shape shape{1, 2, 2};
    const CoeffCube cube = dwt_spacetime(SpaceTimeVolume(shape, {1, 2, 3, 4}), haar(), haar());
    CHECK(iter_levels(cube).size() == 4);
}

TEST_CASE("time positions and flat indices") {
    const Shape shape{2, 4, 8};
    const CoeffCube cube(shape, 2, 3, std::vector<double>(shape.size(), 1.0));
    for_each_coeff(cube, [&](const CoeffIndex& i, double) {
        CHECK(i.flat == (i.time_level < 0 ? 0 : (std::size_t{1} << i.time_level) + i.time_position) * 16 + i.space_flat);
        CHECK(i.space_flat == i.k1 * 4 + i.k2);
    });
}

TEST_CASE("shape validation") {
    CHECK_THROWS_AS(SpaceTimeVolume(Shape{3, 8, 8}), std::invalid_argument);
    CHECK_THROWS_AS(SpaceTimeVolume(Shape{2, 12, 8}), std::invalid_argument);
    CHECK_THROWS_AS(SpaceTimeVolume(Shape{2, 8, 1}), std::invalid_argument);
    CHECK_THROWS_AS(SpaceTimeVolume(Shape{2, 4, 4}, std::vector<double>(10)), std::invalid_argument);
    CHECK(Shape{2, 64, 128}.size() == 524288);
    CHECK(Shape{1, 64, 128}.size() == 8192);
}
