#pragma once

// Brute-force block thresholding written from the definition only: no level
// helpers or partitions from the library. Used by the unit tests and the
// acceptance binary.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <tuple>
#include <vector>

namespace oracle {

inline int axis_level(std::size_t k) {
    if (k == 0) return -1;
    int j = 0;
    while ((std::size_t{2} << j) <= k) ++j;
    return j;
}

// Cube laid out as data[l * N^d + k1 * N + k2], full depth in space and time.
inline std::vector<double> block_threshold(const std::vector<double>& y, int d, std::size_t N, std::size_t n,
                                           double eps, double delta) {
    const double inv2 = 1.0 / (eps * eps);
    const std::size_t L = 1 + static_cast<std::size_t>(std::floor(std::log(inv2)));
    const double t = delta * delta * eps * eps * static_cast<double>(L);
    // 2^{j1+1} <= floor(eps^-2)
    int cut = -1;
    while (std::pow(2.0, cut + 2) <= std::floor(inv2)) ++cut;
    const int max_j = axis_level(N - 1);
    const int max_m = axis_level(n - 1);
    const int j1 = cut < max_j ? cut : max_j;
    const int m2 = cut < max_m ? cut : max_m;

    const std::size_t S = d == 2 ? N * N : N;
    using Key = std::tuple<std::size_t, int, std::size_t>;  // space index, time level, block number
    std::map<Key, double> energy;
    auto key_of = [&](std::size_t l, std::size_t q, bool& inside) {
        const std::size_t k1 = d == 2 ? q / N : q;
        const std::size_t k2 = d == 2 ? q % N : 0;
        const int j = std::max(axis_level(k1), axis_level(k2));
        const int m = axis_level(l);
        const std::size_t pos = m < 0 ? 0 : l - (std::size_t{1} << m);
        inside = j <= j1 && m <= m2;
        return Key{q, m, pos / L};
    };
    for (std::size_t l = 0; l < n; ++l)
        for (std::size_t q = 0; q < S; ++q) {
            bool inside = false;
            const Key k = key_of(l, q, inside);
            if (inside) energy[k] += y[l * S + q] * y[l * S + q];
        }
    std::vector<double> out(y.size(), 0.0);
    for (std::size_t l = 0; l < n; ++l)
        for (std::size_t q = 0; q < S; ++q) {
            bool inside = false;
            const Key k = key_of(l, q, inside);
            if (inside && energy[k] >= t) out[l * S + q] = y[l * S + q];
        }
    return out;
}

}  // namespace oracle
