#include "stwave/wavelet.hpp"

#include <cmath>
#include <stdexcept>

namespace stwave {

WaveletSpec WaveletSpec::from_lowpass(std::string name, std::vector<double> h, int vanishing_moments) {
    if (h.size() < 2 || h.size() % 2 != 0) {
        throw std::invalid_argument("low-pass filter must have even length >= 2");
    }
    WaveletSpec w;
    w.name = std::move(name);
    w.h = std::move(h);
    const std::size_t L = w.h.size();
    w.g.resize(L);
    for (std::size_t k = 0; k < L; ++k) {
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        w.g[k] = sign * w.h[L - 1 - k];
    }
    w.support_length = static_cast<int>(L);
    w.vanishing_moments = vanishing_moments;
    return w;
}

WaveletSpec haar() {
    const double r = 1.0 / std::sqrt(2.0);
    return WaveletSpec::from_lowpass("haar", {r, r}, 1);
}

// Four-tap Daubechies filter (two vanishing moments).
WaveletSpec daubechies4() {
    return WaveletSpec::from_lowpass("daub4",
                                     {
                                         0.48296291314453416,
                                         0.83651630373780794,
                                         0.22414386804201339,
                                         -0.12940952255126037,
                                     },
                                     2);
}

// Least-asymmetric Daubechies filter with eight vanishing moments (16 taps).
WaveletSpec symmlet8() {
    return WaveletSpec::from_lowpass("sym8",
                                     {
                                         0.0018899503327594609,
                                         -0.0003029205147213668,
                                         -0.014952258337048231,
                                         0.0038087520138906151,
                                         0.049137179673607506,
                                         -0.027219029917056003,
                                         -0.051945838107709037,
                                         0.3644418948353314,
                                         0.77718575170052351,
                                         0.48135965125837221,
                                         -0.061273359067658524,
                                         -0.14329423835080971,
                                         0.0076074873249176054,
                                         0.031695087811492981,
                                         -0.00054213233179114812,
                                         -0.0033824159510061256,
                                     },
                                     8);
}

WaveletSpec wavelet_by_name(std::string_view name) {
    if (name == "haar") return haar();
    if (name == "daub4") return daubechies4();
    if (name == "sym8") return symmlet8();
    throw std::invalid_argument("unknown wavelet: " + std::string(name));
}

std::vector<std::string> wavelet_names() { return {"haar", "daub4", "sym8"}; }

}  // namespace stwave
