#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <optional>
#include <string>

#include "stwave/estimators.hpp"
#include "stwave/io.hpp"
#include "stwave/noise.hpp"
#include "stwave/simulation.hpp"
#include "stwave/wavelet.hpp"

namespace py = pybind11;
using namespace stwave;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

// (n, N) -> d = 1, (n, N, N) -> d = 2
Shape shape_of(const Array& a) {
    if (a.ndim() == 2) return Shape{1, static_cast<std::size_t>(a.shape(1)), static_cast<std::size_t>(a.shape(0))};
    if (a.ndim() == 3) {
        if (a.shape(1) != a.shape(2)) throw std::invalid_argument("spatial axes must be square (n, N, N)");
        return Shape{2, static_cast<std::size_t>(a.shape(1)), static_cast<std::size_t>(a.shape(0))};
    }
    throw std::invalid_argument("expected an array of shape (n, N) or (n, N, N)");
}

SpaceTimeVolume to_volume(const Array& a) {
    const Shape shape = shape_of(a);
    validate_shape(shape);
    std::vector<double> data(a.data(), a.data() + a.size());
    return SpaceTimeVolume(shape, std::move(data));
}

py::array_t<double> to_array(const Shape& shape, std::span<const double> data) {
    std::vector<py::ssize_t> dims{static_cast<py::ssize_t>(shape.n)};
    for (int i = 0; i < shape.d; ++i) dims.push_back(static_cast<py::ssize_t>(shape.N));
    py::array_t<double> out(dims);
    std::memcpy(out.mutable_data(), data.data(), data.size() * sizeof(double));
    return out;
}

py::array_t<double> to_array(const SpaceTimeVolume& v) { return to_array(v.shape(), v.data()); }

py::dict summary_dict(const DenoiseSummary& s) {
    py::dict d;
    d["method"] = std::string(to_string(s.method));
    d["sigma"] = s.sigma;
    d["epsilon"] = s.epsilon;
    d["block_length"] = s.block_length;
    d["threshold"] = s.threshold;
    d["j1"] = s.j1;
    d["m2"] = s.m2;
    d["delta"] = s.delta;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Space-time wavelet block thresholding for noisy image sequences.";

    py::register_exception<VolumeFileError>(m, "VolumeFileError", PyExc_ValueError);

    m.attr("DEFAULT_DELTA") = kDefaultDelta;
    m.attr("STUDY_DELTA") = kStudyDelta;
    m.def("theoretical_delta_floor", &theoretical_delta_floor);
    m.def("wavelet_names", &wavelet_names);
    m.def("block_length", &block_length, py::arg("epsilon"));
    m.def("block_threshold", &block_threshold, py::arg("epsilon"), py::arg("delta") = kDefaultDelta);
    m.def("epsilon_from_sigma", [](double sigma, const Array& like) { return epsilon_from_sigma(sigma, shape_of(like)); },
          py::arg("sigma"), py::arg("like"), "sigma / sqrt(n N^d) for an array shaped like `like`.");

    m.def(
        "dwt",
        [](const Array& a, const std::string& wavelet, std::optional<std::string> wavelet_time) {
            const WaveletSpec ws = wavelet_by_name(wavelet);
            const WaveletSpec wt = wavelet_by_name(wavelet_time.value_or(wavelet));
            const CoeffCube c = dwt_spacetime(to_volume(a), ws, wt);
            return to_array(c.shape(), c.data());
        },
        py::arg("volume"), py::arg("wavelet") = "sym8", py::arg("wavelet_time") = py::none(),
        "Full-depth space-time transform; coefficients come back in the input's shape.");
    m.def(
        "idwt",
        [](const Array& a, const std::string& wavelet, std::optional<std::string> wavelet_time) {
            const WaveletSpec ws = wavelet_by_name(wavelet);
            const WaveletSpec wt = wavelet_by_name(wavelet_time.value_or(wavelet));
            const Shape shape = shape_of(a);
            CoeffCube c(shape, shape.space_levels(), shape.time_levels(),
                        std::vector<double>(a.data(), a.data() + a.size()));
            return to_array(idwt_spacetime(c, ws, wt));
        },
        py::arg("coeffs"), py::arg("wavelet") = "sym8", py::arg("wavelet_time") = py::none());

    m.def(
        "observe",
        [](const Array& a, double sigma, std::uint64_t seed, std::uint64_t stream) {
            return to_array(observe_volume(to_volume(a), sigma, seed, stream));
        },
        py::arg("truth"), py::arg("sigma"), py::arg("seed"), py::arg("stream") = 0,
        "truth + sigma * N(0, 1), reproducible from (seed, stream).");
    m.def("snr_to_sigma", [](const Array& a, double snr) { return snr_to_sigma(to_volume(a), snr); }, py::arg("truth"),
          py::arg("snr"));
    m.def(
        "mad_sigma",
        [](const Array& a, const std::string& wavelet, const std::string& bands) {
            if (bands != "all" && bands != "diagonal") throw std::invalid_argument("bands must be 'all' or 'diagonal'");
            return mad_sigma_volume(to_volume(a), wavelet_by_name(wavelet),
                                    bands == "all" ? MadBands::AllFinest : MadBands::DiagonalOnly);
        },
        py::arg("volume"), py::arg("wavelet") = "sym8", py::arg("bands") = "all");

    m.def(
        "denoise",
        [](const Array& a, const std::string& method, std::optional<double> sigma, double delta,
           const std::string& wavelet, std::optional<std::string> wavelet_time, bool practical, const std::string& mode,
           std::optional<int> j1, std::optional<int> m2) {
            const SpaceTimeVolume v = to_volume(a);
            DenoiseOptions o;
            o.method = parse_method(method);
            o.delta = delta;
            o.practical = practical;
            o.threshold_mode = parse_threshold_mode(mode);
            o.j1 = j1;
            o.m2 = m2;
            o.w_space = wavelet_by_name(wavelet);
            o.w_time = wavelet_by_name(wavelet_time.value_or(wavelet));
            const double s = sigma ? *sigma : mad_sigma_volume(v, o.w_space);
            DenoiseResult r;
            {
                py::gil_scoped_release release;
                r = denoise(v, o, s);
            }
            py::dict summary = summary_dict(r.summary);
            summary["sigma_source"] = sigma ? "given" : "mad";
            return py::make_tuple(to_array(r.volume), summary);
        },
        py::arg("volume"), py::arg("method") = "block", py::arg("sigma") = py::none(), py::arg("delta") = kDefaultDelta,
        py::arg("wavelet") = "sym8", py::arg("wavelet_time") = py::none(), py::arg("practical") = false,
        py::arg("mode") = "hard", py::arg("j1") = py::none(), py::arg("m2") = py::none(),
        "Returns (estimate, summary). sigma=None estimates it by MAD.");

    m.def(
        "phantom",
        [](std::size_t N, std::size_t n) {
            const Phantom ph = phantom(N, n);
            py::array_t<int> labels({static_cast<py::ssize_t>(N), static_cast<py::ssize_t>(N)});
            std::memcpy(labels.mutable_data(), ph.labels.data(), ph.labels.size() * sizeof(int));
            return py::make_tuple(to_array(ph.volume), labels);
        },
        py::arg("N") = 32, py::arg("n") = 64, "Returns (volume of shape (n, N, N), region labels of shape (N, N)).");

    m.def("read_volume", [](const std::string& path) { return to_array(read_volume(path)); }, py::arg("path"));
    m.def("write_volume", [](const Array& a, const std::string& path) { write_volume(to_volume(a), path); },
          py::arg("volume"), py::arg("path"));

    const SimConfig sim_defaults;
    m.def(
        "run_study",
        [](std::size_t N, std::size_t n, int M, std::vector<double> snr, std::uint64_t seed,
           std::vector<std::string> methods, const std::string& wavelet, const std::string& wavelet_time, double delta,
           bool practical) {
            SimConfig c;
            c.N = N;
            c.n = n;
            c.M = M;
            c.snr_list = std::move(snr);
            c.seed = seed;
            c.methods.clear();
            for (const auto& name : methods) c.methods.push_back(parse_method(name));
            c.wavelet_space = wavelet;
            c.wavelet_time = wavelet_time;
            c.delta = delta;
            c.practical = practical;
            StudyResult r;
            {
                py::gil_scoped_release release;
                r = run_study(c);
            }
            py::list rows;
            for (const MseRecord& rec : r.records) {
                py::dict row;
                row["method"] = std::string(to_string(rec.method));
                row["snr"] = rec.snr;
                row["rep"] = rec.rep;
                row["mse"] = rec.mse;
                row["runtime_s"] = rec.runtime_s;
                rows.append(row);
            }
            py::dict out;
            out["records"] = rows;
            out["sigma"] = r.sigmas;
            out["L_eps"] = r.block_lengths;
            return out;
        },
        py::arg("N") = sim_defaults.N, py::arg("n") = sim_defaults.n, py::arg("M") = sim_defaults.M,
        py::arg("snr") = sim_defaults.snr_list, py::arg("seed") = sim_defaults.seed,
        py::arg("methods") = std::vector<std::string>{"pixel1d", "slice2d", "block"},
        py::arg("wavelet") = sim_defaults.wavelet_space, py::arg("wavelet_time") = sim_defaults.wavelet_time,
        py::arg("delta") = sim_defaults.delta, py::arg("practical") = sim_defaults.practical);

    const RateConfig rate_defaults;
    m.def(
        "rate_experiment",
        [](int d, double s1, double s2, std::vector<double> eps, int reps, std::uint64_t seed, std::size_t N,
           std::size_t n, double delta) {
            RateConfig c;
            c.d = d;
            c.s1 = s1;
            c.s2 = s2;
            c.eps_grid = std::move(eps);
            c.reps = reps;
            c.seed = seed;
            c.N = N;
            c.n = n;
            c.delta = delta;
            RateResult r;
            {
                py::gil_scoped_release release;
                r = rate_experiment(c);
            }
            py::dict out;
            std::vector<double> e, risk;
            for (const RatePoint& p : r.points) {
                e.push_back(p.epsilon);
                risk.push_back(p.risk);
            }
            out["epsilon"] = e;
            out["risk"] = risk;
            out["slope"] = r.slope;
            out["theoretical_slope"] = r.theoretical_slope;
            return out;
        },
        py::arg("d") = rate_defaults.d, py::arg("s1") = rate_defaults.s1, py::arg("s2") = rate_defaults.s2,
        py::arg("eps") = rate_defaults.eps_grid, py::arg("reps") = rate_defaults.reps,
        py::arg("seed") = rate_defaults.seed, py::arg("N") = rate_defaults.N, py::arg("n") = rate_defaults.n,
        py::arg("delta") = rate_defaults.delta);

    m.def(
        "deviation_check",
        [](double delta, double epsilon, long trials, std::uint64_t seed) {
            const DeviationResult r = deviation_check(delta, epsilon, trials, seed);
            py::dict out;
            out["delta"] = r.delta;
            out["epsilon"] = r.epsilon;
            out["block_length"] = r.block_length;
            out["trials"] = r.trials;
            out["empirical"] = r.empirical;
            out["bound"] = r.bound;
            out["standard_error"] = r.standard_error;
            out["pass"] = r.pass;
            return out;
        },
        py::arg("delta"), py::arg("epsilon"), py::arg("trials") = 100000, py::arg("seed") = 1);
}
