#include "stwave/io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "stwave/estimators.hpp"
#include "stwave/noise.hpp"

namespace stwave {

namespace {

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t get_le(const std::uint8_t* p, int bytes) {
    std::uint64_t v = 0;
    for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    return v;
}

struct Header {
    Shape shape;
};

Header parse_header(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < kVolumeHeaderBytes)
        throw VolumeFileError(VolumeErrorCode::Truncated, "file shorter than the 18-byte header");
    if (std::memcmp(bytes.data(), kVolumeMagic, sizeof kVolumeMagic) != 0)
        throw VolumeFileError(VolumeErrorCode::Format, "bad magic, expected STVOL1");
    const auto version = static_cast<std::uint16_t>(get_le(bytes.data() + 6, 2));
    if (version != kVolumeVersion)
        throw VolumeFileError(VolumeErrorCode::Format, "unsupported version " + std::to_string(version));
    Header h;
    h.shape.d = static_cast<int>(get_le(bytes.data() + 8, 2));
    h.shape.N = static_cast<std::size_t>(get_le(bytes.data() + 10, 4));
    h.shape.n = static_cast<std::size_t>(get_le(bytes.data() + 14, 4));
    try {
        validate_shape(h.shape);
    } catch (const std::invalid_argument& e) {
        throw VolumeFileError(VolumeErrorCode::Shape, e.what());
    }
    // keeps n N^d well away from size_t overflow
    const double samples = static_cast<double>(h.shape.n) * std::pow(static_cast<double>(h.shape.N), h.shape.d);
    if (samples > kMaxVolumeSamples)
        throw VolumeFileError(VolumeErrorCode::Shape, "volume of " + std::to_string(samples) + " samples is too large");
    return h;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

}  // namespace

std::string_view to_string(VolumeErrorCode code) {
    switch (code) {
        case VolumeErrorCode::Io: return "io";
        case VolumeErrorCode::Format: return "format";
        case VolumeErrorCode::Truncated: return "truncated";
        case VolumeErrorCode::Shape: return "shape";
    }
    return "unknown";
}

VolumeFileError::VolumeFileError(VolumeErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

std::vector<std::uint8_t> encode_volume(const SpaceTimeVolume& volume) {
    const Shape& s = volume.shape();
    std::vector<std::uint8_t> out;
    out.reserve(kVolumeHeaderBytes + 8 * s.size());
    out.insert(out.end(), kVolumeMagic, kVolumeMagic + sizeof kVolumeMagic);
    put_u16(out, kVolumeVersion);
    put_u16(out, static_cast<std::uint16_t>(s.d));
    put_u32(out, static_cast<std::uint32_t>(s.N));
    put_u32(out, static_cast<std::uint32_t>(s.n));
    for (double v : volume.data()) {
        const auto bits = std::bit_cast<std::uint64_t>(v);
        for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
    }
    return out;
}

std::size_t payload_bytes(const std::vector<std::uint8_t>& header) {
    return 8 * parse_header(header).shape.size();
}

SpaceTimeVolume decode_volume(const std::vector<std::uint8_t>& bytes) {
    const Header h = parse_header(bytes);
    const std::size_t count = h.shape.size();
    const std::size_t expected = kVolumeHeaderBytes + 8 * count;
    if (bytes.size() < expected)
        throw VolumeFileError(VolumeErrorCode::Truncated, "payload has " + std::to_string(bytes.size() - kVolumeHeaderBytes) +
                                                              " bytes, header implies " + std::to_string(8 * count));
    if (bytes.size() > expected) throw VolumeFileError(VolumeErrorCode::Format, "trailing bytes after payload");
    std::vector<double> data(count);
    const std::uint8_t* p = bytes.data() + kVolumeHeaderBytes;
    for (std::size_t i = 0; i < count; ++i) data[i] = std::bit_cast<double>(get_le(p + 8 * i, 8));
    return SpaceTimeVolume(h.shape, std::move(data));
}

void write_volume(const SpaceTimeVolume& volume, const std::filesystem::path& path) {
    const auto bytes = encode_volume(volume);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw VolumeFileError(VolumeErrorCode::Io, "cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw VolumeFileError(VolumeErrorCode::Io, "write failed for " + path.string());
}

SpaceTimeVolume read_volume(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw VolumeFileError(VolumeErrorCode::Io, "cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw VolumeFileError(VolumeErrorCode::Io, "read failed for " + path.string());
    return decode_volume(bytes);
}

void write_text(const std::string& text, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw VolumeFileError(VolumeErrorCode::Io, "cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw VolumeFileError(VolumeErrorCode::Io, "write failed for " + path.string());
}

void write_results_csv(const std::vector<MseRecord>& records, const std::filesystem::path& path) {
    std::ostringstream os;
    os << kResultColumns << '\n';
    for (const MseRecord& r : records)
        os << to_string(r.method) << ',' << format_double(r.snr) << ',' << r.rep << ',' << format_double(r.mse) << ','
           << format_double(r.runtime_s) << '\n';
    write_text(os.str(), path);
}

std::vector<MseRecord> read_results_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw VolumeFileError(VolumeErrorCode::Io, "cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != kResultColumns)
        throw VolumeFileError(VolumeErrorCode::Format, "results header must be " + std::string(kResultColumns));
    std::vector<MseRecord> records;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        for (std::string f; std::getline(ss, f, ',');) fields.push_back(f);
        if (fields.size() != 5) throw VolumeFileError(VolumeErrorCode::Format, "expected 5 fields: " + line);
        MseRecord r;
        try {
            r.method = parse_method(fields[0]);
            r.snr = std::stod(fields[1]);
            r.rep = std::stoi(fields[2]);
            r.mse = fields[3] == "nan" ? std::numeric_limits<double>::quiet_NaN() : std::stod(fields[3]);
            r.runtime_s = std::stod(fields[4]);
        } catch (const std::exception&) {
            throw VolumeFileError(VolumeErrorCode::Format, "bad row: " + line);
        }
        r.failed = std::isnan(r.mse);
        records.push_back(r);
    }
    return records;
}

std::string study_metadata_json(const SimConfig& config, const StudyResult& result) {
    nlohmann::ordered_json j;
    j["columns"] = kResultColumns;
    j["wavelet_space"] = config.wavelet_space;
    j["wavelet_time"] = config.wavelet_time;
    j["delta"] = config.delta;
    j["practical"] = config.practical;
    j["threshold_mode"] = std::string(to_string(config.threshold_mode));
    j["log_base"] = "natural";
    j["seed"] = config.seed;
    j["snr_definition"] = kSnrDefinition;
    j["N"] = config.N;
    j["n"] = config.n;
    j["d"] = 2;
    j["M"] = config.M;
    j["snr"] = config.snr_list;
    std::vector<std::string> methods;
    for (Method m : config.methods) methods.emplace_back(to_string(m));
    j["methods"] = methods;
    j["signal_set"] = kSignalSetName;
    j["sigma"] = result.sigmas;
    j["L_eps"] = result.block_lengths;
    std::vector<double> eps;
    for (double s : result.sigmas) eps.push_back(epsilon_from_sigma(s, Shape{2, config.N, config.n}));
    j["epsilon"] = eps;
    std::size_t failed = 0;
    for (const MseRecord& r : result.records) failed += r.failed ? 1 : 0;
    j["failed_records"] = failed;
    return j.dump(2) + "\n";
}

void write_rate_csv(const RateResult& result, const std::filesystem::path& path) {
    std::ostringstream os;
    os << "epsilon,risk\n";
    for (const RatePoint& p : result.points) os << format_double(p.epsilon) << ',' << format_double(p.risk) << '\n';
    write_text(os.str(), path);
}

std::string rate_metadata_json(const RateConfig& config, const RateResult& result) {
    nlohmann::ordered_json j;
    j["d"] = config.d;
    j["s1"] = config.s1;
    j["s2"] = config.s2;
    j["p"] = 2;
    j["q"] = 2;
    j["A1"] = config.A1;
    j["A2"] = config.A2;
    j["N"] = config.N;
    j["n"] = config.n;
    j["eps"] = config.eps_grid;
    j["reps"] = config.reps;
    j["seed"] = config.seed;
    j["delta"] = config.delta;
    j["wavelet_time"] = config.wavelet_time;
    j["log_base"] = "natural";
    j["slope"] = result.slope;
    j["theoretical_slope"] = result.theoretical_slope;
    return j.dump(2) + "\n";
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv) {
    std::filesystem::path p = csv;
    p.replace_extension(".json");
    return p;
}

}  // namespace stwave
