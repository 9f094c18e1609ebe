#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "stwave/simulation.hpp"
#include "stwave/wavelet.hpp"

namespace stwave {

enum class VolumeErrorCode { Io, Format, Truncated, Shape };

std::string_view to_string(VolumeErrorCode code);

class VolumeFileError : public std::runtime_error {
public:
    VolumeFileError(VolumeErrorCode code, const std::string& what);
    VolumeErrorCode code() const noexcept { return code_; }

private:
    VolumeErrorCode code_;
};

inline constexpr char kVolumeMagic[6] = {'S', 'T', 'V', 'O', 'L', '1'};
inline constexpr std::uint16_t kVolumeVersion = 1;
inline constexpr std::size_t kVolumeHeaderBytes = 18;
/// Headers implying more samples than this (2^34, 128 GiB) are rejected.
inline constexpr double kMaxVolumeSamples = 0x1.0p34;

/// Header followed by n N^d little-endian float64 values, time-major.
std::vector<std::uint8_t> encode_volume(const SpaceTimeVolume& volume);
SpaceTimeVolume decode_volume(const std::vector<std::uint8_t>& bytes);

/// Payload size implied by a header; throws VolumeFileError on a bad header.
std::size_t payload_bytes(const std::vector<std::uint8_t>& header);

void write_volume(const SpaceTimeVolume& volume, const std::filesystem::path& path);
SpaceTimeVolume read_volume(const std::filesystem::path& path);

inline constexpr const char* kResultColumns = "method,snr,rep,mse,runtime_s";
inline constexpr const char* kSnrDefinition = "sd(signal)/sigma, population standard deviation over all voxels";

void write_results_csv(const std::vector<MseRecord>& records, const std::filesystem::path& path);
std::vector<MseRecord> read_results_csv(const std::filesystem::path& path);

/// Sidecar for a study CSV: every config field that affects the rows.
std::string study_metadata_json(const SimConfig& config, const StudyResult& result);

/// epsilon,risk rows; the slopes go in the sidecar.
void write_rate_csv(const RateResult& result, const std::filesystem::path& path);
std::string rate_metadata_json(const RateConfig& config, const RateResult& result);

void write_text(const std::string& text, const std::filesystem::path& path);

/// "<stem>.json" next to a results file.
std::filesystem::path sidecar_path(const std::filesystem::path& csv);

}  // namespace stwave
