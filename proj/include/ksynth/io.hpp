#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "nlohmann/json.hpp"

#include "ksynth/grape.hpp"
#include "ksynth/types.hpp"

namespace ksynth {

/// FNV-1a 64-bit content hash, printed as 16 hex digits.
std::uint64_t fnv1a64(std::string_view bytes);
std::string digest_hex(std::string_view bytes);
std::string file_digest(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);

/// Write-temp-then-rename so concurrent readers never see partial content.
void atomic_write_file(const std::filesystem::path& path, std::string_view content);

/// Deterministic shortest-ish float formatting used by all CSV output.
std::string fmt_real(Real value);

std::string timestamp_utc();

/// Pulse CSV: header `step,u_<name>,...` plus one row per step, with a JSON
/// sidecar <stem>.json carrying dt, model, seed and a config hash.
void write_pulse_csv(const std::filesystem::path& path, const ControlPulse& pulse,
                     const std::vector<std::string>& channel_names);
void write_pulse_sidecar(const std::filesystem::path& csv_path, const ControlPulse& pulse,
                         const std::string& model, std::uint64_t seed,
                         const nlohmann::json& config);
ControlPulse read_pulse_csv(const std::filesystem::path& path);

/// One manifest per CLI run; every output file is listed with its digest.
struct RunManifest {
  std::string command;
  nlohmann::json config;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> inputs;   // path, digest
  std::vector<std::pair<std::string, std::string>> outputs;  // path, digest

  void add_output(const std::filesystem::path& path);
  void add_input(const std::filesystem::path& path);
  void write(const std::filesystem::path& dir) const;
};

}  // namespace ksynth
