#include "ksynth/io.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ksynth/version.hpp"

namespace ksynth {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string digest_hex(std::string_view bytes) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(bytes)));
  return buf;
}

std::string file_digest(const std::filesystem::path& path) {
  return digest_hex(read_file(path));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path.string());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void atomic_write_file(const std::filesystem::path& path, std::string_view content) {
  static std::atomic<std::uint64_t> counter{0};
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const std::filesystem::path tmp =
      path.string() + ".tmp" + std::to_string(counter.fetch_add(1));
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("short write: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string fmt_real(Real value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_pulse_csv(const std::filesystem::path& path, const ControlPulse& pulse,
                     const std::vector<std::string>& channel_names) {
  if (static_cast<int>(channel_names.size()) != pulse.channels()) {
    throw std::invalid_argument("write_pulse_csv: channel name count mismatch");
  }
  std::ostringstream out;
  out << "step";
  for (const auto& name : channel_names) out << ",u_" << name;
  out << '\n';
  for (int k = 0; k < pulse.steps(); ++k) {
    out << k;
    for (int a = 0; a < pulse.channels(); ++a) out << ',' << fmt_real(pulse.amplitudes(k, a));
    out << '\n';
  }
  atomic_write_file(path, out.str());
}

void write_pulse_sidecar(const std::filesystem::path& csv_path, const ControlPulse& pulse,
                         const std::string& model, std::uint64_t seed,
                         const nlohmann::json& config) {
  nlohmann::json side;
  side["dt"] = pulse.dt;
  side["steps"] = pulse.steps();
  side["channels"] = pulse.channels();
  side["model"] = model;
  side["seed"] = seed;
  side["config_hash"] = digest_hex(config.dump());
  std::filesystem::path json_path = csv_path;
  json_path.replace_extension(".json");
  atomic_write_file(json_path, side.dump(2) + "\n");
}

ControlPulse read_pulse_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open pulse file: " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty pulse file");
  int channels = 0;
  for (const char c : line) channels += c == ',';
  std::vector<std::vector<Real>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::vector<Real> row;
    std::getline(ls, cell, ',');  // step index
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    if (static_cast<int>(row.size()) != channels) {
      throw std::runtime_error("ragged pulse file row");
    }
    rows.push_back(std::move(row));
  }
  ControlPulse pulse;
  pulse.amplitudes = RealMatrix(static_cast<Eigen::Index>(rows.size()), channels);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    for (int a = 0; a < channels; ++a) {
      pulse.amplitudes(static_cast<Eigen::Index>(k), a) = rows[k][static_cast<std::size_t>(a)];
    }
  }
  return pulse;
}

void RunManifest::add_output(const std::filesystem::path& path) {
  outputs.emplace_back(path.filename().string(), file_digest(path));
}

void RunManifest::add_input(const std::filesystem::path& path) {
  inputs.emplace_back(path.string(), file_digest(path));
}

void RunManifest::write(const std::filesystem::path& dir) const {
  nlohmann::json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["command"] = command;
  j["config"] = config;
  j["seed"] = seed;
  j["timestamp"] = timestamp_utc();
  nlohmann::json ins = nlohmann::json::array();
  for (const auto& [p, d] : inputs) ins.push_back({{"path", p}, {"digest", d}});
  nlohmann::json outs = nlohmann::json::array();
  for (const auto& [p, d] : outputs) outs.push_back({{"path", p}, {"digest", d}});
  j["inputs"] = ins;
  j["outputs"] = outs;
  atomic_write_file(dir / "manifest.json", j.dump(2) + "\n");
}

}  // namespace ksynth
