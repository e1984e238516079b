#pragma once

// JSON run configurations for the command-line tool. Every reader records the
// values it consumed (defaults included) so the resolved configuration can be
// hashed and echoed into output artifacts.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "catpacket/barrier.hpp"
#include "catpacket/sweep.hpp"
#include "catpacket/wavepacket.hpp"

namespace catpacket::cli {

using json = nlohmann::json;

/// Invalid configuration; `path` names the offending field (dot/bracket form).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& detail)
      : std::runtime_error(path.empty() ? detail : path + ": " + detail), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// Parses a JSON document; syntax errors become ConfigError with line/column.
json parse_document(const std::string& text);
json load_document(const std::filesystem::path& path);

/// FNV-1a 64-bit hash of the canonical (sorted-key, compact) serialization.
std::string config_hash(const json& resolved);

struct SweepConfig {
  SweepSpec spec;
  double overlap_eps = 0.005;
  std::optional<TauWindow> window;
  /// compare only: relative deviation above which the analytic form is
  /// flagged as broken down.
  double breakdown_threshold = 0.05;
};

struct ScanConfig {
  Dispersion disp = Dispersion::quadratic(1.0);
  GaussianProfile profile{1.0, 1.0};
  BarrierModel barrier = PiecewiseConstantPotential{};
  double p_min = 0.0;
  double p_max = 1.0;
  std::size_t count = 0;
};

struct WaveformConfig {
  Resonance resonance{1.0, 0.1};
  double speed = 1.0;
  double amplitude = 1.0;
  double y_min = -1.0;
  double y_max = 0.0;
  std::size_t count = 0;
};

struct ResonanceConfig {
  PiecewiseConstantPotential potential;
  double mass = 1.0;
  double e_min = 0.0;
  double e_max = 1.0;
  ResonanceSearchOptions search;
};

template <class T>
struct Resolved {
  T config;
  json resolved;
};

Resolved<SweepConfig> parse_sweep(const json& doc, bool compare);
Resolved<ScanConfig> parse_scan(const json& doc);
Resolved<WaveformConfig> parse_waveform(const json& doc);
Resolved<ResonanceConfig> parse_resonances(const json& doc);

}  // namespace catpacket::cli
