#pragma once

#include <filesystem>
#include <iosfwd>

#include "catpacket_cli/app.hpp"
#include "catpacket_cli/config.hpp"

namespace catpacket::cli {

/// Each command reads its configuration, writes its artifacts and returns the
/// number of data rows (or entries) written. Errors propagate as exceptions.
std::size_t cmd_sweep(const json& doc, const Options& options);
std::size_t cmd_barrier_scan(const json& doc, const Options& options);
std::size_t cmd_waveform(const json& doc, const Options& options);
std::size_t cmd_resonances(const json& doc, const Options& options);
std::size_t cmd_compare(const json& doc, const Options& options);

}  // namespace catpacket::cli
