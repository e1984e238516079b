#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace catpacket::cli {

/// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

/// CSV text: a `# config_hash=<hash>` comment line, the header row, then one
/// row per record. LF line endings.
std::string render_csv(const std::string& hash, const std::vector<std::string>& header,
                       const std::vector<std::vector<double>>& rows);

/// Writes via a temporary file in the target directory and renames it into
/// place, so readers never see a partial file.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// `<dir>/<stem>.diagnostics.json` next to a CSV output.
std::filesystem::path diagnostics_path(const std::filesystem::path& csv_path);

}  // namespace catpacket::cli
