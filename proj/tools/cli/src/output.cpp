#include "catpacket_cli/output.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>
#include <system_error>

#include <unistd.h>

namespace catpacket::cli {

std::string format_double(double value) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return {buf, end};
}

std::string render_csv(const std::string& hash, const std::vector<std::string>& header,
                       const std::vector<std::vector<double>>& rows) {
  std::string out = "# config_hash=" + hash + "\n";
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out += ',';
    out += header[i];
  }
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_double(row[i]);
    }
    out += '\n';
  }
  return out;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target = path.has_parent_path() ? path : fs::path(".") / path;
  const fs::path tmp = target.parent_path() /
                       ("." + target.filename().string() + ".tmp." + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      fs::remove(tmp, ignored);
      throw std::runtime_error("failed writing '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw std::runtime_error("cannot move output into place at '" + target.string() + "': " + ec.message());
  }
}

std::filesystem::path diagnostics_path(const std::filesystem::path& csv_path) {
  auto p = csv_path;
  p.replace_filename(csv_path.stem().string() + ".diagnostics.json");
  return p;
}

}  // namespace catpacket::cli
