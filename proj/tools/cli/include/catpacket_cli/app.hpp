#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

namespace catpacket::cli {

/// Process exit codes.
enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitAccuracy = 2 };

struct Options {
  /// sweep, barrier-scan, waveform, resonances or compare.
  std::string command;
  std::filesystem::path config;
  std::filesystem::path out;
  /// Worker threads; 0 uses every hardware thread.
  unsigned threads = 0;
  bool verbose = false;
};

/// Runs one command. Failures are reported on `err` as `code=...` lines and
/// mapped to an exit code; nothing is thrown.
int execute(const Options& options, std::ostream& err);

/// Full command line: argument parsing, CATPACKET_THREADS fallback, dispatch.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace catpacket::cli
