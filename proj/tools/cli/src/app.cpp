#include "catpacket_cli/app.hpp"

#include <charconv>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "catpacket/errors.hpp"
#include "commands.hpp"

namespace catpacket::cli {

namespace {

using Command = std::function<std::size_t(const json&, const Options&)>;

const std::map<std::string, Command>& commands() {
  static const std::map<std::string, Command> table{
      {"sweep", cmd_sweep},
      {"barrier-scan", cmd_barrier_scan},
      {"waveform", cmd_waveform},
      {"resonances", cmd_resonances},
      {"compare", cmd_compare},
  };
  return table;
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

int report(std::ostream& err, const std::string& code, int exit, const std::string& message,
           const std::string& extra = {}) {
  err << "code=" << code << " exit=" << exit;
  if (!extra.empty()) err << ' ' << extra;
  err << " message=" << quoted(message) << '\n';
  return exit;
}

}  // namespace

int execute(const Options& options, std::ostream& err) {
  const auto it = commands().find(options.command);
  if (it == commands().end()) {
    return report(err, "usage", kExitValidation, "unknown command '" + options.command + "'");
  }
  const auto start = std::chrono::steady_clock::now();
  try {
    const auto doc = load_document(options.config);
    const auto count = it->second(doc, options);
    if (options.verbose) {
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      std::ostringstream extra;
      extra << "command=" << options.command << " rows=" << count << " seconds=" << secs
            << " out=" << quoted(options.out.string());
      err << "code=ok exit=0 " << extra.str() << '\n';
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    return report(err, "config_invalid", kExitValidation, e.what(),
                  e.path().empty() ? std::string{} : "path=" + e.path());
  } catch (const AccuracyError& e) {
    std::ostringstream extra;
    extra << "estimate=" << e.estimate();
    if (e.tau()) extra << " tau=" << *e.tau();
    return report(err, "accuracy_failure", kExitAccuracy, e.what(), extra.str());
  } catch (const DegenerateNormalizationError& e) {
    return report(err, "degenerate_normalization", kExitAccuracy, e.what());
  } catch (const catpacket::Error& e) {
    return report(err, "invalid_input", kExitValidation, e.what());
  } catch (const std::exception& e) {
    return report(err, "io_error", kExitValidation, e.what());
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Transmission of multi-component wave-packet cat states through barriers"};
  app.name("catpacket");
  app.require_subcommand(1);

  Options options;
  std::optional<unsigned> threads;
  const std::map<std::string, std::string> help{
      {"sweep", "Delay sweep of P^T, P^T_ind and their difference (CSV + diagnostics JSON)"},
      {"barrier-scan", "Transmission filter |T(p)|^2 against the momentum profile (CSV)"},
      {"waveform", "Transmitted resonance waveform behind its front (CSV)"},
      {"resonances", "Resonances of a piecewise-constant potential (JSON)"},
      {"compare", "Quadrature against the analytic resonance forms (JSON report)"},
  };
  for (const auto& [name, description] : help) {
    auto* sub = app.add_subcommand(name, description);
    sub->add_option("--config", options.config, "JSON run configuration")->required();
    sub->add_option("--out", options.out, "Output file")->required();
    sub->add_option("--threads", threads, "Worker threads (default: CATPACKET_THREADS or all cores)");
    sub->add_flag("--verbose", options.verbose, "Report timing on stderr");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    return report(err, "usage", kExitValidation, e.what());
  }
  options.command = app.get_subcommands().front()->get_name();
  if (options.command.empty()) return report(err, "usage", kExitValidation, "missing command");

  if (threads) {
    options.threads = *threads;
  } else if (const char* env = std::getenv("CATPACKET_THREADS"); env != nullptr && *env != '\0') {
    const std::string_view s(env);
    unsigned n = 0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
    if (ec != std::errc{} || end != s.data() + s.size()) {
      return report(err, "usage", kExitValidation, "CATPACKET_THREADS must be a non-negative integer");
    }
    options.threads = n;
  }
  return execute(options, err);
}

}  // namespace catpacket::cli
