#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "catpacket/analytic.hpp"
#include "catpacket/barrier.hpp"
#include "catpacket/sweep.hpp"
#include "catpacket_cli/output.hpp"

namespace catpacket::cli {

namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json resonance_list(const SweepResult& r) {
  json out = json::array();
  for (std::size_t j = 0; j < r.overlay_resonances.size(); ++j) {
    out.push_back({{"energy", r.overlay_resonances[j].energy()},
                   {"width", r.overlay_resonances[j].width()},
                   {"coupling", r.couplings[j].value}});
  }
  return out;
}

// Post-threshold window unless the config pins one.
TauWindow analysis_window(const SweepConfig& cfg, const SweepResult& r, json& notes) {
  if (cfg.window) return *cfg.window;
  if (const auto start = overlap_threshold(r, cfg.overlap_eps)) {
    return {*start, r.records.back().tau};
  }
  notes.push_back("overlap threshold not reached; using the full sweep range");
  return {r.records.front().tau, r.records.back().tau};
}

SweepResult run(SweepConfig& cfg, const Options& options) {
  cfg.spec.threads = options.threads;
  reset_bw_clamp_count();
  return run_sweep(cfg.spec);
}

}  // namespace

std::size_t cmd_sweep(const json& doc, const Options& options) {
  auto parsed = parse_sweep(doc, false);
  auto& cfg = parsed.config;
  const auto hash = config_hash(parsed.resolved);
  const auto result = run(cfg, options);

  std::vector<std::string> header{"tau", "p_t", "p_t_ind", "delta_p", "offdiag_overlap"};
  for (const auto& name : result.overlay_names) header.push_back(name);
  std::vector<std::vector<double>> rows;
  rows.reserve(result.records.size());
  for (const auto& rec : result.records) {
    std::vector<double> row{rec.tau, rec.p_t, rec.p_t_ind, rec.delta_p, rec.offdiag_overlap};
    row.insert(row.end(), rec.analytic.begin(), rec.analytic.end());
    rows.push_back(std::move(row));
  }

  json notes = json::array();
  const auto window = analysis_window(cfg, result, notes);
  const auto diag = diagnose(result, cfg.overlap_eps, window);
  for (const auto& n : diag.notes) notes.push_back(n);
  json peaks = json::array();
  for (const auto& p : diag.peaks) peaks.push_back({{"position", p.position}, {"height", p.height}});
  json report{
      {"config_hash", hash},
      {"command", "sweep"},
      {"modes", cfg.spec.mode_count()},
      {"weight", result.weight},
      {"overlap_eps", cfg.overlap_eps},
      {"overlap_threshold_tau", optional_number(diag.overlap_threshold_tau)},
      {"window", {window.lo, window.hi}},
      {"oscillation", diag.oscillation ? json{{"frequency", diag.oscillation->frequency},
                                              {"decay_rate", diag.oscillation->decay_rate}}
                                       : json(nullptr)},
      {"beat_frequency", optional_number(diag.beat_frequency)},
      {"peaks", peaks},
      {"overlay_resonances", resonance_list(result)},
      {"bw_clamp_count", bw_clamp_count()},
      {"notes", notes},
  };

  write_atomic(options.out, render_csv(hash, header, rows));
  write_atomic(diagnostics_path(options.out), report.dump(2) + "\n");
  return rows.size();
}

std::size_t cmd_compare(const json& doc, const Options& options) {
  auto parsed = parse_sweep(doc, true);
  auto& cfg = parsed.config;
  const auto hash = config_hash(parsed.resolved);
  if (!cfg.spec.overlays.any()) throw ConfigError("overlays", "compare needs at least one overlay");
  const auto result = run(cfg, options);

  json notes = json::array();
  const auto window = analysis_window(cfg, result, notes);
  std::vector<std::size_t> in_window;
  double scale = 0.0;
  for (std::size_t i = 0; i < result.records.size(); ++i) {
    const double tau = result.records[i].tau;
    if (tau < window.lo || tau > window.hi) continue;
    in_window.push_back(i);
    scale = std::max(scale, std::abs(result.records[i].delta_p));
  }
  if (in_window.empty() || !(scale > 0.0)) {
    throw ConfigError("diagnostics.window", "no nonzero quadrature delta_p inside the comparison window");
  }

  const auto& res = result.overlay_resonances;
  const long modes = static_cast<long>(cfg.spec.mode_count());
  json overlays = json::array();
  bool breakdown = false;
  for (std::size_t k = 0; k < result.overlay_names.size(); ++k) {
    const auto& name = result.overlay_names[k];
    if (name == "analytic_envelope" && modes != 2) {
      notes.push_back("beat envelope comparison needs N = 2; skipped");
      continue;
    }
    double max_dev = 0.0;
    double sum_dev = 0.0;
    for (std::size_t i : in_window) {
      const auto& rec = result.records[i];
      double predicted = rec.analytic[k];
      if (name == "analytic_envelope") {
        const double wbar = 0.5 * (res[0].energy() + res[1].energy());
        predicted *= std::cos(wbar * rec.tau);
      }
      const double dev = std::isfinite(predicted) ? std::abs(rec.delta_p - predicted) / scale
                                                  : std::numeric_limits<double>::infinity();
      max_dev = std::max(max_dev, dev);
      sum_dev += dev;
    }
    const double mean_dev = sum_dev / static_cast<double>(in_window.size());
    const bool broken = !(max_dev <= cfg.breakdown_threshold);
    breakdown = breakdown || broken;
    overlays.push_back({{"name", name},
                        {"max_relative_deviation", max_dev},
                        {"mean_relative_deviation", mean_dev},
                        {"breakdown", broken}});
  }

  // The explicit pair sum against its geometric-progression closed form.
  double algebraic = 0.0;
  for (std::size_t i : in_window) {
    const double tau = result.records[i].tau;
    for (std::size_t j = 0; j < res.size(); ++j) {
      const auto c = result.couplings[j];
      const double dev = std::abs(pair_sum_correction(res[j], c, modes, tau) -
                                  closed_form_correction(res[j], c, modes, tau));
      algebraic = std::max(algebraic, dev / (c.value * static_cast<double>(modes * modes)));
    }
  }

  std::size_t validity_warnings = 0;
  for (std::size_t i : in_window) {
    const auto p = n_mode_probability(res, result.couplings, result.weight, modes, result.records[i].tau);
    if (p.warning) ++validity_warnings;
  }
  if (validity_warnings > 0) {
    notes.push_back("analytic P^T left [0, 1] at " + std::to_string(validity_warnings) + " delays");
  }

  json report{
      {"config_hash", hash},
      {"command", "compare"},
      {"modes", modes},
      {"window", {window.lo, window.hi}},
      {"points", in_window.size()},
      {"deviation_scale", scale},
      {"breakdown_threshold", cfg.breakdown_threshold},
      {"overlays", overlays},
      {"algebraic_check", {{"max_scaled_deviation", algebraic}, {"passed", algebraic <= 1e-10}}},
      {"breakdown", breakdown},
      {"overlay_resonances", resonance_list(result)},
      {"bw_clamp_count", bw_clamp_count()},
      {"notes", notes},
  };
  write_atomic(options.out, report.dump(2) + "\n");
  return overlays.size();
}

std::size_t cmd_barrier_scan(const json& doc, const Options& options) {
  const auto parsed = parse_scan(doc);
  const auto& cfg = parsed.config;
  std::vector<std::vector<double>> rows;
  rows.reserve(cfg.count);
  for (std::size_t i = 0; i < cfg.count; ++i) {
    const double p = i + 1 == cfg.count
                         ? cfg.p_max
                         : cfg.p_min + (cfg.p_max - cfg.p_min) * static_cast<double>(i) /
                                           static_cast<double>(cfg.count - 1);
    const double t2 = transmission_prob(cfg.barrier, cfg.disp, p);
    const double a2 = density(cfg.profile, p);
    rows.push_back({p, energy(cfg.disp, p), t2, a2, t2 * a2});
  }
  write_atomic(options.out,
               render_csv(config_hash(parsed.resolved), {"p", "energy", "t2", "a2", "t2a2"}, rows));
  return rows.size();
}

std::size_t cmd_waveform(const json& doc, const Options& options) {
  const auto parsed = parse_waveform(doc);
  const auto& cfg = parsed.config;
  std::vector<std::vector<double>> rows;
  rows.reserve(cfg.count);
  for (std::size_t i = 0; i < cfg.count; ++i) {
    const double y = i + 1 == cfg.count
                         ? cfg.y_max
                         : cfg.y_min + (cfg.y_max - cfg.y_min) * static_cast<double>(i) /
                                           static_cast<double>(cfg.count - 1);
    const auto phi = transmitted_waveform(cfg.resonance, cfg.speed, cfg.amplitude, y);
    rows.push_back({y, phi.real(), phi.imag(), std::abs(phi)});
  }
  write_atomic(options.out, render_csv(config_hash(parsed.resolved),
                                       {"y", "re_phi", "im_phi", "abs_phi"}, rows));
  return rows.size();
}

std::size_t cmd_resonances(const json& doc, const Options& options) {
  const auto parsed = parse_resonances(doc);
  const auto& cfg = parsed.config;
  const auto peaks = find_resonance_peaks(cfg.potential, cfg.mass, cfg.e_min, cfg.e_max, cfg.search);
  json list = json::array();
  for (const auto& p : peaks) {
    list.push_back({{"E_r", p.resonance.energy()},
                    {"Gamma", p.resonance.width()},
                    {"peak_t2", p.peak_transmission},
                    {"fit_rms", p.fit_rms}});
  }
  const json report{{"config_hash", config_hash(parsed.resolved)},
                    {"command", "resonances"},
                    {"energy_window", {cfg.e_min, cfg.e_max}},
                    {"resonances", list}};
  write_atomic(options.out, report.dump(2) + "\n");
  return peaks.size();
}

}  // namespace catpacket::cli
