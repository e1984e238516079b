#include "catpacket_cli/config.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "catpacket/errors.hpp"

namespace catpacket::cli {

namespace {

std::string join(const std::string& base, const std::string& key) {
  return base.empty() ? key : base + "." + key;
}

std::string index(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

// Runs f, turning library validation errors into ConfigErrors at `path`.
template <class F>
auto guarded(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const catpacket::Error& e) {
    throw ConfigError(path, e.what());
  }
}

class Reader {
 public:
  Reader(const json& node, json& out, std::string path)
      : node_(&node), out_(&out), path_(std::move(path)) {
    if (!node.is_object()) throw ConfigError(path_, "expected an object");
    if (!out.is_object()) out = json::object();
  }

  const std::string& path() const noexcept { return path_; }
  std::string at(const std::string& key) const { return join(path_, key); }
  bool has(const std::string& key) const { return node_->contains(key); }

  double number(const std::string& key) {
    if (!has(key)) throw ConfigError(at(key), "required number is missing");
    return record(key, as_number(node_->at(key), at(key)));
  }

  double number(const std::string& key, double fallback) {
    return has(key) ? number(key) : record(key, fallback);
  }

  std::size_t count(const std::string& key) {
    if (!has(key)) throw ConfigError(at(key), "required integer is missing");
    const auto& v = node_->at(key);
    if (!v.is_number_integer() && !v.is_number_unsigned()) {
      throw ConfigError(at(key), "expected a non-negative integer");
    }
    if (v.is_number_integer() && v.get<std::int64_t>() < 0) {
      throw ConfigError(at(key), "expected a non-negative integer");
    }
    seen_.insert(key);
    const auto n = v.get<std::size_t>();
    (*out_)[key] = n;
    return n;
  }

  std::size_t count(const std::string& key, std::size_t fallback) {
    if (has(key)) return count(key);
    (*out_)[key] = fallback;
    return fallback;
  }

  std::string text(const std::string& key) {
    if (!has(key)) throw ConfigError(at(key), "required string is missing");
    const auto& v = node_->at(key);
    if (!v.is_string()) throw ConfigError(at(key), "expected a string");
    seen_.insert(key);
    (*out_)[key] = v;
    return v.get<std::string>();
  }

  std::string text(const std::string& key, const std::string& fallback) {
    if (has(key)) return text(key);
    (*out_)[key] = fallback;
    return fallback;
  }

  Reader object(const std::string& key) {
    if (!has(key)) throw ConfigError(at(key), "required object is missing");
    seen_.insert(key);
    return Reader(node_->at(key), (*out_)[key], at(key));
  }

  // Missing objects read as empty so their defaults are still recorded.
  Reader object_or_empty(const std::string& key) {
    static const json empty = json::object();
    seen_.insert(key);
    return Reader(has(key) ? node_->at(key) : empty, (*out_)[key], at(key));
  }

  std::vector<Reader> objects(const std::string& key) {
    const auto& arr = array(key);
    json& out = (*out_)[key];
    out = json::array();
    for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(json::object());
    std::vector<Reader> readers;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      readers.emplace_back(arr[i], out[i], index(at(key), i));
    }
    return readers;
  }

  std::vector<double> numbers(const std::string& key) {
    const auto& arr = array(key);
    std::vector<double> values;
    for (std::size_t i = 0; i < arr.size(); ++i) values.push_back(as_number(arr[i], index(at(key), i)));
    (*out_)[key] = values;
    return values;
  }

  std::vector<std::string> texts(const std::string& key) {
    const auto& arr = array(key);
    std::vector<std::string> values;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      if (!arr[i].is_string()) throw ConfigError(index(at(key), i), "expected a string");
      values.push_back(arr[i].get<std::string>());
    }
    (*out_)[key] = values;
    return values;
  }

  /// Rejects keys that no parser consumed.
  void finish() const {
    for (const auto& [key, value] : node_->items()) {
      if (!seen_.contains(key)) throw ConfigError(at(key), "unknown key");
    }
  }

 private:
  const json& array(const std::string& key) {
    if (!has(key)) throw ConfigError(at(key), "required array is missing");
    const auto& v = node_->at(key);
    if (!v.is_array()) throw ConfigError(at(key), "expected an array");
    seen_.insert(key);
    return v;
  }

  static double as_number(const json& v, const std::string& where) {
    if (!v.is_number()) throw ConfigError(where, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(where, "expected a finite number");
    return x;
  }

  double record(const std::string& key, double value) {
    seen_.insert(key);
    (*out_)[key] = value;
    return value;
  }

  const json* node_;
  json* out_;
  std::string path_;
  std::set<std::string> seen_;
};

Dispersion parse_dispersion(Reader& root) {
  auto r = root.object_or_empty("dispersion");
  const auto kind = r.text("kind", "quadratic");
  Dispersion d = Dispersion::quadratic(1.0);
  if (kind == "quadratic") {
    const double mass = r.number("mass", 1.0);
    d = guarded(r.at("mass"), [&] { return Dispersion::quadratic(mass); });
  } else if (kind == "linear") {
    const double speed = r.number("speed");
    d = guarded(r.at("speed"), [&] { return Dispersion::linear(speed); });
  } else {
    throw ConfigError(r.at("kind"), "expected \"quadratic\" or \"linear\", got \"" + kind + "\"");
  }
  r.finish();
  return d;
}

GaussianProfile parse_profile(Reader& root) {
  auto r = root.object("profile");
  const double p0 = r.number("p0");
  const double sigma = r.number("sigma");
  r.finish();
  return guarded(r.path(), [&] { return GaussianProfile(p0, sigma); });
}

Resonance parse_resonance(Reader& r) {
  const double e = r.number("energy");
  const double g = r.number("width");
  r.finish();
  return guarded(r.path(), [&] { return Resonance(e, g); });
}

std::vector<Resonance> parse_resonance_list(Reader& parent, const std::string& key) {
  std::vector<Resonance> out;
  for (auto& r : parent.objects(key)) out.push_back(parse_resonance(r));
  return out;
}

PiecewiseConstantPotential parse_segments(Reader& r) {
  std::vector<Segment> segs;
  for (auto& s : r.objects("segments")) {
    segs.push_back({s.number("left"), s.number("right"), s.number("height")});
    s.finish();
  }
  return guarded(r.at("segments"), [&] { return PiecewiseConstantPotential(std::move(segs)); });
}

BarrierModel parse_barrier(Reader& root) {
  auto r = root.object("barrier");
  const auto kind = r.text("kind");
  BarrierModel model = PiecewiseConstantPotential{};
  if (kind == "rectangular") {
    const double h = r.number("height");
    const double left = r.number("left", 0.0);
    const double right = r.number("right");
    model = guarded(r.path(), [&] { return RectangularBarrier(h, left, right); });
  } else if (kind == "breit_wigner") {
    auto list = parse_resonance_list(r, "resonances");
    model = guarded(r.at("resonances"), [&] { return BreitWignerModel(std::move(list)); });
  } else if (kind == "piecewise") {
    model = parse_segments(r);
  } else if (kind == "double_barrier") {
    const double h = r.number("height");
    const double w = r.number("barrier_width");
    const double gap = r.number("gap");
    model = guarded(r.path(), [&] { return PiecewiseConstantPotential::double_barrier(h, w, gap); });
  } else {
    throw ConfigError(r.at("kind"), "expected one of rectangular, breit_wigner, piecewise, "
                                    "double_barrier; got \"" + kind + "\"");
  }
  r.finish();
  return model;
}

QuadratureConfig parse_quadrature(Reader& root) {
  auto r = root.object_or_empty("quadrature");
  QuadratureConfig q;
  q.k_sigma = r.number("k_sigma", q.k_sigma);
  const double n = static_cast<double>(r.count("n_points", static_cast<std::size_t>(q.n_points)));
  if (n > 1 << 24) throw ConfigError(r.at("n_points"), "too large");
  q.n_points = static_cast<int>(n);
  q.rel_tol = r.number("rel_tol", q.rel_tol);
  r.finish();
  guarded(r.path(), [&] { q.validate(); });
  return q;
}

void require_window(const std::string& path, double lo, double hi) {
  if (!(hi > lo)) throw ConfigError(path, "requires min < max");
}

}  // namespace

json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // nlohmann reports "parse error at line L, column C: ...".
    throw ConfigError("", std::string("invalid JSON: ") + e.what());
  }
}

json load_document(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", "cannot read config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_document(buf.str());
}

std::string config_hash(const json& resolved) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : resolved.dump()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Resolved<SweepConfig> parse_sweep(const json& doc, bool compare) {
  Resolved<SweepConfig> res;
  res.resolved["command"] = compare ? "compare" : "sweep";
  Reader root(doc, res.resolved, "");
  auto& cfg = res.config;
  auto& spec = cfg.spec;

  spec.disp = parse_dispersion(root);
  spec.profile = parse_profile(root);

  {
    auto cat = root.object_or_empty("cat");
    if (cat.has("delays")) {
      if (cat.has("modes")) throw ConfigError(cat.path(), "give either modes or delays, not both");
      spec.delay_pattern = cat.numbers("delays");
      guarded(cat.at("delays"), [&] { (void)CatStateSpec(spec.profile, spec.delay_pattern); });
      spec.modes = spec.delay_pattern.size();
    } else {
      spec.modes = cat.count("modes", 2);
      if (spec.modes < 1) throw ConfigError(cat.at("modes"), "needs at least one mode");
    }
    cat.finish();
  }

  {
    auto tau = root.object_or_empty("tau");
    const double e0 = guarded(tau.path(), [&] { return energy(spec.disp, spec.profile.p0()); });
    spec.tau_min = tau.number("min", 0.0);
    spec.tau_max = tau.number("max", 60.0 / e0);
    spec.n_tau = tau.count("count", 400);
    tau.finish();
    if (spec.tau_min < 0.0) throw ConfigError(tau.at("min"), "must be >= 0");
    require_window(tau.path(), spec.tau_min, spec.tau_max);
    if (spec.n_tau < 16) throw ConfigError(tau.at("count"), "needs at least 16 points");
    if (spec.n_tau > 1000000) throw ConfigError(tau.at("count"), "too many points");
  }

  spec.barrier = parse_barrier(root);
  spec.quadrature = parse_quadrature(root);

  const auto overlays = root.has("overlays") ? root.texts("overlays")
                                             : std::vector<std::string>(compare ? 1 : 0, "closed_form");
  if (!root.has("overlays")) res.resolved["overlays"] = overlays;
  for (std::size_t i = 0; i < overlays.size(); ++i) {
    const auto& name = overlays[i];
    if (name == "closed_form") {
      spec.overlays.closed_form = true;
    } else if (name == "large_n") {
      spec.overlays.large_n = true;
    } else if (name == "beat_envelope") {
      spec.overlays.beat_envelope = true;
    } else {
      throw ConfigError(index("overlays", i), "expected closed_form, large_n or beat_envelope, got \"" + name + "\"");
    }
  }
  if (root.has("overlay_resonances")) spec.overlay_resonances = parse_resonance_list(root, "overlay_resonances");

  {
    auto diag = root.object_or_empty("diagnostics");
    cfg.overlap_eps = diag.number("overlap_eps", 0.005);
    if (!(cfg.overlap_eps > 0.0)) throw ConfigError(diag.at("overlap_eps"), "must be > 0");
    if (diag.has("window")) {
      const auto w = diag.numbers("window");
      if (w.size() != 2) throw ConfigError(diag.at("window"), "expected [lo, hi]");
      require_window(diag.at("window"), w[0], w[1]);
      cfg.window = TauWindow{w[0], w[1]};
    }
    diag.finish();
  }

  if (compare) {
    auto c = root.object_or_empty("compare");
    cfg.breakdown_threshold = c.number("breakdown_threshold", 0.05);
    if (!(cfg.breakdown_threshold > 0.0)) throw ConfigError(c.at("breakdown_threshold"), "must be > 0");
    c.finish();
  }
  root.finish();
  guarded("", [&] { spec.validate(); });
  return res;
}

Resolved<ScanConfig> parse_scan(const json& doc) {
  Resolved<ScanConfig> res;
  res.resolved["command"] = "barrier-scan";
  Reader root(doc, res.resolved, "");
  auto& cfg = res.config;
  cfg.disp = parse_dispersion(root);
  cfg.profile = parse_profile(root);
  cfg.barrier = parse_barrier(root);
  guarded("barrier", [&] { (void)transmission_prob(cfg.barrier, cfg.disp, cfg.profile.p0()); });
  {
    auto m = root.object_or_empty("momentum");
    const double half = 10.0 / cfg.profile.sigma();
    double lo = cfg.profile.p0() - half;
    if (!cfg.disp.is_quadratic()) lo = std::max(lo, 1e-3 * cfg.profile.p0());
    cfg.p_min = m.number("min", lo);
    cfg.p_max = m.number("max", cfg.profile.p0() + half);
    cfg.count = m.count("count", 1001);
    m.finish();
    require_window(m.path(), cfg.p_min, cfg.p_max);
    if (cfg.count < 2) throw ConfigError(m.at("count"), "needs at least 2 points");
    if (cfg.count > 10000000) throw ConfigError(m.at("count"), "too many points");
    if (!cfg.disp.is_quadratic() && !(cfg.p_min > 0.0)) {
      throw ConfigError(m.at("min"), "linear dispersion needs p > 0");
    }
  }
  root.finish();
  return res;
}

Resolved<WaveformConfig> parse_waveform(const json& doc) {
  Resolved<WaveformConfig> res;
  res.resolved["command"] = "waveform";
  Reader root(doc, res.resolved, "");
  auto& cfg = res.config;
  {
    auto r = root.object("resonance");
    cfg.resonance = parse_resonance(r);
  }
  cfg.speed = root.number("speed");
  if (!(cfg.speed > 0.0)) throw ConfigError(root.at("speed"), "must be > 0");
  const double pr = cfg.resonance.energy() / cfg.speed;
  if (root.has("amplitude")) {
    if (root.has("profile")) throw ConfigError("", "give either amplitude or profile, not both");
    cfg.amplitude = root.number("amplitude");
    if (cfg.amplitude < 0.0) throw ConfigError(root.at("amplitude"), "must be >= 0");
  } else if (root.has("profile")) {
    const auto profile = parse_profile(root);
    cfg.amplitude = amplitude(profile, pr);
    res.resolved["amplitude_at_resonance"] = cfg.amplitude;
  } else {
    throw ConfigError("amplitude", "required: give amplitude or profile");
  }
  {
    auto y = root.object_or_empty("y");
    const double tail = cfg.speed / cfg.resonance.width();
    cfg.y_min = y.number("min", -5.0 * tail);
    cfg.y_max = y.number("max", 0.5 * tail);
    cfg.count = y.count("count", 2001);
    y.finish();
    require_window(y.path(), cfg.y_min, cfg.y_max);
    if (cfg.count < 2) throw ConfigError(y.at("count"), "needs at least 2 points");
    if (cfg.count > 10000000) throw ConfigError(y.at("count"), "too many points");
  }
  root.finish();
  return res;
}

Resolved<ResonanceConfig> parse_resonances(const json& doc) {
  Resolved<ResonanceConfig> res;
  res.resolved["command"] = "resonances";
  Reader root(doc, res.resolved, "");
  auto& cfg = res.config;
  const auto disp = parse_dispersion(root);
  if (!disp.is_quadratic()) {
    throw ConfigError("dispersion.kind", "resonance search needs a quadratic dispersion");
  }
  cfg.mass = disp.mass();
  const auto model = parse_barrier(root);
  const auto* pot = std::get_if<PiecewiseConstantPotential>(&model);
  if (pot == nullptr) throw ConfigError("barrier.kind", "resonance search needs a piecewise or double_barrier potential");
  cfg.potential = *pot;
  {
    auto e = root.object_or_empty("energy");
    const double top = cfg.potential.empty() ? 1.0 : cfg.potential.max_height();
    cfg.e_min = e.number("min", 1e-3 * top);
    cfg.e_max = e.number("max", top);
    e.finish();
    if (!(cfg.e_min > 0.0)) throw ConfigError(e.at("min"), "must be > 0");
    require_window(e.path(), cfg.e_min, cfg.e_max);
  }
  const auto scan = root.count("scan_points", static_cast<std::size_t>(cfg.search.scan_points));
  if (scan < 101 || scan > 10000000) throw ConfigError(root.at("scan_points"), "must be in [101, 1e7]");
  cfg.search.scan_points = static_cast<int>(scan);
  root.finish();
  return res;
}

}  // namespace catpacket::cli
