#include "gadi/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace gadi {
namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ConfigError(path + ": " + message);
}

std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

// Reads the members of one JSON object; finish() rejects the leftovers.
class Section {
 public:
  Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) fail(path_, "expected an object");
  }

  bool has(const std::string& key) {
    seen_.push_back(key);
    return node_.contains(key);
  }

  const json& at(const std::string& key) const { return node_.at(key); }
  std::string child(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    const json& v = node_.at(key);
    if (!v.is_number()) fail(child(key), "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(child(key), "must be finite");
    return x;
  }

  double positive(const std::string& key, double fallback) {
    const double x = number(key, fallback);
    if (!(x > 0.0)) fail(child(key), "must be > 0");
    return x;
  }

  double nonnegative(const std::string& key, double fallback) {
    const double x = number(key, fallback);
    if (x < 0.0) fail(child(key), "must be >= 0");
    return x;
  }

  long long integer(const std::string& key, long long fallback, long long lo, long long hi) {
    if (!has(key)) return fallback;
    const json& v = node_.at(key);
    if (!v.is_number_integer()) fail(child(key), "expected an integer");
    const long long x = v.get<long long>();
    if (x < lo || x > hi)
      fail(child(key), "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return x;
  }

  std::uint64_t unsigned64(const std::string& key, std::uint64_t fallback) {
    if (!has(key)) return fallback;
    const json& v = node_.at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
      fail(child(key), "expected a non-negative integer");
    return v.get<std::uint64_t>();
  }

  std::string text(const std::string& key, const std::string& fallback,
                   const std::vector<std::string>& choices = {}) {
    if (!has(key)) return fallback;
    const json& v = node_.at(key);
    if (!v.is_string()) fail(child(key), "expected a string");
    std::string s = v.get<std::string>();
    if (!choices.empty() && std::find(choices.begin(), choices.end(), s) == choices.end()) {
      std::string list;
      for (const auto& c : choices) list += (list.empty() ? "" : ", ") + c;
      std::string msg = "'" + s + "' is not one of {" + list + "}";
      const std::string hint = suggest_key(s, choices);
      if (!hint.empty()) msg += "; did you mean '" + hint + "'?";
      fail(child(key), msg);
    }
    return s;
  }

  std::vector<double> numbers(const std::string& key, const std::vector<double>& fallback) {
    if (!has(key)) return fallback;
    const json& v = node_.at(key);
    if (!v.is_array()) fail(child(key), "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) fail(child(key) + "[" + std::to_string(i) + "]", "expected a number");
      out.push_back(v[i].get<double>());
    }
    return out;
  }

  std::vector<long long> integers(const std::string& key, const std::vector<long long>& fallback) {
    if (!has(key)) return fallback;
    const json& v = node_.at(key);
    if (!v.is_array()) fail(child(key), "expected an array of integers");
    std::vector<long long> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number_integer())
        fail(child(key) + "[" + std::to_string(i) + "]", "expected an integer");
      out.push_back(v[i].get<long long>());
    }
    return out;
  }

  void finish() const {
    for (auto it = node_.begin(); it != node_.end(); ++it) {
      if (std::find(seen_.begin(), seen_.end(), it.key()) != seen_.end()) continue;
      std::string msg = "unknown key '" + it.key() + "'";
      const std::string hint = suggest_key(it.key(), seen_);
      if (!hint.empty()) msg += "; did you mean '" + hint + "'?";
      fail(path_.empty() ? std::string("<root>") : path_, msg);
    }
  }

 private:
  const json& node_;
  std::string path_;
  std::vector<std::string> seen_;
};

std::vector<Layer> parse_layers(const json& node, const std::string& path) {
  if (!node.is_array() || node.empty()) fail(path, "expected a non-empty array of layers");
  std::vector<Layer> layers;
  for (std::size_t i = 0; i < node.size(); ++i) {
    Section s(node[i], path + "[" + std::to_string(i) + "]");
    Layer layer;
    layer.r_lo = s.number("r_lo", 0.0);
    layer.r_hi = s.number("r_hi", 0.0);
    layer.value = s.number("value", 0.0);
    s.finish();
    if (!(layer.r_hi > layer.r_lo))
      fail(path + "[" + std::to_string(i) + "]", "requires r_hi > r_lo");
    layers.push_back(layer);
  }
  return layers;
}

BandSpectrum parse_spectrum(Section s, BandSpectrum b) {
  b.amplitude = s.nonnegative("amplitude", b.amplitude);
  b.center = s.nonnegative("center", b.center);
  b.width = s.positive("width", b.width);
  b.band_lo = s.nonnegative("band_lo", b.band_lo);
  if (s.has("band_hi")) {
    if (s.at("band_hi").is_null())
      b.band_hi = std::numeric_limits<double>::infinity();
    else
      b.band_hi = s.positive("band_hi", 1.0);
  }
  s.finish();
  if (!(b.band_hi > b.band_lo)) fail(s.child("band_hi"), "must exceed band_lo");
  return b;
}

void parse_profile(Section s, ProfileSpec& p) {
  p.kind = s.text("kind", p.kind, {"constant", "piecewise_constant", "sampled"});
  p.speed = s.positive("speed", p.speed);
  if (s.has("layers")) p.layers = parse_layers(s.at("layers"), s.child("layers"));
  p.radii = s.numbers("radii", p.radii);
  p.speeds = s.numbers("speeds", p.speeds);
  s.finish();
  if (p.kind == "piecewise_constant" && p.layers.empty())
    fail(s.child("layers"), "required for kind 'piecewise_constant'");
  if (p.kind == "sampled") {
    if (p.radii.size() < 2) fail(s.child("radii"), "needs at least two knots");
    if (p.radii.size() != p.speeds.size())
      fail(s.child("speeds"), "must have as many entries as radii");
  }
}

void parse_fluctuation(Section s, FluctuationModel& f) {
  const std::string kind = s.text("kind", to_string(f.kind), {"none", "layered", "random"});
  f.kind = kind == "none" ? FluctuationKind::none
           : kind == "layered" ? FluctuationKind::layered
                               : FluctuationKind::random;
  if (s.has("layers")) f.layers = parse_layers(s.at("layers"), s.child("layers"));
  f.amplitude = s.nonnegative("amplitude", f.amplitude);
  f.correlation_length = s.positive("correlation_length", f.correlation_length);
  f.r_lo = s.nonnegative("r_lo", f.r_lo);
  f.r_hi = s.nonnegative("r_hi", f.r_hi);
  f.seed = s.unsigned64("seed", f.seed);
  s.finish();
  if (f.kind == FluctuationKind::layered && f.layers.empty())
    fail(s.child("layers"), "required for kind 'layered'");
  if (f.kind == FluctuationKind::random && !(f.r_hi > f.r_lo))
    fail(s.child("r_hi"), "random fluctuation support needs r_hi > r_lo");
}

void parse_medium(Section s, MediumSpec& m) {
  m.outer_radius = s.positive("outer_radius", m.outer_radius);
  m.epsilon = s.positive("epsilon", m.epsilon);
  m.kappa = s.nonnegative("kappa", m.kappa);
  m.core_radius = s.positive("core_radius", m.core_radius);
  if (s.has("profile")) parse_profile(Section(s.at("profile"), s.child("profile")), m.profile);
  if (s.has("fluctuation"))
    parse_fluctuation(Section(s.at("fluctuation"), s.child("fluctuation")), m.fluctuation);
  s.finish();
  if (m.epsilon >= 1.0) fail(s.child("epsilon"), "must be < 1 (scale separation)");
  if (!(m.core_radius < m.outer_radius)) fail(s.child("core_radius"), "must be < outer_radius");
}

void parse_noise(Section s, NoiseSpec& n) {
  if (s.has("radial")) {
    Section r(s.at("radial"), s.child("radial"));
    n.radial.r_lo = r.nonnegative("r_lo", n.radial.r_lo);
    n.radial.r_hi = r.positive("r_hi", n.radial.r_hi);
    n.radial.level = r.positive("level", n.radial.level);
    const std::string shape = r.text("shape", n.radial.shape == RadialDensity::Shape::top_hat
                                                  ? "top_hat" : "smooth",
                                     {"top_hat", "smooth"});
    n.radial.shape = shape == "top_hat" ? RadialDensity::Shape::top_hat : RadialDensity::Shape::smooth;
    r.finish();
    if (!(n.radial.r_hi > n.radial.r_lo)) fail(r.child("r_hi"), "must exceed r_lo");
  }
  if (s.has("spectrum"))
    n.spectrum = parse_spectrum(Section(s.at("spectrum"), s.child("spectrum")), n.spectrum);
  n.angular = s.text("angular", n.angular, {"uniform", "hemisphere", "cap"});
  n.cap_angle = s.positive("cap_angle", n.cap_angle);
  s.finish();
  if (n.cap_angle > kPi) fail(s.child("cap_angle"), "must be <= pi");
}

void parse_frequency(Section s, FrequencySpec& f) {
  f.omega_min = s.positive("omega_min", f.omega_min);
  f.omega_max = s.positive("omega_max", f.omega_max);
  f.d_omega = s.positive("d_omega", f.d_omega);
  s.finish();
  if (!(f.omega_max > f.omega_min)) fail(s.child("omega_max"), "must exceed omega_min");
  if (f.d_omega > f.omega_max - f.omega_min)
    fail(s.child("d_omega"), "larger than the frequency range");
}

void parse_tolerances(Section s, Tolerances& t) {
  t.phase_fraction = s.positive("phase_fraction", t.phase_fraction);
  t.wavelength_fraction = s.positive("wavelength_fraction", t.wavelength_fraction);
  t.rel_tol = s.positive("rel_tol", t.rel_tol);
  t.abs_tol = s.positive("abs_tol", t.abs_tol);
  s.finish();
  if (t.phase_fraction > 1.0) fail(s.child("phase_fraction"), "must be <= 1");
}

void parse_synthesis(Section s, SynthesisSpec& y) {
  y.record_length = s.positive("record_length", y.record_length);
  y.realizations = static_cast<std::size_t>(s.integer("realizations", static_cast<long long>(y.realizations), 1, 1000000));
  y.max_lag = s.positive("max_lag", y.max_lag);
  s.finish();
  if (y.max_lag >= y.record_length) fail(s.child("max_lag"), "must be shorter than record_length");
}

void parse_oracle(Section s, OracleSpec& o) {
  o.epsilons = s.numbers("epsilons", o.epsilons);
  o.omegas = s.numbers("omegas", o.omegas);
  std::vector<long long> ls(o.ls.begin(), o.ls.end());
  ls = s.integers("ls", ls);
  o.ls.assign(ls.begin(), ls.end());
  o.steps_per_wavelength = s.positive("steps_per_wavelength", o.steps_per_wavelength);
  s.finish();
  if (o.epsilons.size() < 2) fail(s.child("epsilons"), "needs at least two values to fit an order");
  for (double e : o.epsilons)
    if (!(e > 0.0 && e < 1.0)) fail(s.child("epsilons"), "values must lie in (0, 1)");
  if (o.omegas.empty()) fail(s.child("omegas"), "must not be empty");
  for (double w : o.omegas)
    if (!(w > 0.0)) fail(s.child("omegas"), "values must be > 0");
  for (int l : o.ls)
    if (l < 0) fail(s.child("ls"), "values must be >= 0");
}

PerturbationComponent parse_component(Section s, PerturbationComponent c) {
  c.amplitude = s.number("amplitude", c.amplitude);
  c.exponent = s.nonnegative("exponent", c.exponent);
  c.degree = static_cast<int>(s.integer("degree", c.degree, 0, 16));
  c.order = static_cast<int>(s.integer("order", c.order, -16, 16));
  c.correlation = s.positive("correlation", c.correlation);
  s.finish();
  if (std::abs(c.order) > c.degree) fail(s.child("order"), "|order| must not exceed degree");
  return c;
}

void parse_robustness(Section s, RobustnessSpec& r) {
  if (s.has("experiments")) {
    const json& v = s.at("experiments");
    if (!v.is_array()) fail(s.child("experiments"), "expected an array of names");
    r.experiments.clear();
    const std::vector<std::string> names{"aperture", "weights", "perturbation", "noise"};
    for (std::size_t i = 0; i < v.size(); ++i) {
      const std::string path = s.child("experiments") + "[" + std::to_string(i) + "]";
      if (!v[i].is_string()) fail(path, "expected a string");
      const std::string name = v[i].get<std::string>();
      if (std::find(names.begin(), names.end(), name) == names.end()) {
        std::string msg = "unknown experiment '" + name + "'";
        const std::string hint = suggest_key(name, names);
        if (!hint.empty()) msg += "; did you mean '" + hint + "'?";
        fail(path, msg);
      }
      r.experiments.push_back(name);
    }
  }
  r.l_max = static_cast<int>(s.integer("l_max", r.l_max, 0, 8));
  r.pairs_per_angle = static_cast<std::size_t>(s.integer("pairs_per_angle", static_cast<long long>(r.pairs_per_angle), 1, 10000));
  r.epsilons = s.numbers("epsilons", r.epsilons);
  r.omegas = s.numbers("omegas", r.omegas);
  if (s.has("perturbation")) {
    Section p(s.at("perturbation"), s.child("perturbation"));
    auto& q = r.perturbation;
    if (p.has("smooth")) q.smooth = parse_component(Section(p.at("smooth"), p.child("smooth")), q.smooth);
    if (p.has("layered")) q.layered = parse_component(Section(p.at("layered"), p.child("layered")), q.layered);
    if (p.has("mixing")) q.mixing = parse_component(Section(p.at("mixing"), p.child("mixing")), q.mixing);
    q.r_lo = p.positive("r_lo", q.r_lo);
    q.r_hi = p.positive("r_hi", q.r_hi);
    q.seed = p.unsigned64("seed", q.seed);
    q.l_max = static_cast<int>(p.integer("l_max", q.l_max, 0, 8));
    p.finish();
    if (!(q.r_hi > q.r_lo)) fail(p.child("r_hi"), "must exceed r_lo");
  }
  if (s.has("receivers")) {
    const auto v = s.integers("receivers", {});
    r.receivers.clear();
    for (long long n : v) {
      if (n < 1) fail(s.child("receivers"), "counts must be >= 1");
      r.receivers.push_back(static_cast<std::size_t>(n));
    }
  }
  if (s.has("measurement_noise"))
    r.measurement_noise = parse_spectrum(Section(s.at("measurement_noise"), s.child("measurement_noise")),
                                         r.measurement_noise);
  r.noise_realizations = static_cast<std::size_t>(
      s.integer("noise_realizations", static_cast<long long>(r.noise_realizations), 1, 100000));
  r.noise_record_length = s.positive("noise_record_length", r.noise_record_length);
  s.finish();
  if (r.epsilons.size() < 2) fail(s.child("epsilons"), "needs at least two values to fit a slope");
  for (double e : r.epsilons)
    if (!(e > 0.0 && e < 1.0)) fail(s.child("epsilons"), "values must lie in (0, 1)");
  if (r.omegas.empty()) fail(s.child("omegas"), "must not be empty");
}

// Cross-field checks that need a built medium.
void validate(const RunConfig& c) {
  Medium medium = [&] {
    try {
      return c.medium.build();
    } catch (const DomainError& e) {
      fail("medium", e.what());
    } catch (const ConfigError& e) {
      fail("medium", e.what());
    }
  }();
  const double half_width = resonance_half_width(medium);
  if (c.medium.kappa > 0.0 && c.frequency.d_omega > 0.5 * half_width) {
    std::ostringstream msg;
    msg.precision(6);
    msg << "d_omega = " << c.frequency.d_omega << " does not resolve the resonances: the resonance-width"
        << " bound eps (1 - |Gamma|) / (2 tau0 sqrt|Gamma|) = " << half_width
        << " (half width) requires d_omega <= " << 0.5 * half_width
        << "; refine d_omega or increase kappa";
    fail("frequency.d_omega", msg.str());
  }
  if (c.noise.radial.r_hi > c.medium.outer_radius)
    fail("noise.radial.r_hi", "must not exceed medium.outer_radius");
  if (c.noise.radial.r_lo <= c.medium.core_radius)
    fail("noise.radial.r_lo", "must lie outside the core (medium.core_radius)");
  for (std::size_t i = 0; i < c.source_radii.size(); ++i) {
    const double r = c.source_radii[i];
    if (!(r > c.medium.core_radius && r <= c.medium.outer_radius))
      fail("source_radii[" + std::to_string(i) + "]", "must lie in (core_radius, outer_radius]");
  }
  if (c.l > c.l_max) fail("l", "must not exceed l_max");
  if (c.robustness.perturbation.r_lo <= c.medium.core_radius ||
      c.robustness.perturbation.r_hi >= c.medium.outer_radius)
    fail("robustness.perturbation", "support must lie strictly between core_radius and outer_radius");
}

json spectrum_json(const BandSpectrum& b) {
  json j;
  j["amplitude"] = b.amplitude;
  j["center"] = b.center;
  j["width"] = b.width;
  j["band_lo"] = b.band_lo;
  j["band_hi"] = std::isfinite(b.band_hi) ? json(b.band_hi) : json(nullptr);
  return j;
}

json layers_json(const std::vector<Layer>& layers) {
  json a = json::array();
  for (const auto& l : layers) a.push_back({{"r_lo", l.r_lo}, {"r_hi", l.r_hi}, {"value", l.value}});
  return a;
}

json component_json(const PerturbationComponent& c) {
  return {{"amplitude", c.amplitude}, {"exponent", c.exponent}, {"degree", c.degree},
          {"order", c.order}, {"correlation", c.correlation}};
}

}  // namespace

Medium MediumSpec::build(double eps) const {
  const double e = eps > 0.0 ? eps : epsilon;
  SmoothProfile p = profile.kind == "constant" ? SmoothProfile::constant(profile.speed, outer_radius)
                    : profile.kind == "piecewise_constant" ? SmoothProfile::piecewise_constant(profile.layers)
                                                           : SmoothProfile::sampled(profile.radii, profile.speeds);
  return Medium(outer_radius, e, kappa, core_radius, std::move(p), fluctuation);
}

bool MediumSpec::homogeneous() const {
  const bool flat = profile.kind == "constant" ||
                    (profile.kind == "piecewise_constant" && profile.layers.size() == 1);
  return flat && fluctuation.kind == FluctuationKind::none;
}

AngularDensity NoiseSpec::angular_density() const {
  if (angular == "uniform") return [](double, double) { return 1.0; };
  const double cap = angular == "hemisphere" ? kPi / 2 : cap_angle;
  return [cap](double theta, double) { return theta <= cap ? 1.0 : 0.0; };
}

std::string suggest_key(const std::string& key, const std::vector<std::string>& candidates) {
  std::string best;
  std::size_t best_d = std::numeric_limits<std::size_t>::max();
  for (const auto& c : candidates) {
    const std::size_t d = edit_distance(key, c);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  const std::size_t limit = std::max<std::size_t>(2, key.size() / 3);
  return best_d <= limit ? best : std::string();
}

double resonance_half_width(const Medium& medium) {
  const double g = std::abs(gamma_surface(medium));
  if (g == 0.0) return std::numeric_limits<double>::infinity();
  const double tau0 = medium.travel_time_to_surface(0.0);
  return medium.epsilon() * (1.0 - g) / (2.0 * tau0 * std::sqrt(g));
}

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    // locate the byte offset as line:column
    const std::size_t offset = std::min<std::size_t>(e.byte, text.size());
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i + 1 < offset; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string detail = e.what();
    const auto pos = detail.find("syntax error");
    if (pos != std::string::npos) detail = detail.substr(pos);
    throw ConfigError(origin + ": line " + std::to_string(line) + ", column " +
                      std::to_string(column) + ": " + detail);
  }

  RunConfig c;
  c.origin = origin;
  Section s(root, "");
  if (s.has("medium")) parse_medium(Section(s.at("medium"), "medium"), c.medium);
  if (s.has("noise")) parse_noise(Section(s.at("noise"), "noise"), c.noise);
  if (s.has("source")) {
    Section src(s.at("source"), "source");
    if (src.has("spectrum")) {
      c.source.spectrum = parse_spectrum(Section(src.at("spectrum"), "source.spectrum"), c.noise.spectrum);
      c.source_spectrum_given = true;
    }
    c.source.time_shift = src.number("time_shift", c.source.time_shift);
    src.finish();
  }
  if (!c.source_spectrum_given) c.source.spectrum = c.noise.spectrum;
  if (s.has("frequency")) parse_frequency(Section(s.at("frequency"), "frequency"), c.frequency);
  c.l = static_cast<int>(s.integer("l", c.l, 0, 64));
  c.l_max = static_cast<int>(s.integer("l_max", c.l_max, 0, 64));
  c.source_radii = s.numbers("source_radii", c.source_radii);
  if (s.has("synthesis")) parse_synthesis(Section(s.at("synthesis"), "synthesis"), c.synthesis);
  if (s.has("oracle")) parse_oracle(Section(s.at("oracle"), "oracle"), c.oracle);
  if (s.has("robustness")) parse_robustness(Section(s.at("robustness"), "robustness"), c.robustness);
  c.seed = s.unsigned64("seed", c.seed);
  c.threads = static_cast<int>(s.integer("threads", c.threads, 1, 1024));
  if (s.has("tolerances")) parse_tolerances(Section(s.at("tolerances"), "tolerances"), c.tolerances);
  c.output = s.text("output", c.output);
  s.finish();
  validate(c);
  return c;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": file not found or unreadable");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), path);
}

std::string resolved_config_json(const RunConfig& c) {
  json j;
  const auto& m = c.medium;
  json profile{{"kind", m.profile.kind}, {"speed", m.profile.speed}};
  if (!m.profile.layers.empty()) profile["layers"] = layers_json(m.profile.layers);
  if (!m.profile.radii.empty()) {
    profile["radii"] = m.profile.radii;
    profile["speeds"] = m.profile.speeds;
  }
  const auto& f = m.fluctuation;
  json fluct{{"kind", to_string(f.kind)}};
  if (f.kind == FluctuationKind::layered) fluct["layers"] = layers_json(f.layers);
  if (f.kind == FluctuationKind::random) {
    fluct["amplitude"] = f.amplitude;
    fluct["correlation_length"] = f.correlation_length;
    fluct["r_lo"] = f.r_lo;
    fluct["r_hi"] = f.r_hi;
    fluct["seed"] = f.seed;
  }
  j["medium"] = {{"outer_radius", m.outer_radius}, {"epsilon", m.epsilon}, {"kappa", m.kappa},
                 {"core_radius", m.core_radius}, {"profile", profile}, {"fluctuation", fluct}};
  j["noise"] = {{"radial",
                 {{"r_lo", c.noise.radial.r_lo},
                  {"r_hi", c.noise.radial.r_hi},
                  {"level", c.noise.radial.level},
                  {"shape", c.noise.radial.shape == RadialDensity::Shape::top_hat ? "top_hat" : "smooth"}}},
                {"spectrum", spectrum_json(c.noise.spectrum)},
                {"angular", c.noise.angular},
                {"cap_angle", c.noise.cap_angle}};
  j["source"] = {{"spectrum", spectrum_json(c.source.spectrum)}, {"time_shift", c.source.time_shift}};
  j["frequency"] = {{"omega_min", c.frequency.omega_min},
                    {"omega_max", c.frequency.omega_max},
                    {"d_omega", c.frequency.d_omega}};
  j["l"] = c.l;
  j["l_max"] = c.l_max;
  j["source_radii"] = c.source_radii;
  j["synthesis"] = {{"record_length", c.synthesis.record_length},
                    {"realizations", c.synthesis.realizations},
                    {"max_lag", c.synthesis.max_lag}};
  j["oracle"] = {{"epsilons", c.oracle.epsilons},
                 {"omegas", c.oracle.omegas},
                 {"ls", c.oracle.ls},
                 {"steps_per_wavelength", c.oracle.steps_per_wavelength}};
  const auto& r = c.robustness;
  j["robustness"] = {{"experiments", r.experiments},
                     {"l_max", r.l_max},
                     {"pairs_per_angle", r.pairs_per_angle},
                     {"epsilons", r.epsilons},
                     {"omegas", r.omegas},
                     {"perturbation",
                      {{"smooth", component_json(r.perturbation.smooth)},
                       {"layered", component_json(r.perturbation.layered)},
                       {"mixing", component_json(r.perturbation.mixing)},
                       {"r_lo", r.perturbation.r_lo},
                       {"r_hi", r.perturbation.r_hi},
                       {"seed", r.perturbation.seed},
                       {"l_max", r.perturbation.l_max}}},
                     {"receivers", r.receivers},
                     {"measurement_noise", spectrum_json(r.measurement_noise)},
                     {"noise_realizations", r.noise_realizations},
                     {"noise_record_length", r.noise_record_length}};
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  j["tolerances"] = {{"phase_fraction", c.tolerances.phase_fraction},
                     {"wavelength_fraction", c.tolerances.wavelength_fraction},
                     {"rel_tol", c.tolerances.rel_tol},
                     {"abs_tol", c.tolerances.abs_tol}};
  j["output"] = c.output;
  return j.dump(2);
}

}  // namespace gadi
