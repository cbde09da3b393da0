#include "emw/harness/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "emw/error.hpp"
#include "emw/surface_sources.hpp"

namespace emw::harness {

namespace pt = boost::property_tree;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorCode::ConfigError, msg); }

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_double(std::string_view text, const std::string& key) {
  const std::string s = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) fail(key + ": not a number: '" + s + "'");
  return v;
}

int parse_int(std::string_view text, const std::string& key) {
  const std::string s = trim(text);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) fail(key + ": not an integer: '" + s + "'");
  return v;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

std::vector<double> parse_doubles(const std::string& text, const std::string& key, std::size_t want) {
  const auto parts = split_list(text);
  if (want && parts.size() != want) fail(key + ": expected " + std::to_string(want) + " comma-separated values");
  std::vector<double> out;
  for (const auto& p : parts) out.push_back(parse_double(p, key));
  return out;
}

Vec3 parse_vec3(const std::string& text, const std::string& key) {
  const auto v = parse_doubles(text, key, 3);
  return {v[0], v[1], v[2]};
}

GridAxis parse_axis(const std::string& text, const std::string& key) {
  const auto parts = split_list(text);
  if (parts.size() != 3) fail(key + ": expected lo, hi, count");
  return {parse_double(parts[0], key), parse_double(parts[1], key), parse_int(parts[2], key)};
}

bool parse_bool(const std::string& text, const std::string& key) {
  const std::string s = trim(text);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  fail(key + ": expected true or false");
}

// Reads one section, rejecting keys it does not know.
class Section {
 public:
  Section(const pt::ptree& root, const std::string& name, std::set<std::string> allowed)
      : name_(name), allowed_(std::move(allowed)) {
    if (auto child = root.get_child_optional(name)) {
      present_ = true;
      for (const auto& [key, node] : *child) {
        if (!allowed_.count(key)) fail("[" + name + "] unknown key '" + key + "'");
        values_[key] = node.data();
      }
    }
  }

  bool present() const { return present_; }
  const std::string* get(const std::string& key) const {
    auto it = values_.find(key);
    return it == values_.end() ? nullptr : &it->second;
  }
  std::string label(const std::string& key) const { return "[" + name_ + "] " + key; }

 private:
  std::string name_;
  std::set<std::string> allowed_;
  std::map<std::string, std::string> values_;
  bool present_ = false;
};

void check_axis(const GridAxis& ax, const std::string& key) {
  if (ax.count < 1) fail(key + ": count must be at least 1");
  if (ax.count == 1 && ax.lo != ax.hi) fail(key + ": a single point needs lo == hi");
  if (ax.count > 1 && !(ax.hi > ax.lo)) fail(key + ": need hi > lo for more than one point");
}

}  // namespace

std::vector<double> GridAxis::values() const {
  std::vector<double> out(static_cast<std::size_t>(count));
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  for (int i = 0; i < count; ++i) out[i] = lo + (hi - lo) * i / (count - 1);
  out.back() = hi;
  return out;
}

SourceConfig RunConfig::source() const { return SourceConfig(a, b, c); }

BranchCut RunConfig::cut() const {
  BranchCut out = BranchCut::flat_disk();
  if (cut_kind == "upper") {
    out = BranchCut::upper_spheroid(alpha);
  } else if (cut_kind == "lower") {
    out = BranchCut::lower_spheroid(alpha);
  } else if (cut_kind == "smooth") {
    out = BranchCut::smooth_spheroid(alpha, epsilon);
  } else if (cut_kind != "flat") {
    fail("[cut] kind must be flat, upper, lower or smooth");
  }
  return out.with_tolerance(tol.tol_cut);
}

DrivingSignal RunConfig::driving_signal() const {
  if (!signal) fail("missing [signal] section");
  if (signal->kind == "cauchy") return DrivingSignal::cauchy(signal->n);
  return DrivingSignal::sampled(SampledSignal::from_csv(signal->csv));
}

ScalarWavelet RunConfig::wavelet() const { return ScalarWavelet(cut(), source(), driving_signal()); }

Polarization RunConfig::polarization() const { return Polarization(pi, source(), keep_parallel); }

double RunConfig::surface_q_min() const {
  const double a_len = norm(a);
  if (surface.q_min_auto) {
    if (!signal || signal->kind != "cauchy") fail("[surface] q_min = auto needs a Cauchy drive");
    const double omega = spectral_profile(signal->n, std::fabs(b)).center_frequency;
    return effective_aperture(omega, a_len, c).q_min;
  }
  if (surface.q_min) return *surface.q_min;
  return surface.mode == SourceMode::Approx ? 0.1 * a_len : 0.0;
}

RunConfig default_config() {
  RunConfig cfg;
  cfg.signal = SignalSpec{"cauchy", 4, {}};
  return cfg;
}

RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  pt::ptree root;
  try {
    std::istringstream in{std::string(text)};
    pt::read_ini(in, root);
  } catch (const pt::ini_parser_error& e) {
    fail(std::string("malformed config: ") + e.what());
  }
  static const std::set<std::string> sections{"source", "cut",     "signal",     "polarization",
                                              "grid",   "surface", "beam",       "tolerances"};
  for (const auto& [name, node] : root) {
    if (!sections.count(name)) fail("unknown section [" + name + "]");
    if (!node.data().empty()) fail("top-level key '" + name + "' outside any section");
  }

  RunConfig cfg;
  const Section source(root, "source", {"a", "b", "c"});
  if (auto v = source.get("a")) cfg.a = parse_vec3(*v, source.label("a"));
  if (auto v = source.get("b")) cfg.b = parse_double(*v, source.label("b"));
  if (auto v = source.get("c")) cfg.c = parse_double(*v, source.label("c"));

  const Section cut(root, "cut", {"kind", "alpha", "epsilon", "tol"});
  if (auto v = cut.get("kind")) cfg.cut_kind = trim(*v);
  if (auto v = cut.get("alpha")) cfg.alpha = parse_double(*v, cut.label("alpha"));
  if (auto v = cut.get("epsilon")) cfg.epsilon = parse_double(*v, cut.label("epsilon"));
  if (auto v = cut.get("tol")) cfg.tol.tol_cut = parse_double(*v, cut.label("tol"));

  const Section signal(root, "signal", {"kind", "n", "csv"});
  if (signal.present()) {
    SignalSpec s;
    if (auto v = signal.get("kind")) s.kind = trim(*v);
    if (auto v = signal.get("n")) s.n = parse_int(*v, signal.label("n"));
    if (auto v = signal.get("csv")) {
      s.csv = trim(*v);
      if (s.csv.is_relative() && !base_dir.empty()) s.csv = base_dir / s.csv;
    }
    if (s.kind != "cauchy" && s.kind != "csv") fail("[signal] kind must be cauchy or csv");
    if (s.kind == "csv" && s.csv.empty()) fail("[signal] kind = csv needs csv = <path>");
    cfg.signal = s;
  }

  const Section pol(root, "polarization", {"re", "im", "keep_parallel"});
  if (pol.present()) {
    Vec3 re{0, 0, 0}, im{0, 0, 0};
    if (auto v = pol.get("re")) re = parse_vec3(*v, pol.label("re"));
    if (auto v = pol.get("im")) im = parse_vec3(*v, pol.label("im"));
    cfg.pi = CVec3::from_parts(re, im);
    if (auto v = pol.get("keep_parallel")) cfg.keep_parallel = parse_bool(*v, pol.label("keep_parallel"));
  }

  const Section grid(root, "grid", {"x", "y", "z", "t", "quantity"});
  if (auto v = grid.get("x")) cfg.x = parse_axis(*v, grid.label("x"));
  if (auto v = grid.get("y")) cfg.y = parse_axis(*v, grid.label("y"));
  if (auto v = grid.get("z")) cfg.z = parse_axis(*v, grid.label("z"));
  if (auto v = grid.get("t")) cfg.t = parse_axis(*v, grid.label("t"));
  if (auto v = grid.get("quantity")) {
    const std::string q = trim(*v);
    if (q == "psi") {
      cfg.quantity = Quantity::Psi;
    } else if (q == "field") {
      cfg.quantity = Quantity::Field;
    } else {
      fail("[grid] quantity must be psi or field");
    }
  }

  const Section surf(root, "surface", {"alpha", "q", "phi", "t", "mode", "q_min", "mu", "nu", "n"});
  if (auto v = surf.get("alpha")) cfg.surface.alpha = parse_double(*v, surf.label("alpha"));
  if (auto v = surf.get("q")) cfg.surface.q = parse_axis(*v, surf.label("q"));
  if (auto v = surf.get("phi")) cfg.surface.phi = parse_axis(*v, surf.label("phi"));
  if (auto v = surf.get("t")) cfg.surface.t = parse_axis(*v, surf.label("t"));
  if (auto v = surf.get("mode")) {
    const std::string m = trim(*v);
    if (m == "exact") {
      cfg.surface.mode = SourceMode::Exact;
    } else if (m == "approx") {
      cfg.surface.mode = SourceMode::Approx;
    } else {
      fail("[surface] mode must be exact or approx");
    }
  }
  if (auto v = surf.get("q_min")) {
    if (trim(*v) == "auto") {
      cfg.surface.q_min_auto = true;
    } else {
      cfg.surface.q_min = parse_double(*v, surf.label("q_min"));
    }
  }
  if (auto v = surf.get("mu")) cfg.surface.mu = parse_double(*v, surf.label("mu"));
  if (auto v = surf.get("nu")) cfg.surface.nu = parse_double(*v, surf.label("nu"));
  if (auto v = surf.get("n")) cfg.surface.bandpass_order = parse_int(*v, surf.label("n"));

  const Section beam(root, "beam", {"orders", "beta", "radius", "theta"});
  if (auto v = beam.get("orders")) {
    cfg.beam.orders.clear();
    for (const auto& p : split_list(*v)) cfg.beam.orders.push_back(parse_int(p, beam.label("orders")));
  }
  if (auto v = beam.get("beta")) cfg.beam.beta = parse_double(*v, beam.label("beta"));
  if (auto v = beam.get("radius")) cfg.beam.radius = parse_double(*v, beam.label("radius"));
  if (auto v = beam.get("theta")) cfg.beam.theta = parse_axis(*v, beam.label("theta"));

  const Section tol(root, "tolerances", {"h", "tol_cut", "q_min"});
  if (auto v = tol.get("h")) cfg.tol.h = parse_double(*v, tol.label("h"));
  if (auto v = tol.get("tol_cut")) cfg.tol.tol_cut = parse_double(*v, tol.label("tol_cut"));
  if (auto v = tol.get("q_min")) {
    if (surf.get("q_min")) fail("q_min given in both [surface] and [tolerances]");
    cfg.surface.q_min = parse_double(*v, tol.label("q_min"));
  }

  validate_config(cfg);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path());
}

void validate_config(const RunConfig& cfg) {
  if (!cfg.signal) fail("missing [signal] section");
  if (cfg.signal->kind == "cauchy" && (cfg.signal->n < 1 || cfg.signal->n > 150)) {
    fail("[signal] n must be in 1..150");
  }
  if (cfg.signal->kind == "csv" && !std::filesystem::exists(cfg.signal->csv)) {
    fail("[signal] csv file not found: " + cfg.signal->csv.string());
  }
  try {
    (void)cfg.source();
    (void)cfg.cut();
    (void)cfg.polarization();
  } catch (const Error& e) {
    fail(e.what());
  }
  if (!(cfg.tol.h > 0.0) || !(cfg.tol.tol_cut > 0.0)) fail("[tolerances] must be positive");
  if (cfg.surface.q_min && !(*cfg.surface.q_min >= 0.0)) fail("q_min must be non-negative");
  check_axis(cfg.x, "[grid] x");
  check_axis(cfg.y, "[grid] y");
  check_axis(cfg.z, "[grid] z");
  check_axis(cfg.t, "[grid] t");
  check_axis(cfg.surface.q, "[surface] q");
  check_axis(cfg.surface.phi, "[surface] phi");
  check_axis(cfg.surface.t, "[surface] t");
  check_axis(cfg.beam.theta, "[beam] theta");
  if (std::fabs(cfg.surface.mu + cfg.surface.nu - 2.0) > 1e-12) fail("[surface] mu + nu must equal 2");
  if (cfg.surface.bandpass_order < 1) fail("[surface] n must be positive");
  if (cfg.beam.orders.empty()) fail("[beam] orders must not be empty");
  for (int n : cfg.beam.orders) {
    if (n < 1 || n > 150) fail("[beam] orders must be in 1..150");
  }
  if (!(cfg.beam.beta > 0.0) || !(cfg.beam.radius > 1.0)) fail("[beam] need beta > 0 and radius > 1");
}

}  // namespace emw::harness
