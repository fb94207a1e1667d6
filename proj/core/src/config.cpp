#include "specbound/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace specbound {

namespace {

std::string join_issues(const std::vector<std::string>& issues) {
  std::string s = "invalid configuration:";
  for (const auto& i : issues) s += "\n  " + i;
  return s;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double to_double(const std::string& s) {
  if (s == "inf") return kInf;
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("expected a number, got '" + s + "'");
  }
  if (pos != s.size()) throw std::invalid_argument("expected a number, got '" + s + "'");
  return v;
}

long long to_int(const std::string& s) {
  long long v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw std::invalid_argument("expected an integer, got '" + s + "'");
  return v;
}

std::uint64_t to_u64(const std::string& s) {
  std::uint64_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw std::invalid_argument("expected a non-negative integer, got '" + s + "'");
  return v;
}

bool to_bool(const std::string& s) {
  if (s == "true" || s == "yes" || s == "1") return true;
  if (s == "false" || s == "no" || s == "0") return false;
  throw std::invalid_argument("expected true or false, got '" + s + "'");
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw std::invalid_argument("empty list element in '" + s + "'");
    out.push_back(item);
  }
  return out;
}

std::vector<double> to_doubles(const std::string& s) {
  std::vector<double> out;
  if (trim(s).empty()) return out;
  for (const auto& x : split_list(s)) out.push_back(to_double(x));
  return out;
}

std::vector<int> to_ints(const std::string& s) {
  std::vector<int> out;
  if (trim(s).empty()) return out;
  for (const auto& x : split_list(s)) out.push_back(static_cast<int>(to_int(x)));
  return out;
}

template <class T>
std::string fmt_list(const std::vector<T>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    if constexpr (std::is_floating_point_v<T>) s += fmt(v[i]);
    else s += std::to_string(v[i]);
  }
  return s;
}

ExperimentKind kind_from_string(const std::string& s) {
  if (s == "enclosure") return ExperimentKind::enclosure;
  if (s == "resolvent_scaling") return ExperimentKind::resolvent_scaling;
  if (s == "line_bounds") return ExperimentKind::line_bounds;
  if (s == "random_mc") return ExperimentKind::random_mc;
  if (s == "region_plot") return ExperimentKind::region_plot;
  throw std::invalid_argument("unknown experiment kind '" + s + "'");
}

Window window_from_string(const std::string& s) {
  if (s == "theorem") return Window::theorem;
  if (s == "laplacian") return Window::laplacian;
  if (s == "unchecked") return Window::unchecked;
  throw std::invalid_argument("unknown window '" + s + "' (expected theorem, laplacian or unchecked)");
}

std::string window_name(Window w) {
  switch (w) {
    case Window::theorem: return "theorem";
    case Window::laplacian: return "laplacian";
    case Window::unchecked: return "unchecked";
  }
  return "theorem";
}

const std::set<std::string> kFamilies{"zero",        "constant",     "bandlimited", "nonvanishing",
                                      "square_well", "complex_well", "multi_well"};

struct Field {
  std::string section;
  std::string key;
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

#define SB_FIELD(sec, key, setter, getter)                                                         \
  Field {                                                                                          \
    sec, key, [](ExperimentConfig& c, const std::string& v) { setter; },                           \
        [](const ExperimentConfig& c) -> std::string { return getter; }                            \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> table{
      SB_FIELD("experiment", "kind", c.kind = kind_from_string(v), to_string(c.kind)),
      SB_FIELD("experiment", "name", c.name = v, c.name),
      SB_FIELD("experiment", "output", c.output = v, c.output),
      SB_FIELD("experiment", "threads", c.threads = static_cast<int>(to_int(v)), std::to_string(c.threads)),
      SB_FIELD("experiment", "C", c.C = (v == "fit" ? std::optional<double>{} : std::optional<double>{to_double(v)}),
               c.C ? fmt(*c.C) : std::string("fit")),

      SB_FIELD("model", "kind", c.model.kind = manifold_kind_from_string(v), to_string(c.model.kind)),
      SB_FIELD("model", "size", c.model.size = static_cast<int>(to_int(v)), std::to_string(c.model.size)),
      SB_FIELD("model", "halfwidth", c.model.halfwidth = to_double(v), fmt(c.model.halfwidth)),
      SB_FIELD("model", "cutoff", c.model.cutoff = to_double(v), fmt(c.model.cutoff)),

      SB_FIELD("potential", "family",
               if (!kFamilies.count(v)) throw std::invalid_argument("unknown potential family '" + v + "'");
               c.potential.family = v, c.potential.family),
      SB_FIELD("potential", "re", c.potential.re = to_double(v), fmt(c.potential.re)),
      SB_FIELD("potential", "im", c.potential.im = to_double(v), fmt(c.potential.im)),
      SB_FIELD("potential", "bandwidth", c.potential.bandwidth = static_cast<int>(to_int(v)),
               std::to_string(c.potential.bandwidth)),
      SB_FIELD("potential", "real", c.potential.real_valued = to_bool(v), c.potential.real_valued ? "true" : "false"),
      SB_FIELD("potential", "norm", c.potential.norm = to_double(v), fmt(c.potential.norm)),
      SB_FIELD("potential", "seed", c.potential.seed = to_u64(v), std::to_string(c.potential.seed)),
      SB_FIELD("potential", "width", c.potential.width = to_double(v), fmt(c.potential.width)),
      SB_FIELD("potential", "wells", c.potential.wells = static_cast<int>(to_int(v)), std::to_string(c.potential.wells)),

      SB_FIELD("exponents", "d", c.exponents.d = static_cast<int>(to_int(v)), std::to_string(c.exponents.d)),
      SB_FIELD("exponents", "q", c.exponents.q = to_double(v), fmt(c.exponents.q)),
      SB_FIELD("exponents", "alpha", c.exponents.alpha = to_double(v), fmt(c.exponents.alpha)),
      SB_FIELD("exponents", "window", c.exponents.window = window_from_string(v), window_name(c.exponents.window)),

      SB_FIELD("enclosure", "samples", c.enclosure.samples = static_cast<int>(to_int(v)),
               std::to_string(c.enclosure.samples)),
      SB_FIELD("enclosure", "scales", c.enclosure.scales = to_doubles(v), fmt_list(c.enclosure.scales)),
      SB_FIELD("enclosure", "ladder", c.enclosure.ladder = to_ints(v), fmt_list(c.enclosure.ladder)),
      SB_FIELD("enclosure", "ladder_scales", c.enclosure.ladder_scales = to_doubles(v),
               fmt_list(c.enclosure.ladder_scales)),
      SB_FIELD("enclosure", "holdout", c.enclosure.holdout = static_cast<int>(to_int(v)),
               std::to_string(c.enclosure.holdout)),
      SB_FIELD("enclosure", "holdout_factor", c.enclosure.holdout_factor = to_double(v),
               fmt(c.enclosure.holdout_factor)),

      SB_FIELD("resolvent", "grid", c.resolvent.grid = static_cast<int>(to_int(v)), std::to_string(c.resolvent.grid)),
      SB_FIELD("resolvent", "grid_cutoff", c.resolvent.grid_cutoff = to_double(v), fmt(c.resolvent.grid_cutoff)),
      SB_FIELD("resolvent", "display",
               if (v != "inside" && v != "outside" && v != "approach")
                   throw std::invalid_argument("display must be inside, outside or approach");
               c.resolvent.display = v, c.resolvent.display),
      SB_FIELD("resolvent", "t_min", c.resolvent.t_min = to_double(v), fmt(c.resolvent.t_min)),
      SB_FIELD("resolvent", "t_max", c.resolvent.t_max = to_double(v), fmt(c.resolvent.t_max)),
      SB_FIELD("resolvent", "points", c.resolvent.points = static_cast<int>(to_int(v)),
               std::to_string(c.resolvent.points)),
      SB_FIELD("resolvent", "approach_mode", c.resolvent.approach_mode = static_cast<int>(to_int(v)),
               std::to_string(c.resolvent.approach_mode)),
      SB_FIELD("resolvent", "delta_min", c.resolvent.delta_min = to_double(v), fmt(c.resolvent.delta_min)),
      SB_FIELD("resolvent", "delta_max", c.resolvent.delta_max = to_double(v), fmt(c.resolvent.delta_max)),
      SB_FIELD("resolvent", "calibrate", c.resolvent.calibrate = to_bool(v), c.resolvent.calibrate ? "true" : "false"),
      SB_FIELD("resolvent", "random_starts", c.resolvent.random_starts = static_cast<int>(to_int(v)),
               std::to_string(c.resolvent.random_starts)),
      SB_FIELD("resolvent", "max_iterations", c.resolvent.max_iterations = static_cast<int>(to_int(v)),
               std::to_string(c.resolvent.max_iterations)),

      SB_FIELD("line", "widths", c.line.widths = to_doubles(v), fmt_list(c.line.widths)),
      SB_FIELD("line", "kappa", c.line.kappa = to_double(v), fmt(c.line.kappa)),
      SB_FIELD("line", "random_wells", c.line.random_wells = static_cast<int>(to_int(v)),
               std::to_string(c.line.random_wells)),
      SB_FIELD("line", "gamma", c.line.gamma = to_double(v), fmt(c.line.gamma)),

      SB_FIELD("random", "h_fractions", c.random.h_fractions = to_doubles(v), fmt_list(c.random.h_fractions)),
      SB_FIELD("random", "law", c.random.law = law_from_string(v), to_string(c.random.law)),
      SB_FIELD("random", "samples", c.random.samples = static_cast<int>(to_int(v)), std::to_string(c.random.samples)),
      SB_FIELD("random", "lambda_min", c.random.lambda_min = to_double(v), fmt(c.random.lambda_min)),
      SB_FIELD("random", "lambda_max", c.random.lambda_max = to_double(v), fmt(c.random.lambda_max)),
      SB_FIELD("random", "eps_ratio", c.random.eps_ratio = to_double(v), fmt(c.random.eps_ratio)),
      SB_FIELD("random", "R", c.random.R = to_double(v), fmt(c.random.R)),
      SB_FIELD("random", "quantile", c.random.quantile = to_double(v), fmt(c.random.quantile)),
      SB_FIELD("random", "m_factors", c.random.m_factors = to_doubles(v), fmt_list(c.random.m_factors)),

      SB_FIELD("plot", "radius", c.plot.radius = to_double(v), fmt(c.plot.radius)),
      SB_FIELD("plot", "width", c.plot.width = static_cast<int>(to_int(v)), std::to_string(c.plot.width)),
      SB_FIELD("plot", "height", c.plot.height = static_cast<int>(to_int(v)), std::to_string(c.plot.height)),

      SB_FIELD("tolerances", "drift", c.tolerances.drift = to_double(v), fmt(c.tolerances.drift)),
      SB_FIELD("tolerances", "slope", c.tolerances.slope = to_double(v), fmt(c.tolerances.slope)),
      SB_FIELD("tolerances", "calibration_slope", c.tolerances.calibration_slope = to_double(v),
               fmt(c.tolerances.calibration_slope)),
      SB_FIELD("tolerances", "aad_slack", c.tolerances.aad_slack = to_double(v), fmt(c.tolerances.aad_slack)),
  };
  return table;
}

#undef SB_FIELD

void validate(const ExperimentConfig& c, std::vector<std::string>& issues) {
  if (c.threads < 1) issues.push_back("experiment.threads: must be >= 1");
  if (c.C && !(*c.C >= 0.0)) issues.push_back("experiment.C: must be >= 0 or 'fit'");
  if (c.enclosure.samples < 1) issues.push_back("enclosure.samples: must be >= 1");
  if (c.enclosure.scales.empty()) issues.push_back("enclosure.scales: need at least one scale");
  if (c.resolvent.points < 2) issues.push_back("resolvent.points: must be >= 2");
  if (c.random.samples < 1) issues.push_back("random.samples: must be >= 1");
  if (!(c.random.quantile > 0.0 && c.random.quantile < 1.0)) issues.push_back("random.quantile: must lie in (0, 1)");
  if (c.random.h_fractions.empty()) issues.push_back("random.h_fractions: need at least one cell size");
  if (c.line.widths.empty()) issues.push_back("line.widths: need at least one width");
  if (c.plot.width < 16 || c.plot.height < 16) issues.push_back("plot: width and height must be >= 16");
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::enclosure: return "enclosure";
    case ExperimentKind::resolvent_scaling: return "resolvent_scaling";
    case ExperimentKind::line_bounds: return "line_bounds";
    case ExperimentKind::random_mc: return "random_mc";
    case ExperimentKind::region_plot: return "region_plot";
  }
  return "unknown";
}

ExperimentConfig parse_config(const std::string& text) {
  std::map<std::string, const Field*> index;
  std::set<std::string> sections;
  for (const auto& f : fields()) {
    index[f.section + "." + f.key] = &f;
    sections.insert(f.section);
  }

  ExperimentConfig cfg;
  std::vector<std::string> issues;
  std::map<std::string, int> seen;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(lineno) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') {
        issues.push_back(where + "malformed section header '" + line + "'");
        continue;
      }
      section = trim(line.substr(1, line.size() - 2));
      if (!sections.count(section)) issues.push_back(where + "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      issues.push_back(where + "expected 'key = value', got '" + line + "'");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty()) {
      issues.push_back(where + "key '" + key + "' appears before any [section]");
      continue;
    }
    if (!sections.count(section)) continue;
    const std::string full = section + "." + key;
    const auto it = index.find(full);
    if (it == index.end()) {
      issues.push_back(where + "unknown key '" + key + "' in [" + section + "]");
      continue;
    }
    if (const auto s = seen.find(full); s != seen.end()) {
      issues.push_back(where + "duplicate key '" + full + "' (first set on line " + std::to_string(s->second) + ")");
      continue;
    }
    seen[full] = lineno;
    try {
      it->second->set(cfg, value);
    } catch (const std::exception& e) {
      issues.push_back(where + full + ": " + e.what());
    }
  }
  validate(cfg, issues);
  if (!issues.empty()) throw ConfigError(std::move(issues));
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError({"cannot open config file '" + path + "'"});
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

std::string ExperimentConfig::to_text() const {
  std::string out;
  std::string section;
  for (const auto& f : fields()) {
    if (f.section != section) {
      if (!section.empty()) out += "\n";
      section = f.section;
      out += "[" + section + "]\n";
    }
    out += f.key + " = " + f.get(*this) + "\n";
  }
  return out;
}

}  // namespace specbound
