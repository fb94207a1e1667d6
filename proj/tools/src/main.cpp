#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "specbound/bounds.hpp"
#include "specbound/csv.hpp"
#include "specbound/experiments.hpp"
#include "specbound/plot.hpp"

namespace fs = std::filesystem;
using namespace specbound;

namespace {

std::string default_out(const ExperimentConfig& cfg) {
  if (const char* root = std::getenv("SPECBOUND_OUT"); root && *root) return (fs::path(root) / cfg.name).string();
  return cfg.output;
}

ResultManifest load_checked(const std::string& path) {
  ResultManifest m = ResultManifest::read(path);
  const auto bad = m.verify(fs::path(path).parent_path().string());
  if (!bad.empty()) {
    std::string list;
    for (const auto& b : bad) list += " " + b;
    throw std::runtime_error(path + ": digest mismatch for" + list);
  }
  return m;
}

int cmd_run(const std::string& config_path, const std::optional<std::string>& out,
            const std::optional<std::uint64_t>& seed, const std::optional<int>& threads, bool strict) {
  const ExperimentConfig cfg = load_config(config_path);
  RunOptions opt;
  opt.out = out ? *out : default_out(cfg);
  opt.seed = seed;
  opt.threads = threads;
  opt.strict = strict;
  const RunOutcome r = run(cfg, opt);
  for (const auto& [k, v] : r.manifest.results) std::cout << k << " = " << v << "\n";
  for (const auto& msg : r.messages) std::cerr << "note: " << msg << "\n";
  std::cout << "wrote " << (fs::path(r.out_dir) / "manifest.txt").string() << "\n";
  return r.exit_code;
}

int cmd_plot(const std::string& manifest_path, const std::optional<std::string>& out) {
  const ResultManifest m = load_checked(manifest_path);
  const ExperimentConfig cfg = parse_config(m.config_text);
  const fs::path dir = fs::path(manifest_path).parent_path();
  const XiRegion xi(cfg.exponents.alpha);
  std::string svg;
  if (cfg.kind == ExperimentKind::region_plot) {
    svg = plot_xi_region(xi, centered_frame(cfg.plot.radius, cfg.plot.width, cfg.plot.height));
  } else {
    const fs::path spec = dir / "spectrum.csv";
    if (!fs::exists(spec)) throw std::runtime_error("no spectrum.csv next to " + manifest_path);
    const CsvTable t = CsvTable::read(spec.string());
    const auto re = t.column("re"), im = t.column("im");
    std::vector<cplx> pts;
    for (const auto& row : t.rows()) pts.emplace_back(std::stod(row[re]), std::stod(row[im]));
    svg = plot_spectrum_region(pts, nullptr, &xi, frame_for(pts, nullptr, cfg.plot.width, cfg.plot.height));
  }
  const fs::path target = out ? fs::path(*out) : dir / "replot.svg";
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  std::ofstream(target, std::ios::binary) << svg;
  std::cout << "wrote " << target.string() << "\n";
  return kExitPass;
}

int cmd_fit(const std::vector<std::string>& manifests, bool strict) {
  FitResult fit;
  std::map<double, double> by_size, by_scale;
  double drift_tol = 0.2;
  for (const auto& path : manifests) {
    const ResultManifest m = load_checked(path);
    const ExperimentConfig cfg = parse_config(m.config_text);
    if (cfg.kind != ExperimentKind::enclosure) throw std::runtime_error(path + ": not an enclosure run");
    drift_tol = cfg.tolerances.drift;
    const CsvTable t = CsvTable::read((fs::path(path).parent_path() / "enclosure.csv").string());
    const auto cs = t.column("min_c"), cn = t.column("model_size"), cl = t.column("scale");
    for (const auto& row : t.rows()) {
      const double c = std::stod(row[cs]);
      fit.add_sample(c);
      double& a = by_size[std::stod(row[cn])];
      a = std::max(a, c);
      double& b = by_scale[std::stod(row[cl])];
      b = std::max(b, c);
    }
  }
  fit.refinement_trace.assign(by_size.begin(), by_size.end());
  fit.scale_trace.assign(by_scale.begin(), by_scale.end());
  std::cout << "samples = " << fit.per_sample.size() << "\nC_emp = " << csv_num(fit.C_emp) << "\n";
  for (const auto& [n, c] : fit.refinement_trace) std::cout << "size " << n << ": " << csv_num(c) << "\n";
  for (const auto& [s, c] : fit.scale_trace) std::cout << "scale " << s << ": " << csv_num(c) << "\n";
  const double s1 = FitResult::spread(fit.refinement_trace), s2 = FitResult::spread(fit.scale_trace);
  std::cout << "refinement_spread = " << csv_num(s1) << "\nscale_spread = " << csv_num(s2) << "\n";
  const bool drift = s1 >= drift_tol || s2 >= drift_tol;
  if (drift) std::cerr << "note: C_emp drifts by more than " << drift_tol << "\n";
  return drift && strict ? kExitViolation : kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"specbound: spectral enclosure experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", SPECBOUND_VERSION);

  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  bool strict = false;
  std::string config_path, manifest_path;
  std::vector<std::string> manifests;

  auto* run_cmd = app.add_subcommand("run", "run the experiment described by a config file");
  run_cmd->add_option("config", config_path, "config file")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--out", out, "output directory (default: $SPECBOUND_OUT/<name> or the config value)");
  run_cmd->add_option("--seed", seed, "override the potential seed");
  run_cmd->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  run_cmd->add_flag("--strict", strict, "treat drift and convergence warnings as violations");

  auto* plot_cmd = app.add_subcommand("plot", "re-render the figure of a finished run");
  plot_cmd->add_option("manifest", manifest_path, "manifest.txt of a run")->required()->check(CLI::ExistingFile);
  plot_cmd->add_option("--out", out, "output SVG path");

  auto* fit_cmd = app.add_subcommand("fit", "pool enclosure runs and refit C_emp");
  fit_cmd->add_option("manifests", manifests, "manifest.txt files")->required()->check(CLI::ExistingFile);
  fit_cmd->add_flag("--strict", strict, "exit 2 when C_emp drifts");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return cmd_run(config_path, out, seed, threads, strict);
    if (*plot_cmd) return cmd_plot(manifest_path, out);
    if (*fit_cmd) return cmd_fit(manifests, strict);
  } catch (const ConfigError& e) {
    for (const auto& issue : e.issues()) std::cerr << "config: " << issue << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
