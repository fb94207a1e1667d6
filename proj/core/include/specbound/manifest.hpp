#pragma once

// Result manifests: a stable, line-oriented record of one run.
//
//   specbound-manifest 1
//   version = 0.1.0
//   result.<key> = <value>
//   timing.<name> = <seconds>
//   file <relative path> sha256=<hex> bytes=<n>
//   config
//   <canonical config text>
//   end config

#include <map>
#include <string>
#include <vector>

namespace specbound {

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::string& path);

struct ManifestFile {
  std::string path;
  std::string sha256;
  std::size_t bytes = 0;
};

struct ResultManifest {
  std::string version;
  std::string config_text;
  std::map<std::string, std::string> results;
  std::vector<std::pair<std::string, double>> timings;
  std::vector<ManifestFile> files;
  int exit_code = 0;

  std::string str() const;
  static ResultManifest parse(const std::string& text);
  static ResultManifest read(const std::string& path);

  /// Recompute digests under `root`; returns the paths that no longer match.
  std::vector<std::string> verify(const std::string& root) const;
};

}  // namespace specbound
