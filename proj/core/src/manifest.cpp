#include "specbound/manifest.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

#include <openssl/evp.h>

namespace specbound {

std::string sha256_hex(const std::string& bytes) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1)
    throw std::runtime_error("sha256: digest computation failed");
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

std::string sha256_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return sha256_hex(ss.str());
}

std::string ResultManifest::str() const {
  std::ostringstream os;
  os << "specbound-manifest 1\n";
  os << "version = " << version << "\n";
  os << "exit_code = " << exit_code << "\n";
  for (const auto& [k, v] : results) os << "result." << k << " = " << v << "\n";
  char buf[64];
  for (const auto& [k, t] : timings) {
    std::snprintf(buf, sizeof buf, "%.6f", t);
    os << "timing." << k << " = " << buf << "\n";
  }
  for (const auto& f : files) os << "file " << f.path << " sha256=" << f.sha256 << " bytes=" << f.bytes << "\n";
  os << "config\n" << config_text;
  if (!config_text.empty() && config_text.back() != '\n') os << "\n";
  os << "end config\n";
  return os.str();
}

ResultManifest ResultManifest::parse(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "specbound-manifest 1")
    throw std::invalid_argument("manifest: missing 'specbound-manifest 1' header");
  ResultManifest m;
  int lineno = 1;
  auto kv = [&](const std::string& l, std::string& key, std::string& value) {
    const auto eq = l.find(" = ");
    if (eq == std::string::npos) throw std::invalid_argument("manifest line " + std::to_string(lineno) + ": expected 'key = value'");
    key = l.substr(0, eq);
    value = l.substr(eq + 3);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line == "config") {
      std::string body;
      bool closed = false;
      while (std::getline(in, line)) {
        ++lineno;
        if (line == "end config") {
          closed = true;
          break;
        }
        body += line + "\n";
      }
      if (!closed) throw std::invalid_argument("manifest: unterminated config block");
      m.config_text = body;
      continue;
    }
    if (line.rfind("file ", 0) == 0) {
      std::istringstream ls(line.substr(5));
      ManifestFile f;
      std::string digest, bytes;
      ls >> f.path >> digest >> bytes;
      if (digest.rfind("sha256=", 0) != 0 || bytes.rfind("bytes=", 0) != 0)
        throw std::invalid_argument("manifest line " + std::to_string(lineno) + ": malformed file entry");
      f.sha256 = digest.substr(7);
      f.bytes = static_cast<std::size_t>(std::stoull(bytes.substr(6)));
      m.files.push_back(f);
      continue;
    }
    std::string key, value;
    kv(line, key, value);
    if (key == "version") m.version = value;
    else if (key == "exit_code") m.exit_code = std::stoi(value);
    else if (key.rfind("result.", 0) == 0) m.results[key.substr(7)] = value;
    else if (key.rfind("timing.", 0) == 0) m.timings.emplace_back(key.substr(7), std::stod(value));
    else throw std::invalid_argument("manifest line " + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
  return m;
}

ResultManifest ResultManifest::read(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read manifest '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

std::vector<std::string> ResultManifest::verify(const std::string& root) const {
  std::vector<std::string> bad;
  for (const auto& f : files) {
    const auto p = std::filesystem::path(root) / f.path;
    try {
      if (sha256_file(p.string()) != f.sha256) bad.push_back(f.path);
    } catch (const std::exception&) {
      bad.push_back(f.path);
    }
  }
  return bad;
}

}  // namespace specbound
