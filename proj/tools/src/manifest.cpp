#include "manifest.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <iterator>
#include <sstream>

namespace lanemden::cli {

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw NumericalError("SHA-256 computation failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int k = 0; k < len; ++k) {
    out += hex[md[k] >> 4];
    out += hex[md[k] & 15];
  }
  return out;
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return sha256_hex(bytes);
}

void Artifacts::write_manifest(const Json& config, const std::string& command, double wall_seconds,
                               int exit_code) const {
  Json m;
  m["tool"] = "lanemden";
  m["version"] = LANEMDEN_VERSION_STRING;
  m["command"] = command;
  m["config"] = config;
  m["config_sha256"] = sha256_hex(config.dump());
  m["exit_code"] = exit_code;
  m["wall_seconds"] = wall_seconds;
  Json files = Json::array();
  for (const std::string& f : files_) files.push_back({{"name", f}, {"sha256", sha256_file(dir_ / f)}});
  m["files"] = files;
  write_json(dir_ / "manifest.json", m);
}

}  // namespace lanemden::cli
