#include "manifest.hpp"

#include <array>
#include <cstdio>
#include <fstream>

#include <openssl/evp.h>

#include "yamabe3h/errors.hpp"

namespace yamabe3h::cli {

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot read " + path.string());
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  std::array<char, 1 << 14> buf;
  while (in.read(buf.data(), buf.size()) || in.gcount() > 0) {
    EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md.data(), &len);
  EVP_MD_CTX_free(ctx);
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) {
    char byte[3];
    std::snprintf(byte, sizeof byte, "%02x", md[i]);
    hex += byte;
  }
  return hex;
}

nlohmann::json to_json(const RunManifest& m) {
  nlohmann::json inputs = nlohmann::json::array();
  for (const auto& p : m.inputs)
    inputs.push_back({{"path", p.string()}, {"sha256", sha256_file(p)}});
  nlohmann::json outputs = nlohmann::json::array();
  for (const auto& p : m.outputs)
    outputs.push_back({{"path", p.string()}, {"sha256", sha256_file(p)}});
  return {{"command", m.command}, {"tool_version", kToolVersion},
          {"inputs", inputs},     {"outputs", outputs},
          {"config", m.config},   {"status", m.status}};
}

void write_manifests(const RunManifest& m) {
  const nlohmann::json doc = to_json(m);
  for (const auto& p : m.outputs) {
    std::filesystem::path target = p;
    target += ".manifest.json";
    std::ofstream out(target, std::ios::binary);
    if (!out) throw DomainError("cannot write " + target.string());
    out << doc.dump(2) << '\n';
  }
}

}  // namespace yamabe3h::cli
