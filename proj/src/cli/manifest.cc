/******************************************************************************
 * Copyright 2026 The Autocalib Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *****************************************************************************/

#include "autocalib/cli/manifest.h"

#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace autocalib {
namespace cli {

std::string Sha256Hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(),
                 nullptr) != 1) {
    throw std::runtime_error("SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    hex.push_back(kHex[digest[i] >> 4]);
    hex.push_back(kHex[digest[i] & 0xf]);
  }
  return hex;
}

std::string FileSha256(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot read " + path.string());
  }
  std::ostringstream text;
  text << in.rdbuf();
  return Sha256Hex(text.str());
}

RunManifest::RunManifest(std::string subcommand, std::uint64_t seed,
                         std::filesystem::path out_dir)
    : subcommand_(std::move(subcommand)),
      seed_(seed),
      out_dir_(std::move(out_dir)) {}

void RunManifest::AddConfig(const std::filesystem::path& path) {
  configs_[path.string()] = FileSha256(path);
}

void RunManifest::AddInput(const std::filesystem::path& path) {
  inputs_[path.string()] = FileSha256(path);
}

std::filesystem::path RunManifest::WriteOutput(const std::string& name,
                                               std::string_view content) {
  const std::filesystem::path path = out_dir_ / name;
  std::ofstream out(path, std::ios::binary);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  outputs_[name] = Sha256Hex(content);
  return path;
}

void RunManifest::AddNote(const std::string& key, double value) {
  notes_[key] = value;
}

std::string RunManifest::ToJson() const {
  nlohmann::ordered_json j;
  j["subcommand"] = subcommand_;
  j["seed"] = seed_;
  j["out"] = out_dir_.string();
  j["configs"] = configs_;
  j["inputs"] = inputs_;
  j["outputs"] = outputs_;
  j["notes"] = notes_;
  return j.dump(2) + "\n";
}

void RunManifest::Save() const {
  const std::filesystem::path path = out_dir_ / "manifest.json";
  std::ofstream out(path);
  out << ToJson();
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
}

}  // namespace cli
}  // namespace autocalib
