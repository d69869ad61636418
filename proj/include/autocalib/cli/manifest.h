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

/**
 * @file manifest.h
 * @brief Record of one CLI run: inputs, outputs and their content hashes.
 */

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace autocalib {
namespace cli {

/// Lower-case hex SHA-256 of the bytes.
std::string Sha256Hex(std::string_view data);

/// Throws std::runtime_error when the file cannot be read.
std::string FileSha256(const std::filesystem::path& path);

class RunManifest {
 public:
  RunManifest(std::string subcommand, std::uint64_t seed,
              std::filesystem::path out_dir);

  void AddConfig(const std::filesystem::path& path);
  void AddInput(const std::filesystem::path& path);

  /// Writes `content` to out_dir / name and records its hash. Returns the
  /// full path. Throws std::runtime_error on I/O failure.
  std::filesystem::path WriteOutput(const std::string& name,
                                    std::string_view content);

  /// Informational values that may vary between runs, e.g. wall times.
  void AddNote(const std::string& key, double value);

  std::string ToJson() const;

  /// Writes manifest.json into out_dir.
  void Save() const;

  const std::map<std::string, std::string>& outputs() const {
    return outputs_;
  }

 private:
  std::string subcommand_;
  std::uint64_t seed_;
  std::filesystem::path out_dir_;
  std::map<std::string, std::string> configs_;
  std::map<std::string, std::string> inputs_;
  std::map<std::string, std::string> outputs_;
  std::map<std::string, double> notes_;
};

}  // namespace cli
}  // namespace autocalib
