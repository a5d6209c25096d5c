// Copyright 2026 The qttt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// JSON checkpoints: architecture descriptor, flat weight arrays in
// parameter-block order, seed and free-form training metadata.

#pragma once

#include <filesystem>
#include <optional>

#include "json.hpp"
#include "qttt/engine.hpp"

namespace qttt::engines {

inline constexpr int kCheckpointVersion = 1;

nlohmann::json checkpoint_save(const Engine& engine,
                               const nlohmann::json& training = nlohmann::json::object());

// Throws CorruptCheckpoint on malformed documents and SpecMismatch when
// `expected` is given and names a different engine.
Engine checkpoint_load(const nlohmann::json& doc,
                       const std::optional<EngineSpec>& expected = std::nullopt);

void save_checkpoint_file(const Engine& engine, const std::filesystem::path& path,
                          const nlohmann::json& training = nlohmann::json::object());

// Throws IoError if the file cannot be read, CorruptCheckpoint if it does
// not parse.
Engine load_checkpoint_file(const std::filesystem::path& path,
                            const std::optional<EngineSpec>& expected = std::nullopt);

// Reads the training metadata block without rebuilding the engine.
nlohmann::json checkpoint_training_meta(const std::filesystem::path& path);

}  // namespace qttt::engines
