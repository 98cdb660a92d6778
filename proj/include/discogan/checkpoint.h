// Copyright 2026 discogan contributors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <torch/torch.h>

#include <filesystem>
#include <string>

#include <json.hpp>

#include "discogan/disc_models.h"
#include "discogan/generator.h"

namespace discogan {

inline constexpr int kCheckpointFormatVersion = 1;

// FNV-1a over the compact JSON dump, as 16 hex digits.
std::string config_hash(const nlohmann::json& config);

void save_module(const torch::nn::Module& module, const std::filesystem::path& path);
void load_module(torch::nn::Module& module, const std::filesystem::path& path);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

// A checkpoint directory holds config.json, meta.json {format_version, kind,
// config_hash} and one or more weight files.
void write_checkpoint_meta(const std::filesystem::path& dir, const std::string& kind,
                           const nlohmann::json& config);
// Returns config.json after checking the format version, the kind and that
// the stored hash matches; throws InvalidInput otherwise.
nlohmann::json read_checkpoint_config(const std::filesystem::path& dir, const std::string& kind);

void save_disc_model(const std::filesystem::path& dir, const DiscModelImpl& model);
DiscModelPtr load_disc_model(const std::filesystem::path& dir);

void save_generator(const std::filesystem::path& dir, const GeneratorImpl& gen);
Generator load_generator(const std::filesystem::path& dir);

// Flattened parameter snapshot for bit-identity checks.
std::vector<torch::Tensor> snapshot_parameters(const torch::nn::Module& module);
bool bit_identical(const std::vector<torch::Tensor>& a, const std::vector<torch::Tensor>& b);

}  // namespace discogan
