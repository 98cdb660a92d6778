// Copyright 2026 discogan contributors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "discogan/audio.h"

namespace discogan {

struct SnrGroup {
  std::string name;
  double lo_db;
  double hi_db;
  bool contains(double snr_db) const { return snr_db >= lo_db && snr_db <= hi_db; }
};

// [-15,-12], [-11,-8], [-7,-4], [-3,0] dB.
std::vector<SnrGroup> low_snr_eval_groups();
// Name of the group containing snr_db, or "all" when groups is empty.
std::string group_for(double snr_db, const std::vector<SnrGroup>& groups);

// One manifest line. The mixture is not stored; render_item() rebuilds it
// deterministically from these fields.
struct ManifestRow {
  std::string id;
  std::string clean_path;
  std::string noise_path;
  double snr_db = 0.0;
  std::string group;
  uint64_t seed = 0;
  double norm_gain = 1.0;
  // Optional: impulse response applied to the clean utterance.
  std::optional<std::string> rir_path;
  // Optional: the clean utterance is cropped to this many samples.
  std::optional<int64_t> max_samples;

  nlohmann::json to_json() const;
  static ManifestRow from_json(const nlohmann::json& j);
};

void write_manifest(const std::filesystem::path& path, const std::vector<ManifestRow>& rows);
std::vector<ManifestRow> read_manifest(const std::filesystem::path& path);
std::string manifest_to_string(const std::vector<ManifestRow>& rows);

struct DatasetSpec {
  std::string name;
  int num_utterances = 10;
  int draws_per_utterance = 2;
  double snr_lo_db = -15.0;
  double snr_hi_db = 0.0;
  // Draw whole-dB SNRs (the evaluation groups are integer buckets).
  bool integer_snr = true;
  std::vector<SnrGroup> groups;
  double max_seconds = 10.0;
  uint64_t seed = 0;
  std::optional<std::filesystem::path> rir_dir;
  double reverb_probability = 0.5;

  void validate() const;
  std::size_t num_items() const {
    return static_cast<std::size_t>(num_utterances) * draws_per_utterance;
  }

  // paper-low-snr-eval, desk-low-snr-eval, paper-low-snr-train,
  // desk-low-snr-train, paper-high-snr-train, desk-high-snr-train.
  static DatasetSpec preset(const std::string& name);
  static std::vector<std::string> preset_names();
};

// Sorted list of *.wav files in a directory.
std::vector<std::filesystem::path> list_wavs(const std::filesystem::path& dir);

// Chooses utterances and noise draws, samples SNRs, renders each mixture to
// determine its peak normalisation, and returns the manifest rows. Each item
// derives its own seed from (spec.seed, item index), so the result is the
// same for any `jobs`.
std::vector<ManifestRow> synthesize_dataset(const std::filesystem::path& clean_dir,
                                            const std::filesystem::path& noise_dir,
                                            const DatasetSpec& spec, int jobs = 1);

struct RenderedItem {
  AudioBuffer clean;    // after optional reverberation and normalisation
  AudioBuffer noise;    // scaled so that mixture == clean + noise
  AudioBuffer mixture;
  double noise_gain = 1.0;  // SNR gain before normalisation
};

// Mixture peak target used when |mixture| would exceed 1.
inline constexpr double kPeakTarget = 0.99;

RenderedItem render_item(const ManifestRow& row);

}  // namespace discogan
