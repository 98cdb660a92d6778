// Copyright 2026 discogan contributors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <torch/torch.h>

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "discogan/audio.h"
#include "discogan/dataset.h"
#include "discogan/disc_models.h"
#include "discogan/metrics.h"
#include "discogan/training.h"

namespace discogan {

struct MetricsRow {
  std::string id;
  std::string group;
  double snr_db = 0.0;
  double si_sdr_db = 0.0;
  double delta_fwsegsnr_db = 0.0;
  double delta_si_sdr_db = 0.0;
};

struct GroupMeans {
  std::string group;
  std::size_t count = 0;
  double si_sdr_db = 0.0;
  double delta_fwsegsnr_db = 0.0;
  double delta_si_sdr_db = 0.0;
};

// Means over `rows`, one entry per group (evaluation buckets from the lowest
// SNR up, other groups in first-appearance order), plus an
// "all" entry at the end.
std::vector<GroupMeans> group_means(const std::vector<MetricsRow>& rows);

struct MetricsReport {
  std::string system;
  std::string config_hash;
  std::vector<MetricsRow> rows;
  std::vector<GroupMeans> groups;

  const GroupMeans& overall() const;
  const GroupMeans* group(const std::string& name) const;

  nlohmann::json to_json() const;
  static MetricsReport from_json(const nlohmann::json& j);
  // One line per item.
  std::string rows_csv() const;
  // One line per group.
  std::string groups_csv() const;
  // report.json, items.csv and groups.csv.
  void write(const std::filesystem::path& dir) const;
};

// Metrics of a single item; deltas are metric(enhanced) - metric(noisy).
MetricsRow score_item(const ManifestRow& row, const AudioBuffer& clean, const AudioBuffer& noisy,
                      const AudioBuffer& enhanced, const FwSegSnrConfig& fw = {});

using ItemEnhancer = std::function<AudioBuffer(const ManifestRow&, const RenderedItem&)>;

// Scores `enhancer` over the manifest on `jobs` threads. The report does not
// depend on `jobs`.
MetricsReport evaluate_items(const std::vector<ManifestRow>& rows, const ItemEnhancer& enhancer,
                             const std::string& system, const nlohmann::json& system_config,
                             int jobs = 1);

MetricsReport evaluate_system(const Pipeline& pipeline, const std::vector<ManifestRow>& manifest,
                              int jobs = 1);

// Latent correlation analysis.

struct LatentCorrelation {
  std::optional<double> pearson;
  std::optional<double> spearman;
};

// Time-major flattening of a [T, d] or [1, T, d] latent.
std::vector<double> flatten_latent(const torch::Tensor& latent);
LatentCorrelation correlate_latents(const torch::Tensor& a, const torch::Tensor& b);

struct CorrelationEntry {
  std::string model;
  double snr_db = 0.0;
  std::optional<double> pearson;
  std::optional<double> spearman;
  std::size_t utterances = 0;
  std::size_t defined = 0;  // utterances with a defined coefficient
};

struct CorrelationReport {
  std::vector<CorrelationEntry> entries;

  nlohmann::json to_json() const;
  std::string to_csv() const;
};

// For each SNR level, mixes every clean utterance with noise[i % noise.size()]
// and correlates the extractor latents of the mixture with those of the clean
// utterance; coefficients are averaged over utterances.
CorrelationReport latent_correlation(DiscModelImpl& extractor, const std::string& model_name,
                                     const std::vector<AudioBuffer>& clean,
                                     const std::vector<AudioBuffer>& noise,
                                     const std::vector<double>& snr_levels, uint64_t seed = 0);

// Ablations.

enum class ShiftDirection { kCausal, kNonCausal };
std::string to_string(ShiftDirection d);
ShiftDirection shift_direction_from_string(const std::string& name);

// Causal: out[n] = D[n - k]; non-causal: out[n] = D[n + k]; edge frames are
// replicated. latent is [B, T, d]; k >= T -> InvalidInput.
torch::Tensor shift_frames(const torch::Tensor& latent, int64_t k, ShiftDirection direction);

struct ShiftEntry {
  int64_t shift = 0;
  MetricsReport report;
};

struct ShiftReport {
  ShiftDirection direction = ShiftDirection::kCausal;
  std::vector<ShiftEntry> entries;

  nlohmann::json to_json() const;
  std::string to_csv() const;
};

ShiftReport ablate_frame_shift(const Pipeline& pipeline, const std::vector<ManifestRow>& manifest,
                               const std::vector<int64_t>& shifts, ShiftDirection direction,
                               int jobs = 1);

struct ConditionLevel {
  enum class Kind { kMatching, kSnr, kCleanOnly, kNoiseOnly };
  Kind kind = Kind::kMatching;
  double snr_db = 0.0;

  static ConditionLevel matching() { return {Kind::kMatching, 0.0}; }
  static ConditionLevel at_snr(double snr_db) { return {Kind::kSnr, snr_db}; }
  static ConditionLevel clean_only() { return {Kind::kCleanOnly, 0.0}; }
  static ConditionLevel noise_only() { return {Kind::kNoiseOnly, 0.0}; }
  // "matching", "clean", "noise" or a number of dB.
  static ConditionLevel parse(const std::string& text);
  std::string label() const;
};

// Signal fed to the extractor for `level`; mixing keeps the clean stem of
// the item and rescales its noise stem.
AudioBuffer conditioning_signal(const RenderedItem& item, const ConditionLevel& level);

struct ConditionEntry {
  ConditionLevel level;
  MetricsReport report;
};

struct ConditionReport {
  std::vector<ConditionEntry> entries;

  nlohmann::json to_json() const;
  // One line per (level, input group).
  std::string to_csv() const;
};

ConditionReport ablate_condition_snr(const Pipeline& pipeline,
                                     const std::vector<ManifestRow>& manifest,
                                     const std::vector<ConditionLevel>& levels, int jobs = 1);

// (v - full) / |full| * 100; missing when full == 0.
std::optional<double> percent_change(double value, double full);

struct ComponentRow {
  std::string variant;
  double delta_fwsegsnr_db = 0.0;
  double delta_si_sdr_db = 0.0;
  std::optional<double> pct_fwsegsnr;
  std::optional<double> pct_si_sdr;
};

struct ComponentReport {
  std::vector<ComponentRow> rows;  // rows[0] is the full model

  nlohmann::json to_json() const;
  std::string to_csv() const;
};

// Variants are (name, report) pairs; the first one is the full model.
ComponentReport ablate_components(const std::vector<std::pair<std::string, MetricsReport>>& variants);

// Plots.

struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<std::optional<double>> y;
};

// Line chart with markers; missing points break the line.
std::string line_plot_svg(const std::string& title, const std::string& x_label,
                          const std::string& y_label, const std::vector<PlotSeries>& series);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace discogan
