// Copyright 2026 discogan contributors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "discogan/dataset.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "discogan/errors.h"
#include "discogan/mixing.h"
#include "discogan/parallel.h"
#include "discogan/random.h"

namespace discogan {

namespace fs = std::filesystem;

std::vector<SnrGroup> low_snr_eval_groups() {
  return {{"[-15,-12]", -15.0, -12.0},
          {"[-11,-8]", -11.0, -8.0},
          {"[-7,-4]", -7.0, -4.0},
          {"[-3,0]", -3.0, 0.0}};
}

std::string group_for(double snr_db, const std::vector<SnrGroup>& groups) {
  if (groups.empty()) return "all";
  for (const auto& g : groups) {
    if (g.contains(snr_db)) return g.name;
  }
  throw InvalidInput("SNR " + std::to_string(snr_db) + " dB falls outside every group");
}

nlohmann::json ManifestRow::to_json() const {
  nlohmann::json j;
  j["id"] = id;
  j["clean_path"] = clean_path;
  j["noise_path"] = noise_path;
  j["snr_db"] = snr_db;
  j["group"] = group;
  j["seed"] = seed;
  j["norm_gain"] = norm_gain;
  if (rir_path) j["rir_path"] = *rir_path;
  if (max_samples) j["max_samples"] = *max_samples;
  return j;
}

ManifestRow ManifestRow::from_json(const nlohmann::json& j) {
  ManifestRow r;
  try {
    r.id = j.at("id").get<std::string>();
    r.clean_path = j.at("clean_path").get<std::string>();
    r.noise_path = j.at("noise_path").get<std::string>();
    r.snr_db = j.at("snr_db").get<double>();
    r.group = j.at("group").get<std::string>();
    r.seed = j.at("seed").get<uint64_t>();
    r.norm_gain = j.at("norm_gain").get<double>();
    if (j.contains("rir_path")) r.rir_path = j.at("rir_path").get<std::string>();
    if (j.contains("max_samples")) r.max_samples = j.at("max_samples").get<int64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed manifest row: ") + e.what());
  }
  return r;
}

std::string manifest_to_string(const std::vector<ManifestRow>& rows) {
  std::string out;
  for (const auto& r : rows) {
    out += r.to_json().dump();
    out += '\n';
  }
  return out;
}

void write_manifest(const fs::path& path, const std::vector<ManifestRow>& rows) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw RuntimeFailure("cannot write manifest " + path.string());
  out << manifest_to_string(rows);
}

std::vector<ManifestRow> read_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open manifest " + path.string());
  std::vector<ManifestRow> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw InvalidInput(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
    rows.push_back(ManifestRow::from_json(j));
  }
  return rows;
}

void DatasetSpec::validate() const {
  if (num_utterances <= 0 || draws_per_utterance <= 0) {
    throw InvalidConfig("dataset spec needs positive utterance and draw counts");
  }
  if (!(snr_lo_db <= snr_hi_db)) throw InvalidConfig("dataset spec has an empty SNR range");
  if (max_seconds <= 0.0) throw InvalidConfig("dataset spec max_seconds must be positive");
  if (reverb_probability < 0.0 || reverb_probability > 1.0) {
    throw InvalidConfig("reverb probability must lie in [0, 1]");
  }
}

DatasetSpec DatasetSpec::preset(const std::string& name) {
  DatasetSpec s;
  s.name = name;
  if (name == "paper-low-snr-eval" || name == "desk-low-snr-eval") {
    const bool paper = name.starts_with("paper");
    s.num_utterances = paper ? 150 : 10;
    s.draws_per_utterance = paper ? 8 : 2;
    s.snr_lo_db = -15.0;
    s.snr_hi_db = 0.0;
    s.integer_snr = true;
    s.groups = low_snr_eval_groups();
    s.max_seconds = paper ? 10.0 : 2.0;
    return s;
  }
  if (name == "paper-low-snr-train" || name == "desk-low-snr-train" ||
      name == "paper-high-snr-train" || name == "desk-high-snr-train") {
    const bool paper = name.starts_with("paper");
    const auto range = name.find("low") != std::string::npos ? SnrRange::low_snr()
                                                             : SnrRange::high_snr();
    s.num_utterances = paper ? 1000 : 10;
    s.draws_per_utterance = paper ? 4 : 2;
    s.snr_lo_db = range.lo_db;
    s.snr_hi_db = range.hi_db;
    s.integer_snr = false;
    s.max_seconds = paper ? 10.0 : 2.0;
    return s;
  }
  throw InvalidConfig("unknown dataset preset '" + name + "'");
}

std::vector<std::string> DatasetSpec::preset_names() {
  return {"paper-low-snr-eval",  "desk-low-snr-eval",    "paper-low-snr-train",
          "desk-low-snr-train",  "paper-high-snr-train", "desk-high-snr-train"};
}

std::vector<fs::path> list_wavs(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw InvalidInput("not a directory: " + dir.string());
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    auto ext = e.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
    if (ext == ".wav") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// First `k` entries of a seeded Fisher-Yates shuffle of [0, n).
std::vector<std::size_t> choose_without_replacement(std::size_t n, std::size_t k, Rng& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = static_cast<std::size_t>(
        uniform_int(rng, static_cast<int64_t>(i), static_cast<int64_t>(n - 1)));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  return idx;
}

AudioBuffer scaled(const AudioBuffer& x, double gain) {
  AudioBuffer out = x;
  for (auto& v : out.samples) v = static_cast<float>(v * gain);
  return out;
}

}  // namespace

RenderedItem render_item(const ManifestRow& row) {
  AudioBuffer clean = read_wav(row.clean_path);
  check_pipeline_audio(clean);
  if (row.max_samples && static_cast<int64_t>(clean.size()) > *row.max_samples) {
    clean.samples.resize(static_cast<std::size_t>(*row.max_samples));
  }
  if (row.rir_path) {
    const AudioBuffer rir = read_wav(*row.rir_path);
    check_pipeline_audio(rir);
    clean = convolve(clean, rir);
  }
  const AudioBuffer raw_noise = read_wav(row.noise_path);
  check_pipeline_audio(raw_noise);

  Rng rng(substream_seed(row.seed, "noise-placement"));
  const AudioBuffer noise = fit_length(raw_noise, clean.size(), rng);
  MixResult mix = mix_at_snr(clean, noise, row.snr_db);

  RenderedItem item;
  item.noise_gain = mix.applied_gain;
  item.clean = scaled(clean, row.norm_gain);
  item.noise = scaled(noise, mix.applied_gain * row.norm_gain);
  item.mixture = row.norm_gain == 1.0 ? std::move(mix.mixture) : scaled(mix.mixture, row.norm_gain);
  return item;
}

std::vector<ManifestRow> synthesize_dataset(const fs::path& clean_dir, const fs::path& noise_dir,
                                            const DatasetSpec& spec, int jobs) {
  spec.validate();
  const auto clean_files = list_wavs(clean_dir);
  const auto noise_files = list_wavs(noise_dir);
  if (clean_files.empty()) throw InvalidInput("no clean WAV files in " + clean_dir.string());
  if (noise_files.empty()) throw InvalidInput("no noise WAV files in " + noise_dir.string());
  if (clean_files.size() < static_cast<std::size_t>(spec.num_utterances)) {
    throw InvalidInput("dataset '" + spec.name + "' needs " +
                       std::to_string(spec.num_utterances) + " clean utterances, found " +
                       std::to_string(clean_files.size()));
  }
  if (noise_files.size() < static_cast<std::size_t>(spec.draws_per_utterance)) {
    throw InvalidInput("dataset '" + spec.name + "' needs " +
                       std::to_string(spec.draws_per_utterance) + " distinct noise files, found " +
                       std::to_string(noise_files.size()));
  }
  std::vector<fs::path> rir_files;
  if (spec.rir_dir) {
    rir_files = list_wavs(*spec.rir_dir);
    if (rir_files.empty()) throw InvalidInput("no RIR WAV files in " + spec.rir_dir->string());
  }

  Rng select_rng(substream_seed(spec.seed, "utterance-selection"));
  const auto utterances =
      choose_without_replacement(clean_files.size(), static_cast<std::size_t>(spec.num_utterances),
                                 select_rng);
  const int64_t max_samples = static_cast<int64_t>(std::llround(spec.max_seconds * kSampleRate));

  std::vector<ManifestRow> rows(spec.num_items());
  parallel_for(utterances.size(), jobs, [&](std::size_t u) {
    Rng noise_rng(item_seed(substream_seed(spec.seed, "noise-selection"), u));
    const auto noises = choose_without_replacement(
        noise_files.size(), static_cast<std::size_t>(spec.draws_per_utterance), noise_rng);
    for (std::size_t d = 0; d < noises.size(); ++d) {
      const std::size_t index = u * noises.size() + d;
      ManifestRow row;
      row.seed = item_seed(spec.seed, index);
      Rng rng(substream_seed(row.seed, "mixing"));
      double snr = sample_snr(rng, {spec.snr_lo_db, spec.snr_hi_db});
      if (spec.integer_snr) {
        snr = static_cast<double>(uniform_int(rng, static_cast<int64_t>(std::ceil(spec.snr_lo_db)),
                                              static_cast<int64_t>(std::floor(spec.snr_hi_db))));
      }
      char id[64];
      std::snprintf(id, sizeof(id), "%s-%05zu", spec.name.empty() ? "item" : spec.name.c_str(),
                    index);
      row.id = id;
      row.clean_path = clean_files[utterances[u]].string();
      row.noise_path = noise_files[noises[d]].string();
      row.snr_db = snr;
      row.group = group_for(snr, spec.groups);
      row.max_samples = max_samples;
      if (!rir_files.empty() && uniform_real(rng, 0.0, 1.0) < spec.reverb_probability) {
        row.rir_path = rir_files[static_cast<std::size_t>(
                                     uniform_int(rng, 0, static_cast<int64_t>(rir_files.size()) - 1))]
                           .string();
      }
      // Render once at unit gain to find the peak.
      row.norm_gain = 1.0;
      const RenderedItem item = render_item(row);
      float peak = 0.0f;
      for (float v : item.mixture.samples) peak = std::max(peak, std::abs(v));
      if (peak > 1.0f) row.norm_gain = kPeakTarget / static_cast<double>(peak);
      rows[index] = std::move(row);
    }
  });
  return rows;
}

}  // namespace discogan
