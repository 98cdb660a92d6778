// Copyright 2026 discogan contributors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "discogan/evaluation.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "discogan/checkpoint.h"
#include "discogan/errors.h"
#include "discogan/mixing.h"
#include "discogan/parallel.h"
#include "discogan/random.h"

namespace discogan {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string opt_num(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::vector<GroupMeans> group_means(const std::vector<MetricsRow>& rows) {
  std::vector<GroupMeans> out;
  std::map<std::string, std::size_t> index;
  GroupMeans all{"all"};
  for (const auto& r : rows) {
    auto [it, inserted] = index.try_emplace(r.group, out.size());
    if (inserted) out.push_back(GroupMeans{r.group});
    for (GroupMeans* g : {&out[it->second], &all}) {
      g->count += 1;
      g->si_sdr_db += r.si_sdr_db;
      g->delta_fwsegsnr_db += r.delta_fwsegsnr_db;
      g->delta_si_sdr_db += r.delta_si_sdr_db;
    }
  }
  // Known buckets are listed from the lowest SNR up.
  const auto known = low_snr_eval_groups();
  auto rank = [&](const GroupMeans& g) {
    for (std::size_t i = 0; i < known.size(); ++i) {
      if (known[i].name == g.group) return i;
    }
    return known.size();
  };
  std::stable_sort(out.begin(), out.end(),
                   [&](const GroupMeans& a, const GroupMeans& b) { return rank(a) < rank(b); });
  out.push_back(all);
  for (auto& g : out) {
    if (g.count == 0) continue;
    const double n = static_cast<double>(g.count);
    g.si_sdr_db /= n;
    g.delta_fwsegsnr_db /= n;
    g.delta_si_sdr_db /= n;
  }
  return out;
}

const GroupMeans& MetricsReport::overall() const {
  if (groups.empty()) throw InvalidInput("metrics report has no group means");
  return groups.back();
}

const GroupMeans* MetricsReport::group(const std::string& name) const {
  for (const auto& g : groups) {
    if (g.group == name) return &g;
  }
  return nullptr;
}

json MetricsReport::to_json() const {
  json items = json::array();
  for (const auto& r : rows) {
    items.push_back({{"id", r.id},
                     {"group", r.group},
                     {"snr_db", r.snr_db},
                     {"si_sdr_db", r.si_sdr_db},
                     {"delta_fwsegsnr_db", r.delta_fwsegsnr_db},
                     {"delta_si_sdr_db", r.delta_si_sdr_db}});
  }
  json gs = json::array();
  for (const auto& g : groups) {
    gs.push_back({{"group", g.group},
                  {"count", g.count},
                  {"si_sdr_db", g.si_sdr_db},
                  {"delta_fwsegsnr_db", g.delta_fwsegsnr_db},
                  {"delta_si_sdr_db", g.delta_si_sdr_db}});
  }
  return {{"system", system}, {"config_hash", config_hash}, {"items", items}, {"groups", gs}};
}

MetricsReport MetricsReport::from_json(const json& j) {
  try {
    MetricsReport r;
    r.system = j.at("system").get<std::string>();
    r.config_hash = j.at("config_hash").get<std::string>();
    for (const auto& it : j.at("items")) {
      r.rows.push_back(MetricsRow{it.at("id").get<std::string>(), it.at("group").get<std::string>(),
                                  it.at("snr_db").get<double>(), it.at("si_sdr_db").get<double>(),
                                  it.at("delta_fwsegsnr_db").get<double>(),
                                  it.at("delta_si_sdr_db").get<double>()});
    }
    for (const auto& g : j.at("groups")) {
      r.groups.push_back(GroupMeans{g.at("group").get<std::string>(), g.at("count").get<std::size_t>(),
                                    g.at("si_sdr_db").get<double>(),
                                    g.at("delta_fwsegsnr_db").get<double>(),
                                    g.at("delta_si_sdr_db").get<double>()});
    }
    return r;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed metrics report: ") + e.what());
  }
}

std::string MetricsReport::rows_csv() const {
  std::string out = "id,group,snr_db,si_sdr_db,delta_fwsegsnr_db,delta_si_sdr_db\n";
  for (const auto& r : rows) {
    out += csv_field(r.id) + "," + csv_field(r.group) + "," + num(r.snr_db) + "," +
           num(r.si_sdr_db) + "," + num(r.delta_fwsegsnr_db) + "," + num(r.delta_si_sdr_db) + "\n";
  }
  return out;
}

std::string MetricsReport::groups_csv() const {
  std::string out = "group,count,si_sdr_db,delta_fwsegsnr_db,delta_si_sdr_db\n";
  for (const auto& g : groups) {
    out += csv_field(g.group) + "," + std::to_string(g.count) + "," + num(g.si_sdr_db) + "," +
           num(g.delta_fwsegsnr_db) + "," + num(g.delta_si_sdr_db) + "\n";
  }
  return out;
}

void MetricsReport::write(const fs::path& dir) const {
  write_json(dir / "report.json", to_json());
  write_text(dir / "items.csv", rows_csv());
  write_text(dir / "groups.csv", groups_csv());
}

MetricsRow score_item(const ManifestRow& row, const AudioBuffer& clean, const AudioBuffer& noisy,
                      const AudioBuffer& enhanced, const FwSegSnrConfig& fw) {
  if (clean.size() != noisy.size() || clean.size() != enhanced.size()) {
    throw InvalidInput("item " + row.id + ": clean, noisy and enhanced lengths differ");
  }
  MetricsRow r;
  r.id = row.id;
  r.group = row.group;
  r.snr_db = row.snr_db;
  const double sdr_noisy = si_sdr(clean, noisy);
  r.si_sdr_db = si_sdr(clean, enhanced);
  r.delta_si_sdr_db = r.si_sdr_db - sdr_noisy;
  r.delta_fwsegsnr_db = fw_seg_snr(clean, enhanced, fw) - fw_seg_snr(clean, noisy, fw);
  return r;
}

MetricsReport evaluate_items(const std::vector<ManifestRow>& rows, const ItemEnhancer& enhancer,
                             const std::string& system, const json& system_config, int jobs) {
  if (rows.empty()) throw InvalidInput("evaluation manifest is empty");
  std::vector<MetricsRow> scored(rows.size());
  parallel_for(rows.size(), jobs, [&](std::size_t i) {
    torch::NoGradGuard no_grad;
    const auto item = render_item(rows[i]);
    const auto enhanced = enhancer(rows[i], item);
    scored[i] = score_item(rows[i], item.clean, item.mixture, enhanced);
  });
  MetricsReport report;
  report.system = system;
  report.config_hash = config_hash(
      {{"system", system}, {"config", system_config}, {"manifest", hex64(fnv1a64(manifest_to_string(rows)))}});
  report.rows = std::move(scored);
  report.groups = group_means(report.rows);
  return report;
}

MetricsReport evaluate_system(const Pipeline& pipeline, const std::vector<ManifestRow>& manifest,
                              int jobs) {
  return evaluate_items(
      manifest,
      [&](const ManifestRow&, const RenderedItem& item) { return pipeline.enhance(item.mixture); },
      pipeline.name(), pipeline.config(), jobs);
}

std::vector<double> flatten_latent(const torch::Tensor& latent) {
  auto t = latent;
  if (t.dim() == 3) {
    if (t.size(0) != 1) throw InvalidInput("flatten_latent expects a single utterance");
    t = t.squeeze(0);
  }
  if (t.dim() != 2) throw InvalidInput("flatten_latent expects a [T, d] latent");
  t = t.detach().to(torch::kFloat64).contiguous();
  const double* p = t.data_ptr<double>();
  return std::vector<double>(p, p + t.numel());
}

LatentCorrelation correlate_latents(const torch::Tensor& a, const torch::Tensor& b) {
  const auto x = flatten_latent(a);
  const auto y = flatten_latent(b);
  if (x.size() != y.size()) throw InvalidInput("correlate_latents: latent shapes differ");
  return {pearson(x, y), spearman(x, y)};
}

json CorrelationReport::to_json() const {
  json out = json::array();
  for (const auto& e : entries) {
    out.push_back({{"model", e.model},
                   {"snr_db", e.snr_db},
                   {"pearson", opt_json(e.pearson)},
                   {"spearman", opt_json(e.spearman)},
                   {"utterances", e.utterances},
                   {"defined", e.defined}});
  }
  return {{"entries", out}};
}

std::string CorrelationReport::to_csv() const {
  std::string out = "model,snr_db,pearson,spearman,utterances,defined\n";
  for (const auto& e : entries) {
    out += csv_field(e.model) + "," + num(e.snr_db) + "," + opt_num(e.pearson) + "," +
           opt_num(e.spearman) + "," + std::to_string(e.utterances) + "," +
           std::to_string(e.defined) + "\n";
  }
  return out;
}

CorrelationReport latent_correlation(DiscModelImpl& extractor, const std::string& model_name,
                                     const std::vector<AudioBuffer>& clean,
                                     const std::vector<AudioBuffer>& noise,
                                     const std::vector<double>& snr_levels, uint64_t seed) {
  if (clean.empty() || noise.empty()) throw InvalidInput("latent_correlation needs clean and noise audio");
  if (snr_levels.empty()) throw InvalidInput("latent_correlation needs at least one SNR level");
  for (const auto& p : extractor.parameters()) {
    if (p.requires_grad()) throw InvalidInput("latent_correlation expects a frozen extractor");
  }
  torch::NoGradGuard no_grad;
  std::vector<torch::Tensor> clean_latents;
  std::vector<AudioBuffer> fitted;
  for (std::size_t i = 0; i < clean.size(); ++i) {
    check_pipeline_audio(clean[i]);
    clean_latents.push_back(extractor.encode(to_tensor(clean[i]).unsqueeze(0)));
    Rng rng(item_seed(substream_seed(seed, "latent-noise"), i));
    fitted.push_back(fit_length(noise[i % noise.size()], clean[i].size(), rng));
  }
  CorrelationReport report;
  for (double snr : snr_levels) {
    CorrelationEntry e;
    e.model = model_name;
    e.snr_db = snr;
    e.utterances = clean.size();
    double sum_p = 0, sum_s = 0;
    std::size_t n_p = 0, n_s = 0;
    for (std::size_t i = 0; i < clean.size(); ++i) {
      const auto mix = mix_at_snr(clean[i], fitted[i], snr).mixture;
      const auto c = correlate_latents(clean_latents[i], extractor.encode(to_tensor(mix).unsqueeze(0)));
      if (c.pearson) {
        sum_p += *c.pearson;
        ++n_p;
      }
      if (c.spearman) {
        sum_s += *c.spearman;
        ++n_s;
      }
    }
    if (n_p > 0) e.pearson = sum_p / static_cast<double>(n_p);
    if (n_s > 0) e.spearman = sum_s / static_cast<double>(n_s);
    e.defined = std::min(n_p, n_s);
    report.entries.push_back(e);
  }
  return report;
}

std::string to_string(ShiftDirection d) {
  return d == ShiftDirection::kCausal ? "causal" : "non-causal";
}

ShiftDirection shift_direction_from_string(const std::string& name) {
  if (name == "causal" || name == "right") return ShiftDirection::kCausal;
  if (name == "non-causal" || name == "noncausal" || name == "left") return ShiftDirection::kNonCausal;
  throw InvalidConfig("unknown shift direction '" + name + "'");
}

torch::Tensor shift_frames(const torch::Tensor& latent, int64_t k, ShiftDirection direction) {
  if (latent.dim() != 3) throw InvalidInput("shift_frames expects a [B, T, d] latent");
  const int64_t t = latent.size(1);
  if (k < 0) throw InvalidInput("frame shift must be non-negative");
  if (k >= t) {
    throw InvalidInput("frame shift " + std::to_string(k) + " is not smaller than T = " +
                       std::to_string(t));
  }
  if (k == 0) return latent;
  auto idx = torch::arange(t, torch::TensorOptions().dtype(torch::kLong).device(latent.device()));
  idx = direction == ShiftDirection::kCausal ? (idx - k).clamp_min(0) : (idx + k).clamp_max(t - 1);
  return latent.index_select(1, idx);
}

namespace {

void require_conditioned(const Pipeline& pipeline, const char* what) {
  if (!pipeline.conditioned()) {
    throw InvalidInput(std::string(what) + " requires a conditioned pipeline, got '" +
                       pipeline.name() + "'");
  }
}

json summary_json(const MetricsReport& r) {
  json gs = json::array();
  for (const auto& g : r.groups) {
    gs.push_back({{"group", g.group},
                  {"count", g.count},
                  {"si_sdr_db", g.si_sdr_db},
                  {"delta_fwsegsnr_db", g.delta_fwsegsnr_db},
                  {"delta_si_sdr_db", g.delta_si_sdr_db}});
  }
  return {{"config_hash", r.config_hash}, {"groups", gs}};
}

}  // namespace

json ShiftReport::to_json() const {
  json out = json::array();
  for (const auto& e : entries) {
    auto j = summary_json(e.report);
    j["shift"] = e.shift;
    out.push_back(j);
  }
  return {{"direction", to_string(direction)}, {"entries", out}};
}

std::string ShiftReport::to_csv() const {
  std::string out = "direction,shift,group,count,si_sdr_db,delta_fwsegsnr_db,delta_si_sdr_db\n";
  for (const auto& e : entries) {
    for (const auto& g : e.report.groups) {
      out += to_string(direction) + "," + std::to_string(e.shift) + "," + csv_field(g.group) + "," +
             std::to_string(g.count) + "," + num(g.si_sdr_db) + "," + num(g.delta_fwsegsnr_db) +
             "," + num(g.delta_si_sdr_db) + "\n";
    }
  }
  return out;
}

ShiftReport ablate_frame_shift(const Pipeline& pipeline, const std::vector<ManifestRow>& manifest,
                               const std::vector<int64_t>& shifts, ShiftDirection direction,
                               int jobs) {
  require_conditioned(pipeline, "frame-shift ablation");
  if (shifts.empty()) throw InvalidInput("frame-shift ablation needs at least one shift");
  ShiftReport report;
  report.direction = direction;
  for (int64_t k : shifts) {
    if (k < 0) throw InvalidInput("frame shift must be non-negative");
    EnhanceOptions opts;
    opts.latent_transform = [k, direction](const torch::Tensor& d) {
      return shift_frames(d, k, direction);
    };
    auto cfg = pipeline.config();
    cfg["ablation"] = {{"shift", k}, {"direction", to_string(direction)}};
    report.entries.push_back(
        {k, evaluate_items(
                manifest,
                [&](const ManifestRow&, const RenderedItem& item) {
                  return pipeline.enhance(item.mixture, opts);
                },
                pipeline.name(), cfg, jobs)});
  }
  return report;
}

ConditionLevel ConditionLevel::parse(const std::string& text) {
  if (text == "matching" || text == "noisy") return matching();
  if (text == "clean") return clean_only();
  if (text == "noise") return noise_only();
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size() && std::isfinite(v)) return at_snr(v);
  } catch (const std::exception&) {
  }
  throw InvalidConfig("unknown conditioning level '" + text + "'");
}

std::string ConditionLevel::label() const {
  switch (kind) {
    case Kind::kMatching:
      return "matching";
    case Kind::kCleanOnly:
      return "clean";
    case Kind::kNoiseOnly:
      return "noise";
    case Kind::kSnr:
      break;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%gdB", snr_db);
  return buf;
}

AudioBuffer conditioning_signal(const RenderedItem& item, const ConditionLevel& level) {
  switch (level.kind) {
    case ConditionLevel::Kind::kMatching:
      return item.mixture;
    case ConditionLevel::Kind::kCleanOnly:
      return item.clean;
    case ConditionLevel::Kind::kNoiseOnly:
      return item.noise;
    case ConditionLevel::Kind::kSnr:
      break;
  }
  return mix_at_snr(item.clean, item.noise, level.snr_db).mixture;
}

json ConditionReport::to_json() const {
  json out = json::array();
  for (const auto& e : entries) {
    auto j = summary_json(e.report);
    j["level"] = e.level.label();
    out.push_back(j);
  }
  return {{"entries", out}};
}

std::string ConditionReport::to_csv() const {
  std::string out = "level,group,count,si_sdr_db,delta_fwsegsnr_db,delta_si_sdr_db\n";
  for (const auto& e : entries) {
    for (const auto& g : e.report.groups) {
      out += e.level.label() + "," + csv_field(g.group) + "," + std::to_string(g.count) + "," +
             num(g.si_sdr_db) + "," + num(g.delta_fwsegsnr_db) + "," + num(g.delta_si_sdr_db) +
             "\n";
    }
  }
  return out;
}

ConditionReport ablate_condition_snr(const Pipeline& pipeline,
                                     const std::vector<ManifestRow>& manifest,
                                     const std::vector<ConditionLevel>& levels, int jobs) {
  require_conditioned(pipeline, "conditioning-SNR ablation");
  if (levels.empty()) throw InvalidInput("conditioning-SNR ablation needs at least one level");
  for (const auto& row : manifest) {
    if (row.noise_path.empty()) throw InvalidInput("item " + row.id + " has no noise stem");
  }
  ConditionReport report;
  for (const auto& level : levels) {
    auto cfg = pipeline.config();
    cfg["ablation"] = {{"condition", level.label()}};
    auto enhancer = [&](const ManifestRow&, const RenderedItem& item) {
      if (level.kind == ConditionLevel::Kind::kMatching) return pipeline.enhance(item.mixture);
      EnhanceOptions opts;
      opts.conditioning_input = to_tensor(conditioning_signal(item, level)).unsqueeze(0);
      return pipeline.enhance(item.mixture, opts);
    };
    report.entries.push_back({level, evaluate_items(manifest, enhancer, pipeline.name(), cfg, jobs)});
  }
  return report;
}

std::optional<double> percent_change(double value, double full) {
  if (full == 0.0) return std::nullopt;
  return (value - full) / std::abs(full) * 100.0;
}

json ComponentReport::to_json() const {
  json out = json::array();
  for (const auto& r : rows) {
    out.push_back({{"variant", r.variant},
                   {"delta_fwsegsnr_db", r.delta_fwsegsnr_db},
                   {"delta_si_sdr_db", r.delta_si_sdr_db},
                   {"pct_fwsegsnr", opt_json(r.pct_fwsegsnr)},
                   {"pct_si_sdr", opt_json(r.pct_si_sdr)}});
  }
  return {{"rows", out}};
}

std::string ComponentReport::to_csv() const {
  std::string out = "variant,delta_fwsegsnr_db,delta_si_sdr_db,pct_fwsegsnr,pct_si_sdr\n";
  for (const auto& r : rows) {
    out += csv_field(r.variant) + "," + num(r.delta_fwsegsnr_db) + "," + num(r.delta_si_sdr_db) +
           "," + opt_num(r.pct_fwsegsnr) + "," + opt_num(r.pct_si_sdr) + "\n";
  }
  return out;
}

ComponentReport ablate_components(
    const std::vector<std::pair<std::string, MetricsReport>>& variants) {
  if (variants.empty()) throw InvalidInput("component ablation needs the full model");
  const auto& full = variants.front().second.overall();
  ComponentReport report;
  for (const auto& [name, r] : variants) {
    const auto& m = r.overall();
    report.rows.push_back({name, m.delta_fwsegsnr_db, m.delta_si_sdr_db,
                           percent_change(m.delta_fwsegsnr_db, full.delta_fwsegsnr_db),
                           percent_change(m.delta_si_sdr_db, full.delta_si_sdr_db)});
  }
  return report;
}

namespace {

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string line_plot_svg(const std::string& title, const std::string& x_label,
                          const std::string& y_label, const std::vector<PlotSeries>& series) {
  constexpr double kW = 640, kH = 420, kL = 70, kR = 160, kT = 40, kB = 60;
  static const char* kColours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series) {
    if (s.x.size() != s.y.size()) throw InvalidInput("plot series '" + s.name + "' has ragged data");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      if (s.y[i]) {
        y0 = std::min(y0, *s.y[i]);
        y1 = std::max(y1, *s.y[i]);
      }
    }
  }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1;
  if (!std::isfinite(y0)) y0 = 0, y1 = 1;
  if (x1 == x0) x0 -= 1, x1 += 1;
  if (y1 == y0) y0 -= 1, y1 += 1;
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;
  const double pw = kW - kL - kR, ph = kH - kT - kB;
  auto sx = [&](double x) { return kL + (x - x0) / (x1 - x0) * pw; };
  auto sy = [&](double y) { return kT + (y1 - y) / (y1 - y0) * ph; };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << px(kW / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
    << xml_escape(title) << "</text>\n";
  o << "<rect x=\"" << kL << "\" y=\"" << kT << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = x0 + (x1 - x0) * i / 4, yv = y0 + (y1 - y0) * i / 4;
    o << "<line x1=\"" << px(sx(xv)) << "\" y1=\"" << px(kT + ph) << "\" x2=\"" << px(sx(xv))
      << "\" y2=\"" << px(kT + ph + 5) << "\" stroke=\"black\"/>";
    o << "<text x=\"" << px(sx(xv)) << "\" y=\"" << px(kT + ph + 18)
      << "\" text-anchor=\"middle\">" << fmt(xv) << "</text>\n";
    o << "<line x1=\"" << px(kL - 5) << "\" y1=\"" << px(sy(yv)) << "\" x2=\"" << px(kL)
      << "\" y2=\"" << px(sy(yv)) << "\" stroke=\"black\"/>";
    o << "<text x=\"" << px(kL - 8) << "\" y=\"" << px(sy(yv) + 4) << "\" text-anchor=\"end\">"
      << fmt(yv) << "</text>\n";
  }
  o << "<text x=\"" << px(kL + pw / 2) << "\" y=\"" << px(kH - 18) << "\" text-anchor=\"middle\">"
    << xml_escape(x_label) << "</text>\n";
  o << "<text transform=\"translate(18," << px(kT + ph / 2)
    << ") rotate(-90)\" text-anchor=\"middle\">" << xml_escape(y_label) << "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* colour = kColours[k % std::size(kColours)];
    std::string path;
    bool pen_down = false;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!s.y[i]) {
        pen_down = false;
        continue;
      }
      path += (pen_down ? " L " : " M ") + px(sx(s.x[i])) + " " + px(sy(*s.y[i]));
      pen_down = true;
    }
    if (!path.empty()) {
      o << "<path d=\"" << path << "\" fill=\"none\" stroke=\"" << colour
        << "\" stroke-width=\"2\"/>\n";
    }
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!s.y[i]) continue;
      o << "<circle cx=\"" << px(sx(s.x[i])) << "\" cy=\"" << px(sy(*s.y[i]))
        << "\" r=\"3\" fill=\"" << colour << "\"/>\n";
    }
    const double ly = kT + 14 + 18.0 * static_cast<double>(k);
    o << "<line x1=\"" << px(kL + pw + 12) << "\" y1=\"" << px(ly) << "\" x2=\"" << px(kL + pw + 32)
      << "\" y2=\"" << px(ly) << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>";
    o << "<text x=\"" << px(kL + pw + 38) << "\" y=\"" << px(ly + 4) << "\">" << xml_escape(s.name)
      << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw RuntimeFailure("cannot write " + path.string());
  out << text;
  if (!out) throw RuntimeFailure("failed writing " + path.string());
}

}  // namespace discogan
