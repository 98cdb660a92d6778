// Copyright 2026 discogan contributors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "cli.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <sstream>

#include "discogan/audio.h"
#include "discogan/checkpoint.h"
#include "discogan/dataset.h"
#include "discogan/disc_models.h"
#include "discogan/errors.h"
#include "discogan/evaluation.h"
#include "discogan/random.h"
#include "discogan/toy_corpus.h"
#include "discogan/training.h"

namespace discogan::cli {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path resolve_output(const std::string& explicit_path, const std::string& command,
                        const std::string& hash) {
  if (!explicit_path.empty()) return explicit_path;
  const char* root = std::getenv(kRunRootEnv);
  const fs::path base = root && *root ? fs::path(root) : fs::path("runs");
  return base / (command + "-" + hash);
}

namespace {

// Options shared by every subcommand.
struct Common {
  uint64_t seed = 0;
  int jobs = 1;
  bool dry_run = false;
  std::string config;
  std::string out;
  CLI::Option* seed_opt = nullptr;
};

void add_common(CLI::App* sub, Common& c, bool with_out = true) {
  c.seed_opt = sub->add_option("--seed", c.seed, "Root seed");
  sub->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber);
  sub->add_flag("--dry-run", c.dry_run, "Validate the configuration and print it; write nothing");
  sub->add_option("--config", c.config, "JSON configuration file");
  if (with_out) sub->add_option("--out", c.out, "Output path");
}

json load_config(const Common& c) {
  if (c.config.empty()) return json::object();
  auto j = read_json(c.config);
  if (!j.is_object()) throw InvalidConfig("configuration file must hold a JSON object");
  return j;
}

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) throw InvalidConfig("not a number: '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(tok);
  }
  return out;
}

// "identity", a run directory or a discriminative model checkpoint.
Pipeline load_pipeline(const std::string& spec) {
  if (spec == "identity") return Pipeline::identity();
  const fs::path dir(spec);
  const auto meta = read_json(dir / "meta.json");
  const auto kind = meta.value("kind", std::string());
  if (kind == "experiment") return Pipeline::load(dir);
  if (kind == "disc_model") return Pipeline::from_disc_model(load_disc_model(dir));
  throw InvalidInput(spec + " is neither a training run nor a discriminative model");
}

void print_json(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

std::vector<ManifestRow> load_manifest(const std::string& path) {
  if (path.empty()) throw InvalidInput("--manifest is required");
  return read_manifest(path);
}

// synth-data

struct SynthArgs {
  Common c;
  std::string preset = "desk-low-snr-eval";
  std::string clean_dir, noise_dir, rir_dir;
  int utterances = 0, draws = 0;
  CLI::Option* preset_opt = nullptr;
};

int run_synth(const SynthArgs& a, std::ostream& out) {
  auto j = load_config(a.c);
  auto spec = DatasetSpec::preset(a.preset_opt->count() ? a.preset : j.value("preset", a.preset));
  spec.num_utterances = j.value("num_utterances", spec.num_utterances);
  spec.draws_per_utterance = j.value("draws_per_utterance", spec.draws_per_utterance);
  spec.snr_lo_db = j.value("snr_lo_db", spec.snr_lo_db);
  spec.snr_hi_db = j.value("snr_hi_db", spec.snr_hi_db);
  spec.max_seconds = j.value("max_seconds", spec.max_seconds);
  spec.seed = j.value("seed", spec.seed);
  if (a.utterances > 0) spec.num_utterances = a.utterances;
  if (a.draws > 0) spec.draws_per_utterance = a.draws;
  if (a.c.seed_opt->count()) spec.seed = a.c.seed;
  if (!a.rir_dir.empty()) spec.rir_dir = a.rir_dir;
  spec.validate();
  const json summary = {{"preset", spec.name},
                        {"items", spec.num_items()},
                        {"snr_db", {spec.snr_lo_db, spec.snr_hi_db}},
                        {"seed", spec.seed}};
  if (a.c.dry_run) {
    print_json(out, summary);
    return kExitOk;
  }
  if (a.clean_dir.empty() || a.noise_dir.empty()) {
    throw InvalidInput("synth-data needs --clean-dir and --noise-dir");
  }
  const auto rows = synthesize_dataset(a.clean_dir, a.noise_dir, spec, a.c.jobs);
  const auto path = resolve_output(a.c.out, "synth-data", config_hash(summary));
  const auto file = path.extension() == ".jsonl" ? path : path / "manifest.jsonl";
  write_manifest(file, rows);
  out << "wrote " << rows.size() << " rows to " << file.string() << '\n';
  return kExitOk;
}

// toy-corpus

struct ToyArgs {
  Common c;
  int clean = 10, noise = 5;
  double seconds = 2.5;
};

int run_toy(const ToyArgs& a, std::ostream& out) {
  if (a.clean <= 0 || a.noise <= 0 || !(a.seconds > 0)) {
    throw InvalidConfig("toy-corpus needs positive counts and duration");
  }
  const json summary = {{"clean", a.clean}, {"noise", a.noise}, {"seconds", a.seconds}, {"seed", a.c.seed}};
  if (a.c.dry_run) {
    print_json(out, summary);
    return kExitOk;
  }
  const auto root = resolve_output(a.c.out, "toy-corpus", config_hash(summary));
  const auto corpus = write_toy_corpus(root, a.clean, a.noise, a.seconds, a.c.seed);
  out << "clean: " << corpus.clean_dir.string() << "\nnoise: " << corpus.noise_dir.string() << '\n';
  return kExitOk;
}

// train-disc

struct TrainDiscArgs {
  Common c;
  std::string manifest, model, scale;
  int64_t steps = 0;
  int batch = 0;
  double segment = 0;
  bool single_batch = false;
};

int run_train_disc(const TrainDiscArgs& a, std::ostream& out) {
  auto j = load_config(a.c);
  if (!a.model.empty() || !a.scale.empty() || !j.contains("model")) {
    const auto kind = disc_model_kind_from_string(
        a.model.empty() ? j.value("model_kind", std::string("gcrn")) : a.model);
    const auto scale = scale_from_string(a.scale.empty() ? j.value("scale", std::string("desk")) : a.scale);
    j["model"] = (scale == Scale::kPaper ? DiscModelConfig::paper(kind) : DiscModelConfig::desk(kind)).to_json();
  }
  if (a.steps > 0) j["steps"] = a.steps;
  if (a.batch > 0) j["batch_size"] = a.batch;
  if (a.segment > 0) j["segment_seconds"] = a.segment;
  if (a.single_batch) j["single_batch"] = true;
  if (a.c.seed_opt->count()) j["seed"] = a.c.seed;
  const auto cfg = DiscTrainConfig::from_json(j);
  cfg.validate();
  if (a.c.dry_run) {
    print_json(out, cfg.to_json());
    return kExitOk;
  }
  const auto data = TrainingData::from_manifest(load_manifest(a.manifest), a.c.jobs);
  const auto dir = resolve_output(a.c.out, "train-disc", config_hash(cfg.to_json()));
  const auto result = train_discriminative(cfg, data, dir);
  out << "final loss " << result.losses.back() << "\ncheckpoint: " << dir.string() << '\n';
  return kExitOk;
}

// train-gan

struct TrainGanArgs {
  Common c;
  std::string manifest, topology, scale, checkpoint;
  int64_t steps = 0;
  int batch = 0;
  double segment = 0;
  std::string skip_mode;
  bool resume = false;
};

ExperimentConfig experiment_config(const TrainGanArgs& a) {
  auto j = load_config(a.c);
  if (!a.topology.empty()) j["topology"] = a.topology;
  if (!a.scale.empty()) j["scale"] = a.scale;
  if (!a.checkpoint.empty()) j["conditioning_checkpoint"] = a.checkpoint;
  if (a.steps > 0) j["max_steps"] = a.steps;
  if (a.batch > 0) j["batch_size"] = a.batch;
  if (a.segment > 0) j["segment_seconds"] = a.segment;
  if (a.c.seed_opt->count()) j["seed"] = a.c.seed;
  auto cfg = ExperimentConfig::from_json(j);
  if (!a.skip_mode.empty()) cfg.generator.skip_mode = skip_mode_from_string(a.skip_mode);
  cfg.validate();
  return cfg;
}

int run_train_gan(const TrainGanArgs& a, std::ostream& out) {
  const auto cfg = experiment_config(a);
  if (a.c.dry_run) {
    print_json(out, cfg.to_json());
    return kExitOk;
  }
  const auto data = TrainingData::from_manifest(load_manifest(a.manifest), a.c.jobs);
  const auto dir = resolve_output(a.c.out, "train-gan", config_hash(cfg.to_json()));
  if (a.resume && fs::exists(dir / "state" / "state.json")) {
    GanTrainer trainer(cfg, data, dir);
    trainer.load_state(dir / "state");
    trainer.run();
    trainer.train_stage2();
    trainer.save_run();
    trainer.save_state(dir / "state");
    out << "resumed to step " << trainer.state().step << '\n';
  } else {
    const auto result = train_gan(cfg, data, dir);
    out << "trained " << result.state.step << " steps (" << result.state.updates_taken
        << " discriminator updates, " << result.state.updates_skipped << " skipped)\n";
  }
  out << "run: " << dir.string() << '\n';
  return kExitOk;
}

// enhance

struct EnhanceArgs {
  Common c;
  std::string topology, checkpoint, in;
};

int run_enhance(const EnhanceArgs& a, std::ostream& out) {
  if (a.in.empty()) throw InvalidInput("enhance needs --in");
  if (a.topology != "identity" && a.checkpoint.empty()) throw InvalidInput("enhance needs --checkpoint");
  if (a.c.dry_run) {
    print_json(out, {{"topology", a.topology}, {"checkpoint", a.checkpoint}, {"in", a.in}});
    return kExitOk;
  }
  const auto pipeline = load_pipeline(a.topology == "identity" ? "identity" : a.checkpoint);
  if (!a.topology.empty() && a.topology != "identity" && pipeline.name() != a.topology) {
    const auto t = pipeline.topology();
    if (!t || *t != topology_from_string(a.topology)) {
      throw InvalidInput("checkpoint holds '" + pipeline.name() + "', not '" + a.topology + "'");
    }
  }
  const auto noisy = read_wav(a.in);
  const auto est = pipeline.enhance(noisy);
  const auto path = resolve_output(a.c.out, "enhance", hex64(fnv1a64(a.checkpoint + a.in)));
  const auto file = path.extension() == ".wav" ? path : path / "enhanced.wav";
  write_wav(file, est);
  out << "wrote " << file.string() << '\n';
  return kExitOk;
}

// evaluate

struct EvaluateArgs {
  Common c;
  std::string manifest, pipeline = "identity";
};

int run_evaluate(const EvaluateArgs& a, std::ostream& out) {
  if (a.c.dry_run) {
    print_json(out, {{"manifest", a.manifest}, {"pipeline", a.pipeline}, {"jobs", a.c.jobs}});
    return kExitOk;
  }
  const auto rows = load_manifest(a.manifest);
  const auto pipeline = load_pipeline(a.pipeline);
  const auto report = evaluate_system(pipeline, rows, a.c.jobs);
  const auto dir = resolve_output(a.c.out, "evaluate", report.config_hash);
  report.write(dir);
  out << report.groups_csv() << "report: " << dir.string() << '\n';
  return kExitOk;
}

// analyze-latents

struct LatentArgs {
  Common c;
  std::vector<std::string> models;
  std::string clean_dir, noise_dir;
  std::string snrs = "-30,-20,-10,0,10,20,30";
  int max_utterances = 10;
};

int run_latents(const LatentArgs& a, std::ostream& out) {
  const auto levels = parse_doubles(a.snrs);
  if (levels.empty()) throw InvalidConfig("--snr needs at least one level");
  if (a.models.empty()) throw InvalidInput("analyze-latents needs --model NAME=DIR");
  std::vector<std::pair<std::string, fs::path>> models;
  for (const auto& m : a.models) {
    const auto eq = m.find('=');
    if (eq == std::string::npos) {
      models.emplace_back(fs::path(m).filename().string(), m);
    } else {
      models.emplace_back(m.substr(0, eq), m.substr(eq + 1));
    }
  }
  if (a.c.dry_run) {
    json j = {{"snr_db", levels}, {"models", json::array()}};
    for (const auto& [n, p] : models) j["models"].push_back({{"name", n}, {"path", p.string()}});
    print_json(out, j);
    return kExitOk;
  }
  std::vector<AudioBuffer> clean, noise;
  for (const auto& p : list_wavs(a.clean_dir)) {
    if (static_cast<int>(clean.size()) >= a.max_utterances) break;
    clean.push_back(read_wav(p));
  }
  for (const auto& p : list_wavs(a.noise_dir)) noise.push_back(read_wav(p));
  if (clean.empty() || noise.empty()) throw InvalidInput("no WAV files found for analyze-latents");
  CorrelationReport report;
  json ident = json::array();
  for (const auto& [name, path] : models) {
    auto model = load_disc_model(path);
    set_frozen(*model, true);
    auto r = latent_correlation(*model, name, clean, noise, levels, a.c.seed);
    report.entries.insert(report.entries.end(), r.entries.begin(), r.entries.end());
    ident.push_back({{"name", name}, {"hash", read_json(path / "meta.json").value("config_hash", "")}});
  }
  const auto dir = resolve_output(a.c.out, "analyze-latents",
                                  config_hash({{"models", ident}, {"snr", levels}, {"seed", a.c.seed}}));
  write_json(dir / "correlation.json", report.to_json());
  write_text(dir / "correlation.csv", report.to_csv());
  for (const bool use_pearson : {true, false}) {
    std::vector<PlotSeries> series;
    for (const auto& [name, path] : models) {
      PlotSeries s{name, {}, {}};
      for (const auto& e : report.entries) {
        if (e.model != name) continue;
        s.x.push_back(e.snr_db);
        s.y.push_back(use_pearson ? e.pearson : e.spearman);
      }
      series.push_back(std::move(s));
    }
    const std::string which = use_pearson ? "pearson" : "spearman";
    write_text(dir / (which + ".svg"),
               line_plot_svg("Latent correlation with clean speech (" + which + ")", "SNR (dB)",
                             which, series));
  }
  out << report.to_csv() << "report: " << dir.string() << '\n';
  return kExitOk;
}

// ablate

struct ShiftArgs {
  Common c;
  std::string pipeline, manifest, shifts = "0,1,2,5,10", direction = "non-causal";
};

std::vector<int64_t> parse_shifts(const std::string& text) {
  std::vector<int64_t> out;
  for (double v : parse_doubles(text)) {
    if (v < 0 || v != std::floor(v)) throw InvalidConfig("shifts must be non-negative integers");
    out.push_back(static_cast<int64_t>(v));
  }
  if (out.empty()) throw InvalidConfig("--shifts needs at least one value");
  return out;
}

std::vector<PlotSeries> group_series(const std::vector<std::pair<double, const MetricsReport*>>& points,
                                     bool fwsegsnr) {
  std::vector<PlotSeries> series;
  if (points.empty()) return series;
  for (const auto& g : points.front().second->groups) {
    PlotSeries s{g.group, {}, {}};
    for (const auto& [x, r] : points) {
      const auto* m = r->group(g.group);
      s.x.push_back(x);
      s.y.push_back(m ? std::optional<double>(fwsegsnr ? m->delta_fwsegsnr_db : m->delta_si_sdr_db)
                      : std::nullopt);
    }
    series.push_back(std::move(s));
  }
  return series;
}

int run_shift(const ShiftArgs& a, std::ostream& out) {
  const auto shifts = parse_shifts(a.shifts);
  const auto direction = shift_direction_from_string(a.direction);
  if (a.c.dry_run) {
    print_json(out, {{"pipeline", a.pipeline}, {"shifts", shifts}, {"direction", to_string(direction)}});
    return kExitOk;
  }
  const auto pipeline = load_pipeline(a.pipeline);
  const auto report = ablate_frame_shift(pipeline, load_manifest(a.manifest), shifts, direction, a.c.jobs);
  const auto dir = resolve_output(a.c.out, "ablate-shift", config_hash(report.to_json()));
  write_json(dir / "shift.json", report.to_json());
  write_text(dir / "shift.csv", report.to_csv());
  std::vector<std::pair<double, const MetricsReport*>> points;
  for (const auto& e : report.entries) points.emplace_back(static_cast<double>(e.shift), &e.report);
  write_text(dir / "shift_fwsegsnr.svg",
             line_plot_svg("Frame shift (" + to_string(direction) + ")", "shift (frames)",
                           "delta FwSegSNR (dB)", group_series(points, true)));
  write_text(dir / "shift_si_sdr.svg",
             line_plot_svg("Frame shift (" + to_string(direction) + ")", "shift (frames)",
                           "delta SI-SDR (dB)", group_series(points, false)));
  out << report.to_csv() << "report: " << dir.string() << '\n';
  return kExitOk;
}

struct CondArgs {
  Common c;
  std::string pipeline, manifest, levels = "matching,clean,noise,-20,-10,0,10,20";
};

int run_cond(const CondArgs& a, std::ostream& out) {
  std::vector<ConditionLevel> levels;
  for (const auto& t : split(a.levels)) levels.push_back(ConditionLevel::parse(t));
  if (levels.empty()) throw InvalidConfig("--levels needs at least one value");
  if (a.c.dry_run) {
    json j = json::array();
    for (const auto& l : levels) j.push_back(l.label());
    print_json(out, {{"pipeline", a.pipeline}, {"levels", j}});
    return kExitOk;
  }
  const auto pipeline = load_pipeline(a.pipeline);
  const auto report = ablate_condition_snr(pipeline, load_manifest(a.manifest), levels, a.c.jobs);
  const auto dir = resolve_output(a.c.out, "ablate-cond-snr", config_hash(report.to_json()));
  write_json(dir / "cond_snr.json", report.to_json());
  write_text(dir / "cond_snr.csv", report.to_csv());
  out << report.to_csv() << "report: " << dir.string() << '\n';
  return kExitOk;
}

struct ComponentArgs {
  Common c;
  std::string manifest;
  std::vector<std::string> variants;
};

int run_components(const ComponentArgs& a, std::ostream& out) {
  if (a.variants.empty()) throw InvalidInput("ablate components needs --variant NAME=RUN (full first)");
  std::vector<std::pair<std::string, std::string>> variants;
  for (const auto& v : a.variants) {
    const auto eq = v.find('=');
    if (eq == std::string::npos || eq == 0) throw InvalidConfig("variant must be NAME=RUN: " + v);
    variants.emplace_back(v.substr(0, eq), v.substr(eq + 1));
  }
  if (a.c.dry_run) {
    json j = json::array();
    for (const auto& [n, p] : variants) j.push_back({{"name", n}, {"run", p}});
    print_json(out, {{"variants", j}});
    return kExitOk;
  }
  for (const auto& [n, p] : variants) {
    if (!fs::exists(fs::path(p) / "meta.json")) throw InvalidInput("missing variant checkpoint " + p);
  }
  const auto rows = load_manifest(a.manifest);
  std::vector<std::pair<std::string, MetricsReport>> reports;
  for (const auto& [name, path] : variants) {
    reports.emplace_back(name, evaluate_system(load_pipeline(path), rows, a.c.jobs));
  }
  const auto report = ablate_components(reports);
  const auto dir = resolve_output(a.c.out, "ablate-components", config_hash(report.to_json()));
  write_json(dir / "components.json", report.to_json());
  write_text(dir / "components.csv", report.to_csv());
  out << report.to_csv() << "report: " << dir.string() << '\n';
  return kExitOk;
}

}  // namespace

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"DisCoGAN speech enhancement toolkit", "discogan"};
  app.require_subcommand(1);

  SynthArgs synth;
  auto* s_synth = app.add_subcommand("synth-data", "Synthesise a mixture manifest");
  add_common(s_synth, synth.c);
  synth.preset_opt = s_synth->add_option("--preset", synth.preset, "Dataset preset")
      ->check(CLI::IsMember(DatasetSpec::preset_names()));
  s_synth->add_option("--clean-dir", synth.clean_dir, "Directory of clean WAVs");
  s_synth->add_option("--noise-dir", synth.noise_dir, "Directory of noise WAVs");
  s_synth->add_option("--rir-dir", synth.rir_dir, "Directory of impulse responses");
  s_synth->add_option("--utterances", synth.utterances, "Override the utterance count");
  s_synth->add_option("--draws", synth.draws, "Override the draws per utterance");

  ToyArgs toy;
  auto* s_toy = app.add_subcommand("toy-corpus", "Write a synthetic clean/noise corpus");
  add_common(s_toy, toy.c);
  s_toy->add_option("--clean", toy.clean, "Number of clean utterances");
  s_toy->add_option("--noise", toy.noise, "Number of noise files");
  s_toy->add_option("--seconds", toy.seconds, "Duration of each file");

  TrainDiscArgs td;
  auto* s_td = app.add_subcommand("train-disc", "Pre-train a discriminative model");
  add_common(s_td, td.c);
  s_td->add_option("--manifest", td.manifest, "Training manifest");
  s_td->add_option("--model", td.model, "gcrn or dccrn");
  s_td->add_option("--scale", td.scale, "paper or desk");
  s_td->add_option("--steps", td.steps, "Training steps");
  s_td->add_option("--batch-size", td.batch, "Batch size");
  s_td->add_option("--segment-seconds", td.segment, "Crop length");
  s_td->add_flag("--single-batch", td.single_batch, "Fit one fixed batch");

  TrainGanArgs tg;
  auto* s_tg = app.add_subcommand("train-gan", "Train a GAN topology");
  add_common(s_tg, tg.c);
  s_tg->add_option("--manifest", tg.manifest, "Training manifest");
  s_tg->add_option("--topology", tg.topology, "Topology name");
  s_tg->add_option("--scale", tg.scale, "paper or desk");
  s_tg->add_option("--checkpoint", tg.checkpoint, "Conditioning model checkpoint");
  s_tg->add_option("--steps", tg.steps, "Training steps");
  s_tg->add_option("--batch-size", tg.batch, "Batch size");
  s_tg->add_option("--segment-seconds", tg.segment, "Crop length");
  s_tg->add_option("--skip-mode", tg.skip_mode, "film, additive or none");
  s_tg->add_flag("--resume", tg.resume, "Continue from the run's saved state");

  EnhanceArgs en;
  auto* s_en = app.add_subcommand("enhance", "Enhance one WAV file");
  add_common(s_en, en.c);
  s_en->add_option("--topology", en.topology, "Expected topology, or identity");
  s_en->add_option("--checkpoint", en.checkpoint, "Run directory or discriminative model");
  s_en->add_option("--in", en.in, "Noisy WAV");

  EvaluateArgs ev;
  auto* s_ev = app.add_subcommand("evaluate", "Score a pipeline on a manifest");
  add_common(s_ev, ev.c);
  s_ev->add_option("--manifest", ev.manifest, "Evaluation manifest");
  s_ev->add_option("--pipeline", ev.pipeline, "identity, a run directory or a model directory");

  LatentArgs la;
  auto* s_la = app.add_subcommand("analyze-latents", "Latent correlation against clean speech");
  add_common(s_la, la.c);
  s_la->add_option("--model", la.models, "NAME=DIR of a discriminative model (repeatable)");
  s_la->add_option("--clean-dir", la.clean_dir, "Directory of clean WAVs");
  s_la->add_option("--noise-dir", la.noise_dir, "Directory of noise WAVs");
  s_la->add_option("--snr", la.snrs, "Comma-separated SNR levels in dB");
  s_la->add_option("--max-utterances", la.max_utterances, "Utterances to analyse");

  auto* s_ab = app.add_subcommand("ablate", "Ablation studies");
  s_ab->require_subcommand(1);
  ShiftArgs sh;
  auto* s_sh = s_ab->add_subcommand("shift", "Shift the conditioning latents in time");
  add_common(s_sh, sh.c);
  s_sh->add_option("--pipeline", sh.pipeline, "Conditioned run directory")->required();
  s_sh->add_option("--manifest", sh.manifest, "Evaluation manifest");
  s_sh->add_option("--shifts", sh.shifts, "Comma-separated frame shifts");
  s_sh->add_option("--direction", sh.direction, "causal or non-causal");
  CondArgs co;
  auto* s_co = s_ab->add_subcommand("cond-snr", "Feed the extractor re-mixed signals");
  add_common(s_co, co.c);
  s_co->add_option("--pipeline", co.pipeline, "Conditioned run directory")->required();
  s_co->add_option("--manifest", co.manifest, "Evaluation manifest");
  s_co->add_option("--levels", co.levels, "matching, clean, noise or dB values");
  ComponentArgs cp;
  auto* s_cp = s_ab->add_subcommand("components", "Compare component-removal variants");
  add_common(s_cp, cp.c);
  s_cp->add_option("--manifest", cp.manifest, "Evaluation manifest");
  s_cp->add_option("--variant", cp.variants, "NAME=RUN, the full model first (repeatable)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitValidation;
  }

  try {
    if (s_synth->parsed()) return run_synth(synth, out);
    if (s_toy->parsed()) return run_toy(toy, out);
    if (s_td->parsed()) return run_train_disc(td, out);
    if (s_tg->parsed()) return run_train_gan(tg, out);
    if (s_en->parsed()) return run_enhance(en, out);
    if (s_ev->parsed()) return run_evaluate(ev, out);
    if (s_la->parsed()) return run_latents(la, out);
    if (s_sh->parsed()) return run_shift(sh, out);
    if (s_co->parsed()) return run_cond(co, out);
    if (s_cp->parsed()) return run_components(cp, out);
  } catch (const RuntimeFailure& e) {
    err << "runtime error: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "runtime error: " << e.what() << '\n';
    return kExitRuntime;
  }
  err << app.help();
  return kExitValidation;
}

int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return cli_dispatch(args, out, err);
}

}  // namespace discogan::cli
