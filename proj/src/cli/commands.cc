// samix/cli/commands.cc

// Copyright 2026  The samix authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "samix/cli/commands.h"

#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "samix/cli/run_config.h"
#include "samix/common/digest.h"
#include "samix/common/error.h"
#include "samix/common/log.h"
#include "samix/evalkit/probe.h"
#include "samix/evalkit/report.h"
#include "samix/labeler/codebook.h"
#include "samix/mixsim/mixture.h"
#include "samix/model/checkpoint.h"
#include "samix/model/export.h"
#include "samix/model/network.h"
#include "samix/trainer/trainer.h"

namespace samix::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonFlags {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> overrides;
};

// Held for the duration of a command.
class OutLock {
 public:
  explicit OutLock(const fs::path &dir) : path_(dir / ".samix.lock") {
    fs::create_directories(dir);
    std::FILE *f = std::fopen(path_.c_str(), "wx");
    if (!f)
      Fail(ErrorKind::kLoad, "output directory is locked by another run: " + path_.string() +
                                 " (delete it if no run is active)");
    std::fclose(f);
  }
  ~OutLock() {
    std::error_code ec;
    fs::remove(path_, ec);
  }
  OutLock(const OutLock &) = delete;
  OutLock &operator=(const OutLock &) = delete;

 private:
  fs::path path_;
};

void WriteJson(const fs::path &path, const json &j) {
  std::ofstream out(path);
  out << j.dump(2) << "\n";
  if (!out) Fail(ErrorKind::kLoad, "cannot write " + path.string());
}

labeler::Codebook ObtainCodebook(const RunConfig &cfg, mixsim::Corpus &corpus) {
  if (cfg.labeler.codebook) return labeler::LoadCodebook(*cfg.labeler.codebook);
  return trainer::FitCorpusCodebook(corpus, cfg.labeler.K, cfg.labeler.seed, cfg.labeler.features);
}

model::Checkpoint LoadFor(const fs::path &path, const RunConfig &cfg,
                          const labeler::Codebook &codebook) {
  model::Checkpoint c = model::LoadCheckpoint(path, &cfg.model);
  if (!c.codebook_hash.empty() && c.codebook_hash != labeler::CodebookHash(codebook))
    Fail(ErrorKind::kCheckpoint, path.string() + " was trained against a different codebook");
  return c;
}

int Simulate(const RunConfig &cfg, const fs::path &out, int count) {
  mixsim::Corpus corpus = LoadCorpus(cfg.data);
  json items = json::array();
  for (int i = 0; i < count; ++i) {
    Rng rng = MakeRng(cfg.trainer.seed, {0x5131, std::uint64_t(i)});
    const mixsim::ScenarioSpec spec = mixsim::SampleScenario(rng, cfg.simulation);
    const mixsim::MixtureSample s = mixsim::RenderMixture(spec, corpus, rng, cfg.simulation);
    char name[32];
    std::snprintf(name, sizeof(name), "mix_%05d.wav", i);
    WriteWav(out / name, s.mixture);
    json sources = json::array();
    for (const auto &p : s.sources)
      sources.push_back({{"speaker_id", p.clip.speaker_id},
                         {"utterance_id", p.clip.utterance_id},
                         {"offset", p.offset},
                         {"gain", p.gain}});
    json item = {{"file", name},
                 {"kind", mixsim::ScenarioKindName(spec.kind)},
                 {"overlap_ratio", spec.overlap_ratio},
                 {"sir_db", spec.sir_db},
                 {"snr_db", spec.snr_db},
                 {"seconds", s.mixture.seconds()},
                 {"sources", sources}};
    if (mixsim::IsTwoSpeaker(spec.kind)) item["measured_sir_db"] = s.MeasuredSirDb();
    if (mixsim::IsNoisy(spec.kind)) item["measured_snr_db"] = s.MeasuredSnrDb();
    items.push_back(std::move(item));
  }
  WriteJson(out / "index.json", {{"config_hash", cfg.config_hash}, {"count", count}, {"items", items}});
  spdlog::info("wrote {} mixtures to {}", count, out.string());
  return kExitOk;
}

int FitLabels(const RunConfig &cfg, const fs::path &out) {
  mixsim::Corpus corpus = LoadCorpus(cfg.data);
  const labeler::Codebook cb =
      trainer::FitCorpusCodebook(corpus, cfg.labeler.K, cfg.labeler.seed, cfg.labeler.features);
  labeler::SaveCodebook(out / "codebook.bin", cb);
  fs::create_directories(out / "labels");
  for (const auto &e : corpus.manifest.entries)
    labeler::SaveLabels(out / "labels" / (e.utterance_id + ".txt"),
                        labeler::AssignLabels(corpus.audio->Get(e), cb, cfg.labeler.features));
  WriteJson(out / "labels.json", {{"config_hash", cfg.config_hash},
                                  {"K", cb.K()},
                                  {"silence_id", cb.silence_id()},
                                  {"codebook_hash", labeler::CodebookHash(cb)},
                                  {"utterances", corpus.manifest.entries.size()}});
  spdlog::info("codebook with K={} written to {}", cb.K(), (out / "codebook.bin").string());
  return kExitOk;
}

int Pretrain(const RunConfig &cfg, const fs::path &out, const std::optional<std::string> &resume,
             std::optional<std::int64_t> stop_at) {
  mixsim::Corpus corpus = LoadCorpus(cfg.data);
  trainer::DataContext ctx{&corpus, ObtainCodebook(cfg, corpus), cfg.simulation, cfg.model};
  labeler::SaveCodebook(out / "codebook.bin", ctx.codebook);
  json doc = ToJson(cfg);
  doc["config_hash"] = cfg.config_hash;
  WriteJson(out / "config.json", doc);
  trainer::RunOptions opt;
  opt.out_dir = out;
  if (resume) opt.resume_from = fs::path(*resume);
  opt.stop_at = stop_at;
  opt.config_hash = cfg.config_hash;
  const trainer::RunResult r = trainer::RunPretraining(cfg.trainer, ctx, opt);
  std::cout << "checkpoint " << r.final_checkpoint.string() << "\n";
  return kExitOk;
}

int Evaluate(const RunConfig &cfg, const fs::path &out) {
  evalkit::SuiteOptions opt;
  opt.checkpoint = cfg.eval.checkpoint;
  opt.model = cfg.model;
  opt.seed = cfg.eval.seed;
  opt.mixtures = cfg.eval.mixtures;
  opt.config_hash = cfg.config_hash;
  opt.scratch_dir = out;
  const evalkit::EvalReport report = evalkit::RunInvariantSuite(opt);
  json j = report.ToJson();

  // Learned properties need a loadable trained checkpoint.
  if (cfg.eval.checkpoint && report.Find("checkpoint_roundtrip")->passed) {
    mixsim::Corpus corpus = LoadCorpus(cfg.data);
    trainer::DataContext ctx{&corpus, ObtainCodebook(cfg, corpus), cfg.simulation, cfg.model};
    const model::Checkpoint ckpt = LoadFor(*cfg.eval.checkpoint, cfg, ctx.codebook);
    trainer::SpeakerEmbedder embedder(ctx, cfg.trainer.embedding_mode, cfg.trainer.seed);
    const auto items = evalkit::MakeEvalSet(ctx, embedder, cfg.eval.crop_seconds, cfg.eval.seed,
                                            cfg.eval.items);
    j["slot_accuracy"] = evalkit::ToJson(
        evalkit::EvaluateSlots(ckpt.params, cfg.model, ctx.codebook, items, cfg.eval.seed));
    j["order_swap_gap"] = evalkit::OrderSwapConsistency(ckpt.params, cfg.model, items);
  }
  WriteJson(out / "report.json", j);
  std::cout << report.ToTable();
  if (!report.AllRequiredPassed()) {
    std::cerr << "one or more required checks failed\n";
    return kExitRuntime;
  }
  return kExitOk;
}

int Probe(const RunConfig &cfg, const fs::path &out) {
  if (!cfg.eval.checkpoint) Fail(ErrorKind::kConfig, "probe needs eval.checkpoint");
  mixsim::Corpus corpus = LoadCorpus(cfg.data);
  trainer::DataContext ctx{&corpus, ObtainCodebook(cfg, corpus), cfg.simulation, cfg.model};
  const model::Checkpoint ckpt = LoadFor(*cfg.eval.checkpoint, cfg, ctx.codebook);
  std::optional<model::Checkpoint> base;
  if (cfg.eval.baseline_checkpoint) base = LoadFor(*cfg.eval.baseline_checkpoint, cfg, ctx.codebook);
  trainer::SpeakerEmbedder embedder(ctx, cfg.trainer.embedding_mode, cfg.trainer.seed);
  const auto items = evalkit::MakeEvalSet(ctx, embedder, cfg.eval.crop_seconds, cfg.eval.seed,
                                          cfg.eval.items, mixsim::ScenarioKind::kOverlap);
  evalkit::ProbeConfig pc = cfg.eval.probe;
  const evalkit::ProbeReport rep = evalkit::ProbeTargetLabeling(
      ckpt.params, base ? &base->params : nullptr, cfg.model, items, cfg.model.vocabulary(), pc);
  json j = evalkit::ToJson(rep);
  j["config_hash"] = cfg.config_hash;
  j["checkpoint_hash"] = Sha256File(*cfg.eval.checkpoint);
  j["items"] = items.size();
  WriteJson(out / "probe.json", j);

  if (cfg.eval.export_representations) {
    for (std::size_t i = 0; i < items.size(); ++i)
      for (std::size_t k = 0; k < items[i].embeddings.size(); ++k) {
        const auto layers = model::ExtractLayers(ckpt.params, cfg.model, items[i].samples,
                                                 &items[i].embeddings[k]);
        std::vector<MatD> as_double;
        for (const auto &l : layers) as_double.push_back(l.cast<double>());
        char stem[48];
        std::snprintf(stem, sizeof(stem), "item_%05zu_spk%zu", i, k);
        model::ExportRepresentations(out / "representations", stem, as_double,
                                     {{"speaker_id", items[i].speakers[k]},
                                      {"config_hash", cfg.config_hash}});
      }
  }
  std::printf("probe correct %.4f interferer %.4f gap %.4f\n", rep.correct.eval_accuracy,
              rep.interferer.eval_accuracy, rep.gap());
  return kExitOk;
}

}  // namespace

int Dispatch(const std::vector<std::string> &args) {
  InitLogging();
  CLI::App app{"samix: speaker-aware masked-prediction pre-training lab"};
  app.require_subcommand(1);
  CommonFlags flags;
  int count = 10;
  std::optional<std::string> resume;
  std::optional<std::int64_t> stop_at;

  auto add_common = [&](CLI::App *sub) {
    sub->add_option("--config", flags.config, "JSON config file")->required();
    sub->add_option("--out", flags.out, "output directory")->required();
    sub->add_option("--seed", flags.seed, "overrides trainer, labeler and eval seeds");
    sub->add_option("--set", flags.overrides, "key=value override of a scalar leaf");
  };
  CLI::App *simulate = app.add_subcommand("simulate", "render mixtures to WAV");
  add_common(simulate);
  simulate->add_option("--count", count, "number of mixtures")->check(CLI::PositiveNumber);
  CLI::App *fit = app.add_subcommand("fit-labels", "fit the k-means teacher codebook");
  add_common(fit);
  CLI::App *pretrain = app.add_subcommand("pretrain", "masked-prediction pre-training");
  add_common(pretrain);
  pretrain->add_option("--resume", resume, "checkpoint to resume from");
  pretrain->add_option("--stop-at", stop_at, "stop (and checkpoint) after this step");
  CLI::App *evaluate = app.add_subcommand("evaluate", "invariant suite and learned-property checks");
  add_common(evaluate);
  CLI::App *probe = app.add_subcommand("probe", "frozen-representation target probe");
  add_common(probe);
  CLI::App *version = app.add_subcommand("version", "print the version");

  std::vector<const char *> argv{"samix"};
  for (const auto &a : args) argv.push_back(a.c_str());
  try {
    app.parse(int(argv.size()), argv.data());
  } catch (const CLI::ParseError &e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << e.what() << "\n\n" << app.help();
    return kExitValidation;
  }

  if (version->parsed()) {
    std::cout << "samix " << kVersion << "\n";
    return kExitOk;
  }

  RunConfig cfg;
  try {
    cfg = LoadRunConfig(flags.config, flags.overrides, flags.seed);
  } catch (const std::exception &e) {
    std::cerr << e.what() << "\n";
    return kExitValidation;
  }
  std::cout << "config_hash " << cfg.config_hash << "\n";

  try {
    const fs::path out(flags.out);
    OutLock lock(out);
    if (simulate->parsed()) return Simulate(cfg, out, count);
    if (fit->parsed()) return FitLabels(cfg, out);
    if (pretrain->parsed()) return Pretrain(cfg, out, resume, stop_at);
    if (evaluate->parsed()) return Evaluate(cfg, out);
    if (probe->parsed()) return Probe(cfg, out);
  } catch (const Error &e) {
    std::cerr << e.what() << "\n";
    return e.kind() == ErrorKind::kConfig ? kExitValidation : kExitRuntime;
  } catch (const std::exception &e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitValidation;
}

}  // namespace samix::cli
