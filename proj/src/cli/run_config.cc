// samix/cli/run_config.cc

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

#include "samix/cli/run_config.h"

#include <fstream>
#include <set>

#include "samix/common/audio.h"
#include "samix/common/digest.h"
#include "samix/common/error.h"
#include "samix/labeler/codebook.h"

namespace samix::cli {

using nlohmann::json;

namespace {

// Strict reader over one JSON object; every key must be consumed.
class Section {
 public:
  Section(const json &j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) Fail(ErrorKind::kConfig, "type mismatch at '" + path_ + "': expected an object");
  }

  template <class F>
  void Get(const char *key, F &field) {
    known_.insert(key);
    if (!j_.contains(key)) return;
    const json &v = j_.at(key);
    bool ok;
    if constexpr (std::is_same_v<F, bool>) ok = v.is_boolean();
    else if constexpr (std::is_integral_v<F>) ok = v.is_number_integer();
    else if constexpr (std::is_floating_point_v<F>) ok = v.is_number();
    else if constexpr (std::is_same_v<F, std::string>) ok = v.is_string();
    else if constexpr (std::is_same_v<F, std::optional<std::filesystem::path>>) ok = v.is_string() || v.is_null();
    else if constexpr (std::is_same_v<F, mixsim::Range>) ok = v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number();
    if (!ok) Fail(ErrorKind::kConfig, "type mismatch at '" + Path(key) + "'");
    if constexpr (std::is_same_v<F, std::optional<std::filesystem::path>>) {
      if (v.is_null()) field.reset();
      else field = std::filesystem::path(v.get<std::string>());
    } else if constexpr (std::is_same_v<F, mixsim::Range>) {
      field = {v[0].get<double>(), v[1].get<double>()};
    } else {
      v.get_to(field);
    }
  }

  Section Sub(const char *key) {
    known_.insert(key);
    static const json empty = json::object();
    return Section(j_.contains(key) ? j_.at(key) : empty, Path(key));
  }

  const json &raw(const char *key) {
    known_.insert(key);
    return j_.at(key);
  }
  bool has(const char *key) const { return j_.contains(key); }

  void Finish() const {
    for (const auto &[key, value] : j_.items())
      if (!known_.count(key)) Fail(ErrorKind::kConfig, "unknown key '" + Path(key) + "'");
  }

  std::string Path(const std::string &key) const { return path_ + "." + key; }

 private:
  const json &j_;
  std::string path_;
  std::set<std::string> known_;
};

json PathOrNull(const std::optional<std::filesystem::path> &p) {
  return p ? json(p->string()) : json(nullptr);
}

mixsim::SimulationConfig ParseSimulation(Section s) {
  mixsim::SimulationConfig c;
  if (s.has("priors")) {
    Section p = s.Sub("priors");
    for (int k = 0; k < mixsim::kScenarioKindCount; ++k) {
      const std::string name(mixsim::ScenarioKindName(mixsim::ScenarioKind(k)));
      p.Get(name.c_str(), c.priors[std::size_t(k)]);
    }
    p.Finish();
  }
  s.Get("overlap_ratio", c.overlap_ratio);
  s.Get("sir_db", c.sir_db);
  s.Get("snr_db", c.snr_db);
  s.Get("clip_peak", c.clip_peak);
  s.Finish();
  try {
    c.Validate();
  } catch (const Error &e) {
    Fail(ErrorKind::kConfig, std::string("simulation: ") + e.what());
  }
  return c;
}

labeler::FeatureConfig ParseFeatures(Section s) {
  labeler::FeatureConfig c;
  s.Get("window", c.window);
  s.Get("hop", c.hop);
  s.Get("fft_size", c.fft_size);
  s.Get("mel_bins", c.mel_bins);
  s.Get("cepstra", c.cepstra);
  s.Get("low_hz", c.low_hz);
  s.Get("high_hz", c.high_hz);
  s.Get("preemphasis", c.preemphasis);
  s.Get("log_floor", c.log_floor);
  s.Get("delta_window", c.delta_window);
  s.Finish();
  try {
    c.Validate();
  } catch (const Error &e) {
    Fail(ErrorKind::kConfig, std::string("labeler.features: ") + e.what());
  }
  return c;
}

}  // namespace

nlohmann::json ToJson(const mixsim::SimulationConfig &c) {
  json priors = json::object();
  for (int k = 0; k < mixsim::kScenarioKindCount; ++k)
    priors[std::string(mixsim::ScenarioKindName(mixsim::ScenarioKind(k)))] = c.priors[std::size_t(k)];
  return {{"priors", priors},
          {"overlap_ratio", {c.overlap_ratio.lo, c.overlap_ratio.hi}},
          {"sir_db", {c.sir_db.lo, c.sir_db.hi}},
          {"snr_db", {c.snr_db.lo, c.snr_db.hi}},
          {"clip_peak", c.clip_peak}};
}

nlohmann::json ToJson(const mixsim::SyntheticCorpusConfig &c) {
  return {{"speakers", c.speakers},
          {"utterances_per_speaker", c.utterances_per_speaker},
          {"units_per_speaker", c.units_per_speaker},
          {"min_seconds", c.min_seconds},
          {"max_seconds", c.max_seconds},
          {"min_unit_seconds", c.min_unit_seconds},
          {"max_unit_seconds", c.max_unit_seconds},
          {"noise_clips", c.noise_clips},
          {"noise_seconds", c.noise_seconds},
          {"seed", c.seed}};
}

RunConfig ValidateConfig(const nlohmann::json &document) {
  if (!document.is_object()) Fail(ErrorKind::kConfig, "config document must be a JSON object");
  for (const auto &[key, value] : document.items()) {
    static const std::set<std::string> sections = {"data",  "simulation", "labeler",
                                                   "model", "trainer",    "eval"};
    if (!sections.count(key)) Fail(ErrorKind::kConfig, "unknown key '" + key + "'");
  }
  static const json empty = json::object();
  auto section = [&](const char *name) -> const json & {
    return document.contains(name) ? document.at(name) : empty;
  };
  RunConfig c;

  {
    Section d(section("data"), "data");
    d.Get("speech_manifest", c.data.speech_manifest);
    d.Get("noise_manifest", c.data.noise_manifest);
    Section s = d.Sub("synthetic");
    auto &y = c.data.synthetic;
    s.Get("speakers", y.speakers);
    s.Get("utterances_per_speaker", y.utterances_per_speaker);
    s.Get("units_per_speaker", y.units_per_speaker);
    s.Get("min_seconds", y.min_seconds);
    s.Get("max_seconds", y.max_seconds);
    s.Get("min_unit_seconds", y.min_unit_seconds);
    s.Get("max_unit_seconds", y.max_unit_seconds);
    s.Get("noise_clips", y.noise_clips);
    s.Get("noise_seconds", y.noise_seconds);
    s.Get("seed", y.seed);
    s.Finish();
    d.Finish();
    if (y.speakers < 2) Fail(ErrorKind::kConfig, "data.synthetic.speakers must be >= 2");
    if (y.utterances_per_speaker < 2)
      Fail(ErrorKind::kConfig, "data.synthetic.utterances_per_speaker must be >= 2");
    if (!(y.min_seconds > 0.0 && y.min_seconds <= y.max_seconds))
      Fail(ErrorKind::kConfig, "data.synthetic seconds range is invalid");
    if (c.data.noise_manifest && !c.data.speech_manifest)
      Fail(ErrorKind::kConfig, "data.noise_manifest needs data.speech_manifest");
  }

  c.simulation = ParseSimulation(Section(section("simulation"), "simulation"));

  {
    Section l(section("labeler"), "labeler");
    l.Get("K", c.labeler.K);
    l.Get("seed", c.labeler.seed);
    l.Get("codebook", c.labeler.codebook);
    c.labeler.features = ParseFeatures(l.Sub("features"));
    l.Finish();
    if (c.labeler.K < 1) Fail(ErrorKind::kConfig, "labeler.K must be >= 1");
  }

  c.model = model::ModelConfigFromJson(section("model"));
  c.trainer = trainer::TrainConfigFromJson(section("trainer"));

  {
    Section e(section("eval"), "eval");
    e.Get("seed", c.eval.seed);
    e.Get("items", c.eval.items);
    e.Get("crop_seconds", c.eval.crop_seconds);
    e.Get("mixtures", c.eval.mixtures);
    e.Get("checkpoint", c.eval.checkpoint);
    e.Get("baseline_checkpoint", c.eval.baseline_checkpoint);
    e.Get("export_representations", c.eval.export_representations);
    Section p = e.Sub("probe");
    p.Get("epochs", c.eval.probe.epochs);
    p.Get("learning_rate", c.eval.probe.learning_rate);
    p.Get("seed", c.eval.probe.seed);
    p.Get("train_fraction", c.eval.probe.train_fraction);
    p.Finish();
    e.Finish();
    if (c.eval.items < 1) Fail(ErrorKind::kConfig, "eval.items must be >= 1");
    if (c.eval.mixtures < 1) Fail(ErrorKind::kConfig, "eval.mixtures must be >= 1");
    if (!(c.eval.crop_seconds > 0.0)) Fail(ErrorKind::kConfig, "eval.crop_seconds must be positive");
    if (c.eval.probe.epochs < 1) Fail(ErrorKind::kConfig, "eval.probe.epochs must be >= 1");
    if (!(c.eval.probe.train_fraction > 0.0 && c.eval.probe.train_fraction <= 1.0))
      Fail(ErrorKind::kConfig, "eval.probe.train_fraction must lie in (0, 1]");
  }

  // Cross-section consistency.
  const double model_rate = double(kSampleRate) / c.model.total_stride();
  if (c.labeler.features.hop != c.model.total_stride())
    Fail(ErrorKind::kConfig, "cross-section mismatch: labeler frame rate " +
                                 std::to_string(c.labeler.features.frame_rate()) +
                                 " Hz != model frame rate " + std::to_string(model_rate) + " Hz");
  if (c.labeler.K != c.model.K)
    Fail(ErrorKind::kConfig, "cross-section mismatch: labeler.K = " + std::to_string(c.labeler.K) +
                                 " but model.K = " + std::to_string(c.model.K));
  if (c.model.FrameCount(c.trainer.crop_samples()) < 1)
    Fail(ErrorKind::kConfig, "trainer.crop_seconds is shorter than one model frame");
  if (c.model.FrameCount(std::size_t(c.eval.crop_seconds * kSampleRate)) < 1)
    Fail(ErrorKind::kConfig, "eval.crop_seconds is shorter than one model frame");
  if (c.labeler.codebook && std::filesystem::exists(*c.labeler.codebook)) {
    const labeler::Codebook cb = labeler::LoadCodebook(*c.labeler.codebook);
    if (cb.vocabulary() != c.model.vocabulary())
      Fail(ErrorKind::kConfig, "cross-section mismatch: codebook vocabulary " +
                                   std::to_string(cb.vocabulary()) + " != model vocabulary " +
                                   std::to_string(c.model.vocabulary()));
    if (!(cb.feature_cfg == c.labeler.features))
      Fail(ErrorKind::kConfig, "cross-section mismatch: codebook features differ from labeler.features");
  }

  c.config_hash = Sha256Hex(ToJson(c).dump());
  return c;
}

nlohmann::json ToJson(const RunConfig &c) {
  return {{"data",
           {{"speech_manifest", PathOrNull(c.data.speech_manifest)},
            {"noise_manifest", PathOrNull(c.data.noise_manifest)},
            {"synthetic", ToJson(c.data.synthetic)}}},
          {"simulation", ToJson(c.simulation)},
          {"labeler",
           {{"K", c.labeler.K},
            {"seed", c.labeler.seed},
            {"codebook", PathOrNull(c.labeler.codebook)},
            {"features", labeler::ToJson(c.labeler.features)}}},
          {"model", model::ToJson(c.model)},
          {"trainer", trainer::ToJson(c.trainer)},
          {"eval",
           {{"seed", c.eval.seed},
            {"items", c.eval.items},
            {"crop_seconds", c.eval.crop_seconds},
            {"mixtures", c.eval.mixtures},
            {"checkpoint", PathOrNull(c.eval.checkpoint)},
            {"baseline_checkpoint", PathOrNull(c.eval.baseline_checkpoint)},
            {"export_representations", c.eval.export_representations},
            {"probe",
             {{"epochs", c.eval.probe.epochs},
              {"learning_rate", c.eval.probe.learning_rate},
              {"seed", c.eval.probe.seed},
              {"train_fraction", c.eval.probe.train_fraction}}}}}};
}

void ApplyOverride(nlohmann::json &document, const std::string &assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    Fail(ErrorKind::kConfig, "override '" + assignment + "' must look like key=value");
  const std::string key = assignment.substr(0, eq), text = assignment.substr(eq + 1);
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  if (value.is_structured())
    Fail(ErrorKind::kConfig, "override of '" + key + "' must be a scalar");
  json *node = &document;
  std::size_t pos = 0;
  while (true) {
    const auto dot = key.find('.', pos);
    const std::string part = key.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
    if (part.empty()) Fail(ErrorKind::kConfig, "override key '" + key + "' is malformed");
    if (!node->is_object()) Fail(ErrorKind::kConfig, "override key '" + key + "' crosses a scalar");
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    node = &(*node)[part];
    if (node->is_null()) *node = json::object();
    pos = dot + 1;
  }
}

RunConfig LoadRunConfig(const std::filesystem::path &path,
                        const std::vector<std::string> &overrides,
                        std::optional<std::uint64_t> seed) {
  std::ifstream in(path);
  if (!in) Fail(ErrorKind::kLoad, "config file not found: " + path.string());
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded()) Fail(ErrorKind::kParse, "config file is not valid JSON: " + path.string());
  for (const auto &o : overrides) ApplyOverride(doc, o);
  if (seed) {
    const std::string s = std::to_string(*seed);
    ApplyOverride(doc, "trainer.seed=" + s);
    ApplyOverride(doc, "labeler.seed=" + s);
    ApplyOverride(doc, "eval.seed=" + s);
  }
  return ValidateConfig(doc);
}

mixsim::Corpus LoadCorpus(const DataConfig &data) {
  if (!data.speech_manifest) return mixsim::MakeSyntheticCorpus(data.synthetic);
  mixsim::Corpus corpus;
  corpus.manifest = data.noise_manifest ? mixsim::LoadManifest(*data.speech_manifest, *data.noise_manifest)
                                        : mixsim::LoadManifest(*data.speech_manifest);
  corpus.audio = std::make_shared<mixsim::WavAudioSource>();
  return corpus;
}

}  // namespace samix::cli
