// samix/evalkit/suite.cc

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

#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

#include <spdlog/spdlog.h>

#include "samix/common/digest.h"
#include "samix/common/error.h"
#include "samix/evalkit/gradcheck.h"
#include "samix/evalkit/report.h"
#include "samix/labeler/codebook.h"
#include "samix/mixsim/mixture.h"
#include "samix/mixsim/synthetic.h"
#include "samix/model/checkpoint.h"
#include "samix/model/network.h"

namespace samix::evalkit {

using model::Params;

bool EvalReport::AllRequiredPassed() const {
  for (const auto &c : checks)
    if (c.required && !c.passed) return false;
  return true;
}

const CheckResult *EvalReport::Find(const std::string &id) const {
  for (const auto &c : checks)
    if (c.id == id) return &c;
  return nullptr;
}

nlohmann::json EvalReport::ToJson() const {
  nlohmann::json list = nlohmann::json::array();
  for (const auto &c : checks) {
    nlohmann::json j = {{"check_id", c.id}, {"passed", c.passed}, {"required", c.required},
                        {"details", c.details}, {"seconds", c.seconds}};
    j["value"] = c.value ? nlohmann::json(*c.value) : nlohmann::json(nullptr);
    j["tolerance"] = c.tolerance ? nlohmann::json(*c.tolerance) : nlohmann::json(nullptr);
    list.push_back(std::move(j));
  }
  return {{"checks", list}, {"environment", environment}, {"passed", AllRequiredPassed()}};
}

std::string EvalReport::ToTable() const {
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof(line), "%-28s %-6s %14s %12s  %s\n", "check", "result", "value",
                "tolerance", "details");
  os << line;
  for (const auto &c : checks) {
    std::snprintf(line, sizeof(line), "%-28s %-6s %14.6g %12.3g  ", c.id.c_str(),
                  c.passed ? "PASS" : "FAIL", c.value.value_or(NAN), c.tolerance.value_or(NAN));
    os << line << c.details << "\n";
  }
  return os.str();
}

const std::vector<std::string> &InvariantCheckIds() {
  static const std::vector<std::string> ids = {
      "norm_core",          "cln_collapse",         "masking_exact",
      "pit_free_counter",   "shuffle_integrity",    "grad_cln",
      "grad_satl",          "grad_smb_merge",       "grad_sa_loss",
      "loss_uniform",       "loss_bruteforce",      "baseline_half",
      "forward_determinism", "checkpoint_roundtrip", "label_range",
      "label_alignment",    "codebook_determinism", "nearest_centroid",
      "mix_reconstruction", "mix_ratio_fidelity",   "mix_determinism",
      "mix_constrained",    "mix_distinct_speakers"};
  return ids;
}

namespace {

MatD Gaussian(Eigen::Index rows, Eigen::Index cols, Rng &rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  MatD m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = dist(rng);
  return m;
}

std::vector<double> NoiseWave(std::size_t n, Rng &rng) {
  std::normal_distribution<double> dist(0.0, 0.1);
  std::vector<double> x(n);
  for (double &v : x) v = dist(rng);
  return x;
}

CheckResult Bound(const std::string &id, double value, double tol, std::string details = {}) {
  return {id, std::isfinite(value) && value <= tol, value, tol, std::move(details)};
}

// Plain log-sum-exp without shifting, in long double.
double OracleCe(const MatD &z, const labeler::PseudoLabelSeq &u, const model::MaskSpec &m) {
  long double acc = 0.0L;
  for (int t : m.indices) {
    long double s = 0.0L;
    for (Eigen::Index c = 0; c < z.cols(); ++c) s += std::exp((long double)z(t, c));
    acc += std::log(s) - (long double)z(t, u.labels[std::size_t(t)]);
  }
  return double(acc / (long double)m.size());
}

struct SuiteState {
  const SuiteOptions &opt;
  model::ModelConfig cfg;
  Params<float> params;
  bool loaded = false;
  std::string load_error;
  mixsim::Corpus corpus;
};

}  // namespace

EvalReport RunInvariantSuite(const SuiteOptions &opt) {
  SuiteState st{opt, opt.model, {}, false, {}, {}};
  EvalReport report;
  report.environment = {{"seed", opt.seed}, {"config_hash", opt.config_hash}};
  if (opt.checkpoint) {
    try {
      report.environment["checkpoint_hash"] = Sha256File(*opt.checkpoint);
      model::Checkpoint c = model::LoadCheckpoint(*opt.checkpoint);
      st.cfg = c.model;
      st.params = std::move(c.params);
      st.loaded = true;
    } catch (const std::exception &e) {
      st.load_error = e.what();
    }
  }
  if (!st.loaded) st.params = model::InitParams<float>(st.cfg, DeriveSeed(opt.seed, {0x1417}));
  const Params<double> pd = model::CastParams<double>(st.cfg, st.params);

  mixsim::SyntheticCorpusConfig scfg;
  scfg.seed = DeriveSeed(opt.seed, {0xc0});
  st.corpus = mixsim::MakeSyntheticCorpus(scfg);

  std::map<std::string, std::function<CheckResult()>> checks;
  const std::uint64_t seed = opt.seed;

  checks["norm_core"] = [&] {
    Rng rng = MakeRng(seed, {1});
    MatD x = Gaussian(32, 64, rng) * 3.0;
    x.array() += 1.5;
    MatD y = model::NormalizeRows(x, st.cfg.norm_epsilon);
    double worst_mean = 0.0, worst_var = 0.0;
    for (Eigen::Index t = 0; t < y.rows(); ++t) {
      const double m = y.row(t).mean();
      const double v = (y.row(t).array() - m).square().mean();
      worst_mean = std::max(worst_mean, std::abs(m));
      worst_var = std::max(worst_var, std::abs(v - 1.0));
    }
    CheckResult r = Bound("norm_core", worst_var, 1e-4);
    r.passed = r.passed && worst_mean < 1e-5;
    r.details = "max |mean| " + std::to_string(worst_mean) + ", max |var-1| reported as value";
    return r;
  };
  checks["cln_collapse"] = [&] {
    Rng rng = MakeRng(seed, {2});
    model::Layer<double> layer = pd.layers.at(std::size_t(st.cfg.satl_layer_index - 1));
    for (model::Norm<double> *n : {&layer.norm1, &layer.norm2}) {
      if (!n->cond) Fail(ErrorKind::kConfig, "adapted layer has no conditioning");
      n->cond->scale.w.setZero();
      n->cond->scale.b.setOnes();
      n->cond->shift.w.setZero();
      n->cond->shift.b.setZero();
    }
    double worst = 0.0;
    for (int trial = 0; trial < 4; ++trial) {
      MatD x = Gaussian(20, st.cfg.D, rng);
      MatD e = Gaussian(1, st.cfg.E, rng);
      MatD a = model::LayerForward(layer, x, &e, st.cfg,
                                   static_cast<model::LayerCache<double> *>(nullptr));
      MatD b = model::LayerForward(layer, x, static_cast<const MatD *>(nullptr), st.cfg,
                                   static_cast<model::LayerCache<double> *>(nullptr));
      worst = std::max(worst, (a - b).cwiseAbs().maxCoeff());
    }
    return Bound("cln_collapse", worst, 1e-6, "max |SATL - VTL| over 4 random inputs");
  };
  checks["masking_exact"] = [&] {
    Rng rng = MakeRng(seed, {3});
    MatD h = Gaussian(500, st.cfg.D, rng);
    MatD emb = Gaussian(1, st.cfg.D, rng);
    auto mask = model::SampleMask(500, 0.065, 10, rng);
    MatD out = model::ApplyMask(h, mask, emb);
    int bad = 0;
    for (int t = 0; t < 500; ++t)
      if (mask.Contains(t) ? out.row(t) != emb : out.row(t) != h.row(t)) ++bad;
    return CheckResult{"masking_exact", bad == 0, double(bad), 0.0,
                       std::to_string(mask.size()) + " of 500 frames masked"};
  };
  checks["pit_free_counter"] = [&] {
    Rng rng = MakeRng(seed, {4});
    const int items = 3;
    const auto wave = NoiseWave(16000, rng);
    const int T = st.cfg.FrameCount(wave.size());
    labeler::Codebook cb;
    cb.centroids = MatD::Zero(st.cfg.K, 39);
    model::SlotPair slots;
    for (int k = 0; k < 2; ++k) {
      slots[std::size_t(k)].embedding = model::LookupEmbedding("spk" + std::to_string(k), st.cfg.E);
      slots[std::size_t(k)].labels.labels.assign(std::size_t(T), k);
    }
    auto mask = model::MaskSpec::FromIndices(T, {0, 1, 2, 3, 4});
    model::ResetCrossEntropyEvaluations();
    for (int i = 0; i < items; ++i) model::SaItemLoss(st.params, st.cfg, wave, mask, slots);
    const double per_item = double(model::CrossEntropyEvaluations()) / items;
    return CheckResult{"pit_free_counter", per_item == 2.0, per_item, 2.0,
                       "cross-entropy evaluations per item (permutation search needs >= 4)"};
  };
  checks["shuffle_integrity"] = [&] {
    Rng rng = MakeRng(seed, {5});
    labeler::Codebook cb;
    cb.centroids = MatD::Zero(4, 39);
    int broken = 0, swapped = 0;
    const int draws = 2000;
    for (int i = 0; i < draws; ++i) {
      std::vector<model::SpeakerSlot> real(2);
      for (int k = 0; k < 2; ++k) {
        real[std::size_t(k)].embedding = model::LookupEmbedding("s" + std::to_string(k), 8);
        real[std::size_t(k)].labels.labels.assign(6, k);
      }
      auto out = model::ShuffleSlots(mixsim::ScenarioKind::kOverlap, real, rng, 0.5,
                                     RowVec<double>::Zero(8), cb, {});
      for (const auto &s : out.slots) {
        const int k = s.labels.labels[0];
        if (*s.embedding.speaker_id != "s" + std::to_string(k)) ++broken;
      }
      swapped += out.swapped;
    }
    return CheckResult{"shuffle_integrity", broken == 0, double(broken), 0.0,
                       "swap frequency " + std::to_string(double(swapped) / draws)};
  };
  auto grad = [&](const std::string &id, auto fn) {
    return [&, id, fn] {
      GradCheckOptions go;
      go.seed = seed;
      GradCheckResult small = fn(4, 8, go);
      GradCheckResult large = fn(16, 64, go);
      const GradCheckResult &w = small.max_rel_error >= large.max_rel_error ? small : large;
      return Bound(id, w.max_rel_error, 1e-4,
                   "worst " + w.worst + ", " + std::to_string(small.checked + large.checked) +
                       " entries at 4x8 and 16x64");
    };
  };
  checks["grad_cln"] = grad("grad_cln", [](int t, int d, const GradCheckOptions &go) {
    return CheckClnGradients(t, d, std::max(2, d / 2), go);
  });
  checks["grad_satl"] = grad("grad_satl", [](int t, int d, const GradCheckOptions &go) {
    return CheckSatlGradients(t, d, go);
  });
  checks["grad_smb_merge"] = grad("grad_smb_merge", [](int t, int d, const GradCheckOptions &go) {
    return CheckSmbGradients(t, d, go);
  });
  checks["grad_sa_loss"] = grad("grad_sa_loss", [](int t, int d, const GradCheckOptions &go) {
    return CheckSaLossGradients(t, d / 2 + 1, go);
  });
  checks["loss_uniform"] = [&] {
    const int T = 12;
    MatD z = MatD::Zero(T, 33);
    labeler::PseudoLabelSeq u;
    for (int t = 0; t < T; ++t) u.labels.push_back(t % 33);
    auto mask = model::MaskSpec::FromIndices(T, {1, 4, 5, 9});
    const double loss = model::SaLoss(z, z, u, u, mask).total;
    return Bound("loss_uniform", std::abs(loss - 2.0 * std::log(33.0)), 1e-9,
                 "|loss - 2 ln 33|");
  };
  checks["loss_bruteforce"] = [&] {
    Rng rng = MakeRng(seed, {6});
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const int T = 3 + trial % 5, V = 3 + trial % 4;
      MatD z1 = Gaussian(T, V, rng) * 2.0, z2 = Gaussian(T, V, rng) * 2.0;
      labeler::PseudoLabelSeq u1, u2;
      std::vector<int> idx;
      for (int t = 0; t < T; ++t) {
        u1.labels.push_back(int(UniformIndex(rng, std::size_t(V))));
        u2.labels.push_back(int(UniformIndex(rng, std::size_t(V))));
        if (t == 0 || Bernoulli(rng, 0.6)) idx.push_back(t);
      }
      auto mask = model::MaskSpec::FromIndices(T, idx);
      const double got = model::SaLoss(z1, z2, u1, u2, mask).total;
      worst = std::max(worst, std::abs(got - OracleCe(z1, u1, mask) - OracleCe(z2, u2, mask)));
    }
    return Bound("loss_bruteforce", worst, 1e-10, "20 random instances vs long-double oracle");
  };
  checks["baseline_half"] = [&] {
    Rng rng = MakeRng(seed, {7});
    MatD z = Gaussian(9, 33, rng);
    labeler::PseudoLabelSeq u;
    for (int t = 0; t < 9; ++t) u.labels.push_back(int(UniformIndex(rng, 33)));
    auto mask = model::MaskSpec::FromIndices(9, {0, 2, 3, 7});
    const double base = model::BaselineLoss(z, u, mask).ce;
    const double dup = model::SaLoss(z, z, u, u, mask).total;
    return CheckResult{"baseline_half", dup == 2.0 * base, std::abs(dup - 2.0 * base), 0.0,
                       "duplicated-slot loss vs twice the baseline loss"};
  };
  checks["forward_determinism"] = [&] {
    Rng rng = MakeRng(seed, {8});
    const auto wave = NoiseWave(16000, rng);
    const auto a = model::LookupEmbedding("a", st.cfg.E), b = model::LookupEmbedding("b", st.cfg.E);
    auto [z1, z2] = model::PredictPair(st.params, st.cfg, wave, a, b);
    auto [y1, y2] = model::PredictPair(st.params, st.cfg, wave, a, b);
    const double diff = std::max((z1 - y1).cwiseAbs().maxCoeff(), (z2 - y2).cwiseAbs().maxCoeff());
    return Bound("forward_determinism", diff, 1e-7, "two identical forward passes");
  };
  checks["checkpoint_roundtrip"] = [&] {
    if (opt.checkpoint && !st.loaded)
      return CheckResult{"checkpoint_roundtrip", false, std::nullopt, 1e-7, st.load_error};
    Rng rng = MakeRng(seed, {9});
    const auto wave = NoiseWave(16000, rng);
    const auto a = model::LookupEmbedding("a", st.cfg.E), b = model::LookupEmbedding("b", st.cfg.E);
    auto [z1, z2] = model::PredictPair(st.params, st.cfg, wave, a, b);
    model::Checkpoint c;
    c.model = st.cfg;
    c.params = st.params;
    std::filesystem::create_directories(opt.scratch_dir);
    const auto path = opt.scratch_dir / ("roundtrip-" + std::to_string(seed) + ".ckpt");
    model::SaveCheckpoint(path, c);
    model::Checkpoint back = model::LoadCheckpoint(path, &st.cfg);
    std::filesystem::remove(path);
    auto [y1, y2] = model::PredictPair(back.params, st.cfg, wave, a, b);
    const double diff = std::max((z1 - y1).cwiseAbs().maxCoeff(), (z2 - y2).cwiseAbs().maxCoeff());
    return Bound("checkpoint_roundtrip", diff, 1e-7,
                 st.loaded ? "loaded checkpoint digest verified" : "fresh parameters");
  };

  // Labeler checks on the synthetic corpus.
  std::vector<AudioClip> clips;
  for (const auto &e : st.corpus.manifest.entries) clips.push_back(st.corpus.audio->Get(e));
  auto corpus_frames = [&] {
    std::vector<MatD> parts;
    Eigen::Index rows = 0;
    for (const auto &c : clips) {
      parts.push_back(labeler::FrameSpectralFeatures(c));
      rows += parts.back().rows();
    }
    MatD all(rows, parts[0].cols());
    Eigen::Index r = 0;
    for (auto &p : parts) {
      all.middleRows(r, p.rows()) = p;
      r += p.rows();
    }
    return all;
  };
  checks["label_range"] = [&] {
    auto cb = labeler::FitCodebook(corpus_frames(), 8, seed).codebook;
    int bad = 0;
    for (const auto &c : clips)
      for (int u : labeler::AssignLabels(c, cb, cb.feature_cfg).labels)
        if (u < 0 || u >= cb.K()) ++bad;
    return CheckResult{"label_range", bad == 0, double(bad), 0.0,
                       "labels of real clips outside [0, K) (silence id never emitted)"};
  };
  checks["label_alignment"] = [&] {
    Rng rng = MakeRng(seed, {10});
    auto cb = labeler::FitCodebook(corpus_frames(), 8, seed).codebook;
    int bad = 0, tried = 0;
    for (double sec = 0.5; sec <= 10.0; sec += 0.37) {
      AudioClip c;
      c.samples = NoiseWave(std::size_t(sec * kSampleRate), rng);
      const int T = st.cfg.FrameCount(c.size());
      if (int(labeler::AssignLabels(c, cb, cb.feature_cfg, T).size()) != T) ++bad;
      ++tried;
    }
    return CheckResult{"label_alignment", bad == 0, double(bad), 0.0,
                       std::to_string(tried) + " clip lengths in [0.5 s, 10 s]"};
  };
  checks["codebook_determinism"] = [&] {
    MatD f = corpus_frames();
    auto a = labeler::FitCodebook(f, 8, seed).codebook;
    auto b = labeler::FitCodebook(f, 8, seed).codebook;
    const bool same = a.centroids == b.centroids;
    return CheckResult{"codebook_determinism", same, same ? 0.0 : 1.0, 0.0,
                       "two fits with the same seed compared bitwise"};
  };
  checks["nearest_centroid"] = [&] {
    Rng rng = MakeRng(seed, {11});
    int bad = 0;
    for (int trial = 0; trial < 50; ++trial) {
      const int K = 1 + trial % 4, T = 5 + trial % 46;
      labeler::Codebook cb;
      cb.centroids = Gaussian(K, 3, rng);
      MatD frames = Gaussian(T, 3, rng);
      auto got = labeler::AssignFrames(frames, cb);
      for (int t = 0; t < T; ++t) {
        int best = 0;
        for (int k = 1; k < K; ++k)
          if ((frames.row(t) - cb.centroids.row(k)).squaredNorm() <
              (frames.row(t) - cb.centroids.row(best)).squaredNorm())
            best = k;
        if (got.labels[std::size_t(t)] != best) ++bad;
      }
    }
    return CheckResult{"nearest_centroid", bad == 0, double(bad), 0.0,
                       "50 random instances vs brute-force argmin"};
  };

  // Mixture checks share one batch of renders.
  struct MixStats {
    double recon = 0.0, ratio = 0.0;
    int same_speaker = 0, constrained_bad = 0, big_overlap = 0, nondeterministic = 0;
    bool done = false;
  } mix;
  auto mix_stats = [&]() -> const MixStats & {
    if (mix.done) return mix;
    mixsim::SimulationConfig sim;
    for (int i = 0; i < opt.mixtures; ++i) {
      Rng rng = MakeRng(seed, {12, std::uint64_t(i)});
      Rng again = MakeRng(seed, {12, std::uint64_t(i)});
      auto spec = mixsim::SampleScenario(rng, sim);
      auto s = mixsim::RenderMixture(spec, st.corpus, rng, sim);
      auto spec2 = mixsim::SampleScenario(again, sim);
      auto s2 = mixsim::RenderMixture(spec2, st.corpus, again, sim);
      if (s.mixture.samples != s2.mixture.samples) ++mix.nondeterministic;
      mix.recon = std::max(mix.recon, s.ReconstructionError());
      if (mixsim::IsTwoSpeaker(spec.kind)) {
        mix.ratio = std::max(mix.ratio, std::abs(s.MeasuredSirDb() - spec.sir_db));
        if (s.sources[0].clip.speaker_id == s.sources[1].clip.speaker_id) ++mix.same_speaker;
        if (2 * s.OverlapSamples() >= s.sources[0].clip.size()) ++mix.big_overlap;
      }
      if (mixsim::IsNoisy(spec.kind))
        mix.ratio = std::max(mix.ratio, std::abs(s.MeasuredSnrDb() - spec.snr_db));
      Rng crng = MakeRng(seed, {13, std::uint64_t(i)});
      auto c = mixsim::RenderConstrainedMixture(st.corpus, crng, sim);
      const std::size_t p = *c.primary_index;
      if (2 * c.OverlapSamples() >= c.sources[p].clip.size() ||
          c.sources[1 - p].clip.size() >= c.sources[p].clip.size())
        ++mix.constrained_bad;
    }
    mix.done = true;
    return mix;
  };
  const std::string n_mix = std::to_string(opt.mixtures) + " seeded mixtures";
  checks["mix_reconstruction"] = [&] {
    return Bound("mix_reconstruction", mix_stats().recon, 1e-7, n_mix);
  };
  checks["mix_ratio_fidelity"] = [&] {
    return Bound("mix_ratio_fidelity", mix_stats().ratio, 0.1, "max |measured - spec| dB, " + n_mix);
  };
  checks["mix_determinism"] = [&] {
    const double bad = mix_stats().nondeterministic;
    return CheckResult{"mix_determinism", bad == 0, bad, 0.0, n_mix + " rendered twice"};
  };
  checks["mix_constrained"] = [&] {
    const auto &m = mix_stats();
    const bool ok = m.constrained_bad == 0 && m.big_overlap > 0;
    return CheckResult{"mix_constrained", ok, double(m.constrained_bad), 0.0,
                       "constrained draws with overlap >= 50%; unconstrained >= 50%: " +
                           std::to_string(m.big_overlap)};
  };
  checks["mix_distinct_speakers"] = [&] {
    const double bad = mix_stats().same_speaker;
    return CheckResult{"mix_distinct_speakers", bad == 0, bad, 0.0, n_mix};
  };

  for (const auto &id : InvariantCheckIds()) {
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult r;
    try {
      r = checks.at(id)();
    } catch (const std::exception &e) {
      r = CheckResult{id, false, std::nullopt, std::nullopt, std::string("threw: ") + e.what()};
    }
    r.id = id;
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    r.seconds = ms / 1000.0;
    spdlog::debug("check {} {} in {:.0f} ms", id, r.passed ? "passed" : "failed", ms);
    report.checks.push_back(std::move(r));
  }
  return report;
}

}  // namespace samix::evalkit
