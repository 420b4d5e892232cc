// samix/trainer/trainer.cc

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

#include "samix/trainer/trainer.h"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "samix/common/error.h"
#include "samix/common/log.h"
#include "samix/model/network.h"

namespace samix::trainer {

using model::Params;

AdamState MakeAdamState(const model::ModelConfig &cfg) {
  return {model::AllocateParams<float>(cfg), model::AllocateParams<float>(cfg), 0};
}

double LearningRate(const TrainConfig &cfg, std::int64_t step) {
  if (step <= cfg.warmup_steps && cfg.warmup_steps > 0)
    return cfg.learning_rate * double(step) / double(cfg.warmup_steps);
  const std::int64_t span = cfg.steps - cfg.warmup_steps;
  if (span <= 0) return 0.0;
  return cfg.learning_rate * std::max(0.0, double(cfg.steps - step) / double(span));
}

nlohmann::json ToJson(const StepMetrics &m) {
  nlohmann::json j = {{"step", m.step}, {"loss", m.loss}};
  if (m.two_slots) {
    j["ce_slot1"] = m.ce[0];
    j["ce_slot2"] = m.ce[1];
    j["acc_slot1"] = m.accuracy[0];
    j["acc_slot2"] = m.accuracy[1];
  } else {
    j["ce"] = m.ce[0];
    j["acc"] = m.accuracy[0];
  }
  j["grad_norm"] = m.grad_norm;
  j["lr"] = m.lr;
  return j;
}

StepMetrics BatchGradient(const Batch &batch, const Params<float> &params,
                          const model::ModelConfig &model_cfg, Objective objective,
                          Params<float> &grads) {
  model::ZeroParams(grads);
  StepMetrics m;
  m.step = batch.step;
  m.two_slots = objective == Objective::kSaWavlm;
  const double scale = 1.0 / double(batch.items.size());
  for (const auto &bi : batch.items) {
    if (objective == Objective::kSaWavlm) {
      auto r = model::SaItemLoss(params, model_cfg, bi.item->samples, bi.mask, bi.slots, &grads,
                                 scale);
      m.loss += r.total * scale;
      for (int k = 0; k < 2; ++k) {
        m.ce[k] += r.ce[k] * scale;
        m.accuracy[k] += r.accuracy[k] * scale;
      }
    } else {
      const auto &labels = bi.item->labels.at(*bi.item->primary_index);
      auto r = model::BaselineItemLoss(params, model_cfg, bi.item->samples, bi.mask, labels,
                                       &grads, scale);
      m.loss += r.ce * scale;
      m.ce[0] += r.ce * scale;
      m.accuracy[0] += r.accuracy * scale;
    }
  }
  m.grad_norm = model::GlobalNorm(grads);
  return m;
}

StepMetrics TrainStep(const Batch &batch, Params<float> &params, AdamState &opt,
                      const model::ModelConfig &model_cfg, const TrainConfig &cfg, double lr) {
  Params<float> grads = model::AllocateParams<float>(model_cfg);
  StepMetrics m = BatchGradient(batch, params, model_cfg, cfg.objective, grads);
  m.lr = lr;
  if (!std::isfinite(m.loss) || !std::isfinite(m.grad_norm)) {
    std::ostringstream os;
    os << "non-finite " << (std::isfinite(m.loss) ? "gradient" : "loss") << " at step "
       << batch.step << "; batch items:";
    for (const auto &bi : batch.items) os << " {" << bi.item->Describe() << "}";
    Fail(ErrorKind::kNumeric, os.str());
  }
  double clip = 1.0;
  if (cfg.max_grad_norm > 0.0 && m.grad_norm > cfg.max_grad_norm)
    clip = cfg.max_grad_norm / m.grad_norm;

  ++opt.t;
  const double b1 = cfg.adam_beta1, b2 = cfg.adam_beta2;
  const double c1 = 1.0 - std::pow(b1, double(opt.t));
  const double c2 = 1.0 - std::pow(b2, double(opt.t));
  const float step_size = float(lr / c1);
  const float eps = float(cfg.adam_epsilon);
  model::VisitTensors(
      [&](const std::string &, MatF &p, MatF &g, MatF &mm, MatF &vv) {
        auto ga = (g.array() * float(clip)).eval();
        mm.array() = float(b1) * mm.array() + float(1.0 - b1) * ga;
        vv.array() = float(b2) * vv.array() + float(1.0 - b2) * ga.square();
        p.array() -= step_size * mm.array() / ((vv.array() / float(c2)).sqrt() + eps);
      },
      params, grads, opt.m, opt.v);
  return m;
}

std::filesystem::path CheckpointPath(const std::filesystem::path &dir, std::int64_t step) {
  std::ostringstream os;
  os << "checkpoint-" << std::setw(6) << std::setfill('0') << step << ".ckpt";
  return dir / os.str();
}

std::uint64_t InitSeed(const TrainConfig &cfg) { return DeriveSeed(cfg.seed, {0x1417}); }

namespace {

model::Checkpoint MakeCheckpoint(const TrainConfig &cfg, const DataContext &ctx,
                                 const Params<float> &params, const AdamState &opt,
                                 std::int64_t step, const std::string &config_hash) {
  model::Checkpoint c;
  c.model = ctx.model;
  c.step = step;
  c.alpha = cfg.alpha;
  c.codebook_hash = labeler::CodebookHash(ctx.codebook);
  c.meta = {{"trainer", ToJson(cfg)},
            {"objective", ObjectiveName(cfg.objective)},
            {"adam_t", opt.t}};
  if (!config_hash.empty()) c.meta["config_hash"] = config_hash;
  c.params = params;
  c.adam_m = opt.m;
  c.adam_v = opt.v;
  return c;
}

}  // namespace

RunResult RunPretraining(const TrainConfig &cfg, const DataContext &ctx, const RunOptions &opt) {
  cfg.Validate();
  ctx.model.Validate();
  std::filesystem::create_directories(opt.out_dir);
  const std::string codebook_hash = labeler::CodebookHash(ctx.codebook);

  RunResult result;
  AdamState adam = MakeAdamState(ctx.model);
  std::int64_t start = 0;
  if (opt.resume_from) {
    model::Checkpoint c = model::LoadCheckpoint(*opt.resume_from, &ctx.model);
    if (!c.meta.contains("trainer") || TrainConfigFromJson(c.meta.at("trainer")) != cfg)
      Fail(ErrorKind::kCheckpoint, "refusing to resume: trainer config differs from " +
                                       opt.resume_from->string());
    if (c.codebook_hash != codebook_hash)
      Fail(ErrorKind::kCheckpoint, "refusing to resume: codebook differs from " +
                                       opt.resume_from->string());
    if (!c.adam_m) Fail(ErrorKind::kCheckpoint, "refusing to resume: no optimizer state");
    result.params = std::move(c.params);
    adam.m = std::move(*c.adam_m);
    adam.v = std::move(*c.adam_v);
    adam.t = c.meta.value("adam_t", c.step);
    start = c.step;
  } else {
    result.params = model::InitParams<float>(ctx.model, InitSeed(cfg));
  }

  const std::int64_t last = opt.stop_at ? std::min(*opt.stop_at, cfg.steps) : cfg.steps;
  std::ofstream log;
  if (opt.write_log) {
    log.open(opt.out_dir / "metrics.ndjson", std::ios::app);
    if (!log) Fail(ErrorKind::kLoad, "cannot open metrics log in " + opt.out_dir.string());
  }
  BatchAssembler assembler(ctx, cfg);
  for (std::int64_t step = start + 1; step <= last; ++step) {
    Batch batch = assembler.Assemble(step);
    StepMetrics m = TrainStep(batch, result.params, adam, ctx.model, cfg, LearningRate(cfg, step));
    result.metrics.push_back(m);
    if (log.is_open()) log << ToJson(m).dump() << "\n" << std::flush;
    if (step % 50 == 0 || step == last)
      spdlog::info("step {} loss {:.4f} grad_norm {:.3f} lr {:.2e}", step, m.loss, m.grad_norm,
                   m.lr);
    if (step % cfg.checkpoint_every == 0 && step != last)
      model::SaveCheckpoint(CheckpointPath(opt.out_dir, step),
                            MakeCheckpoint(cfg, ctx, result.params, adam, step, opt.config_hash));
  }
  const std::int64_t final_step = std::max(start, last);
  result.final_checkpoint = CheckpointPath(opt.out_dir, final_step);
  model::SaveCheckpoint(result.final_checkpoint,
                        MakeCheckpoint(cfg, ctx, result.params, adam, final_step, opt.config_hash));
  return result;
}

}  // namespace samix::trainer
