// samix/labeler/features.cc

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

#include "samix/labeler/features.h"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <vector>

#include "samix/common/error.h"

namespace samix::labeler {

namespace {

std::mutex fftw_planner_mu;

double HzToMel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double MelToHz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

// mel_bins x (fft_size/2 + 1) triangular filters.
MatD MelFilterbank(const FeatureConfig &cfg) {
  const int bins = cfg.fft_size / 2 + 1;
  MatD fb = MatD::Zero(cfg.mel_bins, bins);
  const double mel_lo = HzToMel(cfg.low_hz), mel_hi = HzToMel(cfg.high_hz);
  std::vector<double> edges(cfg.mel_bins + 2);
  for (int i = 0; i < cfg.mel_bins + 2; ++i)
    edges[i] = MelToHz(mel_lo + (mel_hi - mel_lo) * i / (cfg.mel_bins + 1));
  for (int m = 0; m < cfg.mel_bins; ++m) {
    for (int k = 0; k < bins; ++k) {
      double f = double(k) * kSampleRate / cfg.fft_size;
      double w = 0.0;
      if (f > edges[m] && f <= edges[m + 1])
        w = (f - edges[m]) / (edges[m + 1] - edges[m]);
      else if (f > edges[m + 1] && f < edges[m + 2])
        w = (edges[m + 2] - f) / (edges[m + 2] - edges[m + 1]);
      fb(m, k) = w;
    }
  }
  return fb;
}

MatD Deltas(const MatD &x, int window) {
  const auto frames = x.rows();
  MatD d = MatD::Zero(frames, x.cols());
  double denom = 0.0;
  for (int n = 1; n <= window; ++n) denom += 2.0 * n * n;
  for (Eigen::Index t = 0; t < frames; ++t) {
    for (int n = 1; n <= window; ++n) {
      Eigen::Index fwd = std::min<Eigen::Index>(t + n, frames - 1);
      Eigen::Index back = std::max<Eigen::Index>(t - n, 0);
      d.row(t) += n * (x.row(fwd) - x.row(back));
    }
  }
  return d / denom;
}

}  // namespace

int FeatureConfig::FrameCount(std::size_t samples) const {
  if (samples < std::size_t(window)) return 0;
  return int((samples - window) / hop) + 1;
}

void FeatureConfig::Validate() const {
  if (window <= 0 || hop <= 0 || fft_size < window || mel_bins <= 0 || cepstra <= 0 ||
      cepstra > mel_bins || !(low_hz >= 0.0) || !(high_hz > low_hz) ||
      high_hz > kSampleRate / 2.0 || !(log_floor > 0.0) || delta_window <= 0)
    Fail(ErrorKind::kConfig, "invalid feature configuration");
}

nlohmann::json ToJson(const FeatureConfig &c) {
  return {{"window", c.window},       {"hop", c.hop},
          {"fft_size", c.fft_size},   {"mel_bins", c.mel_bins},
          {"cepstra", c.cepstra},     {"low_hz", c.low_hz},
          {"high_hz", c.high_hz},     {"preemphasis", c.preemphasis},
          {"log_floor", c.log_floor}, {"delta_window", c.delta_window}};
}

FeatureConfig FeatureConfigFromJson(const nlohmann::json &j) {
  FeatureConfig c;
  c.window = j.at("window");
  c.hop = j.at("hop");
  c.fft_size = j.at("fft_size");
  c.mel_bins = j.at("mel_bins");
  c.cepstra = j.at("cepstra");
  c.low_hz = j.at("low_hz");
  c.high_hz = j.at("high_hz");
  c.preemphasis = j.at("preemphasis");
  c.log_floor = j.at("log_floor");
  c.delta_window = j.at("delta_window");
  c.Validate();
  return c;
}

MatD FrameSpectralFeatures(const AudioClip &audio, const FeatureConfig &cfg) {
  cfg.Validate();
  if (audio.sample_rate != kSampleRate)
    Fail(ErrorKind::kFormat, "features need 16 kHz audio");
  const int frames = cfg.FrameCount(audio.size());
  if (frames < 1)
    Fail(ErrorKind::kTooShort, "clip of " + std::to_string(audio.size()) +
                                   " samples is shorter than one analysis window");

  const int bins = cfg.fft_size / 2 + 1;
  const MatD fb = MelFilterbank(cfg);
  double *in = fftw_alloc_real(cfg.fft_size);
  fftw_complex *out = fftw_alloc_complex(bins);
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mu);
    plan = fftw_plan_dft_r2c_1d(cfg.fft_size, in, out, FFTW_ESTIMATE);
  }

  std::vector<double> hamming(cfg.window);
  for (int n = 0; n < cfg.window; ++n)
    hamming[n] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * n / (cfg.window - 1));

  // Orthonormal DCT-II rows for the first `cepstra` coefficients.
  MatD dct(cfg.cepstra, cfg.mel_bins);
  for (int k = 0; k < cfg.cepstra; ++k)
    for (int m = 0; m < cfg.mel_bins; ++m)
      dct(k, m) = std::sqrt((k == 0 ? 1.0 : 2.0) / cfg.mel_bins) *
                  std::cos(std::numbers::pi * k * (m + 0.5) / cfg.mel_bins);

  MatD ceps(frames, cfg.cepstra);
  Eigen::VectorXd power(bins);
  for (int t = 0; t < frames; ++t) {
    const double *x = audio.samples.data() + std::size_t(t) * cfg.hop;
    double mean = 0.0;
    for (int n = 0; n < cfg.window; ++n) mean += x[n];
    mean /= cfg.window;
    for (int n = 0; n < cfg.fft_size; ++n) in[n] = 0.0;
    for (int n = cfg.window - 1; n >= 0; --n) {
      double prev = n > 0 ? x[n - 1] - mean : x[0] - mean;
      in[n] = ((x[n] - mean) - cfg.preemphasis * prev) * hamming[n];
    }
    fftw_execute(plan);
    for (int k = 0; k < bins; ++k) power[k] = out[k][0] * out[k][0] + out[k][1] * out[k][1];
    Eigen::VectorXd mel = fb * power;
    for (int m = 0; m < cfg.mel_bins; ++m) mel[m] = std::log(std::max(mel[m], cfg.log_floor));
    ceps.row(t) = (dct * mel).transpose();
  }
  {
    std::lock_guard lock(fftw_planner_mu);
    fftw_destroy_plan(plan);
  }
  fftw_free(in);
  fftw_free(out);

  MatD d1 = Deltas(ceps, cfg.delta_window);
  MatD d2 = Deltas(d1, cfg.delta_window);
  MatD feats(frames, cfg.dim());
  feats << ceps, d1, d2;
  return feats;
}

}  // namespace samix::labeler
