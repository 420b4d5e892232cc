// samix/tests/unit/cli_test.cc

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

#include <fstream>

#include <gtest/gtest.h>

#include "samix/cli/commands.h"
#include "samix/cli/run_config.h"
#include "samix/common/error.h"
#include "test_util.h"

namespace samix::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using testing::TempDir;

fs::path WriteConfig(const fs::path &dir, const json &j, const std::string &name = "c.json") {
  fs::path p = dir / name;
  std::ofstream(p) << j.dump(2);
  return p;
}

int Invoke(std::vector<std::string> args, std::string *out = nullptr) {
  ::testing::internal::CaptureStdout();
  ::testing::internal::CaptureStderr();
  int rc = Dispatch(args);
  std::string o = ::testing::internal::GetCapturedStdout();
  std::string e = ::testing::internal::GetCapturedStderr();
  if (out) *out = o + e;
  return rc;
}

TEST(CliTest, VersionExitsZero) {
  std::string out;
  EXPECT_EQ(Invoke({"version"}, &out), 0);
  EXPECT_NE(out.find(kVersion), std::string::npos);
}

TEST(CliTest, UnknownCommandPrintsUsage) {
  std::string out;
  EXPECT_EQ(Invoke({"frobnicate"}, &out), 1);
  EXPECT_NE(out.find("simulate"), std::string::npos);
}

TEST(CliTest, MissingConfigIsValidationError) {
  TempDir dir("cli");
  std::string out;
  EXPECT_EQ(Invoke({"pretrain", "--config", (dir.path() / "missing.json").string(), "--out",
                 (dir.path() / "o").string()},
                &out),
            1);
  EXPECT_NE(out.find("not found"), std::string::npos);
}

TEST(CliTest, SimulateWritesMixturesAndIndex) {
  TempDir dir("cli");
  fs::path cfg = WriteConfig(dir.path(), json::object());
  fs::path out = dir.path() / "d";
  std::string text;
  ASSERT_EQ(Invoke({"simulate", "--config", cfg.string(), "--count", "10", "--out", out.string()},
                &text),
            0)
      << text;
  int wavs = 0;
  for (const auto &e : fs::directory_iterator(out)) wavs += e.path().extension() == ".wav";
  EXPECT_EQ(wavs, 10);
  json index = json::parse(std::ifstream(out / "index.json"));
  EXPECT_TRUE(index.contains("config_hash"));
  EXPECT_NE(text.find("config_hash"), std::string::npos);
  EXPECT_FALSE(fs::exists(out / ".samix.lock"));
}

TEST(CliTest, LockedOutputDirectoryIsRefused) {
  TempDir dir("cli");
  fs::path cfg = WriteConfig(dir.path(), json::object());
  fs::path out = dir.path() / "d";
  fs::create_directories(out);
  std::ofstream(out / ".samix.lock") << "";
  std::string text;
  EXPECT_NE(Invoke({"simulate", "--config", cfg.string(), "--count", "1", "--out", out.string()},
                &text),
            0);
  EXPECT_NE(text.find("locked"), std::string::npos);
}

TEST(RunConfigTest, DefaultsAreFilled) {
  RunConfig c = ValidateConfig(json::object());
  EXPECT_DOUBLE_EQ(c.trainer.alpha, 0.5);
  EXPECT_EQ(c.labeler.K, 32);
  EXPECT_EQ(c.model.K, 32);
  EXPECT_EQ(c.model.D, 64);
  EXPECT_EQ(c.config_hash.size(), 64u);
}

TEST(RunConfigTest, AlphaOutOfRangeNamesPath) {
  try {
    ValidateConfig(json{{"trainer", {{"alpha", 1.5}}}});
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::kConfig);
    EXPECT_NE(std::string(e.what()).find("trainer.alpha"), std::string::npos);
  }
}

TEST(RunConfigTest, FrameRateMismatchIsCrossSectionError) {
  try {
    ValidateConfig(json{{"labeler", {{"features", {{"hop", 160}}}}}});
    FAIL();
  } catch (const Error &e) {
    EXPECT_NE(std::string(e.what()).find("cross-section"), std::string::npos);
  }
  EXPECT_THROW(ValidateConfig(json{{"labeler", {{"K", 16}}}}), Error);
}

TEST(RunConfigTest, UnknownKeyAndTypeMismatch) {
  try {
    ValidateConfig(json{{"model", {{"depth", 3}}}});
    FAIL();
  } catch (const Error &e) {
    EXPECT_NE(std::string(e.what()).find("model.depth"), std::string::npos);
  }
  try {
    ValidateConfig(json{{"model", {{"D", "wide"}}}});
    FAIL();
  } catch (const Error &e) {
    EXPECT_NE(std::string(e.what()).find("model.D"), std::string::npos);
  }
}

TEST(RunConfigTest, HashTracksContentAndOverrides) {
  TempDir dir("cli");
  fs::path a = WriteConfig(dir.path(), json::object(), "a.json");
  fs::path b = WriteConfig(dir.path(), json{{"trainer", {{"steps", 7}, {"warmup_steps", 2}}}}, "b.json");
  RunConfig ca = LoadRunConfig(a, {}, std::nullopt);
  RunConfig cb = LoadRunConfig(b, {}, std::nullopt);
  RunConfig co = LoadRunConfig(a, {"trainer.steps=7", "trainer.warmup_steps=2"}, std::nullopt);
  EXPECT_NE(ca.config_hash, cb.config_hash);
  EXPECT_EQ(cb.config_hash, co.config_hash);
  EXPECT_EQ(co.trainer.steps, 7);
  EXPECT_EQ(LoadRunConfig(a, {}, std::nullopt).config_hash, ca.config_hash);
  RunConfig cs = LoadRunConfig(a, {}, 42);
  EXPECT_EQ(cs.trainer.seed, 42u);
  EXPECT_EQ(cs.labeler.seed, 42u);
  EXPECT_EQ(cs.eval.seed, 42u);
}

TEST(RunConfigTest, RoundTripsThroughJson) {
  RunConfig c = ValidateConfig(json{{"trainer", {{"alpha", 0.25}, {"objective", "baseline_wavlm"}}}});
  RunConfig back = ValidateConfig(ToJson(c));
  EXPECT_EQ(back.config_hash, c.config_hash);
  EXPECT_DOUBLE_EQ(back.trainer.alpha, 0.25);
}

}  // namespace
}  // namespace samix::cli
