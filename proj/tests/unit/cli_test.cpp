// Copyright 2026 The augimpact Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sstream>

#include <gtest/gtest.h>

#include "augimpact/augment.hpp"
#include "augimpact/report.hpp"
#include "json.hpp"
#include "support/temp_dir.hpp"

namespace augimpact {
namespace {

using testing_support::kFixtures;
using testing_support::TempDir;

struct RunCli {
  int code;
  std::string out;
  std::string err;
};

RunCli run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli_main(args, out, err);
  return {code, out.str(), err.str()};
}

std::string read_text(const std::filesystem::path& p) {
  const auto bytes = read_file_bytes(p);
  return {bytes.begin(), bytes.end()};
}

void write_text(const std::filesystem::path& p, const std::string& text) {
  write_file_bytes(p, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::string manifest(const char* run_name) {
  return (kFixtures / "e2e" / run_name / "manifest.json").string();
}

TEST(Cli, NoArgsPrintsUsage) {
  const RunCli r = run({});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
  EXPECT_TRUE(r.out.empty());
}

TEST(Cli, UnknownSubcommand) {
  const RunCli r = run({"frobnicate"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
}

TEST(Cli, HelpSucceeds) {
  const RunCli r = run({"--help"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("impact"), std::string::npos);
}

TEST(Cli, MissingRequiredFlagIsUsageError) {
  EXPECT_EQ(run({"impact", "--none1", "a.json"}).code, kExitUsage);
  EXPECT_EQ(run({"render", "--kind", "pie", "--in", "a", "--out", "b"}).code, kExitUsage);
}

TEST(Cli, MissingManifestIsDataError) {
  TempDir dir;
  const RunCli r = run({"impact", "--none1", (dir / "nope.json").string(), "--none2", manifest("none2"),
                     "--aug", manifest("aug"), "--out", (dir / "o.csv").string()});
  EXPECT_EQ(r.code, kExitData);
  EXPECT_NE(r.err.find("nope.json"), std::string::npos);
  EXPECT_FALSE(std::filesystem::exists(dir / "o.csv"));
}

TEST(Cli, DatasetInfo) {
  const RunCli r = run({"dataset-info", "--dataset", (kFixtures / "cifar/two_records.bin").string()});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("records: 2"), std::string::npos);
  EXPECT_NE(r.out.find("class 7: 1"), std::string::npos);
}

TEST(Cli, DatasetInfoRejectsMalformedFile) {
  EXPECT_EQ(run({"dataset-info", "--dataset", (kFixtures / "npy/f8_2x2.npy").string()}).code,
            kExitData);
}

TEST(Cli, AugmentWritesPlanarSamples) {
  TempDir dir;
  write_text(dir / "spec.json", R"({"kind": "hflip", "probability": 1, "seed": 3})");
  const auto out_dir = dir / "aug";
  const RunCli r = run({"augment", "--dataset", (kFixtures / "cifar/two_records.bin").string(), "--spec",
                     (dir / "spec.json").string(), "--out", out_dir.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto bin = read_file_bytes(out_dir / "samples.bin");
  ASSERT_EQ(bin.size(), 2 * kCifarImageBytes);
  const Dataset ds = parse_cifar10_bin(read_file_bytes(kFixtures / "cifar/two_records.bin"));
  for (std::size_t i = 0; i < 2; ++i) {
    const ImageTensor flipped = horizontal_flip(ds.images[i]);
    for (std::size_t c = 0; c < 3; ++c) {
      for (std::size_t p = 0; p < 1024; ++p) {
        ASSERT_EQ(bin[i * kCifarImageBytes + c * 1024 + p], flipped.data()[p * 3 + c]);
      }
    }
  }
  const auto doc = nlohmann::json::parse(read_text(out_dir / "samples.json"));
  EXPECT_EQ(doc["count"], 2);
  EXPECT_EQ(doc["seed"], 3);
  EXPECT_EQ(doc["layout"], "planar");
  EXPECT_EQ(doc["digest"].get<std::string>() + "\n", r.out);
}

TEST(Cli, AugmentIsSeededAndSeedOverrides) {
  TempDir dir;
  write_text(dir / "spec.json", R"({"kind": "cutout", "seed": 1})");
  auto digest = [&](std::vector<std::string> extra) {
    std::vector<std::string> args{"augment", "--dataset", (kFixtures / "cifar/two_records.bin").string(),
                                  "--spec", (dir / "spec.json").string(), "--out", (dir / "o").string()};
    args.insert(args.end(), extra.begin(), extra.end());
    const RunCli r = run(args);
    EXPECT_EQ(r.code, kExitOk) << r.err;
    return r.out;
  };
  EXPECT_EQ(digest({}), digest({}));
  EXPECT_EQ(digest({}), digest({"--seed", "1"}));
  EXPECT_NE(digest({"--seed", "1"}), digest({"--seed", "2"}));
}

TEST(Cli, CkaWritesMatrix) {
  TempDir dir;
  const RunCli r = run({"cka", "--a", manifest("none1"), "--b", manifest("aug"), "--out",
                     (dir / "m.csv").string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const CkaMatrix m = parse_cka_csv(read_text(dir / "m.csv"));
  EXPECT_EQ(m.rows(), 4u);
  EXPECT_EQ(m.cols(), 4u);
  const RunCli mb = run({"cka", "--a", manifest("none1"), "--b", manifest("none1"), "--minibatch", "16",
                      "--passes", "2", "--kernel", "rbf", "--out", (dir / "mb.csv").string()});
  ASSERT_EQ(mb.code, kExitOk) << mb.err;
  const CkaMatrix self = parse_cka_csv(read_text(dir / "mb.csv"));
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(self.at(i, i), 1.0, 1e-9);
}

TEST(Cli, FullPipeline) {
  TempDir dir;
  const RunCli impact = run({"impact", "--none1", manifest("none1"), "--none2", manifest("none2"), "--aug",
                          manifest("aug"), "--out", (dir / "impact.csv").string(), "--summary",
                          (dir / "summary.csv").string()});
  ASSERT_EQ(impact.code, kExitOk) << impact.err;
  const auto curves = parse_impact_csv(read_text(dir / "impact.csv"));
  ASSERT_EQ(curves.size(), 1u);
  EXPECT_EQ(curves[0].augmentation_id, "synthetic_aug");
  EXPECT_NE(read_text(dir / "summary.csv").find("synthetic_aug,91.5,"), std::string::npos);

  const RunCli curves_svg = run({"render", "--kind", "curves", "--in", (dir / "impact.csv").string(),
                              "--out", (dir / "curves.svg").string()});
  ASSERT_EQ(curves_svg.code, kExitOk) << curves_svg.err;
  const RunCli cka = run({"cka", "--a", manifest("none1"), "--b", manifest("none2"), "--out",
                       (dir / "m.csv").string()});
  ASSERT_EQ(cka.code, kExitOk);
  const RunCli heat = run({"render", "--kind", "heatmap", "--in", (dir / "m.csv").string(), "--out",
                        (dir / "heat.svg").string(), "--color-map", "gray"});
  ASSERT_EQ(heat.code, kExitOk) << heat.err;
  EXPECT_EQ(read_text(dir / "heat.svg").rfind("<svg", 0), 0u);
}

TEST(Cli, RenderRejectsBadCsv) {
  TempDir dir;
  write_text(dir / "bad.csv", "nope\n");
  EXPECT_EQ(run({"render", "--kind", "heatmap", "--in", (dir / "bad.csv").string(), "--out",
                 (dir / "x.svg").string()})
                .code,
            kExitData);
  EXPECT_EQ(run({"render", "--kind", "curves", "--in", (dir / "missing.csv").string(), "--out",
                 (dir / "x.svg").string()})
                .code,
            kExitData);
}

TEST(Cli, DuplicateAugIdsAreDataError) {
  TempDir dir;
  EXPECT_EQ(run({"impact", "--none1", manifest("none1"), "--none2", manifest("none2"), "--aug",
                 manifest("aug"), "--aug", manifest("aug"), "--out", (dir / "o.csv").string()})
                .code,
            kExitData);
}

}  // namespace
}  // namespace augimpact
