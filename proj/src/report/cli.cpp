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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "augimpact/augment.hpp"
#include "augimpact/errors.hpp"
#include "augimpact/report.hpp"
#include "json.hpp"

namespace augimpact {
namespace {

namespace fs = std::filesystem;

std::string read_text(const fs::path& path) {
  const auto bytes = read_file_bytes(path);
  return std::string(bytes.begin(), bytes.end());
}

void write_text(const fs::path& path, std::string_view text) {
  write_file_bytes(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

struct CkaFlags {
  std::string kernel = "linear";
  double rbf_fraction = 1.0;
  std::size_t minibatch = 0;
  std::size_t passes = 1;
  std::uint64_t seed = 0;
  unsigned threads = 0;

  void attach(CLI::App& cmd) {
    cmd.add_option("--kernel", kernel, "linear or rbf")->check(CLI::IsMember({"linear", "rbf"}));
    cmd.add_option("--rbf-fraction", rbf_fraction, "RBF bandwidth as a fraction of the median distance");
    cmd.add_option("--minibatch", minibatch, "Use minibatch CKA with this batch size (>= 4)");
    cmd.add_option("--passes", passes, "Shuffled passes for minibatch CKA");
    cmd.add_option("--seed", seed, "Shuffle seed for minibatch CKA");
    cmd.add_option("--threads", threads, "Worker threads (0 = all cores)");
  }

  CkaMode mode() const {
    CkaMode m;
    m.kernel.kernel = kernel == "rbf" ? Kernel::kRbf : Kernel::kLinear;
    m.kernel.rbf_fraction = rbf_fraction;
    m.threads = threads;
    if (minibatch > 0) m.minibatch = MinibatchOptions{minibatch, passes, seed, true};
    return m;
  }
};

int run_dataset_info(const std::vector<std::string>& paths, std::ostream& out) {
  std::vector<fs::path> files(paths.begin(), paths.end());
  const Dataset ds = read_cifar10_files(files);
  std::vector<std::size_t> counts(ds.class_count, 0);
  for (const auto label : ds.labels) ++counts[label];
  out << fmt::format("records: {}\nshape: {}x{}x{}\nclasses: {}\n", ds.images.size(), kCifarSide,
                     kCifarSide, 3, ds.class_count);
  for (std::size_t c = 0; c < counts.size(); ++c) out << fmt::format("class {}: {}\n", c, counts[c]);
  return kExitOk;
}

struct AugmentArgs {
  std::vector<std::string> dataset;
  std::string spec;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::size_t samples = 16;
};

// Writes the augmented batch as planar records (C planes of H x W bytes per
// image) plus a JSON manifest carrying shape, soft labels and digest.
int run_augment(const AugmentArgs& args, std::ostream& out) {
  std::vector<fs::path> files(args.dataset.begin(), args.dataset.end());
  const Dataset ds = read_cifar10_files(files);
  const AugmentSpec spec = read_augment_spec(args.spec);
  const std::uint64_t seed = args.seed.value_or(spec.seed);
  const std::size_t count = std::min(args.samples, ds.images.size());
  if (count == 0) throw ValidationError("augment: dataset is empty");

  Rng rng(seed);
  const LabeledBatch result = apply_spec(spec, make_batch(ds, 0, count), rng);

  fs::create_directories(args.out_dir);
  std::vector<std::uint8_t> planar;
  for (const auto& img : result.images) {
    for (std::size_t c = 0; c < img.channels(); ++c) {
      for (std::size_t p = 0; p < img.pixel_count(); ++p) planar.push_back(img.data()[p * img.channels() + c]);
    }
  }
  write_file_bytes(fs::path(args.out_dir) / "samples.bin", planar);

  const auto& first = result.images.front();
  const std::string digest = fmt::format("{:016x}", batch_digest(result));
  nlohmann::json doc;
  doc["kind"] = std::string(to_string(spec.kind));
  doc["seed"] = seed;
  doc["count"] = result.size();
  doc["height"] = first.height();
  doc["width"] = first.width();
  doc["channels"] = first.channels();
  doc["layout"] = "planar";
  doc["file"] = "samples.bin";
  doc["source_labels"] = std::vector<int>(ds.labels.begin(), ds.labels.begin() + count);
  doc["labels"] = nlohmann::json::array();
  for (const auto& label : result.labels) doc["labels"].push_back(label.probabilities);
  doc["digest"] = digest;
  write_text(fs::path(args.out_dir) / "samples.json", doc.dump(2) + "\n");
  out << digest << "\n";
  return kExitOk;
}

int run_cka(const std::string& a_path, const std::string& b_path, const CkaFlags& flags,
            const std::string& out_path) {
  const ActivationSet a = load_activation_set(a_path);
  const ActivationSet b = load_activation_set(b_path);
  const CkaMatrix m = cka_matrix(a, b, flags.mode());
  write_text(out_path, format_cka_csv(m));
  return kExitOk;
}

int run_impact(const std::string& none1_path, const std::string& none2_path,
               const std::vector<std::string>& aug_paths, const CkaFlags& flags,
               const std::string& out_path, const std::string& summary_path) {
  const ActivationSet none1 = load_activation_set(none1_path);
  const ActivationSet none2 = load_activation_set(none2_path);
  std::vector<ImpactCurve> curves;
  for (const auto& path : aug_paths) {
    const ActivationSet aug = load_activation_set(path);
    curves.push_back(impact_curve(none1, none2, aug, flags.mode()));
  }
  const auto summary = build_summary_table(curves);
  write_text(out_path, format_impact_csv(curves));
  if (!summary_path.empty()) write_text(summary_path, format_summary_csv(summary));
  return kExitOk;
}

int run_render(const std::string& kind, const std::string& in_path, const std::string& out_path,
               const RenderConfig& cfg) {
  const std::string text = read_text(in_path);
  const std::string svg = kind == "heatmap" ? render_heatmap(parse_cka_csv(text), cfg)
                                            : render_curves(parse_impact_csv(text), cfg);
  write_text(out_path, svg);
  return kExitOk;
}

}  // namespace

int cli_main(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Layer-wise augmentation impact measured with CKA", "augimpact"};
  app.require_subcommand(1);

  std::vector<std::string> info_paths;
  auto* info = app.add_subcommand("dataset-info", "Summarize CIFAR-10 binary batches");
  info->add_option("--dataset", info_paths, "CIFAR-10 batch file(s)")->required();

  AugmentArgs aug_args;
  auto* augment = app.add_subcommand("augment", "Apply an augmentation spec to dataset samples");
  augment->add_option("--dataset", aug_args.dataset, "CIFAR-10 batch file(s)")->required();
  augment->add_option("--spec", aug_args.spec, "Augmentation spec JSON")->required();
  augment->add_option("--seed", aug_args.seed, "Seed (overrides the spec's seed)");
  augment->add_option("--out", aug_args.out_dir, "Output directory")->required();
  augment->add_option("--emit-samples", aug_args.samples, "Number of images to process");

  std::string cka_a, cka_b, cka_out;
  CkaFlags cka_flags;
  auto* cka_cmd = app.add_subcommand("cka", "All-pairs layer CKA between two runs");
  cka_cmd->add_option("--a", cka_a, "Manifest of run A")->required();
  cka_cmd->add_option("--b", cka_b, "Manifest of run B")->required();
  cka_cmd->add_option("--out", cka_out, "Output CSV")->required();
  cka_flags.attach(*cka_cmd);

  std::string none1, none2, impact_out, summary_out;
  std::vector<std::string> augs;
  CkaFlags impact_flags;
  auto* impact = app.add_subcommand("impact", "Per-layer percent decrease in CKA");
  impact->add_option("--none1", none1, "Manifest of the first baseline")->required();
  impact->add_option("--none2", none2, "Manifest of the second baseline")->required();
  impact->add_option("--aug", augs, "Manifest(s) of augmented runs")->required();
  impact->add_option("--out", impact_out, "Output CSV")->required();
  impact->add_option("--summary", summary_out, "Optional summary-table CSV");
  impact_flags.attach(*impact);

  std::string render_kind, render_in, render_out;
  RenderConfig cfg;
  auto* render = app.add_subcommand("render", "Render a CSV as SVG");
  render->add_option("--kind", render_kind, "heatmap or curves")
      ->required()
      ->check(CLI::IsMember({"heatmap", "curves"}));
  render->add_option("--in", render_in, "Input CSV")->required();
  render->add_option("--out", render_out, "Output SVG")->required();
  render->add_option("--width", cfg.width, "Canvas width in pixels");
  render->add_option("--height", cfg.height, "Canvas height in pixels");
  render->add_option("--title", cfg.title, "Title text");
  render->add_option("--color-map", cfg.color_map, "viridis or gray");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*info) return run_dataset_info(info_paths, out);
    if (*augment) return run_augment(aug_args, out);
    if (*cka_cmd) return run_cka(cka_a, cka_b, cka_flags, cka_out);
    if (*impact) return run_impact(none1, none2, augs, impact_flags, impact_out, summary_out);
    if (*render) return run_render(render_kind, render_in, render_out, cfg);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace augimpact
