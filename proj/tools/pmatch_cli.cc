// pmatch: pentagon-match homography estimation from the command line.
//
//   pmatch estimate matches.csv --width W --height H [--out DIR]
//   pmatch classify matches.csv (--groups groups.json | --homography H.txt)
//   pmatch bench (--dataset DIR | --synthetic sweep.json) [--methods ...]
//   pmatch synth --out DIR [--planes 2 ...]
//
// Exit codes: 0 success, 2 usage, 3 no match, 4 I/O or parse failure.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pmatch/classification.h"
#include "pmatch/error.h"
#include "pmatch/evaluation.h"
#include "pmatch/io.h"
#include "pmatch/pipeline.h"
#include "pmatch/ransac.h"
#include "pmatch/svg.h"
#include "pmatch/synthetic.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNoMatch = 3;
constexpr int kExitIo = 4;
constexpr const char* kVersion = "0.1.0";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int exit_code_for(pmatch::ErrorCode code) {
  switch (code) {
    case pmatch::ErrorCode::kNoPentagonFound:
    case pmatch::ErrorCode::kNoGroupFound:
      return kExitNoMatch;
    case pmatch::ErrorCode::kParseError:
    case pmatch::ErrorCode::kIoError:
      return kExitIo;
    default:
      return kExitUsage;
  }
}

// Everything needed to rerun a subcommand.
struct RunManifest {
  std::string subcommand;
  std::vector<std::string> argv;
  std::map<std::string, std::string> inputs;
  std::map<std::string, std::string> overrides;
  std::uint64_t seed = 0;
  std::string output_dir;
  json config;

  json to_json() const {
    return {{"tool", "pmatch"},
            {"version", kVersion},
            {"subcommand", subcommand},
            {"argv", argv},
            {"inputs", inputs},
            {"overrides", overrides},
            {"seed", seed},
            {"output_dir", output_dir},
            {"config", config}};
  }
};

void collect_overrides(const CLI::App& sub, RunManifest* m) {
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->count() == 0 || !opt->nonpositional() || opt->get_name() == "--help" ||
        opt->get_name() == "--config") {
      continue;
    }
    std::string value;
    for (const auto& r : opt->results()) value += (value.empty() ? "" : ",") + r;
    m->overrides[opt->get_name(false, true)] = value;
  }
}

void require_file(const std::string& label, const std::string& path) {
  if (!fs::is_regular_file(path)) throw UsageError(label + " not found: " + path);
}

fs::path prepare_output_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (!fs::is_directory(dir)) {
    throw pmatch::Error(pmatch::ErrorCode::kIoError, "cannot create output directory " + dir);
  }
  return fs::path(dir);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// Options shared by every subcommand that runs the pentagon pipeline.
struct PipelineOptions {
  pmatch::PipelineConfig cfg;
  std::vector<double> roi;

  void add(CLI::App* sub) {
    auto& m = cfg.match;
    auto& g = cfg.merge;
    sub->add_option("--grid-n", m.grid_n, "Blocks per side of the sampling grid")
        ->capture_default_str();
    sub->add_option("--cr-th", m.cr_th, "Cross-ratio tolerance")->capture_default_str();
    sub->add_option("--kp", m.k_p, "Pentagon draws per block")->capture_default_str();
    sub->add_option("--pentagons-per-block", m.pentagons_per_block,
                    "Matched pentagons kept per block")
        ->capture_default_str();
    sub->add_option("--min-separation", m.min_vertex_separation,
                    "Minimum vertex distance in pixels")
        ->capture_default_str();
    sub->add_option("--roi", roi, "Sampling region x,y,w,h in the first image")
        ->delimiter(',')
        ->expected(4);
    sub->add_option("--merge-trials", g.merge_trials, "Cross-merge attempts per pentagon pair")
        ->capture_default_str();
    sub->add_option("--min-support", g.min_support,
                    "Support a lone pentagon needs to survive")
        ->capture_default_str();
    sub->add_option("--inlier-tol", g.inlier_tol, "Group inlier tolerance in pixels")
        ->capture_default_str();
  }

  pmatch::PipelineConfig resolve(std::uint64_t seed, int threads, bool no_refit) {
    pmatch::PipelineConfig out = cfg;
    out.match.seed = seed;
    out.match.threads = threads;
    if (!roi.empty()) out.match.roi = pmatch::Rect{roi[0], roi[1], roi[2], roi[3]};
    out.merge.refit = !no_refit;
    out.sync();
    out.match.validate();
    out.merge.validate();
    return out;
  }
};

json pipeline_config_json(const pmatch::PipelineConfig& c) {
  json j = {{"grid_n", c.match.grid_n},
            {"cr_th", c.match.cr_th},
            {"kp", c.match.k_p},
            {"pentagons_per_block", c.match.pentagons_per_block},
            {"min_separation", c.match.min_vertex_separation},
            {"merge_trials", c.merge.merge_trials},
            {"min_support", c.merge.min_support},
            {"inlier_tol", c.merge.inlier_tol},
            {"refit", c.merge.refit},
            {"threads", c.match.threads}};
  if (c.match.roi) {
    j["roi"] = {c.match.roi->x, c.match.roi->y, c.match.roi->width, c.match.roi->height};
  }
  return j;
}

json ransac_config_json(const pmatch::RansacConfig& c) {
  return {{"e_t", c.e_t}, {"k", c.k}, {"literal", c.literal}, {"refit", c.refit}};
}

std::pair<double, double> bbox_size(const pmatch::CorrespondenceSet& corrs) {
  double w = 1, h = 1;
  for (const auto& c : corrs) {
    w = std::max({w, std::ceil(c.p1.x()), std::ceil(c.p2.x())});
    h = std::max({h, std::ceil(c.p1.y()), std::ceil(c.p2.y())});
  }
  return {w, h};
}

// ---------------------------------------------------------------- estimate

struct EstimateArgs {
  std::string matches;
  double width = 0;
  double height = 0;
  std::string out = ".";
  PipelineOptions pipeline;
};

int run_estimate(const EstimateArgs& a, RunManifest& m, std::uint64_t seed, int threads,
                 bool no_refit) {
  require_file("matches file", a.matches);
  if (!(a.width > 0 && a.height > 0)) throw UsageError("--width and --height must be positive");
  PipelineOptions opts = a.pipeline;
  const pmatch::PipelineConfig cfg = opts.resolve(seed, threads, no_refit);
  m.inputs["matches"] = a.matches;
  m.output_dir = a.out;
  m.config = pipeline_config_json(cfg);
  m.config["width"] = a.width;
  m.config["height"] = a.height;
  const fs::path out = prepare_output_dir(a.out);

  const auto corrs = pmatch::read_correspondences_csv(a.matches);
  const pmatch::PipelineResult r = pmatch::estimate_planes(corrs, a.width, a.height, cfg);
  const auto& groups = r.grouping.groups;

  json blocks = json::array();
  for (const auto& b : r.search.blocks) {
    blocks.push_back({{"row", b.block.row},
                      {"col", b.block.col},
                      {"candidates", b.candidates},
                      {"draws", b.draws},
                      {"matched", b.successes},
                      {"too_close", b.too_close},
                      {"degenerate", b.degenerate},
                      {"skipped", b.skipped}});
  }
  json doc = {{"manifest", m.to_json()},
              {"correspondences", corrs.size()},
              {"pentagons_found", r.search.pentagons.size()},
              {"discarded_pentagons", r.grouping.discarded},
              {"blocks", blocks},
              {"groups", pmatch::groups_to_json(groups, r.search.pentagons)}};

  std::vector<std::pair<fs::path, std::string>> files;
  files.emplace_back(out / "groups.json", dump(doc));
  for (std::size_t g = 0; g < groups.size(); ++g) {
    files.emplace_back(out / ("H_group_" + std::to_string(g) + ".txt"),
                       pmatch::format_homography(groups[g].homography));
  }
  files.emplace_back(out / "manifest.json", dump(m.to_json()));
  for (const auto& [path, text] : files) pmatch::write_file_atomic(path, text);

  std::printf("%zu planar group(s) from %zu matched pentagon(s)\n", groups.size(),
              r.search.pentagons.size());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    std::printf("  group %zu: %zu pentagon(s), support %zu, hull %.1f%% -> %s\n", g,
                groups[g].pentagon_ids.size(), groups[g].support,
                100 * groups[g].hull_area_fraction,
                (out / ("H_group_" + std::to_string(g) + ".txt")).string().c_str());
  }
  return kExitOk;
}

// ---------------------------------------------------------------- classify

struct ClassifyArgs {
  std::string matches;
  std::string groups;
  std::string homography;
  std::string gt;
  double tol = 10.0;
  bool symmetric = false;
  std::string svg;
  double width = 0;
  double height = 0;
  std::string out = ".";
};

int run_classify(const ClassifyArgs& a, RunManifest& m) {
  require_file("matches file", a.matches);
  if (!a.groups.empty()) require_file("group file", a.groups);
  if (!a.homography.empty()) require_file("homography file", a.homography);
  if (!a.gt.empty()) require_file("ground-truth homography", a.gt);
  if (!(a.tol > 0)) throw UsageError("--tol must be positive");
  m.inputs["matches"] = a.matches;
  if (!a.groups.empty()) m.inputs["groups"] = a.groups;
  if (!a.homography.empty()) m.inputs["homography"] = a.homography;
  if (!a.gt.empty()) m.inputs["gt"] = a.gt;
  m.output_dir = a.out;
  m.config = {{"tol", a.tol}, {"symmetric", a.symmetric}};
  const fs::path out = prepare_output_dir(a.out);

  const auto corrs = pmatch::read_correspondences_csv(a.matches);
  std::vector<pmatch::Homographyd> models;
  std::vector<std::array<std::size_t, 5>> pentagons;
  if (!a.groups.empty()) {
    json j;
    try {
      j = json::parse(pmatch::read_file(a.groups));
    } catch (const json::exception& e) {
      throw pmatch::Error(pmatch::ErrorCode::kParseError, a.groups + ": " + e.what());
    }
    for (auto& entry : pmatch::groups_from_json(j)) {
      models.push_back(entry.homography);
      for (const auto& p : entry.pentagons) {
        for (std::size_t id : p) {
          if (id >= corrs.size()) {
            throw pmatch::Error(pmatch::ErrorCode::kParseError,
                                a.groups + ": pentagon vertex " + std::to_string(id) +
                                    " out of range");
          }
        }
        pentagons.push_back(p);
      }
    }
    if (models.empty()) {
      throw pmatch::Error(pmatch::ErrorCode::kNoGroupFound, a.groups + " holds no groups");
    }
  } else {
    models.push_back(pmatch::read_homography(a.homography));
  }
  const auto mode =
      a.symmetric ? pmatch::TransferMode::kSymmetric : pmatch::TransferMode::kForward;
  const auto labels = pmatch::classify(corrs, std::span<const pmatch::Homographyd>(models),
                                       a.tol, mode);

  std::optional<pmatch::FourWayResult> fw;
  if (!a.gt.empty()) {
    const auto h_g = pmatch::read_homography(a.gt);
    fw = pmatch::four_way(corrs, std::span<const pmatch::Homographyd>(models), h_g, a.tol,
                          mode);
  }

  std::size_t inliers = 0;
  for (const auto& l : labels) inliers += l.is_inlier() ? 1 : 0;
  json summary = {{"manifest", m.to_json()},
                  {"correspondences", corrs.size()},
                  {"models", models.size()},
                  {"inliers", inliers},
                  {"outliers", corrs.size() - inliers}};

  std::vector<std::pair<fs::path, std::string>> files;
  files.emplace_back(out / "labels.csv", pmatch::labels_csv(labels));
  if (fw) {
    summary["four_way"] = pmatch::four_way_to_json(fw->summary);
    files.emplace_back(out / "four_way.json", dump(summary));
  }
  if (!a.svg.empty()) {
    pmatch::OverlayOptions o;
    std::tie(o.width, o.height) = bbox_size(corrs);
    if (a.width > 0) o.width = a.width;
    if (a.height > 0) o.height = a.height;
    std::optional<std::vector<pmatch::FourWay>> cats;
    if (fw) cats = fw->labels;
    files.emplace_back(a.svg, pmatch::render_overlay_svg(corrs, pentagons, labels, cats, o));
  }
  files.emplace_back(out / "manifest.json", dump(m.to_json()));
  for (const auto& [path, text] : files) pmatch::write_file_atomic(path, text);

  std::printf("%zu inlier(s), %zu outlier(s) at %.3g px\n", inliers, corrs.size() - inliers,
              a.tol);
  if (fw) {
    const auto& s = fw->summary;
    std::printf("four-way: both_inlier %zu, both_outlier %zu, p_only %zu, g_only %zu\n",
                s.both_inlier, s.both_outlier, s.p_only, s.g_only);
  }
  return kExitOk;
}

// ------------------------------------------------------------------- bench

struct BenchArgs {
  std::string dataset;
  std::string synthetic;
  std::vector<std::string> methods = {"pmatch", "ransac"};
  int repeats = 1;
  double min_conf = 0;
  double width = 0;
  double height = 0;
  bool no_timing = false;
  std::string out = ".";
  PipelineOptions pipeline;
  pmatch::RansacConfig ransac;
};

int run_bench(const BenchArgs& a, RunManifest& m, std::uint64_t seed, int threads,
              bool no_refit, bool literal) {
  if (!a.dataset.empty() && !fs::is_directory(a.dataset)) {
    throw UsageError("dataset directory not found: " + a.dataset);
  }
  if (!a.synthetic.empty()) require_file("sweep file", a.synthetic);
  if (a.repeats < 1) throw UsageError("--repeats must be >= 1");

  pmatch::BenchConfig cfg;
  PipelineOptions opts = a.pipeline;
  cfg.pmatch = opts.resolve(seed, 1, no_refit);
  cfg.ransac = a.ransac;
  cfg.ransac.refit = !no_refit;
  cfg.ransac.literal = literal;
  cfg.ransac.validate();
  cfg.methods.clear();
  for (const auto& s : a.methods) {
    try {
      cfg.methods.push_back(pmatch::method_from_string(s));
    } catch (const pmatch::Error& e) {
      throw UsageError(e.what());
    }
  }
  cfg.repeats = a.repeats;
  cfg.seed = seed;
  cfg.threads = threads;
  cfg.timing = !a.no_timing;

  if (!a.dataset.empty()) m.inputs["dataset"] = a.dataset;
  if (!a.synthetic.empty()) m.inputs["synthetic"] = a.synthetic;
  m.output_dir = a.out;
  m.config = {{"pmatch", pipeline_config_json(cfg.pmatch)},
              {"ransac", ransac_config_json(cfg.ransac)},
              {"methods", a.methods},
              {"repeats", a.repeats},
              {"min_conf", a.min_conf},
              {"timing", cfg.timing},
              {"threads", threads}};
  const fs::path out = prepare_output_dir(a.out);

  std::vector<std::string> warnings;
  std::vector<pmatch::BenchPair> pairs;
  if (!a.dataset.empty()) {
    pmatch::DatasetOptions d;
    d.min_conf = a.min_conf;
    if (a.width > 0) d.width = a.width;
    if (a.height > 0) d.height = a.height;
    pairs = pmatch::load_hpatches_dataset(a.dataset, d, &warnings);
    if (pairs.empty()) {
      for (const auto& w : warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
      throw pmatch::Error(pmatch::ErrorCode::kIoError, "no sequences found in " + a.dataset);
    }
  } else {
    json j;
    try {
      j = json::parse(pmatch::read_file(a.synthetic));
    } catch (const json::exception& e) {
      throw pmatch::Error(pmatch::ErrorCode::kParseError, a.synthetic + ": " + e.what());
    }
    pmatch::SweepConfig sweep;
    try {
      sweep = pmatch::sweep_from_json(j);
    } catch (const json::exception& e) {
      throw pmatch::Error(pmatch::ErrorCode::kParseError, a.synthetic + ": " + e.what());
    }
    pairs = pmatch::synthetic_sweep(sweep);
  }

  pmatch::BenchReport report = pmatch::run_benchmark(pairs, cfg);
  report.warnings.insert(report.warnings.begin(), warnings.begin(), warnings.end());
  json doc = pmatch::to_json(report);
  doc["manifest"] = m.to_json();
  const std::string table = pmatch::format_report(report);
  pmatch::write_file_atomic(out / "report.json", dump(doc));
  pmatch::write_file_atomic(out / "report.txt", table);
  pmatch::write_file_atomic(out / "manifest.json", dump(m.to_json()));
  std::fputs(table.c_str(), stdout);
  return kExitOk;
}

// ------------------------------------------------------------------- synth

struct SynthArgs {
  pmatch::SyntheticSceneConfig scene;
  std::string out = ".";
};

int run_synth(const SynthArgs& a, RunManifest& m, std::uint64_t seed) {
  pmatch::SyntheticSceneConfig sc = a.scene;
  sc.seed = seed;
  sc.validate();
  m.output_dir = a.out;
  m.config = {{"width", sc.width},
              {"height", sc.height},
              {"inliers", sc.n_inliers},
              {"outliers", sc.n_outliers},
              {"noise", sc.noise_sigma},
              {"planes", sc.n_planes},
              {"magnitude", sc.homography_magnitude}};
  const fs::path out = prepare_output_dir(a.out);
  const pmatch::SyntheticScene scene = pmatch::synth_scene(sc);

  std::string labels = "corr_id,plane\n";
  for (std::size_t i = 0; i < scene.labels.size(); ++i) {
    labels += std::to_string(i) + "," + std::to_string(scene.labels[i]) + "\n";
  }
  std::vector<std::pair<fs::path, std::string>> files;
  files.emplace_back(out / "matches.csv", pmatch::format_correspondences_csv(scene.corrs));
  for (std::size_t k = 0; k < scene.plane_homographies.size(); ++k) {
    files.emplace_back(out / ("H_plane_" + std::to_string(k + 1) + ".txt"),
                       pmatch::format_homography(scene.plane_homographies[k]));
  }
  files.emplace_back(out / "planted_labels.csv", labels);
  files.emplace_back(out / "manifest.json", dump(m.to_json()));
  for (const auto& [path, text] : files) pmatch::write_file_atomic(path, text);
  std::printf("%zu correspondence(s), %d plane(s) -> %s\n", scene.corrs.size(), sc.n_planes,
              out.string().c_str());
  return kExitOk;
}

void add_common(CLI::App* sub, std::uint64_t* seed, int* threads, std::string* config) {
  sub->add_option("--seed", *seed, "Random seed")->capture_default_str();
  sub->add_option("--threads", *threads, "Worker threads")->capture_default_str()
      ->check(CLI::PositiveNumber);
  sub->add_option("--config", *config, "key = value settings file; command-line flags win")
      ->check(CLI::ExistingFile);
}

// Keys name long options without the dashes, either bare or under a
// [subcommand] section. Options already given on the command line keep
// their values.
void apply_config_file(CLI::App* sub, const std::string& path, RunManifest* m) {
  CLI::ConfigINI reader;
  for (const CLI::ConfigItem& item : reader.from_file(path)) {
    if (item.name == "++" || item.name == "--") continue;
    if (!item.parents.empty() &&
        (item.parents.size() != 1 || item.parents.front() != sub->get_name())) {
      continue;
    }
    CLI::Option* opt = sub->get_option_no_throw("--" + item.name);
    if (opt == nullptr || item.name == "config" || item.name == "help") {
      throw UsageError(path + ": unknown setting '" + item.name + "' for " + sub->get_name());
    }
    if (opt->count() > 0) continue;
    std::vector<std::string> inputs = item.inputs;
    if (opt->get_type_size() == 0 && inputs.size() == 1) {
      // Flags take no value on the command line; honour "false" here.
      const std::string& v = inputs.front();
      if (v == "false" || v == "0" || v == "off" || v == "no") continue;
      inputs.clear();
    }
    if (inputs.empty()) inputs.emplace_back(opt->get_type_size() == 0 ? "true" : "");
    try {
      for (const auto& v : inputs) opt->add_result(v);
      opt->run_callback();
    } catch (const CLI::ParseError& e) {
      throw UsageError(path + ": " + item.name + ": " + e.what());
    }
    std::string joined;
    for (const auto& v : item.inputs) joined += (joined.empty() ? "" : ",") + v;
    m->overrides["--" + item.name] = joined;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pentagon-match homography estimation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  std::uint64_t seed = 0;
  int threads = 1;
  bool no_refit = false;
  bool literal = false;
  std::string config_path;

  EstimateArgs est;
  CLI::App* estimate = app.add_subcommand("estimate", "Find planar groups and their homographies");
  estimate->add_option("matches", est.matches, "Correspondence CSV (x1,y1,x2,y2[,conf])")
      ->required();
  estimate->add_option("--width", est.width, "First image width")->required();
  estimate->add_option("--height", est.height, "First image height")->required();
  estimate->add_option("--out", est.out, "Output directory")->capture_default_str();
  estimate->add_flag("--no-refit", no_refit, "Keep the pentagon-vertex fits");
  est.pipeline.add(estimate);
  add_common(estimate, &seed, &threads, &config_path);

  ClassifyArgs cls;
  CLI::App* classify = app.add_subcommand("classify", "Label correspondences as inliers/outliers");
  classify->add_option("matches", cls.matches, "Correspondence CSV")->required();
  auto* g_opt = classify->add_option("--groups", cls.groups, "groups.json from estimate");
  auto* h_opt = classify->add_option("--homography", cls.homography, "Homography text file");
  g_opt->excludes(h_opt);
  classify->add_option("--gt", cls.gt, "Ground-truth homography for the four-way summary");
  classify->add_option("--tol", cls.tol, "Inlier tolerance in pixels")->capture_default_str();
  classify->add_flag("--symmetric", cls.symmetric, "Use the symmetric transfer error");
  classify->add_option("--svg", cls.svg, "Write an SVG overlay here");
  classify->add_option("--width", cls.width, "Frame width for the overlay");
  classify->add_option("--height", cls.height, "Frame height for the overlay");
  classify->add_option("--out", cls.out, "Output directory")->capture_default_str();
  add_common(classify, &seed, &threads, &config_path);

  BenchArgs bn;
  CLI::App* bench = app.add_subcommand("bench", "AUC benchmark of PMatch against RANSAC");
  auto* d_opt = bench->add_option("--dataset", bn.dataset, "HPatches-style match directory");
  auto* s_opt = bench->add_option("--synthetic", bn.synthetic, "Synthetic sweep JSON");
  d_opt->excludes(s_opt);
  bench->add_option("--methods", bn.methods, "Comma-separated: pmatch,ransac")
      ->delimiter(',')
      ->capture_default_str();
  bench->add_option("--repeats", bn.repeats, "Runs per pair and method")->capture_default_str();
  bench->add_option("--min-conf", bn.min_conf, "Drop matches below this confidence")
      ->capture_default_str();
  bench->add_option("--width", bn.width, "Image width when the dataset has no size.txt");
  bench->add_option("--height", bn.height, "Image height when the dataset has no size.txt");
  bench->add_flag("--no-timing", bn.no_timing, "Record zero runtimes for reproducible reports");
  bench->add_option("--out", bn.out, "Output directory")->capture_default_str();
  bench->add_option("--e-t", bn.ransac.e_t, "RANSAC inlier threshold")->capture_default_str();
  bench->add_option("--k", bn.ransac.k, "RANSAC iterations")->capture_default_str();
  bench->add_flag("--no-refit", no_refit, "Disable least-squares refits");
  bench->add_flag("--literal", literal, "RANSAC accepts the first model with low mean error");
  bn.pipeline.add(bench);
  add_common(bench, &seed, &threads, &config_path);

  SynthArgs sy;
  CLI::App* synth = app.add_subcommand("synth", "Write a synthetic scene with ground truth");
  synth->add_option("--width", sy.scene.width, "Image width")->capture_default_str();
  synth->add_option("--height", sy.scene.height, "Image height")->capture_default_str();
  synth->add_option("--inliers", sy.scene.n_inliers, "Planted inliers")->capture_default_str();
  synth->add_option("--outliers", sy.scene.n_outliers, "Random outliers")->capture_default_str();
  synth->add_option("--noise", sy.scene.noise_sigma, "Inlier noise sigma (px)")
      ->capture_default_str();
  synth->add_option("--planes", sy.scene.n_planes, "1 or 2")->capture_default_str();
  synth->add_option("--magnitude", sy.scene.homography_magnitude,
                    "Homography perturbation scale")
      ->capture_default_str();
  synth->add_option("--out", sy.out, "Output directory")->capture_default_str();
  add_common(synth, &seed, &threads, &config_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  RunManifest manifest;
  manifest.subcommand = sub->get_name();
  for (int i = 1; i < argc; ++i) manifest.argv.emplace_back(argv[i]);
  manifest.seed = seed;
  collect_overrides(*sub, &manifest);

  try {
    if (!config_path.empty()) {
      manifest.inputs["config"] = config_path;
      apply_config_file(sub, config_path, &manifest);
      manifest.seed = seed;
    }
    if (sub == estimate) return run_estimate(est, manifest, seed, threads, no_refit);
    if (sub == classify) {
      if (cls.groups.empty() && cls.homography.empty()) {
        throw UsageError("one of --groups or --homography is required");
      }
      return run_classify(cls, manifest);
    }
    if (sub == bench) {
      if (bn.dataset.empty() && bn.synthetic.empty()) {
        throw UsageError("one of --dataset or --synthetic is required");
      }
      return run_bench(bn, manifest, seed, threads, no_refit, literal);
    }
    return run_synth(sy, manifest, seed);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const pmatch::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  }
}
