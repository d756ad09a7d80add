#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pmatch/correspondence.h"
#include "pmatch/homography.h"
#include "pmatch/pipeline.h"
#include "pmatch/ransac.h"
#include "pmatch/synthetic.h"

namespace pmatch {

/// Area under the cumulative recall curve r(x) = #{e_i <= x} / n over
/// [0, threshold], divided by threshold. The curve is a step function, so
/// the trapezoid over its breakpoints is exact. Infinite errors count as
/// failures. Throws EmptyInput for an empty list.
double auc(std::span<const double> errors, double threshold);

/// Spearman rank correlation with average ranks for ties.
double spearman(std::span<const double> a, std::span<const double> b);

enum class Method { kPMatch, kRansac };

const char* to_string(Method m);
Method method_from_string(const std::string& s);

struct EvalRecord {
  std::string pair_id;
  std::string sequence;
  Method method = Method::kPMatch;
  int repeat = 0;
  /// +inf when the estimate failed.
  double corner_error = 0;
  double runtime = 0;
  double hull_area_fraction = 0;
  bool success = false;
  std::size_t n_models = 0;
  std::string failure;
};

/// One image pair to evaluate. Multi-plane pairs carry one ground truth
/// per plane; their corner error is the worst over planes of the best
/// matching estimate.
struct BenchPair {
  std::string pair_id;
  std::string sequence;
  CorrespondenceSet corrs;
  std::vector<Homographyd> ground_truth;
  double width = 0;
  double height = 0;
};

struct BenchConfig {
  PipelineConfig pmatch;
  RansacConfig ransac;
  std::vector<Method> methods = {Method::kPMatch, Method::kRansac};
  int repeats = 1;
  std::uint64_t seed = 0;
  std::vector<double> thresholds = {3, 5, 10};
  int threads = 1;
  /// Record wall-clock runtimes; disable for byte-reproducible reports.
  bool timing = true;
  double hull_warning_fraction = 0.20;
};

/// AUC row for one method (or one repeat statistic of a method).
struct AucRow {
  std::string label;
  std::vector<double> auc;
  double runtime = 0;
  std::size_t pairs = 0;
  std::size_t failures = 0;
};

struct SequenceSummary {
  std::string sequence;
  std::vector<AucRow> rows;
};

struct BenchReport {
  std::vector<double> thresholds;
  std::vector<EvalRecord> records;
  std::vector<SequenceSummary> sequences;
  std::vector<AucRow> aggregate;
  std::vector<std::string> warnings;
};

/// Runs every method on every pair. Pair i, repeat r, method m uses a seed
/// derived from (seed, i, r, m), so results do not depend on `threads`.
/// Per-pair failures are recorded, never thrown.
BenchReport run_benchmark(const std::vector<BenchPair>& pairs,
                          const BenchConfig& cfg);

/// Evaluates one (pair, method) with the given seeds already applied.
EvalRecord evaluate_pair(const BenchPair& pair, Method method,
                         const PipelineConfig& pmatch_cfg,
                         const RansacConfig& ransac_cfg, bool timing);

/// Aggregate rows for a set of records (already filtered to one scope).
std::vector<AucRow> summarize(const std::vector<EvalRecord>& records,
                              const std::vector<Method>& methods, int repeats,
                              const std::vector<double>& thresholds);

struct DatasetOptions {
  double min_conf = 0;
  std::optional<double> width;
  std::optional<double> height;
};

/// Reads an HPatches-style layout: either `root` itself or each of its
/// subdirectories holding `H_1_k` ground-truth files and `matches_1_k.csv`
/// match files (k = 2..6). Image size comes from an optional `size.txt`
/// ("width height"), then from `opts`, then from the bounding box of the
/// first-image keypoints. Unreadable sequences are skipped with a warning.
std::vector<BenchPair> load_hpatches_dataset(const std::filesystem::path& root,
                                             const DatasetOptions& opts,
                                             std::vector<std::string>* warnings);

struct SweepConfig {
  SyntheticSceneConfig scene;
  int scenes = 10;
  std::uint64_t seed = 0;
};

SweepConfig sweep_from_json(const nlohmann::json& j);
std::vector<BenchPair> synthetic_sweep(const SweepConfig& sweep);

nlohmann::json to_json(const BenchReport& report);
/// Aligned-column table with one AUC column per threshold.
std::string format_report(const BenchReport& report);

}  // namespace pmatch
