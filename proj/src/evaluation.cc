#include "pmatch/evaluation.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <thread>

#include "pmatch/error.h"
#include "pmatch/io.h"
#include "pmatch/random.h"

namespace pmatch {

double auc(std::span<const double> errors, double threshold) {
  if (errors.empty()) throw Error(ErrorCode::kEmptyInput, "auc of an empty error list");
  if (!(threshold > 0)) {
    throw Error(ErrorCode::kInvalidArgument, "auc threshold must be positive");
  }
  std::vector<double> sorted(errors.begin(), errors.end());
  for (double& e : sorted) {
    if (std::isnan(e)) e = std::numeric_limits<double>::infinity();
  }
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());

  // Vertices of the recall step curve on [0, threshold]; each jump is a
  // pair of points sharing an abscissa.
  std::vector<double> xs{0.0};
  std::vector<double> ys{0.0};
  std::size_t below = 0;
  for (double e : sorted) {
    if (!(e <= threshold)) break;
    const double x = std::max(e, 0.0);
    xs.push_back(x);
    ys.push_back(static_cast<double>(below) / n);
    ++below;
    xs.push_back(x);
    ys.push_back(static_cast<double>(below) / n);
  }
  xs.push_back(threshold);
  ys.push_back(static_cast<double>(below) / n);

  double area = 0;
  for (std::size_t i = 1; i < xs.size(); ++i) {
    area += (xs[i] - xs[i - 1]) * (ys[i] + ys[i - 1]) / 2;
  }
  return area / threshold;
}

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2 + 1;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "spearman needs two equal-length samples of size >= 2");
  }
  const auto ra = average_ranks(a);
  const auto rb = average_ranks(b);
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
  const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    sab += (ra[i] - ma) * (rb[i] - mb);
    saa += (ra[i] - ma) * (ra[i] - ma);
    sbb += (rb[i] - mb) * (rb[i] - mb);
  }
  if (saa == 0 || sbb == 0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

const char* to_string(Method m) {
  return m == Method::kPMatch ? "pmatch" : "ransac";
}

Method method_from_string(const std::string& s) {
  if (s == "pmatch") return Method::kPMatch;
  if (s == "ransac") return Method::kRansac;
  throw Error(ErrorCode::kInvalidArgument, "unknown method '" + s + "'");
}

namespace {

double safe_corner_error(const Homographyd& est, const Homographyd& gt, double w,
                         double h) {
  try {
    return corner_error(est, gt, w, h);
  } catch (const Error&) {
    return std::numeric_limits<double>::infinity();
  }
}

// Single-plane pairs score the primary estimate; multi-plane pairs score
// each plane against its closest estimate and keep the worst plane.
double score_estimates(const std::vector<Homographyd>& estimates,
                       const BenchPair& pair) {
  if (pair.ground_truth.size() == 1) {
    return safe_corner_error(estimates.front(), pair.ground_truth.front(),
                             pair.width, pair.height);
  }
  double worst = 0;
  for (const auto& gt : pair.ground_truth) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& est : estimates) {
      best = std::min(best, safe_corner_error(est, gt, pair.width, pair.height));
    }
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace

EvalRecord evaluate_pair(const BenchPair& pair, Method method,
                         const PipelineConfig& pmatch_cfg,
                         const RansacConfig& ransac_cfg, bool timing) {
  EvalRecord rec;
  rec.pair_id = pair.pair_id;
  rec.sequence = pair.sequence;
  rec.method = method;
  rec.corner_error = std::numeric_limits<double>::infinity();
  const auto start = std::chrono::steady_clock::now();
  try {
    std::vector<Homographyd> estimates;
    if (method == Method::kPMatch) {
      const PipelineResult r = estimate_planes(pair.corrs, pair.width, pair.height,
                                               pmatch_cfg);
      for (const auto& g : r.grouping.groups) estimates.push_back(g.homography);
      rec.hull_area_fraction = r.grouping.groups.front().hull_area_fraction;
    } else {
      const RansacResult r = ransac_homography(pair.corrs, ransac_cfg);
      if (!r.success) throw Error(ErrorCode::kNoGroupFound, "RANSAC found no model");
      estimates.push_back(r.homography);
    }
    rec.n_models = estimates.size();
    rec.corner_error = score_estimates(estimates, pair);
    rec.success = std::isfinite(rec.corner_error);
    if (!rec.success) rec.failure = "estimate maps a corner to infinity";
  } catch (const Error& e) {
    rec.success = false;
    rec.failure = std::string(to_string(e.code())) + ": " + e.what();
  }
  if (timing) {
    rec.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                      .count();
  }
  return rec;
}

std::vector<AucRow> summarize(const std::vector<EvalRecord>& records,
                              const std::vector<Method>& methods, int repeats,
                              const std::vector<double>& thresholds) {
  std::vector<AucRow> rows;
  for (Method m : methods) {
    std::vector<AucRow> per_repeat;
    for (int r = 0; r < repeats; ++r) {
      std::vector<double> errors;
      AucRow row;
      for (const auto& rec : records) {
        if (rec.method != m || rec.repeat != r) continue;
        errors.push_back(rec.success ? rec.corner_error
                                     : std::numeric_limits<double>::infinity());
        row.runtime += rec.runtime;
        row.failures += rec.success ? 0 : 1;
      }
      if (errors.empty()) continue;
      row.pairs = errors.size();
      for (double t : thresholds) row.auc.push_back(auc(errors, t));
      per_repeat.push_back(std::move(row));
    }
    if (per_repeat.empty()) continue;
    if (per_repeat.size() == 1) {
      per_repeat.front().label = to_string(m);
      rows.push_back(per_repeat.front());
      continue;
    }
    const std::size_t nt = thresholds.size();
    const double count = static_cast<double>(per_repeat.size());
    AucRow best{std::string(to_string(m)) + " best", std::vector<double>(nt, 0.0)};
    AucRow mean{std::string(to_string(m)) + " mean", std::vector<double>(nt, 0.0)};
    AucRow worst{std::string(to_string(m)) + " worst", std::vector<double>(nt, 1.0)};
    for (const auto& row : per_repeat) {
      for (std::size_t t = 0; t < nt; ++t) {
        best.auc[t] = std::max(best.auc[t], row.auc[t]);
        worst.auc[t] = std::min(worst.auc[t], row.auc[t]);
        mean.auc[t] += row.auc[t] / count;
      }
      for (AucRow* out : {&best, &mean, &worst}) {
        out->runtime += row.runtime / count;
        out->pairs = row.pairs;
      }
      mean.failures += row.failures;
    }
    best.failures = worst.failures = mean.failures;
    rows.push_back(best);
    rows.push_back(mean);
    rows.push_back(worst);
  }
  return rows;
}

BenchReport run_benchmark(const std::vector<BenchPair>& pairs,
                          const BenchConfig& cfg) {
  if (cfg.repeats < 1) throw Error(ErrorCode::kInvalidArgument, "repeats must be >= 1");
  struct Task {
    std::size_t pair;
    Method method;
    int repeat;
  };
  std::vector<Task> tasks;
  for (std::size_t i = 0; i < pairs.size(); ++i)
    for (Method m : cfg.methods)
      for (int r = 0; r < cfg.repeats; ++r) tasks.push_back({i, m, r});

  std::vector<EvalRecord> records(tasks.size());
  const auto run = [&](std::size_t t) {
    const Task& task = tasks[t];
    const std::uint64_t seed =
        derive_seed(cfg.seed, {task.pair, static_cast<std::uint64_t>(task.repeat),
                               static_cast<std::uint64_t>(task.method)});
    PipelineConfig pm = cfg.pmatch;
    pm.match.seed = seed;
    pm.merge.seed = seed;
    pm.match.threads = 1;
    RansacConfig rc = cfg.ransac;
    rc.seed = seed;
    rc.threads = 1;
    records[t] = evaluate_pair(pairs[task.pair], task.method, pm, rc, cfg.timing);
    records[t].repeat = task.repeat;
  };
  const int threads = std::max(1, cfg.threads);
  if (threads == 1) {
    for (std::size_t t = 0; t < tasks.size(); ++t) run(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int k = 0; k < threads; ++k) {
      pool.emplace_back([&] {
        for (std::size_t t = next++; t < tasks.size(); t = next++) run(t);
      });
    }
    for (auto& th : pool) th.join();
  }

  BenchReport report;
  report.thresholds = cfg.thresholds;
  report.records = std::move(records);
  report.aggregate = summarize(report.records, cfg.methods, cfg.repeats, cfg.thresholds);

  std::vector<std::string> seq_order;
  for (const auto& p : pairs) {
    if (std::find(seq_order.begin(), seq_order.end(), p.sequence) == seq_order.end()) {
      seq_order.push_back(p.sequence);
    }
  }
  for (const auto& seq : seq_order) {
    std::vector<EvalRecord> subset;
    for (const auto& r : report.records) {
      if (r.sequence == seq) subset.push_back(r);
    }
    report.sequences.push_back(
        {seq, summarize(subset, cfg.methods, cfg.repeats, cfg.thresholds)});
  }

  for (const auto& r : report.records) {
    if (r.method == Method::kPMatch && r.success && r.repeat == 0 &&
        r.hull_area_fraction < cfg.hull_warning_fraction) {
      char buf[160];
      std::snprintf(buf, sizeof(buf),
                    "%s: pentagon hull covers %.1f%% of the image (< %.0f%%); "
                    "accuracy may suffer",
                    r.pair_id.c_str(), 100 * r.hull_area_fraction,
                    100 * cfg.hull_warning_fraction);
      report.warnings.emplace_back(buf);
    }
  }
  return report;
}

std::vector<BenchPair> load_hpatches_dataset(const std::filesystem::path& root,
                                             const DatasetOptions& opts,
                                             std::vector<std::string>* warnings) {
  namespace fs = std::filesystem;
  const auto warn = [&](const std::string& w) {
    if (warnings) warnings->push_back(w);
  };
  std::error_code ec;
  if (!fs::is_directory(root, ec)) {
    throw Error(ErrorCode::kIoError, "not a directory: " + root.string());
  }
  const auto has_gt = [](const fs::path& dir) {
    std::error_code e;
    return fs::exists(dir / "H_1_2", e);
  };
  std::vector<fs::path> seqs;
  if (has_gt(root)) {
    seqs.push_back(root);
  } else {
    for (const auto& entry : fs::directory_iterator(root, ec)) {
      if (entry.is_directory()) seqs.push_back(entry.path());
    }
    std::sort(seqs.begin(), seqs.end());
  }

  std::vector<BenchPair> pairs;
  for (const auto& dir : seqs) {
    const std::string seq = dir.filename().string();
    if (!has_gt(dir)) {
      warn("skipping " + seq + ": no H_1_2 ground truth");
      continue;
    }
    std::optional<std::pair<double, double>> size;
    if (fs::exists(dir / "size.txt")) {
      std::ifstream in(dir / "size.txt");
      double w = 0, h = 0;
      if (in >> w >> h && w > 0 && h > 0) {
        size = {w, h};
      } else {
        warn(seq + ": ignoring malformed size.txt");
      }
    }
    std::size_t loaded = 0;
    for (int k = 2; k <= 6; ++k) {
      const fs::path h_path = dir / ("H_1_" + std::to_string(k));
      const fs::path m_path = dir / ("matches_1_" + std::to_string(k) + ".csv");
      if (!fs::exists(h_path)) continue;
      if (!fs::exists(m_path)) {
        warn(seq + ": missing " + m_path.filename().string());
        continue;
      }
      try {
        BenchPair p;
        p.sequence = seq;
        p.pair_id = seq + "/1_" + std::to_string(k);
        p.ground_truth.push_back(read_homography(h_path));
        p.corrs = filter_by_confidence(read_correspondences_csv(m_path), opts.min_conf);
        if (size) {
          p.width = size->first;
          p.height = size->second;
        } else if (opts.width && opts.height) {
          p.width = *opts.width;
          p.height = *opts.height;
        } else {
          double w = 1, h = 1;
          for (const auto& c : p.corrs) {
            w = std::max(w, std::ceil(c.p1.x()));
            h = std::max(h, std::ceil(c.p1.y()));
          }
          p.width = w;
          p.height = h;
        }
        pairs.push_back(std::move(p));
        ++loaded;
      } catch (const Error& e) {
        warn(seq + ": skipping pair 1_" + std::to_string(k) + ": " + e.what());
      }
    }
    if (loaded == 0) warn("skipping " + seq + ": no readable pairs");
  }
  return pairs;
}

SweepConfig sweep_from_json(const nlohmann::json& j) {
  SweepConfig s;
  s.scenes = j.value("scenes", s.scenes);
  s.seed = j.value("seed", s.seed);
  if (j.contains("scene")) {
    const auto& sc = j["scene"];
    s.scene.width = sc.value("width", s.scene.width);
    s.scene.height = sc.value("height", s.scene.height);
    s.scene.n_inliers = sc.value("n_inliers", s.scene.n_inliers);
    s.scene.n_outliers = sc.value("n_outliers", s.scene.n_outliers);
    s.scene.noise_sigma = sc.value("noise_sigma", s.scene.noise_sigma);
    s.scene.n_planes = sc.value("n_planes", s.scene.n_planes);
    s.scene.homography_magnitude =
        sc.value("homography_magnitude", s.scene.homography_magnitude);
  }
  if (s.scenes < 1) throw Error(ErrorCode::kInvalidArgument, "sweep needs >= 1 scene");
  s.scene.validate();
  return s;
}

std::vector<BenchPair> synthetic_sweep(const SweepConfig& sweep) {
  std::vector<BenchPair> pairs;
  for (int i = 0; i < sweep.scenes; ++i) {
    SyntheticSceneConfig sc = sweep.scene;
    sc.seed = derive_seed(sweep.seed, {static_cast<std::uint64_t>(i)});
    SyntheticScene scene = synth_scene(sc);
    char id[32];
    std::snprintf(id, sizeof(id), "synthetic/%03d", i);
    pairs.push_back({id, "synthetic", std::move(scene.corrs),
                     std::move(scene.plane_homographies), sc.width, sc.height});
  }
  return pairs;
}

namespace {

nlohmann::json finite_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

nlohmann::json rows_json(const std::vector<AucRow>& rows,
                         const std::vector<double>& thresholds) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json aucs = nlohmann::json::object();
    for (std::size_t t = 0; t < thresholds.size(); ++t) {
      char key[32];
      std::snprintf(key, sizeof(key), "auc@%gpx", thresholds[t]);
      aucs[key] = r.auc[t];
    }
    arr.push_back({{"method", r.label},
                   {"auc", aucs},
                   {"runtime_s", r.runtime},
                   {"pairs", r.pairs},
                   {"failures", r.failures}});
  }
  return arr;
}

}  // namespace

nlohmann::json to_json(const BenchReport& report) {
  nlohmann::json j;
  j["thresholds"] = report.thresholds;
  j["aggregate"] = rows_json(report.aggregate, report.thresholds);
  nlohmann::json seqs = nlohmann::json::array();
  for (const auto& s : report.sequences) {
    seqs.push_back({{"sequence", s.sequence}, {"rows", rows_json(s.rows, report.thresholds)}});
  }
  j["sequences"] = seqs;
  nlohmann::json recs = nlohmann::json::array();
  for (const auto& r : report.records) {
    recs.push_back({{"pair_id", r.pair_id},
                    {"sequence", r.sequence},
                    {"method", to_string(r.method)},
                    {"repeat", r.repeat},
                    {"corner_error", finite_or_null(r.corner_error)},
                    {"runtime_s", r.runtime},
                    {"hull_area_fraction", r.hull_area_fraction},
                    {"success", r.success},
                    {"models", r.n_models},
                    {"failure", r.failure}});
  }
  j["records"] = recs;
  j["warnings"] = report.warnings;
  return j;
}

namespace {

void append_table(std::string* out, const std::vector<AucRow>& rows,
                  const std::vector<double>& thresholds) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%-16s", "method");
  *out += buf;
  for (double t : thresholds) {
    char col[24];
    std::snprintf(col, sizeof(col), "AUC@%gpx", t);
    std::snprintf(buf, sizeof(buf), " %10s", col);
    *out += buf;
  }
  std::snprintf(buf, sizeof(buf), " %11s %6s %8s\n", "runtime_s", "pairs", "failures");
  *out += buf;
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%-16s", r.label.c_str());
    *out += buf;
    for (double a : r.auc) {
      std::snprintf(buf, sizeof(buf), " %9.2f%%", 100 * a);
      *out += buf;
    }
    std::snprintf(buf, sizeof(buf), " %11.3f %6zu %8zu\n", r.runtime, r.pairs, r.failures);
    *out += buf;
  }
}

}  // namespace

std::string format_report(const BenchReport& report) {
  std::string out = "Homography estimation AUC (all pairs)\n";
  append_table(&out, report.aggregate, report.thresholds);
  for (const auto& s : report.sequences) {
    out += "\nSequence " + s.sequence + "\n";
    append_table(&out, s.rows, report.thresholds);
  }
  if (!report.warnings.empty()) {
    out += "\nWarnings\n";
    for (const auto& w : report.warnings) out += "  " + w + "\n";
  }
  return out;
}

}  // namespace pmatch
