// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "pmatch/classification.h"
#include "pmatch/cross_ratio.h"
#include "pmatch/evaluation.h"
#include "pmatch/homography.h"
#include "pmatch/pentagon_match.h"
#include "pmatch/pipeline.h"
#include "pmatch/random.h"
#include "pmatch/ransac.h"
#include "pmatch/synthetic.h"

namespace {

using namespace pmatch;
using Clock = std::chrono::steady_clock;

constexpr double kWidth = 640;
constexpr double kHeight = 480;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

Pentagond random_pentagon(Rng& rng, double min_area) {
  std::uniform_real_distribution<double> ux(0, kWidth), uy(0, kHeight);
  for (;;) {
    Pentagond p;
    for (auto& v : p) v = Point2d(ux(rng), uy(rng));
    if (min_triple_area(p) > min_area) return p;
  }
}

bool well_conditioned(const Homographyd& h) {
  Eigen::JacobiSVD<Matrix3<double>> svd(h.matrix());
  return svd.singularValues()(0) / svd.singularValues()(2) < 1e6;
}

// Cross-ratio invariance over 10,000 (pentagon, homography) draws.
Outcome ac1() {
  const auto t0 = Clock::now();
  Rng rng = make_rng(1, {1});
  int draws = 0, rejections = 0;
  double worst = 0;
  while (draws < 10000) {
    const Homographyd h(random_homography_matrix(rng, kWidth, kHeight, 1.0));
    if (!well_conditioned(h)) continue;
    const Pentagond p = random_pentagon(rng, 100);
    Pentagond q;
    for (int i = 0; i < 5; ++i) q[i] = project(h, p[i]);
    const auto a = cr_signature(p);
    const auto b = cr_signature(q);
    for (int i = 0; i < 5; ++i) {
      worst = std::max(worst, std::abs(a.cr[i] - b.cr[i]) /
                                  std::max(std::abs(a.cr[i]), std::abs(b.cr[i])));
    }
    if (!pentagon_shape_match(p, q, 0.05)) ++rejections;
    ++draws;
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-6 && rejections == 0 && secs < 5.0,
          fmt("draws=%d max_rel_err=%.3g (<=1e-6) rejections=%d (==0) time=%.2fs (<5s)",
              draws, worst, rejections, secs)};
}

// DLT exactness for n in {4, 5, 8, 20}.
Outcome ac2() {
  Rng rng = make_rng(2, {2});
  std::uniform_real_distribution<double> ux(0, kWidth), uy(0, kHeight);
  double worst = 0;
  int failures = 0;
  for (int n : {4, 5, 8, 20}) {
    for (int t = 0; t < 1000; ++t) {
      const Homographyd h(random_homography_matrix(rng, kWidth, kHeight, 1.0));
      std::vector<Point2d> src, dst;
      while (static_cast<int>(src.size()) < n) {
        const Point2d p(ux(rng), uy(rng));
        src.push_back(p);
        dst.push_back(project(h, p));
      }
      try {
        const Homographyd est = estimate_homography(src, dst);
        worst = std::max(worst, corner_error(est, h, kWidth, kHeight));
      } catch (const Error&) {
        ++failures;
      }
    }
  }
  return {worst < 1e-6 && failures == 0,
          fmt("trials=4000 max_corner_err=%.3g px (<1e-6) failures=%d", worst, failures)};
}

SweepConfig sweep(int scenes, std::size_t inliers, std::size_t outliers,
                  std::uint64_t seed) {
  SweepConfig s;
  s.scenes = scenes;
  s.seed = seed;
  s.scene.n_inliers = inliers;
  s.scene.n_outliers = outliers;
  s.scene.noise_sigma = 0.5;
  return s;
}

// Single-plane end-to-end at 50% outliers.
Outcome ac3() {
  const auto pairs = synthetic_sweep(sweep(100, 300, 300, 3));
  BenchConfig cfg;
  cfg.methods = {Method::kPMatch};
  cfg.seed = 3;
  const BenchReport rep = run_benchmark(pairs, cfg);
  int good = 0;
  std::vector<double> runtimes;
  for (const auto& r : rep.records) {
    if (r.success && r.corner_error <= 3.0) ++good;
    runtimes.push_back(r.runtime);
  }
  const double rate = static_cast<double>(good) / static_cast<double>(rep.records.size());
  const double med = median(runtimes);
  return {rate >= 0.95 && med < 1.0,
          fmt("runs=%zu within_3px=%d rate=%.3f (>=0.95) median_runtime=%.4fs (<1s)",
              rep.records.size(), good, rate, med)};
}

// AUC@3px separation at 80% outliers.
Outcome ac4() {
  const auto pairs = synthetic_sweep(sweep(50, 120, 480, 1234));
  BenchConfig cfg;
  cfg.pmatch.match.k_p = 5000;
  cfg.seed = 4;
  const BenchReport rep = run_benchmark(pairs, cfg);
  double a_p = 0, a_r = 0, t_p = 0, t_r = 0;
  for (const auto& row : rep.aggregate) {
    if (row.label == "pmatch") a_p = row.auc[0], t_p = row.runtime;
    if (row.label == "ransac") a_r = row.auc[0], t_r = row.runtime;
  }
  const double gap = a_p - a_r;
  return {gap >= 0.10,
          fmt("scenes=50 auc@3 pmatch=%.4f ransac=%.4f gap=%.4f (>=0.10) "
              "runtime pmatch=%.3fs ransac=%.3fs",
              a_p, a_r, gap, t_p, t_r)};
}

double log_binom_pmf(int n, int k, double p) {
  if (p <= 0) return k == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  if (p >= 1) return k == n ? 0.0 : -std::numeric_limits<double>::infinity();
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) +
         k * std::log(p) + (n - k) * std::log1p(-p);
}

// Central 95% interval [lo, hi] of Binomial(n, p).
std::pair<int, int> binomial_band(int n, double p) {
  std::vector<double> cdf(static_cast<std::size_t>(n + 1));
  double acc = 0;
  for (int k = 0; k <= n; ++k) {
    acc += std::exp(log_binom_pmf(n, k, p));
    cdf[static_cast<std::size_t>(k)] = acc;
  }
  int lo = 0;
  while (lo < n && cdf[static_cast<std::size_t>(lo)] < 0.025) ++lo;
  int hi = 0;
  while (hi < n && cdf[static_cast<std::size_t>(hi)] < 0.975) ++hi;
  return {lo, hi};
}

// RANSAC success rate against 1 - (1 - w^4)^K. Scenes are noiseless, so a
// run succeeds exactly when an all-inlier sample was drawn; success is read
// as a recovered model within 1 px corner error.
Outcome ac5() {
  constexpr int kRuns = 200;
  constexpr int kIter = 1000;
  constexpr std::size_t kTotal = 500;
  bool pass = true;
  std::string detail;
  for (double w : {0.2, 0.4, 0.6}) {
    const auto n_in = static_cast<std::size_t>(std::lround(w * kTotal));
    int successes = 0;
    for (int run = 0; run < kRuns; ++run) {
      SyntheticSceneConfig sc;
      sc.n_inliers = n_in;
      sc.n_outliers = kTotal - n_in;
      sc.noise_sigma = 0;
      sc.seed = derive_seed(5, {static_cast<std::uint64_t>(w * 10), static_cast<std::uint64_t>(run)});
      const SyntheticScene scene = synth_scene(sc);
      RansacConfig rc;
      rc.k = kIter;
      rc.refit = false;
      rc.seed = derive_seed(55, {static_cast<std::uint64_t>(w * 10), static_cast<std::uint64_t>(run)});
      const RansacResult r = ransac_homography(scene.corrs, rc);
      if (r.success &&
          corner_error(r.homography, scene.plane_homographies[0], kWidth, kHeight) <= 1.0) {
        ++successes;
      }
    }
    const double p = 1.0 - std::pow(1.0 - std::pow(w, 4), kIter);
    const auto [lo, hi] = binomial_band(kRuns, p);
    const bool ok = successes >= lo && successes <= hi;
    pass = pass && ok;
    detail += fmt("w=%.1f successes=%d/%d expected=%.4f band=[%d,%d]%s ", w, successes,
                  kRuns, p, lo, hi, ok ? "" : " OUT");
  }
  return {pass, detail};
}

// Four-way classification.
Outcome ac6() {
  // Identical estimate and truth on random inputs.
  Rng rng = make_rng(6, {6});
  std::uniform_real_distribution<double> coord(-200, 900);
  std::size_t disagreements = 0;
  for (int t = 0; t < 200; ++t) {
    const Homographyd h(random_homography_matrix(rng, kWidth, kHeight, 1.0));
    CorrespondenceSet corrs;
    for (int i = 0; i < 100; ++i) {
      corrs.push_back({Point2d(coord(rng), coord(rng)), Point2d(coord(rng), coord(rng)), std::nullopt});
    }
    for (auto mode : {TransferMode::kForward, TransferMode::kSymmetric}) {
      for (double tol : {1.0, 10.0, 100.0}) {
        const auto s = four_way(corrs, h, h, tol, mode).summary;
        disagreements += s.p_only + s.g_only;
      }
    }
  }
  // Planted inlier recovery at 30% outliers.
  constexpr int kScenes = 20;
  double worst = 1.0;
  int failed_runs = 0;
  for (int s = 0; s < kScenes; ++s) {
    SyntheticSceneConfig sc;
    sc.n_inliers = 420;
    sc.n_outliers = 180;
    sc.seed = derive_seed(66, {static_cast<std::uint64_t>(s)});
    const SyntheticScene scene = synth_scene(sc);
    PipelineConfig pc;
    pc.match.seed = static_cast<std::uint64_t>(s);
    pc.sync();
    double recovered = 0;
    try {
      const PipelineResult r = estimate_planes(scene.corrs, kWidth, kHeight, pc);
      std::vector<Homographyd> hs;
      for (const auto& g : r.grouping.groups) hs.push_back(g.homography);
      const auto fw = four_way(scene.corrs, hs, scene.plane_homographies[0], 10.0);
      std::size_t planted = 0, hit = 0;
      for (std::size_t i = 0; i < scene.corrs.size(); ++i) {
        if (scene.labels[i] == 0) continue;
        ++planted;
        if (fw.labels[i] == FourWay::kBothInlier) ++hit;
      }
      recovered = static_cast<double>(hit) / static_cast<double>(planted);
    } catch (const Error&) {
      ++failed_runs;
    }
    worst = std::min(worst, recovered);
  }
  return {disagreements == 0 && worst >= 0.98,
          fmt("identical-model p_only+g_only=%zu (==0) scenes=%d min_recovery=%.4f (>=0.98) "
              "pipeline_failures=%d",
              disagreements, kScenes, worst, failed_runs)};
}

Point2d lo_of(const Rect& r) { return Point2d(r.x, r.y); }
Point2d hi_of(const Rect& r) { return Point2d(r.x + r.width, r.y + r.height); }

// Two-plane scenes with a 2x2 grid. Each plane's error is measured over the
// corners of the image region the plane occupies.
Outcome ac7() {
  constexpr int kRuns = 50;
  int two = 0, good = 0;
  for (int s = 0; s < kRuns; ++s) {
    SyntheticSceneConfig sc;
    sc.n_planes = 2;
    sc.n_inliers = 300;
    sc.n_outliers = 300;
    sc.seed = 500 + static_cast<std::uint64_t>(s);
    const SyntheticScene scene = synth_scene(sc);
    PipelineConfig pc;
    pc.match.grid_n = 2;
    pc.match.pentagons_per_block = 4;
    pc.match.seed = static_cast<std::uint64_t>(s);
    pc.sync();
    try {
      const auto groups = estimate_planes(scene.corrs, kWidth, kHeight, pc).grouping.groups;
      if (groups.size() != 2) continue;
      ++two;
      const Rect r1 = plane_region(sc, 1), r2 = plane_region(sc, 2);
      const auto err = [&](const Homographyd& h, int plane, const Rect& r) {
        return corner_error(h, scene.plane_homographies[static_cast<std::size_t>(plane)],
                            lo_of(r), hi_of(r));
      };
      const bool direct = err(groups[0].homography, 0, r1) <= 2.0 &&
                          err(groups[1].homography, 1, r2) <= 2.0;
      const bool swapped = err(groups[1].homography, 0, r1) <= 2.0 &&
                           err(groups[0].homography, 1, r2) <= 2.0;
      if (direct || swapped) ++good;
    } catch (const Error&) {
    }
  }
  const double rate = static_cast<double>(good) / kRuns;
  return {rate >= 0.90, fmt("runs=%d exactly_two_groups=%d both_within_2px=%d rate=%.2f (>=0.90)",
                            kRuns, two, good, rate)};
}

// Hull diagnostic: pentagons confined to shrinking central regions, group
// homography from the vertex fit alone.
Outcome ac8() {
  const std::vector<double> fractions = {1.0, 0.8, 0.6, 0.45, 0.3};
  constexpr int kPerFraction = 8;
  std::vector<double> hulls, errors;
  int failures = 0;
  for (std::size_t f = 0; f < fractions.size(); ++f) {
    for (int s = 0; s < kPerFraction; ++s) {
      SyntheticSceneConfig sc;
      sc.seed = derive_seed(8, {f, static_cast<std::uint64_t>(s)});
      const SyntheticScene scene = synth_scene(sc);
      PipelineConfig pc;
      const double w = kWidth * fractions[f], h = kHeight * fractions[f];
      pc.match.roi = Rect{(kWidth - w) / 2, (kHeight - h) / 2, w, h};
      pc.match.seed = static_cast<std::uint64_t>(s);
      pc.merge.refit = false;
      pc.sync();
      try {
        const auto groups = estimate_planes(scene.corrs, kWidth, kHeight, pc).grouping.groups;
        hulls.push_back(groups[0].hull_area_fraction);
        errors.push_back(
            corner_error(groups[0].homography, scene.plane_homographies[0], kWidth, kHeight));
      } catch (const Error&) {
        ++failures;
      }
    }
  }
  const double rho = hulls.size() >= 2 ? spearman(hulls, errors) : 1.0;
  return {hulls.size() >= 30 && rho <= 0.0,
          fmt("scenes=%zu (>=30) spearman(hull, corner_err)=%.4f (<=0) failures=%d",
              hulls.size(), rho, failures)};
}

// Closed-form integral of the step curve: each error e <= t contributes
// (t - e) / n to the area.
double auc_oracle(const std::vector<double>& errors, double t) {
  long double area = 0;
  for (double e : errors) {
    if (e <= t) area += static_cast<long double>(t) - e;
  }
  return static_cast<double>(area / errors.size() / t);
}

Outcome ac9() {
  Rng rng = make_rng(9, {9});
  std::uniform_int_distribution<int> len(1, 200);
  std::uniform_real_distribution<double> err(0, 15);
  std::bernoulli_distribution tie(0.1), fail(0.05);
  double worst = 0;
  for (int t = 0; t < 1000; ++t) {
    std::vector<double> errors;
    const int n = len(rng);
    for (int i = 0; i < n; ++i) {
      if (fail(rng)) errors.push_back(std::numeric_limits<double>::infinity());
      else if (tie(rng) && !errors.empty()) errors.push_back(errors.back());
      else errors.push_back(err(rng));
    }
    for (double th : {3.0, 5.0, 10.0}) {
      worst = std::max(worst, std::abs(auc(errors, th) - auc_oracle(errors, th)));
    }
  }
  const std::vector<double> zeros(50, 0.0), above(50, 3.5);
  const bool zero_ok = auc(zeros, 3.0) == 1.0;
  const bool above_ok = auc(above, 3.0) == 0.0;
  return {worst <= 1e-12 && zero_ok && above_ok,
          fmt("lists=1000 max_abs_diff=%.3g (<=1e-12) all_zero=%s all_above=%s", worst,
              zero_ok ? "1.0" : "WRONG", above_ok ? "0.0" : "WRONG")};
}

// Bit-identical results across repeated runs and thread counts.
Outcome ac10() {
  std::vector<std::string> broken;
  SyntheticSceneConfig sc;
  sc.n_planes = 2;
  sc.seed = 10;
  const SyntheticScene a = synth_scene(sc), b = synth_scene(sc);
  bool same_scene = a.corrs.size() == b.corrs.size() && a.labels == b.labels;
  for (std::size_t i = 0; same_scene && i < a.corrs.size(); ++i) {
    same_scene = a.corrs[i].p1 == b.corrs[i].p1 && a.corrs[i].p2 == b.corrs[i].p2;
  }
  if (!same_scene) broken.push_back("synth");

  const auto pipeline = [&](int threads) {
    PipelineConfig pc;
    pc.match.grid_n = 2;
    pc.match.pentagons_per_block = 3;
    pc.match.seed = 1010;
    pc.match.threads = threads;
    pc.sync();
    return estimate_planes(a.corrs, kWidth, kHeight, pc);
  };
  const PipelineResult p1 = pipeline(1), p2 = pipeline(1), p4 = pipeline(4);
  const auto pentagons_equal = [](const PipelineResult& x, const PipelineResult& y) {
    if (x.search.pentagons.size() != y.search.pentagons.size()) return false;
    for (std::size_t i = 0; i < x.search.pentagons.size(); ++i) {
      const auto& u = x.search.pentagons[i];
      const auto& v = y.search.pentagons[i];
      if (u.indices != v.indices || u.sig1.cr != v.sig1.cr || u.sig2.cr != v.sig2.cr) return false;
    }
    return true;
  };
  const auto groups_equal = [](const PipelineResult& x, const PipelineResult& y) {
    const auto& g = x.grouping.groups;
    const auto& h = y.grouping.groups;
    if (g.size() != h.size() || x.grouping.discarded != y.grouping.discarded) return false;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (g[i].pentagon_ids != h[i].pentagon_ids || !(g[i].homography == h[i].homography) ||
          !(g[i].vertex_homography == h[i].vertex_homography) ||
          g[i].hull_area_fraction != h[i].hull_area_fraction || g[i].support != h[i].support) {
        return false;
      }
    }
    return true;
  };
  if (!pentagons_equal(p1, p2) || !pentagons_equal(p1, p4)) broken.push_back("pentagon_search");
  if (!groups_equal(p1, p2) || !groups_equal(p1, p4)) broken.push_back("planar_merge");

  const auto labels_a = classify(a.corrs, p1.grouping.groups, 10.0);
  const auto labels_b = classify(a.corrs, p4.grouping.groups, 10.0);
  bool same_labels = labels_a.size() == labels_b.size();
  for (std::size_t i = 0; same_labels && i < labels_a.size(); ++i) {
    same_labels = labels_a[i].group_id == labels_b[i].group_id &&
                  labels_a[i].reproj_error == labels_b[i].reproj_error;
  }
  if (!same_labels) broken.push_back("classification");

  const auto ransac = [&](int threads) {
    RansacConfig rc;
    rc.seed = 1011;
    rc.threads = threads;
    return ransac_homography(a.corrs, rc);
  };
  const RansacResult r1 = ransac(1), r2 = ransac(1), r4 = ransac(4);
  if (!(r1.homography == r2.homography) || !(r1.homography == r4.homography) ||
      r1.inliers != r4.inliers || r1.best_iteration != r4.best_iteration) {
    broken.push_back("ransac");
  }

  const auto bench = [&](int threads) {
    SweepConfig sw = sweep(6, 300, 300, 1012);
    BenchConfig cfg;
    cfg.seed = 1013;
    cfg.repeats = 2;
    cfg.threads = threads;
    cfg.timing = false;
    return to_json(run_benchmark(synthetic_sweep(sw), cfg)).dump();
  };
  const std::string j1 = bench(1), j2 = bench(1), j3 = bench(3);
  if (j1 != j2 || j1 != j3) broken.push_back("benchmark");

  std::string detail = "stages=synth,pentagon_search,planar_merge,classification,ransac,benchmark threads={1,4}";
  for (const auto& s : broken) detail += " MISMATCH:" + s;
  return {broken.empty(), detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"AC1 cross-ratio invariance", ac1}, {"AC2 DLT exactness", ac2},
      {"AC3 single-plane end-to-end", ac3}, {"AC4 high-outlier separation", ac4},
      {"AC5 RANSAC success rate", ac5},    {"AC6 four-way classification", ac6},
      {"AC7 multi-plane", ac7},            {"AC8 hull diagnostic", ac8},
      {"AC9 AUC oracle", ac9},             {"AC10 determinism", ac10},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
