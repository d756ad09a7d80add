#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "pmatch/error.h"
#include "pmatch/io.h"
#include "pmatch/svg.h"
#include "pmatch/synthetic.h"

namespace pmatch {
namespace {

namespace fs = std::filesystem;

CorrespondenceSet parse(const std::string& text) {
  std::istringstream in(text);
  return parse_correspondences_csv(in, "m.csv");
}

std::string parse_error(const std::string& text) {
  try {
    parse(text);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParseError);
    return e.what();
  }
  ADD_FAILURE() << "no error for: " << text;
  return {};
}

TEST(CorrespondenceCsv, ParsesWithAndWithoutConfidence) {
  const auto a = parse("x1,y1,x2,y2\n1,2,3,4\n\n5.5, 6e1 ,7,-8\n");
  ASSERT_EQ(a.size(), 2u);
  EXPECT_EQ(a[1].p1, Point2d(5.5, 60));
  EXPECT_EQ(a[1].p2, Point2d(7, -8));
  EXPECT_FALSE(a[0].confidence.has_value());
  const auto b = parse("x1,y1,x2,y2,conf\r\n1,2,3,4,0.75\r\n");
  ASSERT_EQ(b.size(), 1u);
  EXPECT_EQ(b[0].confidence.value(), 0.75);
}

TEST(CorrespondenceCsv, ErrorsNameTheLine) {
  EXPECT_EQ(parse_error("x1,y1,x2,y2\n1,2,3,4\n1,2,3\n"), "m.csv:3: expected 4 fields, got 3");
  EXPECT_EQ(parse_error("x1,y1,x2,y2\n1,2,abc,4\n"), "m.csv:2: invalid number 'abc'");
  EXPECT_EQ(parse_error("x1,y1,x2,y2,conf\n1,2,3,4,1.5\n"), "m.csv:2: confidence outside [0, 1]");
  EXPECT_EQ(parse_error("a,b,c,d\n"), "m.csv:1: expected header x1,y1,x2,y2[,conf]");
  EXPECT_EQ(parse_error(""), "m.csv:0: empty file, expected header");
  EXPECT_EQ(parse_error("x1,y1,x2,y2\n1,2,3,inf\n"), "m.csv:2: invalid number 'inf'");
}

TEST(CorrespondenceCsv, RoundTripIsExact) {
  SyntheticSceneConfig sc;
  sc.seed = 3;
  const SyntheticScene s = synth_scene(sc);
  const auto back = parse(format_correspondences_csv(s.corrs));
  ASSERT_EQ(back.size(), s.corrs.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].p1, s.corrs[i].p1);
    EXPECT_EQ(back[i].p2, s.corrs[i].p2);
  }
}

TEST(HomographyText, RoundTripAndErrors) {
  SyntheticSceneConfig sc;
  sc.seed = 4;
  const Homographyd h = synth_scene(sc).plane_homographies[0];
  std::istringstream in(format_homography(h));
  EXPECT_EQ(parse_homography(in, "H"), h);
  std::istringstream short_in("1 0 0\n0 1 0\n0 0\n");
  EXPECT_THROW(parse_homography(short_in, "H"), Error);
  std::istringstream extra("1 0 0 0 1 0 0 0 1 7");
  EXPECT_THROW(parse_homography(extra, "H"), Error);
  std::istringstream singular("1 0 0 2 0 0 0 0 1");
  EXPECT_THROW(parse_homography(singular, "H"), Error);
}

TEST(HomographyJson, RoundTrip) {
  SyntheticSceneConfig sc;
  sc.seed = 5;
  const Homographyd h = synth_scene(sc).plane_homographies[0];
  EXPECT_EQ(homography_from_json(nlohmann::json::parse(homography_to_json(h).dump())), h);
  EXPECT_THROW(homography_from_json(nlohmann::json::parse("[[1,0],[0,1]]")), Error);
}

TEST(GroupsJson, RoundTrip) {
  PentagonPair p;
  p.indices = {0, 3, 5, 8, 9};
  PlanarGroup g;
  g.pentagon_ids = {0};
  g.vertex_corr_ids = {0, 3, 5, 8, 9};
  g.support = 42;
  g.hull_area_fraction = 0.25;
  const auto j = groups_to_json({g}, {p});
  ASSERT_EQ(j.size(), 1u);
  EXPECT_EQ(j[0]["support"], 42);
  EXPECT_EQ(j[0]["group_id"], 0);
  const auto back = groups_from_json(nlohmann::json{{"groups", j}});
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].homography, g.homography);
  ASSERT_EQ(back[0].pentagons.size(), 1u);
  EXPECT_EQ(back[0].pentagons[0], p.indices);
  EXPECT_THROW(groups_from_json(nlohmann::json::parse("{\"groups\": 3}")), Error);
}

TEST(LabelsCsv, Format) {
  std::vector<MatchLabel> labels = {{0, 1, 0.5}, {1, -1, 25.0}};
  EXPECT_EQ(labels_csv(labels), "corr_id,category,group_id,error_px\n0,inlier,1,0.5\n1,outlier,-1,25\n");
}

TEST(FourWayJson, Counts) {
  FourWaySummary s{3, 4, 1, 2};
  const auto j = four_way_to_json(s);
  EXPECT_EQ(j["total"], 10);
  EXPECT_DOUBLE_EQ(j["inlier_rate"].get<double>(), 0.3);
}

TEST(AtomicWrite, ReplacesAndLeavesNoTemporaries) {
  const fs::path dir = fs::temp_directory_path() / "pmatch_io_atomic";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path f = dir / "out.txt";
  write_file_atomic(f, "first");
  write_file_atomic(f, "second");
  EXPECT_EQ(read_file(f), "second");
  std::size_t entries = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++entries;
  EXPECT_EQ(entries, 1u);
  EXPECT_THROW(write_file_atomic(dir / "missing" / "x.txt", "y"), Error);
  EXPECT_THROW(read_file(dir / "nope.txt"), Error);
  fs::remove_all(dir);
}

TEST(Svg, DeterministicWithPalette) {
  SyntheticSceneConfig sc;
  sc.n_inliers = 20;
  sc.n_outliers = 10;
  const SyntheticScene s = synth_scene(sc);
  std::vector<MatchLabel> labels;
  std::vector<FourWay> fw;
  for (std::size_t i = 0; i < s.corrs.size(); ++i) {
    labels.push_back({i, s.labels[i] > 0 ? 0 : -1, 0});
    fw.push_back(static_cast<FourWay>(i % 4));
  }
  OverlayOptions opts;
  opts.width = 640;
  opts.height = 480;
  const std::vector<std::array<std::size_t, 5>> pents = {{0, 1, 2, 3, 4}};
  const std::string a = render_overlay_svg(s.corrs, pents, labels, fw, opts);
  EXPECT_EQ(a, render_overlay_svg(s.corrs, pents, labels, fw, opts));
  EXPECT_EQ(a.rfind("<svg", 0), 0u);
  EXPECT_NE(a.find("</svg>"), std::string::npos);
  EXPECT_NE(a.find("<polygon"), std::string::npos);
}

TEST(Confidence, FilterAndValidate) {
  const CorrespondenceSet corrs = {{Point2d(0, 0), Point2d(0, 0), 0.2},
                                   {Point2d(0, 0), Point2d(0, 0), 0.7},
                                   {Point2d(0, 0), Point2d(0, 0), std::nullopt}};
  EXPECT_EQ(filter_by_confidence(corrs, 0.5).size(), 2u);
  EXPECT_EQ(filter_by_confidence(corrs, 0.0).size(), 3u);
  EXPECT_THROW(validate(Correspondence{Point2d(0, 0), Point2d(0, 0), 2.0}), Error);
  EXPECT_THROW(validate(Correspondence{Point2d(std::nan(""), 0), Point2d(0, 0), std::nullopt}), Error);
}

}  // namespace
}  // namespace pmatch
