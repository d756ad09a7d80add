#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pmatch/classification.h"
#include "pmatch/correspondence.h"
#include "pmatch/homography.h"
#include "pmatch/planar_merge.h"

namespace pmatch {

/// Parses `x1,y1,x2,y2[,conf]` CSV with a header row. Errors name the
/// offending line.
CorrespondenceSet parse_correspondences_csv(std::istream& in,
                                            const std::string& source);
CorrespondenceSet read_correspondences_csv(const std::filesystem::path& path);
std::string format_correspondences_csv(const CorrespondenceSet& corrs);

/// Three lines of three whitespace-separated numbers, row-major.
Homographyd parse_homography(std::istream& in, const std::string& source);
Homographyd read_homography(const std::filesystem::path& path);
std::string format_homography(const Homographyd& h);

/// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& contents);

std::string read_file(const std::filesystem::path& path);

nlohmann::json homography_to_json(const Homographyd& h);
Homographyd homography_from_json(const nlohmann::json& j);

/// Group report: one entry per group with pentagon ids, their vertex
/// correspondence ids, member correspondence ids, homography, hull area
/// fraction and support.
nlohmann::json groups_to_json(const std::vector<PlanarGroup>& groups,
                              const std::vector<PentagonPair>& pentagons);

struct GroupFileEntry {
  Homographyd homography;
  std::vector<std::array<std::size_t, 5>> pentagons;
};
std::vector<GroupFileEntry> groups_from_json(const nlohmann::json& j);

/// `corr_id,category,group_id,error_px`.
std::string labels_csv(const std::vector<MatchLabel>& labels);
nlohmann::json four_way_to_json(const FourWaySummary& s);

}  // namespace pmatch
