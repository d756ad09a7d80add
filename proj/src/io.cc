#include "pmatch/io.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <system_error>

#include "pmatch/error.h"

namespace pmatch {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(s);
  while (std::getline(in, field, sep)) out.push_back(trim(field));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

bool parse_double(const std::string& s, double* out) {
  if (s.empty()) return false;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, *out);
  return ec == std::errc() && ptr == last;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

CorrespondenceSet parse_correspondences_csv(std::istream& in,
                                            const std::string& source) {
  const auto fail = [&](std::size_t line, const std::string& msg) {
    return Error(ErrorCode::kParseError,
                 source + ":" + std::to_string(line) + ": " + msg);
  };
  std::string line;
  std::size_t lineno = 0;
  bool have_conf = false;
  bool header_seen = false;
  CorrespondenceSet corrs;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto fields = split(t, ',');
    if (!header_seen) {
      header_seen = true;
      const bool base = fields.size() >= 4 && fields[0] == "x1" &&
                        fields[1] == "y1" && fields[2] == "x2" && fields[3] == "y2";
      if (!base || fields.size() > 5 || (fields.size() == 5 && fields[4] != "conf")) {
        throw fail(lineno, "expected header x1,y1,x2,y2[,conf]");
      }
      have_conf = fields.size() == 5;
      continue;
    }
    const std::size_t expected = have_conf ? 5 : 4;
    if (fields.size() != expected) {
      throw fail(lineno, "expected " + std::to_string(expected) + " fields, got " +
                             std::to_string(fields.size()));
    }
    double v[5] = {0, 0, 0, 0, 0};
    for (std::size_t k = 0; k < expected; ++k) {
      if (!parse_double(fields[k], &v[k]) || !std::isfinite(v[k])) {
        throw fail(lineno, "invalid number '" + fields[k] + "'");
      }
    }
    Correspondence c{Point2d(v[0], v[1]), Point2d(v[2], v[3]), std::nullopt};
    if (have_conf) {
      if (!(v[4] >= 0 && v[4] <= 1)) throw fail(lineno, "confidence outside [0, 1]");
      c.confidence = v[4];
    }
    corrs.push_back(c);
  }
  if (!header_seen) throw fail(lineno, "empty file, expected header");
  return corrs;
}

CorrespondenceSet read_correspondences_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  return parse_correspondences_csv(in, path.string());
}

std::string format_correspondences_csv(const CorrespondenceSet& corrs) {
  const bool conf = !corrs.empty() && corrs.front().confidence.has_value();
  std::string out = conf ? "x1,y1,x2,y2,conf\n" : "x1,y1,x2,y2\n";
  for (const auto& c : corrs) {
    out += format_double(c.p1.x()) + "," + format_double(c.p1.y()) + "," +
           format_double(c.p2.x()) + "," + format_double(c.p2.y());
    if (conf) out += "," + format_double(c.confidence.value_or(1.0));
    out += "\n";
  }
  return out;
}

Homographyd parse_homography(std::istream& in, const std::string& source) {
  Matrix3<double> m;
  std::string tok;
  for (int i = 0; i < 9; ++i) {
    if (!(in >> tok)) {
      throw Error(ErrorCode::kParseError,
                  source + ": expected 9 numbers, got " + std::to_string(i));
    }
    double v;
    if (!parse_double(tok, &v)) {
      throw Error(ErrorCode::kParseError, source + ": invalid number '" + tok + "'");
    }
    m(i / 3, i % 3) = v;
  }
  if (in >> tok) {
    throw Error(ErrorCode::kParseError, source + ": trailing content '" + tok + "'");
  }
  try {
    return Homographyd(m);
  } catch (const Error& e) {
    throw Error(ErrorCode::kParseError, source + ": " + e.what());
  }
}

Homographyd read_homography(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  return parse_homography(in, path.string());
}

std::string format_homography(const Homographyd& h) {
  std::string out;
  for (int r = 0; r < 3; ++r) {
    out += format_double(h(r, 0)) + " " + format_double(h(r, 1)) + " " +
           format_double(h(r, 2)) + "\n";
  }
  return out;
}

void write_file_atomic(const std::filesystem::path& path,
                       const std::string& contents) {
  std::random_device rd;
  const std::filesystem::path tmp =
      path.string() + ".tmp." + std::to_string(rd() & 0xffffff);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIoError, "cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw Error(ErrorCode::kIoError, "write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    std::filesystem::remove(tmp, ignored);
    throw Error(ErrorCode::kIoError,
                "cannot rename into " + path.string() + ": " + ec.message());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json homography_to_json(const Homographyd& h) {
  nlohmann::json rows = nlohmann::json::array();
  for (int r = 0; r < 3; ++r) rows.push_back({h(r, 0), h(r, 1), h(r, 2)});
  return rows;
}

Homographyd homography_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 3) {
    throw Error(ErrorCode::kParseError, "homography must be a 3x3 array");
  }
  Matrix3<double> m;
  for (int r = 0; r < 3; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || row.size() != 3) {
      throw Error(ErrorCode::kParseError, "homography must be a 3x3 array");
    }
    for (int c = 0; c < 3; ++c) {
      const auto& v = row[static_cast<std::size_t>(c)];
      if (!v.is_number()) throw Error(ErrorCode::kParseError, "homography entry is not a number");
      m(r, c) = v.get<double>();
    }
  }
  return Homographyd(m);
}

nlohmann::json groups_to_json(const std::vector<PlanarGroup>& groups,
                              const std::vector<PentagonPair>& pentagons) {
  nlohmann::json arr = nlohmann::json::array();
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const auto& grp = groups[g];
    nlohmann::json pents = nlohmann::json::array();
    for (std::size_t id : grp.pentagon_ids) {
      const auto& idx = pentagons.at(id).indices;
      pents.push_back({{"id", id},
                       {"vertices", std::vector<std::size_t>(idx.begin(), idx.end())}});
    }
    arr.push_back({{"group_id", g},
                   {"pentagons", pents},
                   {"correspondence_ids", grp.vertex_corr_ids},
                   {"homography", homography_to_json(grp.homography)},
                   {"vertex_homography", homography_to_json(grp.vertex_homography)},
                   {"hull_area_fraction", grp.hull_area_fraction},
                   {"support", grp.support}});
  }
  return arr;
}

std::vector<GroupFileEntry> groups_from_json(const nlohmann::json& j) {
  const nlohmann::json& arr = j.is_object() && j.contains("groups") ? j["groups"] : j;
  if (!arr.is_array()) throw Error(ErrorCode::kParseError, "groups file must hold an array");
  std::vector<GroupFileEntry> out;
  for (const auto& g : arr) {
    if (!g.is_object() || !g.contains("homography")) {
      throw Error(ErrorCode::kParseError, "group entry lacks a homography");
    }
    GroupFileEntry e{homography_from_json(g["homography"]), {}};
    if (g.contains("pentagons")) {
      for (const auto& p : g["pentagons"]) {
        const auto& v = p.is_object() ? p.at("vertices") : p;
        if (!v.is_array() || v.size() != 5) {
          throw Error(ErrorCode::kParseError, "pentagon must list 5 vertices");
        }
        std::array<std::size_t, 5> idx{};
        for (std::size_t k = 0; k < 5; ++k) idx[k] = v[k].get<std::size_t>();
        e.pentagons.push_back(idx);
      }
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::string labels_csv(const std::vector<MatchLabel>& labels) {
  std::string out = "corr_id,category,group_id,error_px\n";
  for (const auto& l : labels) {
    out += std::to_string(l.corr_id) + "," + (l.is_inlier() ? "inlier" : "outlier") +
           "," + std::to_string(l.group_id) + "," + format_double(l.reproj_error) + "\n";
  }
  return out;
}

nlohmann::json four_way_to_json(const FourWaySummary& s) {
  return {{"both_inlier", s.both_inlier},
          {"both_outlier", s.both_outlier},
          {"p_only", s.p_only},
          {"g_only", s.g_only},
          {"total", s.total()},
          {"inlier_rate", s.inlier_rate()}};
}

}  // namespace pmatch
