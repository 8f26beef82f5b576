#pragma once

#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "cartan/ccmetric.hpp"
#include "cartan/limitcurve.hpp"
#include "cartan/overlaplab.hpp"

namespace cartan {

using json = nlohmann::json;

// Exact data serializes as rational strings ("p" or "p/q"); decimals appear
// only in CSV sampling output.

inline json point_to_json(const GroupPoint<Rat>& p) {
  json a = json::array();
  for (int i = 1; i <= 5; ++i) a.push_back(p[i].str());
  return a;
}

inline GroupPoint<Rat> point_from_json(const json& a) {
  if (!a.is_array() || a.size() != 5) throw std::invalid_argument("point: need 5 rational strings");
  GroupPoint<Rat> p;
  for (int i = 1; i <= 5; ++i) p[i] = Rat::parse(a[static_cast<size_t>(i - 1)].get<std::string>());
  return p;
}

inline json curve_to_json(const SegmentCurve<Rat>& c) {
  json j;
  j["start"] = point_to_json(c.start);
  j["t0"] = c.t0.str();
  json segs = json::array();
  for (const auto& s : c.segments) {
    segs.push_back({{"dir", dir_str(s.dir)}, {"speed", s.speed.str()}, {"duration", s.duration.str()}});
  }
  j["segments"] = std::move(segs);
  return j;
}

inline SegmentCurve<Rat> curve_from_json(const json& j) {
  SegmentCurve<Rat> c(point_from_json(j.at("start")), Rat::parse(j.at("t0").get<std::string>()));
  for (const auto& s : j.at("segments")) {
    c.push(dir_parse(s.at("dir").get<std::string>()), Rat::parse(s.at("speed").get<std::string>()),
           Rat::parse(s.at("duration").get<std::string>()));
  }
  return c;
}

inline json modification_to_json(const ModificationSpec<Rat>& m) {
  return json{{"a", m.a.str()},
              {"b", m.b.str()},
              {"lambda", m.lambda.str()},
              {"Q", m.Q},
              {"variant", variant_str(m.variant)}};
}

inline ModificationSpec<Rat> modification_from_json(const json& j) {
  ModificationSpec<Rat> m;
  m.a = Rat::parse(j.at("a").get<std::string>());
  m.b = Rat::parse(j.at("b").get<std::string>());
  m.lambda = Rat::parse(j.at("lambda").get<std::string>());
  m.Q = j.at("Q").get<long>();
  m.variant = variant_parse(j.at("variant").get<std::string>());
  m.validate();
  return m;
}

inline json family_to_json(const C1HFamilySpec& f) {
  const char* kind = f.kind == FamilyKind::Lines           ? "lines"
                     : f.kind == FamilyKind::TrigControls  ? "trig"
                     : f.kind == FamilyKind::SmoothedSegments ? "smoothed"
                                                              : "mixed";
  return json{{"kind", kind},          {"coeff_bound", f.coeff_bound}, {"floor", f.floor},
              {"floor_coord", f.floor_coord}, {"count", f.count},      {"seed", f.seed}};
}

inline C1HFamilySpec family_from_json(const json& j) {
  C1HFamilySpec f;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "lines") f.kind = FamilyKind::Lines;
  else if (kind == "trig") f.kind = FamilyKind::TrigControls;
  else if (kind == "smoothed") f.kind = FamilyKind::SmoothedSegments;
  else if (kind == "mixed") f.kind = FamilyKind::Mixed;
  else throw std::invalid_argument("family: bad kind '" + kind + "'");
  if (j.contains("coeff_bound")) f.coeff_bound = j.at("coeff_bound").get<double>();
  if (j.contains("floor")) f.floor = j.at("floor").get<double>();
  if (j.contains("floor_coord")) f.floor_coord = j.at("floor_coord").get<int>();
  if (j.contains("count")) f.count = j.at("count").get<int>();
  if (j.contains("seed")) f.seed = j.at("seed").get<uint64_t>();
  f.validate();
  return f;
}

inline json distance_to_json(double lower, const CCUpperResult& up) {
  json w;
  w["start"] = json::array();
  for (int i = 1; i <= 5; ++i) w["start"].push_back(up.witness.start[i]);
  json pieces = json::array();
  for (const auto& p : up.witness.pieces) {
    pieces.push_back({{"u1", p.u1}, {"u2", p.u2}, {"dt", p.dt}});
  }
  w["pieces"] = std::move(pieces);
  return json{{"lower", lower},
              {"upper", up.value},
              {"witnessed", up.witnessed},
              {"endpoint_gap", up.endpoint_gap},
              {"witness", std::move(w)}};
}

// ---------------------------------------------------------------------------
// CSV sampling: header t,x1,...,x5; 30-digit decimal expansions of exact
// rational samples.

inline std::string csv_header() { return "t,x1,x2,x3,x4,x5\n"; }

inline void csv_row(std::string& out, const Rat& t, const GroupPoint<Rat>& p, int digits = 30) {
  out += decimal_string(t, digits);
  for (int i = 1; i <= 5; ++i) {
    out += ',';
    out += decimal_string(p[i], digits);
  }
  out += '\n';
}

/// `rows` samples, endpoints included.
inline std::string csv_segment_samples(const SegmentCurve<Rat>& c, int rows, int digits = 30) {
  if (rows < 2) throw std::invalid_argument("csv: need at least 2 rows");
  std::string out = csv_header();
  const Rat T = c.duration();
  for (int i = 0; i < rows; ++i) {
    const Rat t = c.t0 + T * Rat(i, rows - 1);
    csv_row(out, t, c.eval(t), digits);
  }
  return out;
}

inline std::string csv_gamma_samples(const GammaEvaluator& ev, int level, int rows,
                                     int digits = 30) {
  if (rows < 2) throw std::invalid_argument("csv: need at least 2 rows");
  std::string out = csv_header();
  for (int i = 0; i < rows; ++i) {
    const Rat t(i, static_cast<long>(rows) - 1);
    csv_row(out, t, ev.eval(level, t), digits);
  }
  return out;
}

/// Writes through a temp file and renames, so outputs appear atomically.
inline void save_text_atomic(const std::filesystem::path& path, const std::string& text) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    f << text;
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace cartan
