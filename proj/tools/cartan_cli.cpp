// Command-line surface for the toolkit: curve construction and export,
// invariant verification, distance queries, and overlap experiments.

#include <cstdlib>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "cartan/serialization.hpp"

namespace {

using namespace cartan;

std::filesystem::path resolve_out(const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_relative()) {
    if (const char* dir = std::getenv("CARTAN_OUT_DIR")) p = std::filesystem::path(dir) / p;
  }
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  return p;
}

GroupPoint<Rat> parse_point(const std::string& text) {
  GroupPoint<Rat> p;
  std::stringstream ss(text);
  std::string item;
  int i = 0;
  while (std::getline(ss, item, ',')) {
    if (i >= 5) throw std::invalid_argument("point: expected 5 comma-separated rationals");
    p[++i] = Rat::parse(item);
  }
  if (i != 5) throw std::invalid_argument("point: expected 5 comma-separated rationals");
  return p;
}

std::string point_str(const GroupPoint<Rat>& p) {
  std::string out = "(";
  for (int i = 1; i <= 5; ++i) {
    out += p[i].str();
    out += i < 5 ? ", " : ")";
  }
  return out;
}

// ---------------------------------------------------------------------------
// verify: a compact mirror of the invariant suites, one line per suite.

struct VerifyState {
  int failures = 0;
  void report(const std::string& name, bool ok, const std::string& detail = "") {
    std::cout << (ok ? "PASS " : "FAIL ") << name;
    if (!ok && !detail.empty()) std::cout << "  (" << detail << ")";
    std::cout << "\n";
    if (!ok) ++failures;
  }
};

int run_verify(int level, long kappa, uint64_t seed, int trials) {
  VerifyState v;
  std::mt19937_64 rng(seed);
  auto rat_rand = [&rng]() {
    std::uniform_int_distribution<long> num(-200, 200), den(1, 40);
    return Rat(num(rng), den(rng));
  };
  auto pt_rand = [&]() {
    GroupPoint<Rat> p;
    for (int i = 1; i <= 5; ++i) p[i] = rat_rand();
    return p;
  };

  {
    const auto r = bch3(AlgebraElement<Rat>::basis(2), AlgebraElement<Rat>::basis(1));
    v.report("bch3 generator expansion",
             r[1] == Rat(1) && r[2] == Rat(1) && r[3] == Rat(1, 2) && r[4] == Rat(1, 12) &&
                 r[5] == Rat(-1, 12));
  }
  {
    bool ok = true;
    for (int k = 0; k < trials && ok; ++k) {
      AlgebraElement<Rat> a, b;
      for (int i = 1; i <= 5; ++i) {
        a[i] = rat_rand();
        b[i] = rat_rand();
      }
      ok = bracket(a, b) + bracket(b, a) == AlgebraElement<Rat>::zero() &&
           bch3(bch3(a, b), a) == bch3(a, bch3(b, a));
    }
    v.report("bracket antisymmetry and bch3 associativity", ok);
  }
  {
    bool ok = true;
    for (int k = 0; k < trials && ok; ++k) {
      const auto p = pt_rand(), q = pt_rand();
      ok = mul(p, q) == mul_via_bch(p, q) && mul(p, inv(p)) == GroupPoint<Rat>::identity();
    }
    v.report("group law vs bch pipeline, inverses", ok);
  }
  {
    bool ok = true;
    for (int k = 0; k < trials && ok; ++k) {
      const auto p = pt_rand();
      const auto slice = GroupPoint<Rat>::from(p[1], p[2], p[3], Rat(0), Rat(0));
      const auto vert = GroupPoint<Rat>::from(Rat(0), Rat(0), Rat(0), p[4], p[5]);
      ok = mul(slice, vert) == p && mul(vert, slice) == p;
    }
    v.report("vertical-factor commutation identity", ok);
  }
  {
    bool ok = true;
    for (int k = 0; k < trials && ok; ++k) {
      const Rat l = rat_rand();
      const Rat l3 = l * l * l;
      ok = staircase(l, VerticalAxis::X4).end_point() == GroupPoint<Rat>::from(0, 0, 0, l3, 0) &&
           staircase(l, VerticalAxis::X5).end_point() == GroupPoint<Rat>::from(0, 0, 0, 0, l3) &&
           staircase(l, VerticalAxis::X4).length() == Rat(8) * rat_abs(l);
    }
    v.report("staircase endpoints and lengths", ok);
  }
  {
    bool ok = true;
    std::uniform_int_distribution<long> qd(5, 15), num(1, 40), den(41, 90);
    for (int k = 0; k < std::max(trials / 10, 5) && ok; ++k) {
      ModificationSpec<Rat> s;
      s.a = Rat(0);
      s.b = Rat(num(rng), den(rng));
      s.lambda = Rat(1) + Rat(num(rng), 2 * den(rng));
      s.Q = qd(rng);
      const Variant vs[] = {Variant::AlphaPlus, Variant::AlphaMinus, Variant::BetaPlus,
                            Variant::BetaMinus};
      s.variant = vs[rng() % 4];
      ok = verify_structure(s, 8 * (3 * s.Q + 2)).ok;
      for (int i = 0; i < 8 && ok; ++i) {
        ok = deviation_check(s, s.a + s.L() * Rat(i, 7)).ok();
      }
    }
    v.report("modification structure and deviation bounds", ok);
  }
  {
    bool ok = true;
    try {
      const auto seq = level_sequence(std::min(level + 8, 10), kappa);
      ok = seq[1].lambda == Rat(17, 15);
      if (kappa == 1) ok = ok && seq[1].N == BigInt("2350080000");
      lambda_n(50);
    } catch (const std::exception&) {
      ok = false;
    }
    v.report("level sequence arithmetic", ok);
  }
  {
    GammaEvaluator ev(kappa);
    const Rat mu3 = Rat(1, 120) * Rat(1, 120) * Rat(1, 120);
    bool ok = ev.eval(2, Rat(6, 17)) == GroupPoint<Rat>::from(Rat(1, 3), 0, 0, 0, mu3);
    GammaEvaluator cold(kappa, false);
    std::uniform_int_distribution<long> num(0, 99991);
    for (int k = 0; k < std::min(trials / 50, 8) && ok; ++k) {
      const Rat t(num(rng), 99991);
      const int n = std::min(level, 3);
      ok = ev.eval(n, t) == cold.eval(n, t);
    }
    v.report("lazy gamma evaluation and memo transparency", ok);
  }
  {
    GammaEvaluator ev(kappa);
    bool ok = true;
    std::uniform_int_distribution<long> num(0, 99991);
    for (int k = 0; k < 10 && ok; ++k) {
      const Rat t(num(rng), 99991);
      ok = ev.gap_bound_check(1, t).ok();
    }
    v.report("convergence gap witnesses", ok);
  }
  {
    bool ok = true;
    const Dir pool[] = {Dir::PlusX1, Dir::MinusX1, Dir::PlusX2};
    std::uniform_int_distribution<long> sp(0, 30), du(1, 20);
    for (int k = 0; k < trials / 5 && ok; ++k) {
      SegmentCurve<Rat> c(pt_rand(), Rat(0));
      for (int i = 0; i < 6; ++i) c.push(pool[rng() % 3], Rat(sp(rng), 10), Rat(du(rng), 10));
      const auto r = height_change_check(c, Rat(0), c.duration());
      ok = r.applies[2] && r.ok();
    }
    v.report("height-change constraints (sign-constrained words)", ok);
  }

  std::cout << (v.failures == 0 ? "verification passed" : "verification FAILED") << "\n";
  return v.failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"computational toolkit for the rank-2 step-3 free Carnot group"};
  app.require_subcommand(1);

  long kappa = 1;
  uint64_t seed = 1;
  std::string backend = "exact";
  app.add_option("--kappa", kappa, "Euclidean/CC comparison constant (assumption)")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "seed for randomized components");
  app.add_option("--backend", backend, "numeric backend for sampled output")
      ->check(CLI::IsMember({"exact", "float"}));

  // verify ------------------------------------------------------------------
  auto* verify = app.add_subcommand("verify", "run the invariant suites");
  int verify_level = 2;
  int verify_trials = 200;
  verify->add_option("--level", verify_level, "deepest gamma level exercised")->check(CLI::Range(1, 4));
  verify->add_option("--trials", verify_trials, "random trials per suite")->check(CLI::PositiveNumber);

  // curve -------------------------------------------------------------------
  auto* curve = app.add_subcommand("curve", "build a curve and export it");
  std::string stair_lambda, out_path, csv_path;
  std::string axis = "x4";
  std::string mod_a = "0", mod_b = "1", mod_lambda = "1", mod_variant = "alpha+";
  long mod_q = 5;
  int gamma_level = 0;
  int grid = 101;
  auto* stair_opt = curve->add_option("--staircase", stair_lambda, "staircase parameter (rational)");
  curve->add_option("--axis", axis, "staircase axis")->check(CLI::IsMember({"x4", "x5"}));
  auto* mod_opt = curve->add_flag("--modification", "build a modification curve");
  curve->add_option("--a", mod_a, "interval start (rational)");
  curve->add_option("--b", mod_b, "interval end (rational)");
  curve->add_option("--lambda", mod_lambda, "segment speed (rational)");
  curve->add_option("--Q", mod_q, "phase count");
  curve->add_option("--variant", mod_variant, "alpha+|alpha-|beta+|beta-");
  auto* gamma_opt = curve->add_option("--gamma", gamma_level, "build gamma_n (level)");
  curve->add_option("--out", out_path, "JSON descriptor output path");
  curve->add_option("--csv", csv_path, "CSV samples output path");
  curve->add_option("--grid", grid, "CSV sample rows")->check(CLI::PositiveNumber);

  // eval --------------------------------------------------------------------
  auto* eval = app.add_subcommand("eval", "evaluate gamma_n at a rational time");
  int eval_level = 2;
  std::string eval_t = "0";
  eval->add_option("--level", eval_level, "gamma level")->required();
  eval->add_option("--t", eval_t, "time in [0,1] (rational)")->required();

  // distance ----------------------------------------------------------------
  auto* distance = app.add_subcommand("distance", "two-sided CC distance bounds");
  std::string p_str, q_str;
  DistanceBudget budget;
  distance->add_option("--p", p_str, "first point, 5 comma-separated rationals")->required();
  distance->add_option("--q", q_str, "second point")->required();
  distance->add_option("--pieces", budget.pieces, "control pieces");
  distance->add_option("--iterations", budget.iterations, "descent sweeps per penalty stage");
  distance->add_option("--restarts", budget.restarts, "optimizer restarts");
  distance->add_option("--endpoint-tol", budget.endpoint_tol, "witness endpoint tolerance");
  std::string dist_out;
  distance->add_option("--out", dist_out, "JSON output path");

  // overlap -----------------------------------------------------------------
  auto* overlap = app.add_subcommand("overlap", "coincidence experiments");
  std::string family_kind = "mixed";
  int fam_count = 20;
  double fam_floor = 0.5;
  int fam_floor_coord = 1;
  double fam_coeff = 0.3;
  double tau = 1e-8;
  int ogrid = 20000;
  int olevel = 0;
  auto* bad_opt = overlap->add_flag("--badintersect", "harness against a modification curve");
  std::string family_json;
  overlap->add_option("--family-json", family_json, "family spec JSON file")
      ->check(CLI::ExistingFile);
  overlap->add_option("--family", family_kind, "lines|trig|smoothed|mixed")
      ->check(CLI::IsMember({"lines", "trig", "smoothed", "mixed"}));
  overlap->add_option("--count", fam_count, "family size")->check(CLI::PositiveNumber);
  overlap->add_option("--floor", fam_floor, "derivative floor");
  overlap->add_option("--floor-coord", fam_floor_coord, "floored coordinate")->check(CLI::Range(1, 2));
  overlap->add_option("--coeff-bound", fam_coeff, "coefficient bound");
  overlap->add_option("--tau", tau, "coincidence tolerance");
  overlap->add_option("--grid", ogrid, "measure grid")->check(CLI::PositiveNumber);
  overlap->add_option("--level", olevel, "lusin trend up to this gamma level")->check(CLI::Range(1, 3));
  overlap->add_option("--a", mod_a, "modification interval start");
  overlap->add_option("--b", mod_b, "modification interval end");
  overlap->add_option("--lambda", mod_lambda, "modification speed");
  overlap->add_option("--Q", mod_q, "modification phase count");
  overlap->add_option("--variant", mod_variant, "modification variant");
  std::string overlap_out;
  overlap->add_option("--out", overlap_out, "CSV report path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  try {
    if (*verify) {
      return run_verify(verify_level, kappa, seed, verify_trials);
    }

    if (*curve) {
      SegmentCurve<Rat> c;
      if (*stair_opt) {
        c = staircase(Rat::parse(stair_lambda), axis == "x4" ? VerticalAxis::X4 : VerticalAxis::X5);
      } else if (*mod_opt) {
        ModificationSpec<Rat> m{Rat::parse(mod_a), Rat::parse(mod_b), Rat::parse(mod_lambda), mod_q,
                                variant_parse(mod_variant)};
        c = build(m);
      } else if (*gamma_opt) {
        if (gamma_level > 2) {
          if (out_path.empty() && !csv_path.empty()) {
            GammaEvaluator ev(kappa);
            save_text_atomic(resolve_out(csv_path), csv_gamma_samples(ev, gamma_level, grid));
            std::cout << "wrote " << csv_path << "\n";
            return 0;
          }
          std::cerr << "gamma levels above 2 are lazy-only: use --csv sampling\n";
          return 2;
        }
        GammaEvaluator ev(kappa);
        c = ev.materialize(gamma_level);
      } else {
        std::cerr << "curve: choose one of --staircase/--modification/--gamma\n";
        return 2;
      }
      if (out_path.empty() && csv_path.empty()) {
        std::cerr << "curve: no output requested (use --out and/or --csv)\n";
        return 2;
      }
      if (!out_path.empty()) {
        save_text_atomic(resolve_out(out_path), curve_to_json(c).dump(2) + "\n");
        std::cout << "wrote " << out_path << "\n";
      }
      if (!csv_path.empty()) {
        save_text_atomic(resolve_out(csv_path), csv_segment_samples(c, grid));
        std::cout << "wrote " << csv_path << "\n";
      }
      return 0;
    }

    if (*eval) {
      GammaEvaluator ev(kappa);
      const auto p = ev.eval(eval_level, Rat::parse(eval_t));
      if (backend == "float") {
        const auto d = to_double_point(p);
        std::cout << "(" << d[1] << ", " << d[2] << ", " << d[3] << ", " << d[4] << ", " << d[5]
                  << ")\n";
      } else {
        std::cout << point_str(p) << "\n";
      }
      return 0;
    }

    if (*distance) {
      budget.seed = seed;
      const auto p = to_double_point(parse_point(p_str));
      const auto q = to_double_point(parse_point(q_str));
      const double lower = cc_lower(p, q);
      const auto upper = cc_upper(p, q, budget);
      const json out = distance_to_json(lower, upper);
      if (!dist_out.empty()) {
        save_text_atomic(resolve_out(dist_out), out.dump(2) + "\n");
      }
      std::cout << "lower " << lower << "  upper " << (upper.witnessed ? upper.value : -1)
                << (upper.witnessed ? "" : "  (no witness)") << "\n";
      return upper.witnessed ? 0 : 1;
    }

    if (*overlap) {
      C1HFamilySpec fam;
      if (!family_json.empty()) {
        std::ifstream f(family_json);
        json j;
        f >> j;
        fam = family_from_json(j);
      } else {
        fam.kind = family_kind == "lines"  ? FamilyKind::Lines
                   : family_kind == "trig" ? FamilyKind::TrigControls
                   : family_kind == "smoothed" ? FamilyKind::SmoothedSegments
                                               : FamilyKind::Mixed;
        fam.count = fam_count;
        fam.floor = fam_floor;
        fam.floor_coord = fam_floor_coord;
        fam.coeff_bound = fam_coeff;
        fam.seed = seed;
      }
      if (static_cast<int>(fam.lift_cells) % (2 * ogrid) != 0) {
        fam.lift_cells = static_cast<size_t>(2 * ogrid) * 30;
      }

      std::string csv = "id,label,coincidence,min_floor,residual\n";
      int rc = 0;
      if (*bad_opt) {
        ModificationSpec<Rat> m{Rat::parse(mod_a), Rat::parse(mod_b), Rat::parse(mod_lambda), mod_q,
                                variant_parse(mod_variant)};
        const auto rep = badintersect_harness(m, fam, tau, ogrid);
        for (const auto& row : rep.rows) {
          csv += std::to_string(row.id) + "," + row.label + "," + std::to_string(row.coincidence) +
                 "," + std::to_string(row.min_floor) + "," + std::to_string(row.residual) + "\n";
        }
        std::cout << "max coincidence " << rep.max_coincidence << " threshold " << rep.threshold
                  << (rep.pass ? "  PASS" : "  FAIL") << "\n";
        rc = rep.pass ? 0 : 1;
      } else {
        const int max_level = olevel == 0 ? 3 : olevel;
        const auto rep = lusin_experiment(fam, tau, ogrid, max_level, kappa);
        csv = "level,max_coincidence,mean_coincidence\n";
        for (const auto& row : rep.rows) {
          csv += std::to_string(row.level) + "," + std::to_string(row.max_coincidence) + "," +
                 std::to_string(row.mean_coincidence) + "\n";
          std::cout << "level " << row.level << "  max " << row.max_coincidence << "  mean "
                    << row.mean_coincidence << "\n";
        }
        std::cout << (rep.monotone ? "monotone PASS" : "monotone FAIL") << "\n";
        rc = rep.monotone ? 0 : 1;
      }
      if (!overlap_out.empty()) {
        save_text_atomic(resolve_out(overlap_out), csv);
        std::cout << "wrote " << overlap_out << "\n";
      }
      return rc;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
