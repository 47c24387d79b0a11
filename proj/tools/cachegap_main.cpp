// cachegap: rates, converse bounds, gap certificates, and scheme simulation
// for single-bottleneck cache networks.
//
// Exit codes: 0 success/pass, 1 certification failure, 2 internal
// consistency failure (a protocol or soundness bug, not bad input),
// 64 usage error.

#include "cachegap/combinatorics.hpp"
#include "cachegap/converse.hpp"
#include "cachegap/core_rates.hpp"
#include "cachegap/envelope.hpp"
#include "cachegap/gap_verify.hpp"
#include "cachegap/scheme_sim.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace cachegap;
using ordered_json = nlohmann::ordered_json;

constexpr int kExitPass = 0;
constexpr int kExitViolation = 1;
constexpr int kExitInternal = 2;
constexpr int kExitUsage = 64;

std::string fmt(const Rational& q) {
  return to_string_exact(q) + " ~ " + to_string_decimal(q);
}

Rational flag_rational(const std::string& text, const char* flag) {
  try {
    return parse_rational(text);
  } catch (const std::invalid_argument&) {
    throw CLI::ValidationError(std::string(flag) + ": not a rational: '" + text + "'");
  }
}

// ---- curve bundle ---------------------------------------------------------

struct NamedCurve {
  std::string name;
  PiecewiseLinearCurve curve;
};

PiecewiseLinearCurve integer_budget_points(const SystemParams& base,
                                           const std::vector<Rational>& values) {
  std::vector<RatePoint> pts;
  for (long r = 0; r <= base.n_users; ++r)
    pts.push_back({Rational(r) * base.n_files / base.n_users, values[r]});
  return PiecewiseLinearCurve::from_breakpoints(std::move(pts));
}

PiecewiseLinearCurve subgroup_curve(long n_files, long n_users) {
  SystemParams probe(n_files, n_users, 0);
  std::vector<Line> lines{Line{0, 0}};  // rates never go negative
  SubgroupRange range = subgroup_admissible_n(probe);
  for (long n = range.lo; n <= range.hi && !range.empty(); ++n)
    lines.push_back(subgroup_line(probe, n).as_line());
  return upper_envelope_of_lines(std::move(lines), 0, n_files);
}

std::vector<NamedCurve> build_bundle(long n_files, long n_users) {
  SystemParams base(n_files, n_users, 0);
  std::vector<Rational> peak_values, ave_values = r_u_ave_integer_all(base);
  for (long r = 0; r <= n_users; ++r) peak_values.push_back(r_u_integer(base, r));

  PeakConverse peak_conv(n_files, n_users);

  std::vector<NamedCurve> bundle;
  bundle.push_back({"achievable-peak", integer_budget_points(base, peak_values)});
  bundle.push_back({"achievable-average", integer_budget_points(base, ave_values)});
  bundle.push_back({"converse-corner-envelope", cutset_envelope_curve(n_files, base.j())});
  bundle.push_back({"converse-subgroup", subgroup_curve(n_files, n_users)});
  bundle.push_back({"best-converse", peak_conv.best_curve()});
  return bundle;
}

// Soundness gate before anything is written: the best converse may never
// exceed the peak scheme at any breakpoint of either curve.
bool bundle_is_sound(const std::vector<NamedCurve>& bundle, std::string& complaint) {
  const PiecewiseLinearCurve* ach = nullptr;
  const PiecewiseLinearCurve* best = nullptr;
  for (const auto& nc : bundle) {
    if (nc.name == "achievable-peak") ach = &nc.curve;
    if (nc.name == "best-converse") best = &nc.curve;
  }
  std::vector<Rational> ms;
  for (const auto& pt : ach->breakpoints()) ms.push_back(pt.memory);
  for (const auto& pt : best->breakpoints()) ms.push_back(pt.memory);
  for (const auto& m : ms) {
    if (best->evaluate(m) > ach->evaluate(m)) {
      complaint = "best-converse exceeds achievable-peak at M = " + to_string_exact(m);
      return false;
    }
  }
  return true;
}

void write_bundle_csv(std::ostream& os, const std::vector<NamedCurve>& bundle) {
  os << "curve_name,M_num,M_den,R_num,R_den,M_decimal,R_decimal\n";
  for (const auto& nc : bundle) {
    for (const auto& pt : nc.curve.breakpoints()) {
      os << nc.name << "," << numerator(pt.memory).str() << "," << denominator(pt.memory).str()
         << "," << numerator(pt.rate).str() << "," << denominator(pt.rate).str() << ","
         << to_string_decimal(pt.memory) << "," << to_string_decimal(pt.rate) << "\n";
    }
  }
}

ordered_json bundle_to_json(const std::string& label, long n_files, long n_users,
                            const std::vector<NamedCurve>& bundle) {
  ordered_json out;
  out["label"] = label;
  out["params"] = {{"files", n_files}, {"users", n_users}};
  out["curves"] = ordered_json::array();
  for (const auto& nc : bundle) {
    ordered_json jc;
    jc["name"] = nc.name;
    jc["breakpoints"] = ordered_json::array();
    for (const auto& pt : nc.curve.breakpoints()) {
      jc["breakpoints"].push_back({{"M_num", numerator(pt.memory).str()},
                                   {"M_den", denominator(pt.memory).str()},
                                   {"R_num", numerator(pt.rate).str()},
                                   {"R_den", denominator(pt.rate).str()},
                                   {"M_decimal", to_double(pt.memory)},
                                   {"R_decimal", to_double(pt.rate)}});
    }
    out["curves"].push_back(std::move(jc));
  }
  return out;
}

// ---- gap report serialization ---------------------------------------------

ordered_json rational_json(const Rational& q) {
  return {{"num", numerator(q).str()}, {"den", denominator(q).str()},
          {"decimal", to_double(q)}};
}

ordered_json report_to_json(const GapReport& rep) {
  ordered_json out;
  out["suite"] = rep.suite;
  out["grid"] = rep.grid;
  out["worst_ratio"] = rational_json(rep.worst_ratio);
  out["worst_location"] = {{"files", rep.worst_location.n_files},
                           {"users", rep.worst_location.n_users},
                           {"M_num", numerator(rep.worst_location.memory).str()},
                           {"M_den", denominator(rep.worst_location.memory).str()},
                           {"flavor", rep.worst_location.flavor}};
  out["bound"] = rational_json(rep.bound);
  out["pass"] = rep.pass;
  out["counterexamples"] = rep.counterexamples;
  out["notes"] = rep.notes;
  return out;
}

int emit_report(const GapReport& rep, const std::string& out_path) {
  ordered_json j = report_to_json(rep);
  if (out_path.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) {
      std::cerr << "cachegap: cannot open " << out_path << " for writing\n";
      return kExitUsage;
    }
    f << j.dump(2) << "\n";
  }
  std::cerr << "suite " << rep.suite << ": " << (rep.pass ? "PASS" : "FAIL")
            << " worst_ratio=" << to_string_exact(rep.worst_ratio) << " ~ "
            << to_string_decimal(rep.worst_ratio) << " bound=" << to_string_exact(rep.bound)
            << "\n";
  if (!rep.pass && !rep.counterexamples.empty())
    std::cerr << "first counterexample: " << rep.counterexamples.front() << "\n";
  return rep.pass ? kExitPass : kExitViolation;
}

// ---- certify suites --------------------------------------------------------

GapReport certify_dec_gap(const Rational& step, double margin) {
  DecGapBruteforceReport bf = dec_gap_bruteforce_small_n();
  NumericInequalityReport num = dec_gap_numeric_inequalities(step, margin);

  GapReport rep;
  rep.suite = "dec-gap";
  {
    std::ostringstream os;
    os << "corners: N in [1,81], s in [1,N] with N < 9s, ell in [1,s]; tail: M in [0,9) step "
       << to_string_exact(step);
    rep.grid = os.str();
  }
  rep.worst_ratio = bf.worst_ratio;
  rep.worst_location.n_files = bf.worst_n;
  rep.worst_location.n_users = 0;  // the corner checks hold for every user count
  if (bf.worst_n > 0) rep.worst_location.memory = dec_gap_corner(bf.worst_n, bf.worst_s, bf.worst_ell).memory;
  {
    std::ostringstream os;
    os << "dec corner s=" << bf.worst_s << " ell=" << bf.worst_ell;
    rep.worst_location.flavor = os.str();
  }
  rep.bound = Rational(2);  // the exhaustive region must stay within factor 2
  rep.pass = bf.pass && num.pass;
  rep.counterexamples = bf.counterexamples;
  {
    std::ostringstream os;
    os << bf.corners_checked << " corners checked exactly; tail grid: " << num.grid_points
       << " points, min slack " << num.min_slack_first.str(6) << " at M~"
       << num.argmin_first.str(6) << " (first), " << num.min_slack_second.str(6) << " at M~"
       << num.argmin_second.str(6) << " (second), " << num.near_equality_points
       << " near-equality points; tail bound 200884/100000. " << num.notes;
    rep.notes = os.str();
  }
  if (!num.pass) rep.counterexamples.push_back("tail inequality slack went non-positive: " + num.notes);
  return rep;
}

GapReport certify_large_n(long n_users, const std::vector<long>& n_list, long shrink) {
  ExactnessReport ex = large_n_exactness_check(n_users, n_list, shrink);

  GapReport rep;
  rep.suite = "large-n-exact";
  {
    std::ostringstream os;
    os << "K=" << n_users << ", N in {";
    for (size_t i = 0; i < n_list.size(); ++i) os << (i ? "," : "") << n_list[i];
    os << "}";
    rep.grid = os.str();
  }
  // worst_ratio carries the largest additive peak gap across the list (the
  // suite certifies a vanishing difference, not a multiplicative factor)
  size_t worst_i = 0;
  for (size_t i = 0; i < ex.gaps.size(); ++i)
    if (ex.gaps[i] > ex.gaps[worst_i]) worst_i = i;
  rep.worst_ratio = ex.gaps.empty() ? Rational(0) : ex.gaps[worst_i];
  rep.worst_location.n_files = ex.n_values.empty() ? 0 : ex.n_values[worst_i];
  rep.worst_location.n_users = n_users;
  rep.worst_location.memory = 0;
  rep.worst_location.flavor = "peak additive gap";
  rep.bound = ex.gaps.empty() ? Rational(0) : ex.gaps.front() / shrink;
  rep.pass = ex.pass;
  for (const auto& sub : ex.subchecks)
    if (!sub.pass) rep.counterexamples.push_back("subcheck failed: " + sub.what);
  if (!ex.non_increasing) rep.counterexamples.push_back("gap sequence is not non-increasing");
  if (!ex.final_satisfies_threshold)
    rep.counterexamples.push_back("final gap did not shrink below first/" + std::to_string(shrink));
  {
    std::ostringstream os;
    os << "additive gaps:";
    for (size_t i = 0; i < ex.gaps.size(); ++i)
      os << " g(" << ex.n_values[i] << ")=" << to_string_decimal(ex.gaps[i]);
    os << "; subchecks:";
    for (const auto& sub : ex.subchecks) os << " [" << sub.what << ": " << (sub.pass ? "ok" : "FAIL") << "]";
    rep.notes = os.str();
  }
  return rep;
}

// ---- main ------------------------------------------------------------------

int run(int argc, char** argv) {
  CLI::App app{"rate-memory tradeoff toolkit for single-bottleneck cache networks"};
  app.require_subcommand(1);

  // rates
  auto* rates = app.add_subcommand("rates", "print achievable rates for one system");
  long rn = 0, rk = 0;
  std::string r_memory, r_budget;
  rates->add_option("--files", rn, "number of files N")->required();
  rates->add_option("--users", rk, "number of users K")->required();
  auto* opt_m = rates->add_option("--memory", r_memory, "cache size M (rational, e.g. 3/2)");
  auto* opt_r = rates->add_option("--r", r_budget, "normalized budget r = K M / N (rational)");
  opt_m->excludes(opt_r);
  opt_r->excludes(opt_m);

  // converse
  auto* conv = app.add_subcommand("converse", "print the converse bounds for one system");
  long cn = 0, ck = 0;
  std::string c_memory;
  conv->add_option("--files", cn, "number of files N")->required();
  conv->add_option("--users", ck, "number of users K")->required();
  conv->add_option("--memory", c_memory, "cache size M (rational)")->required();

  // curve
  auto* curve = app.add_subcommand("curve", "write the tradeoff curve bundle for one system");
  long vn = 0, vk = 0;
  std::string v_out, v_format = "csv", v_label;
  curve->add_option("--files", vn, "number of files N")->required();
  curve->add_option("--users", vk, "number of users K")->required();
  curve->add_option("--out", v_out, "output path")->required();
  curve->add_option("--format", v_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  curve->add_option("--label", v_label, "bundle label (json only)");

  // certify
  auto* cert = app.add_subcommand("certify", "run a certification suite, emit a report");
  std::string suite, cert_out, cert_step = "1/10000";
  long cert_nmax = 30, cert_kmax = 30, cert_grid = 8, cert_users = 5, cert_shrink = 5;
  unsigned cert_threads = 0;
  double cert_margin = 1e-7;
  std::vector<long> cert_nlist{100, 1000, 10000};
  cert->add_option("suite", suite, "dec-gap | gap-factor | large-n-exact | two-user-ave")
      ->required()
      ->check(CLI::IsMember({"dec-gap", "gap-factor", "large-n-exact", "two-user-ave"}));
  cert->add_option("--out", cert_out, "report path (default: stdout)");
  cert->add_option("--nmax", cert_nmax, "largest N (gap-factor, two-user-ave)");
  cert->add_option("--kmax", cert_kmax, "largest K (gap-factor)");
  cert->add_option("--grid", cert_grid, "memory grid density per unit (gap-factor)");
  cert->add_option("--threads", cert_threads, "worker threads, 0 = hardware (gap-factor)");
  cert->add_option("--step", cert_step, "tail grid step (dec-gap, rational)");
  cert->add_option("--margin", cert_margin, "near-equality margin (dec-gap)");
  cert->add_option("--users", cert_users, "user count K (large-n-exact)");
  cert->add_option("--nlist", cert_nlist, "increasing N values (large-n-exact)");
  cert->add_option("--shrink", cert_shrink, "required end-to-end gap shrink factor (large-n-exact)");

  // simulate
  auto* sim = app.add_subcommand("simulate", "run the coded scheme over every demand");
  long sn = 0, sk = 0, sr = 0;
  unsigned long long s_seed = 1;
  unsigned long long s_bits = 0;
  bool s_dump = false;
  sim->add_option("--files", sn, "number of files N")->required();
  sim->add_option("--users", sk, "number of users K")->required();
  sim->add_option("--r", sr, "integer cache budget r = K M / N")->required();
  sim->add_option("--seed", s_seed, "library RNG seed");
  sim->add_option("--bits", s_bits, "bits per file (0 = default 8 C(K,r))");
  sim->add_flag("--dump-transcript", s_dump, "print the delivery transcript of one demand");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  if (rates->parsed()) {
    if (r_memory.empty() && r_budget.empty())
      throw CLI::ValidationError("rates: one of --memory or --r is required");
    Rational m;
    if (!r_memory.empty()) {
      m = flag_rational(r_memory, "--memory");
    } else {
      Rational r = flag_rational(r_budget, "--r");
      m = r * rn / rk;
    }
    SystemParams p(rn, rk, m);
    std::cout << "system: N=" << rn << " K=" << rk << " M=" << to_string_exact(p.memory)
              << " (r=" << to_string_exact(p.r()) << ")\n";
    std::cout << "peak rate (r_u)        : " << fmt(r_u(p)) << "\n";
    std::cout << "average rate (r_u_ave) : " << fmt(r_u_ave(p)) << "\n";
    std::cout << "decentralized (r_dec)  : " << fmt(r_dec(p)) << "\n";
    return kExitPass;
  }

  if (conv->parsed()) {
    SystemParams p(cn, ck, flag_rational(c_memory, "--memory"));
    PeakConverse pc(cn, ck);
    Rational best = pc.evaluate(p.memory);
    auto attr = pc.attribute(p.memory);
    std::cout << "system: N=" << cn << " K=" << ck << " M=" << to_string_exact(p.memory) << "\n";
    std::cout << "best peak converse : " << fmt(best) << "\n";
    std::cout << "achieved by        : ";
    switch (attr.kind) {
      case PeakConverse::Attribution::Kind::corner_envelope:
        std::cout << "corner-envelope segment (" << to_string_exact(attr.segment_a.memory) << ","
                  << to_string_exact(attr.segment_a.rate) << ") -> ("
                  << to_string_exact(attr.segment_b.memory) << ","
                  << to_string_exact(attr.segment_b.rate) << ")";
        break;
      case PeakConverse::Attribution::Kind::subgroup:
        std::cout << attr.line.describe();
        break;
      case PeakConverse::Attribution::Kind::zero:
        std::cout << "zero floor";
        break;
    }
    std::cout << "\n";
    std::cout << "average converse   : " << fmt(ave_converse(p)) << "\n";
    return kExitPass;
  }

  if (curve->parsed()) {
    auto bundle = build_bundle(vn, vk);
    std::string complaint;
    if (!bundle_is_sound(bundle, complaint)) {
      std::cerr << "cachegap: internal consistency failure: " << complaint << "\n";
      return kExitInternal;
    }
    std::ofstream f(v_out, std::ios::binary);
    if (!f) {
      std::cerr << "cachegap: cannot open " << v_out << " for writing\n";
      return kExitUsage;
    }
    if (v_format == "csv") {
      write_bundle_csv(f, bundle);
    } else {
      if (v_label.empty())
        v_label = "N=" + std::to_string(vn) + " K=" + std::to_string(vk);
      f << bundle_to_json(v_label, vn, vk, bundle).dump(2) << "\n";
    }
    if (!f) {
      std::cerr << "cachegap: write to " << v_out << " failed\n";
      return kExitUsage;
    }
    std::cerr << "wrote " << v_out << "\n";
    return kExitPass;
  }

  if (cert->parsed()) {
    GapReport rep;
    if (suite == "dec-gap") {
      rep = certify_dec_gap(flag_rational(cert_step, "--step"), cert_margin);
    } else if (suite == "gap-factor") {
      rep = gap_factor_sweep(cert_nmax, cert_kmax, cert_grid, cert_threads);
    } else if (suite == "large-n-exact") {
      rep = certify_large_n(cert_users, cert_nlist, cert_shrink);
    } else {
      // two-user-ave reaches further by default; --nmax still overrides
      rep = two_user_equality_sweep(cert->count("--nmax") ? cert_nmax : 50);
    }
    return emit_report(rep, cert_out);
  }

  if (sim->parsed()) {
    if (sr < 0 || sk < 1 || (sr > sk))
      throw CLI::ValidationError("simulate: need 0 <= r <= K");
    SystemParams p(sn, sk, Rational(sr) * sn / sk);
    SimulationOutcome out = simulate_all_demands(p, s_bits, s_seed, true);
    Rational formula_peak = r_u(p), formula_ave = r_u_ave(p);

    size_t bits = s_bits ? s_bits : 8 * binomial(sk, sr).convert_to<size_t>();
    std::cout << "system: N=" << sn << " K=" << sk << " r=" << sr << " M="
              << to_string_exact(p.memory) << " seed=" << s_seed << "\n";
    std::cout << "bits per file : " << bits << "\n";
    std::cout << "demands       : " << out.rates.demands << "\n";
    std::cout << "measured peak    : " << fmt(out.rates.peak) << "\n";
    std::cout << "formula peak     : " << fmt(formula_peak) << "\n";
    std::cout << "measured average : " << fmt(out.rates.average) << "\n";
    std::cout << "formula average  : " << fmt(formula_ave) << "\n";
    std::cout << "all decoded          : " << (out.all_decoded ? "yes" : "NO") << "\n";
    std::cout << "load identity held   : " << (out.load_identity_held ? "yes" : "NO") << "\n";

    bool rates_match = out.rates.peak == formula_peak && out.rates.average == formula_ave;
    if (!rates_match) std::cout << "measured rates match formulas: NO\n";

    if (s_dump) {
      std::vector<long> reqs;
      for (long k = 1; k <= sk; ++k) reqs.push_back((k - 1) % sn + 1);
      FileLibrary lib = FileLibrary::random(sn, bits, s_seed);
      Demand d(reqs, sn);
      std::cout << "transcript for demand";
      for (long f : reqs) std::cout << " " << f;
      std::cout << ":\n" << transcript(lib, p, d);
    }

    if (!out.all_decoded || !out.load_identity_held || !rates_match) {
      std::cerr << "cachegap: internal consistency failure"
                << (out.first_failure.empty() ? "" : ": " + out.first_failure) << "\n";
      return kExitInternal;
    }
    return kExitPass;
  }

  return kExitUsage;  // unreachable: require_subcommand(1)
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "cachegap: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "cachegap: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "cachegap: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "cachegap: internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}
