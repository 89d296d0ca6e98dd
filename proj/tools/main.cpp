// popmatch: decide whether a matching is popular (never loses a head-to-head
// vote), emit and validate the integral dual certificates behind the answer,
// and cross-validate the deciders against an exhaustive oracle.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "popmatch/characterize.hpp"
#include "popmatch/crosscheck.hpp"
#include "popmatch/duals.hpp"
#include "popmatch/instance.hpp"
#include "popmatch/oracle.hpp"
#include "popmatch/weights.hpp"

namespace pm = popmatch;
using nlohmann::json;

namespace {

// Exit codes shared by every subcommand. Disagree is a bug sentinel: a
// correct build never produces it on well-formed input.
constexpr int kExitPopular = 0;
constexpr int kExitNotPopular = 1;
constexpr int kExitDisagree = 2;
constexpr int kExitInputError = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw pm::ParseError(0, "cannot open '" + path + "'");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// Instance files are stored unaugmented; the one-sided checks need the
// last-resort columns, so they are appended right after parsing.
pm::Instance load_instance(const std::string& path) {
  pm::Instance inst = pm::parse_instance(read_file(path));
  if (inst.variant() != pm::Variant::SMI) inst = pm::add_last_resorts(inst);
  return inst;
}

// --matching accepts either a file path or the inline "a1 h1; a2 h2" form.
pm::Matching load_matching(const pm::Instance& inst, const std::string& arg) {
  if (!arg.empty() && std::filesystem::exists(arg))
    return pm::parse_matching(inst, read_file(arg));
  return pm::parse_matching(inst, arg);
}

struct MethodSelection {
  bool structural = false;
  bool optimization = false;
  bool bruteforce = false;
};

MethodSelection parse_methods(const std::vector<std::string>& names) {
  MethodSelection sel;
  if (names.empty()) return {true, true, true};
  for (const std::string& name : names) {
    if (name == "all") {
      sel = {true, true, true};
    } else if (name == "structural") {
      sel.structural = true;
    } else if (name == "optimization") {
      sel.optimization = true;
    } else if (name == "bruteforce" || name == "brute_force") {
      sel.bruteforce = true;
    } else {
      throw pm::BadParameters("unknown method '" + name + "'");
    }
  }
  return sel;
}

long long elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                               start)
      .count();
}

// ---------------------------------------------------------------------------
// verify

struct VerifyOptions {
  std::string instance_path;
  std::string matching_arg;
  std::vector<std::string> methods;
  int guard_edges = 24;
  bool as_json = false;
};

int run_verify(const VerifyOptions& opt) {
  auto start = std::chrono::steady_clock::now();
  pm::Instance inst = load_instance(opt.instance_path);
  pm::Matching m = load_matching(inst, opt.matching_arg);
  MethodSelection sel = parse_methods(opt.methods);

  std::vector<pm::Verdict> verdicts;
  if (sel.structural) verdicts.push_back(pm::structural_check(inst, m));
  if (sel.optimization)
    verdicts.push_back(pm::optimization_check(inst, m, pm::candidate_weights(inst, m),
                                              pm::candidate_mode(inst)));
  if (sel.bruteforce) verdicts.push_back(pm::bruteforce_check(inst, m, opt.guard_edges));
  if (verdicts.empty()) throw pm::BadParameters("no method selected");

  bool all_yes = true, all_no = true;
  for (const pm::Verdict& v : verdicts) (v.popular ? all_no : all_yes) = false;

  json report{{"command", "verify"},
              {"instance", opt.instance_path},
              {"digest", pm::digest_hex(pm::instance_digest(inst))},
              {"variant", pm::to_string(inst.variant())},
              {"matching", pm::serialize_matching(inst, m)},
              {"agree", all_yes || all_no},
              {"popular", all_yes},
              {"elapsed_ms", elapsed_ms(start)}};
  report["verdicts"] = json::object();
  for (const pm::Verdict& v : verdicts)
    report["verdicts"][pm::to_string(v.method)] = pm::verdict_json(inst, v);

  if (opt.as_json) {
    std::cout << report.dump(2) << "\n";
  } else {
    std::cout << "instance " << opt.instance_path << "  digest=" << report["digest"].get<std::string>()
              << "  variant=" << pm::to_string(inst.variant()) << "\n"
              << "matching: " << pm::serialize_matching(inst, m) << "\n";
    for (const pm::Verdict& v : verdicts)
      std::cout << pm::to_string(v.method) << ": " << (v.popular ? "popular" : "not popular")
                << "\n";
    std::cout << "verdict: "
              << (all_yes ? "popular" : all_no ? "not popular" : "METHODS DISAGREE") << "\n";
  }
  if (all_yes) return kExitPopular;
  if (all_no) return kExitNotPopular;
  return kExitDisagree;
}

// ---------------------------------------------------------------------------
// certify

int run_certify(const std::string& instance_path, const std::string& matching_arg,
                bool /*as_json: certificates are always JSON*/) {
  pm::Instance inst = load_instance(instance_path);
  pm::Matching m = load_matching(inst, matching_arg);

  pm::Verdict structural = pm::structural_check(inst, m);
  pm::EdgeWeights w = pm::candidate_weights(inst, m);
  pm::Verdict optimization = pm::optimization_check(inst, m, w, pm::candidate_mode(inst));
  if (structural.popular != optimization.popular)
    throw pm::InternalError("structural and optimization verdicts disagree");

  json report{{"command", "certify"},
              {"instance", instance_path},
              {"digest", pm::digest_hex(pm::instance_digest(inst))},
              {"variant", pm::to_string(inst.variant())},
              {"matching", pm::serialize_matching(inst, m)},
              {"popular", structural.popular}};

  if (structural.popular) {
    report["certificate"] = pm::certificate_json(inst, m, w, pm::build_dual(inst, m));
    std::cout << report.dump(2) << "\n";
    return kExitPopular;
  }

  report["witness"] = pm::witness_json(inst, *structural.witness);
  report["rival"] = pm::serialize_matching(inst, *optimization.rival);
  report["rival_weight"] = *optimization.rival_weight;
  report["own_weight"] = w.of_matching(inst, m);
  if (inst.variant() == pm::Variant::SMI) {
    pm::Improvement imp = pm::improve_matching_smi(inst, m, *structural.witness);
    report["improvement"] = {{"matching", pm::serialize_matching(inst, imp.improved)},
                             {"gain", imp.gain}};
  }
  std::cout << report.dump(2) << "\n";
  return kExitNotPopular;
}

// ---------------------------------------------------------------------------
// find

int run_find(const std::string& instance_path, int guard_edges, bool as_json) {
  pm::Instance inst = load_instance(instance_path);
  std::optional<pm::Matching> found = pm::find_popular(inst);

  json report{{"command", "find"},
              {"instance", instance_path},
              {"digest", pm::digest_hex(pm::instance_digest(inst))},
              {"variant", pm::to_string(inst.variant())},
              {"found", found.has_value()}};
  if (found) {
    report["matching"] = pm::serialize_matching(inst, *found);
    report["verdicts"] = json::object();
    pm::Verdict structural = pm::structural_check(inst, *found);
    pm::Verdict optimization = pm::optimization_check(inst, *found, pm::candidate_weights(inst, *found),
                                                      pm::candidate_mode(inst));
    report["verdicts"][pm::to_string(structural.method)] = pm::verdict_json(inst, structural);
    report["verdicts"][pm::to_string(optimization.method)] = pm::verdict_json(inst, optimization);
    try {
      pm::Verdict brute = pm::bruteforce_check(inst, *found, guard_edges);
      report["verdicts"][pm::to_string(brute.method)] = pm::verdict_json(inst, brute);
    } catch (const pm::TooLarge&) {
      report["verdicts"]["brute_force"] = "skipped: instance above the oracle guard";
    }
  }

  if (as_json) {
    std::cout << report.dump(2) << "\n";
  } else if (found) {
    std::cout << pm::serialize_matching(inst, *found) << "\n";
    std::cerr << "popular matching found; verify report:\n" << report["verdicts"].dump(2) << "\n";
  } else {
    std::cout << "no popular matching\n";
  }
  return found ? kExitPopular : kExitNotPopular;
}

// ---------------------------------------------------------------------------
// gen

struct GenOptions {
  std::uint64_t seed = 0;
  std::string variant = "ha";
  int n_left = 3;
  int n_right = 3;
  double density = 0.8;
  double tie_prob = 0.3;
  int count = 1;
  std::string out_dir;
  bool as_json = false;
};

// splitmix64; decorrelates the per-instance seeds derived from (seed, index).
std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

int run_gen(const GenOptions& opt) {
  if (opt.count < 1) throw pm::BadParameters("count must be positive");
  if (opt.count > 1 && opt.out_dir.empty() && !opt.as_json)
    throw pm::BadParameters("generating several instances needs --out or --json");

  pm::RandomInstanceParams params;
  params.variant = pm::parse_variant(opt.variant);
  params.n_left = opt.n_left;
  params.n_right = opt.n_right;
  params.edge_density = opt.density;
  params.tie_prob = params.variant == pm::Variant::HAT ? opt.tie_prob : 0.0;

  json listing = json::array();
  for (int i = 0; i < opt.count; ++i) {
    params.seed = mix64(opt.seed ^ std::uint64_t(i));
    pm::Instance inst = pm::random_instance(params);
    std::string text = pm::serialize_instance(inst);
    std::string digest = pm::digest_hex(pm::instance_digest(inst));
    if (!opt.out_dir.empty()) {
      std::filesystem::create_directories(opt.out_dir);
      std::string name = std::string(pm::to_string(params.variant)) + "_" +
                         std::to_string(opt.seed) + "_" + std::to_string(i) + ".txt";
      std::ofstream out(std::filesystem::path(opt.out_dir) / name, std::ios::binary);
      out << text;
    } else if (!opt.as_json) {
      std::cout << text;
    }
    listing.push_back({{"digest", digest}, {"text", text}});
  }
  if (opt.as_json)
    std::cout << json{{"command", "gen"}, {"count", opt.count}, {"instances", listing}}.dump(2)
              << "\n";
  return kExitPopular;
}

// ---------------------------------------------------------------------------
// fuzz

struct FuzzOptions {
  std::uint64_t seed = 0;
  long long count = 100;
  int n_left = 4;
  int n_right = 4;
  std::string variant = "all";
  double tie_prob = 0.3;
  int guard_edges = 24;
  int jobs = 0;
  std::string repro_path = "fuzz_repro.txt";
  bool as_json = false;
};

pm::RandomInstanceParams fuzz_params(const FuzzOptions& opt, long long index) {
  std::mt19937_64 rng(mix64(opt.seed) ^ mix64(std::uint64_t(index) + 1));
  pm::RandomInstanceParams p;
  if (opt.variant == "all") {
    constexpr pm::Variant kCycle[3] = {pm::Variant::HA, pm::Variant::HAT, pm::Variant::SMI};
    p.variant = kCycle[index % 3];
  } else {
    p.variant = pm::parse_variant(opt.variant);
  }
  p.n_left = 1 + int(rng() % std::uint64_t(opt.n_left));
  p.n_right = 1 + int(rng() % std::uint64_t(opt.n_right));
  p.edge_density = 0.3 + 0.1 * double(rng() % 8);
  p.tie_prob = p.variant == pm::Variant::HAT ? opt.tie_prob : 0.0;
  p.seed = rng();
  return p;
}

int run_fuzz(const FuzzOptions& opt) {
  if (opt.count < 1 || opt.n_left < 1 || opt.n_right < 1)
    throw pm::BadParameters("count and sizes must be positive");
  // The worst case the generator can emit must stay under the oracle guard;
  // one-sided instances gain a last-resort edge per left vertex.
  int worst_edges = opt.n_left * opt.n_right + (opt.variant == "smi" ? 0 : opt.n_left);
  if (worst_edges > opt.guard_edges)
    throw pm::BadParameters("sizes allow " + std::to_string(worst_edges) +
                            " edges, above the oracle guard of " +
                            std::to_string(opt.guard_edges));

  auto start = std::chrono::steady_clock::now();
  pm::CrosscheckOptions copts;
  copts.guard_edges = opt.guard_edges;

  std::vector<pm::CrosscheckReport> reports(size_t(opt.count));
  std::vector<std::string> errors(size_t(opt.count));
  std::atomic<long long> next{0};
  auto worker = [&] {
    for (;;) {
      long long i = next.fetch_add(1);
      if (i >= opt.count) return;
      try {
        reports[size_t(i)] = pm::crosscheck_instance(pm::random_instance(fuzz_params(opt, i)),
                                                     copts);
      } catch (const std::exception& e) {
        errors[size_t(i)] = e.what();
      }
    }
  };
  int jobs = opt.jobs > 0 ? opt.jobs : int(std::max(1u, std::thread::hardware_concurrency()));
  jobs = int(std::min<long long>(jobs, opt.count));
  std::vector<std::thread> pool;
  for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  // Aggregate in index order so the summary and the chosen repro are
  // independent of scheduling.
  pm::CrosscheckReport total;
  long long first_bad = -1;
  for (long long i = 0; i < opt.count; ++i) {
    if (!errors[size_t(i)].empty()) {
      if (first_bad < 0) first_bad = i;
      if (total.first_failure.empty()) total.first_failure = errors[size_t(i)];
      total.disagreements += 1;  // an engine error is never acceptable here
      continue;
    }
    if (!reports[size_t(i)].ok() && first_bad < 0) first_bad = i;
    total.absorb(reports[size_t(i)]);
  }

  if (first_bad >= 0) {
    pm::Instance inst = pm::random_instance(fuzz_params(opt, first_bad));
    std::ofstream out(opt.repro_path, std::ios::binary);
    out << "# fuzz repro: seed=" << opt.seed << " index=" << first_bad << "\n"
        << "# failure: " << total.first_failure << "\n"
        << pm::serialize_instance(inst);
    std::cerr << "first failure written to " << opt.repro_path << "\n";
  }

  json summary{{"command", "fuzz"},
               {"seed", opt.seed},
               {"count", opt.count},
               {"variant", opt.variant},
               {"sizes", std::to_string(opt.n_left) + "x" + std::to_string(opt.n_right)},
               {"instances", opt.count},
               {"candidates", total.candidates},
               {"popular", total.popular},
               {"disagreements", total.disagreements},
               {"certificate_failures", total.certificate_failures},
               {"derivation_failures", total.derivation_failures},
               {"improver_failures", total.improver_failures},
               {"infrastructure_failures", total.infrastructure_failures},
               {"improvements_checked", total.improvements_checked},
               {"derivations_checked", total.derivations_checked},
               {"ok", total.ok()},
               {"first_failure", total.first_failure}};
  if (opt.as_json) {
    std::cout << summary.dump(2) << "\n";
  } else {
    std::cout << "fuzz seed=" << opt.seed << " count=" << opt.count << " variant=" << opt.variant
              << " sizes=" << opt.n_left << "x" << opt.n_right << "\n"
              << "candidates=" << total.candidates << " popular=" << total.popular
              << " disagreements=" << total.disagreements
              << " certificate_failures=" << total.certificate_failures
              << " derivation_failures=" << total.derivation_failures
              << " improver_failures=" << total.improver_failures
              << " infrastructure_failures=" << total.infrastructure_failures << "\n"
              << "result: " << (total.ok() ? "ok" : "FAILED: " + total.first_failure) << "\n";
  }
  std::cerr << "fuzz wall time: " << elapsed_ms(start) << " ms\n";
  return total.ok() ? kExitPopular : kExitDisagree;
}

// ---------------------------------------------------------------------------
// cross-check

int run_crosscheck(const std::string& instance_path, int guard_edges, bool as_json) {
  auto start = std::chrono::steady_clock::now();
  pm::CrosscheckOptions copts;
  copts.guard_edges = guard_edges;
  pm::Instance inst = pm::parse_instance(read_file(instance_path));
  pm::CrosscheckReport r = pm::crosscheck_instance(inst, copts);

  json report{{"command", "cross-check"},
              {"instance", instance_path},
              {"digest", r.digest},
              {"candidates", r.candidates},
              {"popular", r.popular},
              {"disagreements", r.disagreements},
              {"certificate_failures", r.certificate_failures},
              {"derivation_failures", r.derivation_failures},
              {"improver_failures", r.improver_failures},
              {"infrastructure_failures", r.infrastructure_failures},
              {"ok", r.ok()},
              {"first_failure", r.first_failure},
              {"elapsed_ms", elapsed_ms(start)}};
  if (as_json) {
    std::cout << report.dump(2) << "\n";
  } else {
    std::cout << "instance " << instance_path << "  digest=" << r.digest << "\n"
              << "candidates=" << r.candidates << " popular=" << r.popular << "\n"
              << "result: " << (r.ok() ? "ok (all methods agree on every candidate)"
                                       : "FAILED: " + r.first_failure)
              << "\n";
  }
  return r.ok() ? kExitPopular : kExitDisagree;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"popularity of matchings: verify, certify, construct, cross-validate"};
  app.require_subcommand(1);

  VerifyOptions vopt;
  CLI::App* verify = app.add_subcommand(
      "verify", "judge one matching (exit 0 popular, 1 not, 2 disagreement, 3 input error)");
  verify->add_option("instance", vopt.instance_path, "instance file")->required();
  verify->add_option("--matching", vopt.matching_arg, "matching, inline or a file path")
      ->required();
  verify->add_option("--method", vopt.methods,
                     "structural|optimization|bruteforce|all (repeatable, default all)");
  verify->add_option("--guard-edges", vopt.guard_edges, "oracle edge limit (default 24)");
  verify->add_flag("--json", vopt.as_json, "emit a JSON report");

  std::string cert_instance, cert_matching;
  bool cert_json = false;
  CLI::App* certify = app.add_subcommand(
      "certify", "emit the dual certificate (popular) or witness+rival (not; exit 1)");
  certify->add_option("instance", cert_instance, "instance file")->required();
  certify->add_option("--matching", cert_matching, "matching, inline or a file path")->required();
  certify->add_flag("--json", cert_json, "certificates are always JSON; accepted for symmetry");

  std::string find_instance;
  int find_guard = 24;
  bool find_json = false;
  CLI::App* find = app.add_subcommand(
      "find", "construct a popular matching or report that none exists (exit 1)");
  find->add_option("instance", find_instance, "instance file")->required();
  find->add_option("--guard-edges", find_guard, "oracle edge limit for the verify report");
  find->add_flag("--json", find_json, "emit a JSON report");

  GenOptions gopt;
  CLI::App* gen = app.add_subcommand("gen", "emit deterministic random instances");
  gen->add_option("--seed", gopt.seed, "generator seed (default 0)");
  gen->add_option("--variant", gopt.variant, "ha|hat|smi (default ha)");
  gen->add_option("--n-left", gopt.n_left, "left side size (default 3)");
  gen->add_option("--n-right", gopt.n_right, "right side size (default 3)");
  gen->add_option("--density", gopt.density, "edge probability (default 0.8)");
  gen->add_option("--tie-prob", gopt.tie_prob, "tie merge probability, hat only (default 0.3)");
  gen->add_option("--count", gopt.count, "how many instances (default 1)");
  gen->add_option("--out", gopt.out_dir, "write files into this directory instead of stdout");
  gen->add_flag("--json", gopt.as_json, "emit a JSON listing");

  FuzzOptions fopt;
  CLI::App* fuzz = app.add_subcommand(
      "fuzz", "generate instances and cross-validate every candidate matching on each");
  fuzz->add_option("--seed", fopt.seed, "base seed (default 0)");
  fuzz->add_option("--count", fopt.count, "instances to fuzz (default 100)");
  fuzz->add_option("--n-left", fopt.n_left, "max left size (default 4)");
  fuzz->add_option("--n-right", fopt.n_right, "max right size (default 4)");
  fuzz->add_option("--variant", fopt.variant, "ha|hat|smi|all (default all)");
  fuzz->add_option("--tie-prob", fopt.tie_prob, "tie merge probability for hat (default 0.3)");
  fuzz->add_option("--guard-edges", fopt.guard_edges, "oracle edge limit (default 24)");
  fuzz->add_option("--jobs", fopt.jobs, "worker threads (default: hardware)");
  fuzz->add_option("--repro", fopt.repro_path, "where to write the first failing instance");
  fuzz->add_flag("--json", fopt.as_json, "emit a JSON summary");

  std::string cc_instance;
  int cc_guard = 24;
  bool cc_json = false;
  CLI::App* crosscheck = app.add_subcommand(
      "cross-check", "run all three methods on every candidate matching of one instance");
  crosscheck->add_option("instance", cc_instance, "instance file")->required();
  crosscheck->add_option("--guard-edges", cc_guard, "oracle edge limit (default 24)");
  crosscheck->add_flag("--json", cc_json, "emit a JSON report");

  try {
    app.parse(argc, argv);
    if (verify->parsed()) return run_verify(vopt);
    if (certify->parsed()) return run_certify(cert_instance, cert_matching, cert_json);
    if (find->parsed()) return run_find(find_instance, find_guard, find_json);
    if (gen->parsed()) return run_gen(gopt);
    if (fuzz->parsed()) return run_fuzz(fopt);
    if (crosscheck->parsed()) return run_crosscheck(cc_instance, cc_guard, cc_json);
    return kExitInputError;
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInputError;
  } catch (const pm::InternalError& e) {
    std::cerr << "internal inconsistency: " << e.what() << "\n";
    return kExitDisagree;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}
