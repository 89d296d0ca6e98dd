// Python bindings for the popularity toolkit.  Scalar results cross the
// boundary natively; structured reports (verify / certify / cross-check)
// cross as JSON strings and are decoded by the pure-Python wrappers in
// popmatch/__init__.py, so the schemas stay identical to the CLI's.
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "popmatch/characterize.hpp"
#include "popmatch/crosscheck.hpp"
#include "popmatch/duals.hpp"
#include "popmatch/instance.hpp"
#include "popmatch/matching.hpp"
#include "popmatch/oracle.hpp"
#include "popmatch/weights.hpp"

namespace py = pybind11;
namespace pm = popmatch;
using nlohmann::json;

namespace {

std::string verify_json_impl(const pm::Instance& inst, const pm::Matching& m,
                             const std::vector<std::string>& methods, int guard_edges) {
  bool structural = false, optimization = false, bruteforce = false;
  for (const std::string& name : methods) {
    if (name == "all") {
      structural = optimization = bruteforce = true;
    } else if (name == "structural") {
      structural = true;
    } else if (name == "optimization") {
      optimization = true;
    } else if (name == "bruteforce" || name == "brute_force") {
      bruteforce = true;
    } else {
      throw pm::BadParameters("unknown method '" + name + "'");
    }
  }

  std::vector<pm::Verdict> verdicts;
  if (structural) verdicts.push_back(pm::structural_check(inst, m));
  if (optimization)
    verdicts.push_back(
        pm::optimization_check(inst, m, pm::candidate_weights(inst, m), pm::candidate_mode(inst)));
  if (bruteforce) verdicts.push_back(pm::bruteforce_check(inst, m, guard_edges));
  if (verdicts.empty()) throw pm::BadParameters("no method selected");

  bool all_yes = true, all_no = true;
  for (const pm::Verdict& v : verdicts) (v.popular ? all_no : all_yes) = false;

  json report{{"command", "verify"},
              {"digest", pm::digest_hex(pm::instance_digest(inst))},
              {"variant", pm::to_string(inst.variant())},
              {"matching", pm::serialize_matching(inst, m)},
              {"agree", all_yes || all_no},
              {"popular", all_yes}};
  report["verdicts"] = json::object();
  for (const pm::Verdict& v : verdicts)
    report["verdicts"][pm::to_string(v.method)] = pm::verdict_json(inst, v);
  return report.dump();
}

std::string certify_json_impl(const pm::Instance& inst, const pm::Matching& m) {
  pm::Verdict structural = pm::structural_check(inst, m);
  pm::EdgeWeights w = pm::candidate_weights(inst, m);
  pm::Verdict optimization = pm::optimization_check(inst, m, w, pm::candidate_mode(inst));
  if (structural.popular != optimization.popular)
    throw pm::InternalError("structural and optimization verdicts disagree");

  json report{{"command", "certify"},
              {"digest", pm::digest_hex(pm::instance_digest(inst))},
              {"variant", pm::to_string(inst.variant())},
              {"matching", pm::serialize_matching(inst, m)},
              {"popular", structural.popular}};
  if (structural.popular) {
    report["certificate"] = pm::certificate_json(inst, m, w, pm::build_dual(inst, m));
  } else {
    report["witness"] = pm::witness_json(inst, *structural.witness);
    report["rival"] = pm::serialize_matching(inst, *optimization.rival);
    report["rival_weight"] = *optimization.rival_weight;
    report["own_weight"] = w.of_matching(inst, m);
    if (inst.variant() == pm::Variant::SMI) {
      pm::Improvement imp = pm::improve_matching_smi(inst, m, *structural.witness);
      report["improvement"] = {{"matching", pm::serialize_matching(inst, imp.improved)},
                               {"gain", imp.gain}};
    }
  }
  return report.dump();
}

std::string crosscheck_json_impl(const pm::Instance& inst, int guard_edges) {
  pm::CrosscheckOptions opts;
  opts.guard_edges = guard_edges;
  pm::CrosscheckReport r = pm::crosscheck_instance(inst, opts);
  json report{{"command", "cross-check"},
              {"digest", r.digest},
              {"candidates", r.candidates},
              {"popular", r.popular},
              {"disagreements", r.disagreements},
              {"certificate_failures", r.certificate_failures},
              {"derivation_failures", r.derivation_failures},
              {"improver_failures", r.improver_failures},
              {"infrastructure_failures", r.infrastructure_failures},
              {"improvements_checked", r.improvements_checked},
              {"derivations_checked", r.derivations_checked},
              {"ok", r.ok()},
              {"first_failure", r.first_failure}};
  return report.dump();
}

}  // namespace

PYBIND11_MODULE(_popmatch, m) {
  m.doc() = "popularity of matchings: verification, certificates, constructions";

  py::register_exception<pm::Error>(m, "Error");

  py::class_<pm::Instance>(m, "Instance")
      .def_property_readonly("variant",
                             [](const pm::Instance& i) { return pm::to_string(i.variant()); })
      .def_property_readonly("n_left", &pm::Instance::n_left)
      .def_property_readonly("n_right", &pm::Instance::n_right)
      .def_property_readonly("augmented", &pm::Instance::augmented)
      .def_property_readonly("left_names",
                             [](const pm::Instance& i) {
                               std::vector<std::string> names;
                               for (int a = 0; a < i.n_left(); ++a) names.push_back(i.left_name(a));
                               return names;
                             })
      .def_property_readonly("right_names",
                             [](const pm::Instance& i) {
                               std::vector<std::string> names;
                               for (int h = 0; h < i.n_right(); ++h)
                                 names.push_back(i.right_name(h));
                               return names;
                             })
      .def("edges",
           [](const pm::Instance& i) {
             std::vector<std::pair<int, int>> out;
             for (const pm::Edge& e : i.edges()) out.emplace_back(e.left, e.right);
             return out;
           })
      .def("__eq__", [](const pm::Instance& a, const pm::Instance& b) { return a == b; },
           py::is_operator())
      .def("__repr__", [](const pm::Instance& i) {
        return "<Instance " + std::string(pm::to_string(i.variant())) + " " +
               std::to_string(i.n_left()) + "x" + std::to_string(i.n_right()) + ">";
      });

  py::class_<pm::Matching>(m, "Matching")
      .def_property_readonly("size", &pm::Matching::size)
      .def("edges",
           [](const pm::Matching& mm) {
             std::vector<std::pair<int, int>> out;
             for (const pm::Edge& e : mm.edges()) out.emplace_back(e.left, e.right);
             return out;
           })
      .def("left_partner", &pm::Matching::left_partner, py::arg("left"))
      .def("right_partner", &pm::Matching::right_partner, py::arg("right"))
      .def("__eq__", [](const pm::Matching& a, const pm::Matching& b) { return a == b; },
           py::is_operator())
      .def("__len__", &pm::Matching::size);

  m.def("parse_instance", &pm::parse_instance, py::arg("text"),
        "Parse the instance text format (problem/left/right/pref lines).");
  m.def("serialize_instance", &pm::serialize_instance, py::arg("instance"),
        "Canonical text form; identical before and after augmentation.");
  m.def("add_last_resorts", &pm::add_last_resorts, py::arg("instance"),
        "Append one synthetic degree-1 last-resort right per left vertex (one-sided only).");
  m.def(
      "instance_digest",
      [](const pm::Instance& inst) { return pm::digest_hex(pm::instance_digest(inst)); },
      py::arg("instance"), "16-hex-digit digest of the canonical serialization.");
  m.def(
      "random_instance",
      [](std::uint64_t seed, const std::string& variant, int n_left, int n_right,
         double edge_density, double tie_prob) {
        pm::RandomInstanceParams p;
        p.seed = seed;
        p.variant = pm::parse_variant(variant);
        p.n_left = n_left;
        p.n_right = n_right;
        p.edge_density = edge_density;
        p.tie_prob = tie_prob;
        return pm::random_instance(p);
      },
      py::arg("seed"), py::arg("variant") = "ha", py::arg("n_left") = 1, py::arg("n_right") = 1,
      py::arg("edge_density") = 1.0, py::arg("tie_prob") = 0.0,
      "Deterministic random instance (same seed, same instance).");

  m.def("parse_matching", &pm::parse_matching, py::arg("instance"), py::arg("text"),
        "Parse 'a1 h2; a2 h1' against the instance's vertex names and edges.");
  m.def("serialize_matching", &pm::serialize_matching, py::arg("instance"), py::arg("matching"));
  m.def(
      "enumerate_matchings",
      [](const pm::Instance& inst, bool left_perfect) {
        return pm::enumerate_matchings(inst.graph(), left_perfect);
      },
      py::arg("instance"), py::arg("left_perfect") = false,
      "All matchings of the instance graph (optionally only left-perfect ones).");
  m.def(
      "delta",
      [](const pm::Instance& inst, const pm::Matching& a, const pm::Matching& b) {
        pm::DeltaValue d = pm::delta(inst, a, b);
        return py::make_tuple(d.value, d.prefers_m, d.prefers_n);
      },
      py::arg("instance"), py::arg("m"), py::arg("n"),
      "Head-to-head vote (value, prefers_m, prefers_n); value == prefers_m - prefers_n.");

  m.def("verify_json", &verify_json_impl, py::arg("instance"), py::arg("matching"),
        py::arg("methods") = std::vector<std::string>{"all"}, py::arg("guard_edges") = 24,
        "Popularity verdicts by the selected methods, as a JSON report string.");
  m.def("certify_json", &certify_json_impl, py::arg("instance"), py::arg("matching"),
        "Dual certificate (popular) or witness + beating rival (not), as a JSON string.");
  m.def("crosscheck_json", &crosscheck_json_impl, py::arg("instance"),
        py::arg("guard_edges") = 24,
        "Exhaustive three-method agreement sweep over all candidates, as a JSON string.");

  m.def("find_popular", &pm::find_popular, py::arg("instance"),
        "A popular matching, or None when none exists (one-sided variants).");
  m.def("gale_shapley", &pm::gale_shapley_smi, py::arg("instance"),
        "Left-proposing deferred acceptance; stable, hence popular.");
}
