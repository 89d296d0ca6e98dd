#pragma once

#include <cstdint>
#include <string>

#include "popmatch/instance.hpp"

namespace popmatch {

// One fully-checked instance: every candidate matching is judged by all three
// methods, certificates are rebuilt and re-validated, reverse derivations and
// improvers are exercised, and the graph infrastructure is probed. This is
// the shared engine behind the fuzz and cross-check commands and the
// acceptance suite.
struct CrosscheckOptions {
  int guard_edges = 24;
  bool check_certificates = true;  // forward dual construction on every popular candidate
  bool check_derivations = true;   // reverse derivation on every solver-optimal candidate
  bool check_improver = true;      // improver on every structurally-rejected SMI candidate
  bool check_infrastructure = true;  // konig/dm invariance probes on arising graphs
};

struct CrosscheckReport {
  std::string digest;            // instance digest, hex
  long long candidates = 0;
  long long popular = 0;
  long long disagreements = 0;   // candidates where the three verdicts differ
  long long certificate_failures = 0;
  long long derivation_failures = 0;
  long long improver_failures = 0;
  long long infrastructure_failures = 0;
  long long improvements_checked = 0;
  long long derivations_checked = 0;
  std::string first_failure;     // description of the first failure, empty when ok

  bool ok() const {
    return disagreements == 0 && certificate_failures == 0 && derivation_failures == 0 &&
           improver_failures == 0 && infrastructure_failures == 0;
  }
  void absorb(const CrosscheckReport& other);
};

// `inst` is the instance as parsed/generated (unaugmented for HA/HAT; the
// check augments internally). Throws TooLarge past the guard.
CrosscheckReport crosscheck_instance(const Instance& inst, const CrosscheckOptions& opts = {});

std::string digest_hex(std::uint64_t digest);

}  // namespace popmatch
