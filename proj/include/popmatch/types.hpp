#pragma once

#include <stdexcept>
#include <string>

namespace popmatch {

// Problem variants:
//   HA  - one-sided preferences, strict lists
//   HAT - one-sided preferences, ties allowed
//   SMI - two-sided strict preferences, incomplete lists
enum class Variant { HA, HAT, SMI };

enum class Side { Left, Right };

// A vertex of a bipartite instance. (side, index) is unique within an
// instance; `synthetic` marks appended last-resort right vertices and is
// implied by the index (it is carried here so callers need no instance
// lookup). Equality and ordering ignore the flag.
struct VertexId {
  Side side = Side::Left;
  int index = -1;
  bool synthetic = false;

  friend bool operator==(const VertexId& a, const VertexId& b) {
    return a.side == b.side && a.index == b.index;
  }
  friend bool operator!=(const VertexId& a, const VertexId& b) { return !(a == b); }
  friend bool operator<(const VertexId& a, const VertexId& b) {
    if (a.side != b.side) return a.side == Side::Left;
    return a.index < b.index;
  }
};

inline VertexId left_vertex(int index) { return VertexId{Side::Left, index, false}; }
inline VertexId right_vertex(int index, bool synthetic = false) {
  return VertexId{Side::Right, index, synthetic};
}

// An edge between left vertex `left` and right vertex `right` (dense indices).
struct Edge {
  int left = -1;
  int right = -1;

  friend bool operator==(const Edge& a, const Edge& b) {
    return a.left == b.left && a.right == b.right;
  }
  friend bool operator!=(const Edge& a, const Edge& b) { return !(a == b); }
  friend bool operator<(const Edge& a, const Edge& b) {
    if (a.left != b.left) return a.left < b.left;
    return a.right < b.right;
  }
};

// ---------------------------------------------------------------------------
// Errors. All conditions detectable from bad input throw one of these;
// internal invariant violations throw InternalError.

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Instance text could not be tokenized/understood; carries a 1-based line.
struct ParseError : Error {
  int line;
  ParseError(int line_no, const std::string& what_arg)
      : Error("parse error (line " + std::to_string(line_no) + "): " + what_arg),
        line(line_no) {}
};

// A structural invariant of the instance is violated (named in the message).
struct ValidationError : Error {
  using Error::Error;
};

struct AlreadyAugmented : Error {
  using Error::Error;
};

struct BadParameters : Error {
  using Error::Error;
};

// Matching text references a pair that is not an instance edge.
struct NotAnEdge : Error {
  using Error::Error;
};

// Matching text uses a vertex twice.
struct VertexReused : Error {
  using Error::Error;
};

// A maximum matching was required but the given one admits an augmenting path.
struct NotMaximum : Error {
  using Error::Error;
};

// An edge set that must form an alternating path/cycle does not.
struct NotAlternating : Error {
  using Error::Error;
};

// Flipping the given edge set would leave some vertex with two matched edges.
struct WouldDoubleMatch : Error {
  using Error::Error;
};

// A left-perfect matching was required.
struct NotLeftPerfect : Error {
  using Error::Error;
};

// The requested solve has no feasible solution (e.g. no left-perfect matching).
struct Infeasible : Error {
  using Error::Error;
};

// Brute-force guard tripped: instance too large to enumerate.
struct TooLarge : Error {
  using Error::Error;
};

// Input to a certificate builder does not satisfy the structural
// characterization it encodes.
struct StructuralPreconditionViolated : Error {
  using Error::Error;
};

// Input pair to a certificate-to-structure derivation is not an optimal
// primal/dual pair.
struct OptimalityPreconditionViolated : Error {
  using Error::Error;
};

// A structural witness failed re-validation.
struct InvalidWitness : Error {
  using Error::Error;
};

// A checked internal invariant failed; indicates a bug, not bad input.
struct InternalError : Error {
  using Error::Error;
};

inline const char* to_string(Variant v) {
  switch (v) {
    case Variant::HA: return "ha";
    case Variant::HAT: return "hat";
    case Variant::SMI: return "smi";
  }
  return "?";
}

inline Variant parse_variant(const std::string& name) {
  if (name == "ha") return Variant::HA;
  if (name == "hat") return Variant::HAT;
  if (name == "smi") return Variant::SMI;
  throw BadParameters("unknown variant '" + name + "'");
}

}  // namespace popmatch
