#pragma once

#include <optional>
#include <string>
#include <vector>

#include "popmatch/instance.hpp"
#include "popmatch/types.hpp"

namespace popmatch {

// A matching over dense vertex indices. Unmatched is an explicit empty
// optional, never a sentinel index.
class Matching {
 public:
  Matching() = default;
  Matching(int n_left, int n_right)
      : left_to_right_(n_left, std::nullopt), right_to_left_(n_right, std::nullopt) {}

  int n_left() const { return int(left_to_right_.size()); }
  int n_right() const { return int(right_to_left_.size()); }

  std::optional<int> left_partner(int a) const { return left_to_right_[a]; }
  std::optional<int> right_partner(int h) const { return right_to_left_[h]; }
  std::optional<VertexId> partner(VertexId v) const;

  bool matched(VertexId v) const { return partner(v).has_value(); }
  bool contains(int left, int right) const { return left_to_right_[left] == right; }

  void add(int left, int right);     // throws WouldDoubleMatch
  void remove(int left, int right);  // throws InternalError if absent

  int size() const;
  std::vector<Edge> edges() const;  // ordered by left index

  friend bool operator==(const Matching& a, const Matching& b) {
    return a.left_to_right_ == b.left_to_right_;
  }
  friend bool operator!=(const Matching& a, const Matching& b) { return !(a == b); }

 private:
  std::vector<std::optional<int>> left_to_right_;
  std::vector<std::optional<int>> right_to_left_;
};

// Parse "a1 h1; a2 h2". Every pair must be an instance edge and no vertex may
// repeat. On augmented HA/HAT instances, left vertices without a pair are
// silently completed with their last-resort edge. Throws ParseError,
// NotAnEdge, VertexReused.
Matching parse_matching(const Instance& inst, const std::string& text);

// "a1 h1; a2 h2" with pairs in left-index order (last-resort pairs included).
std::string serialize_matching(const Instance& inst, const Matching& m);

// Every matched pair is an instance edge and the partner maps are mutually
// consistent (the latter holds by construction; rechecked cheaply).
bool matching_uses_instance_edges(const Instance& inst, const Matching& m);

bool is_left_perfect(const Matching& m);

}  // namespace popmatch
