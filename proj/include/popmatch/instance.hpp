#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "popmatch/graph.hpp"
#include "popmatch/types.hpp"

namespace popmatch {

// An ordered preference list: a sequence of nonempty tie groups of vertex
// indices on the other side, most preferred first. Strict variants use
// singleton groups. Group members are kept sorted by index.
struct PrefList {
  std::vector<std::vector<int>> groups;

  friend bool operator==(const PrefList& a, const PrefList& b) { return a.groups == b.groups; }
};

// A validated bipartite preference instance. The edge set is exactly the
// union of preference entries; every original vertex is non-isolated; SMI
// neighborhoods are symmetric and both sides carry preferences.
//
// HA/HAT instances gain one synthetic degree-1 "last resort" right vertex per
// left vertex via add_last_resorts(); synthetic vertices are appended after
// the original right vertices and appear strictly last in their owner's list.
class Instance {
 public:
  Instance(Variant variant, std::vector<std::string> left_names,
           std::vector<std::string> right_names, std::vector<PrefList> prefs_left,
           std::vector<PrefList> prefs_right, int n_original_right = -1);

  Variant variant() const { return variant_; }
  int n_left() const { return int(left_names_.size()); }
  int n_right() const { return int(right_names_.size()); }
  int n_original_right() const { return n_original_right_; }
  bool augmented() const { return n_right() > n_original_right_; }
  bool is_synthetic(int right) const { return right >= n_original_right_; }

  const std::string& left_name(int a) const { return left_names_[a]; }
  const std::string& right_name(int h) const { return right_names_[h]; }
  std::string vertex_name(VertexId v) const {
    return v.side == Side::Left ? left_names_[v.index] : right_names_[v.index];
  }
  VertexId make_right(int h) const { return right_vertex(h, is_synthetic(h)); }

  const PrefList& pref_left(int a) const { return prefs_left_[a]; }
  const PrefList& pref_right(int h) const { return prefs_right_[h]; }

  // Tie-group position of the partner in the holder's list; -1 if not adjacent.
  int rank_left(int a, int right) const { return rank_left_[a][right]; }
  int rank_right(int h, int left) const { return rank_right_[h][left]; }

  const std::vector<Edge>& edges() const { return edges_; }
  int edge_id(int left, int right) const;
  bool has_edge(int left, int right) const { return edge_id(left, right) >= 0; }
  const std::vector<int>& adj_left(int a) const { return adj_left_[a]; }
  const std::vector<int>& adj_right(int h) const { return adj_right_[h]; }

  Graph graph() const;  // full edge set, edge ids aligned with edges()

  friend bool operator==(const Instance& a, const Instance& b);

 private:
  void validate() const;
  void build_tables();

  Variant variant_;
  std::vector<std::string> left_names_;
  std::vector<std::string> right_names_;
  int n_original_right_ = 0;
  std::vector<PrefList> prefs_left_;
  std::vector<PrefList> prefs_right_;  // SMI only, else empty lists
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adj_left_, adj_right_;  // edge ids
  std::vector<std::vector<int>> rank_left_, rank_right_;
};

// Parse the instance text format:
//
//   # comment
//   problem: ha | hat | smi
//   left: a1 a2 ...
//   right: h1 h2 ...
//   pref a1: h1 > (h2 h3) > h4     (parenthesized tie groups, HAT only)
//
// Preference lines exist for every left vertex, and for every right vertex in
// SMI. Throws ParseError (with line number) or ValidationError.
Instance parse_instance(const std::string& text);

// Canonical text form: vertices in declaration order, preference groups
// verbatim (singletons unparenthesized). Synthetic last resorts are omitted,
// so the form is identical before and after augmentation.
std::string serialize_instance(const Instance& inst);

// Append one synthetic last-resort right vertex "l(<name>)" per left vertex,
// each of degree 1 and strictly last in its owner's list. HA/HAT only.
// Throws AlreadyAugmented on a second application.
Instance add_last_resorts(const Instance& inst);

struct RandomInstanceParams {
  std::uint64_t seed = 0;
  Variant variant = Variant::HA;
  int n_left = 1;
  int n_right = 1;
  double edge_density = 1.0;  // in (0, 1]
  double tie_prob = 0.0;      // merge probability for adjacent entries; HAT only
};

// Deterministic random instance: every (left, right) pair becomes an edge
// with probability edge_density, a fallback edge is added per isolated
// vertex, and each preference list is a uniform random permutation of the
// neighborhood (adjacent entries then merged into ties with probability
// tie_prob for HAT). Throws BadParameters.
Instance random_instance(const RandomInstanceParams& params);

// FNV-1a 64 over the canonical serialization; joins runs to instances.
std::uint64_t instance_digest(const Instance& inst);

}  // namespace popmatch
