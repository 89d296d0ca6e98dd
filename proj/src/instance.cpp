#include "popmatch/instance.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <sstream>

namespace popmatch {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  return s.find_first_of("()>:;#") == std::string::npos;
}

}  // namespace

Instance::Instance(Variant variant, std::vector<std::string> left_names,
                   std::vector<std::string> right_names, std::vector<PrefList> prefs_left,
                   std::vector<PrefList> prefs_right, int n_original_right)
    : variant_(variant),
      left_names_(std::move(left_names)),
      right_names_(std::move(right_names)),
      n_original_right_(n_original_right < 0 ? int(right_names_.size()) : n_original_right),
      prefs_left_(std::move(prefs_left)),
      prefs_right_(std::move(prefs_right)) {
  build_tables();
  validate();
}

void Instance::build_tables() {
  const int nl = n_left(), nr = n_right();
  if (int(prefs_left_.size()) != nl)
    throw ValidationError("preference lists: expected one per left vertex");
  if (variant_ == Variant::SMI) {
    if (int(prefs_right_.size()) != nr)
      throw ValidationError("preference lists: expected one per right vertex");
  } else if (!prefs_right_.empty()) {
    throw ValidationError("right-side preferences are only valid for smi");
  }

  for (auto& pl : prefs_left_)
    for (auto& grp : pl.groups) std::sort(grp.begin(), grp.end());
  for (auto& pl : prefs_right_)
    for (auto& grp : pl.groups) std::sort(grp.begin(), grp.end());

  rank_left_.assign(nl, std::vector<int>(nr, -1));
  for (int a = 0; a < nl; ++a) {
    const auto& groups = prefs_left_[a].groups;
    for (int gi = 0; gi < int(groups.size()); ++gi) {
      if (groups[gi].empty()) throw ValidationError("empty tie group");
      for (int h : groups[gi]) {
        if (h < 0 || h >= nr) throw ValidationError("preference entry out of range");
        if (rank_left_[a][h] != -1)
          throw ValidationError("duplicate preference entry: " + left_names_[a] + " lists " +
                                right_names_[h] + " twice");
        rank_left_[a][h] = gi;
      }
    }
  }
  rank_right_.assign(variant_ == Variant::SMI ? nr : 0, {});
  for (int h = 0; h < int(rank_right_.size()); ++h) {
    rank_right_[h].assign(nl, -1);
    const auto& groups = prefs_right_[h].groups;
    for (int gi = 0; gi < int(groups.size()); ++gi) {
      if (groups[gi].empty()) throw ValidationError("empty tie group");
      for (int a : groups[gi]) {
        if (a < 0 || a >= nl) throw ValidationError("preference entry out of range");
        if (rank_right_[h][a] != -1)
          throw ValidationError("duplicate preference entry: " + right_names_[h] + " lists " +
                                left_names_[a] + " twice");
        rank_right_[h][a] = gi;
      }
    }
  }

  edges_.clear();
  for (int a = 0; a < nl; ++a)
    for (int h = 0; h < nr; ++h)
      if (rank_left_[a][h] != -1) edges_.push_back(Edge{a, h});
  adj_left_.assign(nl, {});
  adj_right_.assign(nr, {});
  for (int id = 0; id < int(edges_.size()); ++id) {
    adj_left_[edges_[id].left].push_back(id);
    adj_right_[edges_[id].right].push_back(id);
  }
}

void Instance::validate() const {
  const int nl = n_left(), nr = n_right();
  if (nl == 0) throw ValidationError("no left vertices");
  if (n_original_right_ == 0) throw ValidationError("no right vertices");
  if (n_original_right_ > nr) throw ValidationError("original-right count exceeds right count");

  std::map<std::string, int> seen;
  for (int a = 0; a < nl; ++a)
    if (++seen[left_names_[a]] > 1) throw ValidationError("duplicate name: " + left_names_[a]);
  for (int h = 0; h < nr; ++h)
    if (++seen[right_names_[h]] > 1) throw ValidationError("duplicate name: " + right_names_[h]);

  // Ties only in HAT, and only on the left (SMI lists are strict both sides).
  if (variant_ != Variant::HAT)
    for (int a = 0; a < nl; ++a)
      for (const auto& grp : prefs_left_[a].groups)
        if (grp.size() > 1)
          throw ValidationError("tie group in strict variant at " + left_names_[a]);
  for (int h = 0; h < int(prefs_right_.size()); ++h)
    for (const auto& grp : prefs_right_[h].groups)
      if (grp.size() > 1) throw ValidationError("tie group in strict variant at " + right_names_[h]);

  if (variant_ == Variant::SMI) {
    for (const Edge& e : edges_)
      if (rank_right_[e.right][e.left] == -1)
        throw ValidationError("asymmetric neighborhoods: " + left_names_[e.left] + " lists " +
                              right_names_[e.right] + " but not vice versa");
    long long right_entries = 0;
    for (int h = 0; h < nr; ++h)
      for (const auto& grp : prefs_right_[h].groups) right_entries += grp.size();
    if (right_entries != (long long)edges_.size())
      throw ValidationError("asymmetric neighborhoods: right side lists a non-edge");
  }

  for (int a = 0; a < nl; ++a)
    if (adj_left_[a].empty()) throw ValidationError("isolated vertex: " + left_names_[a]);
  for (int h = 0; h < n_original_right_; ++h)
    if (adj_right_[h].empty()) throw ValidationError("isolated vertex: " + right_names_[h]);

  // Synthetic last resorts: degree 1, strictly last singleton group of their owner.
  for (int h = n_original_right_; h < nr; ++h) {
    if (adj_right_[h].size() != 1)
      throw ValidationError("last resort must have degree 1: " + right_names_[h]);
    int a = edges_[adj_right_[h][0]].left;
    const auto& groups = prefs_left_[a].groups;
    if (groups.empty() || groups.back() != std::vector<int>{h})
      throw ValidationError("last resort must be its owner's strictly-last singleton group: " +
                            right_names_[h]);
  }
}

int Instance::edge_id(int left, int right) const {
  for (int id : adj_left_[left])
    if (edges_[id].right == right) return id;
  return -1;
}

Graph Instance::graph() const {
  return Graph::from_edges(n_left(), n_right(), edges_);
}

bool operator==(const Instance& a, const Instance& b) {
  return a.variant_ == b.variant_ && a.left_names_ == b.left_names_ &&
         a.right_names_ == b.right_names_ && a.n_original_right_ == b.n_original_right_ &&
         a.prefs_left_ == b.prefs_left_ && a.prefs_right_ == b.prefs_right_;
}

// ---------------------------------------------------------------------------

Instance parse_instance(const std::string& text) {
  std::optional<Variant> variant;
  std::vector<std::string> left_names, right_names;
  bool saw_left = false, saw_right = false;
  std::map<std::string, int> left_index, right_index;
  struct RawPref {
    int line;
    std::string owner;
    std::string body;
  };
  std::vector<RawPref> raw_prefs;

  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (size_t hash = raw.find('#'); hash != std::string::npos) raw = raw.substr(0, hash);
    std::string line = trim(raw);
    if (line.empty()) continue;

    size_t colon = line.find(':');
    if (colon == std::string::npos) throw ParseError(line_no, "expected ':' in \"" + line + "\"");
    std::string head = trim(line.substr(0, colon));
    std::string body = trim(line.substr(colon + 1));
    std::vector<std::string> head_toks = split_ws(head);

    if (head_toks.size() == 1 && head_toks[0] == "problem") {
      if (variant) throw ParseError(line_no, "repeated problem line");
      if (body == "ha") variant = Variant::HA;
      else if (body == "hat") variant = Variant::HAT;
      else if (body == "smi") variant = Variant::SMI;
      else throw ParseError(line_no, "unknown problem \"" + body + "\"");
    } else if (head_toks.size() == 1 && (head_toks[0] == "left" || head_toks[0] == "right")) {
      bool is_left = head_toks[0] == "left";
      if ((is_left ? saw_left : saw_right)) throw ParseError(line_no, "repeated " + head + " line");
      (is_left ? saw_left : saw_right) = true;
      for (const std::string& name : split_ws(body)) {
        if (!valid_name(name)) throw ParseError(line_no, "bad vertex name \"" + name + "\"");
        auto& names = is_left ? left_names : right_names;
        auto& index = is_left ? left_index : right_index;
        if (!index.emplace(name, int(names.size())).second)
          throw ValidationError("duplicate name: " + name);
        names.push_back(name);
      }
    } else if (head_toks.size() == 2 && head_toks[0] == "pref") {
      raw_prefs.push_back(RawPref{line_no, head_toks[1], body});
    } else {
      throw ParseError(line_no, "unrecognized line \"" + line + "\"");
    }
  }

  if (!variant) throw ValidationError("missing problem line");
  if (!saw_left || !saw_right) throw ValidationError("missing left/right declaration");
  for (const auto& [name, idx] : left_index) {
    (void)idx;
    if (right_index.count(name)) throw ValidationError("name used on both sides: " + name);
  }

  std::vector<PrefList> prefs_left(left_names.size());
  std::vector<PrefList> prefs_right(*variant == Variant::SMI ? right_names.size() : 0);
  std::vector<char> have_left(left_names.size(), 0), have_right(right_names.size(), 0);

  for (const RawPref& rp : raw_prefs) {
    bool owner_left = left_index.count(rp.owner) > 0;
    bool owner_right = right_index.count(rp.owner) > 0;
    if (!owner_left && !owner_right)
      throw ParseError(rp.line, "unknown vertex \"" + rp.owner + "\"");
    if (owner_right && *variant != Variant::SMI)
      throw ValidationError("preference line for right vertex in one-sided variant: " + rp.owner);
    const auto& other_index = owner_left ? right_index : left_index;

    PrefList pl;
    std::string body = rp.body;
    size_t pos = 0;
    while (pos <= body.size()) {
      size_t gt = body.find('>', pos);
      std::string group_str =
          trim(gt == std::string::npos ? body.substr(pos) : body.substr(pos, gt - pos));
      if (group_str.empty()) throw ParseError(rp.line, "empty tie group");
      std::vector<std::string> toks;
      if (group_str.front() == '(') {
        if (group_str.back() != ')') throw ParseError(rp.line, "unbalanced parentheses");
        toks = split_ws(group_str.substr(1, group_str.size() - 2));
        if (toks.empty()) throw ParseError(rp.line, "empty tie group");
      } else {
        toks = split_ws(group_str);
        if (toks.size() > 1)
          throw ParseError(rp.line, "tie groups need parentheses: \"" + group_str + "\"");
      }
      std::vector<int> group;
      for (const std::string& tok : toks) {
        auto it = other_index.find(tok);
        if (it == other_index.end()) throw ParseError(rp.line, "unknown vertex \"" + tok + "\"");
        group.push_back(it->second);
      }
      pl.groups.push_back(std::move(group));
      if (gt == std::string::npos) break;
      pos = gt + 1;
    }

    int idx = owner_left ? left_index[rp.owner] : right_index[rp.owner];
    auto& have = owner_left ? have_left : have_right;
    if (have[idx]) throw ValidationError("duplicate preference list for " + rp.owner);
    have[idx] = 1;
    (owner_left ? prefs_left : prefs_right)[idx] = std::move(pl);
  }

  return Instance(*variant, std::move(left_names), std::move(right_names), std::move(prefs_left),
                  std::move(prefs_right));
}

std::string serialize_instance(const Instance& inst) {
  std::ostringstream out;
  out << "problem: " << to_string(inst.variant()) << "\n";
  out << "left:";
  for (int a = 0; a < inst.n_left(); ++a) out << ' ' << inst.left_name(a);
  out << "\nright:";
  for (int h = 0; h < inst.n_original_right(); ++h) out << ' ' << inst.right_name(h);
  out << '\n';

  auto emit = [&](const std::string& owner, const PrefList& pl, bool members_are_right) {
    out << "pref " << owner << ':';
    bool first_group = true;
    for (const auto& grp : pl.groups) {
      std::vector<std::string> names;
      for (int v : grp) {
        if (members_are_right && inst.is_synthetic(v)) continue;  // canonical form predates augmentation
        names.push_back(members_are_right ? inst.right_name(v) : inst.left_name(v));
      }
      if (names.empty()) continue;
      out << (first_group ? " " : " > ");
      first_group = false;
      if (names.size() > 1) {
        out << '(';
        for (size_t i = 0; i < names.size(); ++i) out << (i ? " " : "") << names[i];
        out << ')';
      } else {
        out << names[0];
      }
    }
    out << '\n';
  };

  for (int a = 0; a < inst.n_left(); ++a) emit(inst.left_name(a), inst.pref_left(a), true);
  if (inst.variant() == Variant::SMI)
    for (int h = 0; h < inst.n_original_right(); ++h)
      emit(inst.right_name(h), inst.pref_right(h), false);
  return out.str();
}

Instance add_last_resorts(const Instance& inst) {
  if (inst.variant() == Variant::SMI)
    throw BadParameters("last resorts apply to one-sided variants only");
  if (inst.augmented()) throw AlreadyAugmented("instance already has last resorts");

  std::vector<std::string> right_names;
  right_names.reserve(inst.n_right() + inst.n_left());
  for (int h = 0; h < inst.n_right(); ++h) right_names.push_back(inst.right_name(h));
  std::vector<std::string> left_names;
  std::vector<PrefList> prefs_left;
  for (int a = 0; a < inst.n_left(); ++a) {
    left_names.push_back(inst.left_name(a));
    PrefList pl = inst.pref_left(a);
    pl.groups.push_back({inst.n_right() + a});
    prefs_left.push_back(std::move(pl));
    right_names.push_back("l(" + inst.left_name(a) + ")");
  }
  return Instance(inst.variant(), std::move(left_names), std::move(right_names),
                  std::move(prefs_left), {}, inst.n_right());
}

// ---------------------------------------------------------------------------

namespace {

int rand_below(std::mt19937_64& g, int n) {
  std::uint64_t lim = std::uint64_t(-1) - std::uint64_t(-1) % std::uint64_t(n);
  std::uint64_t x;
  do { x = g(); } while (x >= lim);
  return int(x % std::uint64_t(n));
}

bool rand_chance(std::mt19937_64& g, double p) {
  if (p >= 1.0) return true;
  if (p <= 0.0) return false;
  return double(g() >> 11) * 0x1.0p-53 < p;
}

}  // namespace

Instance random_instance(const RandomInstanceParams& params) {
  if (params.n_left < 1 || params.n_right < 1)
    throw BadParameters("random_instance: sizes must be at least 1");
  if (!(params.edge_density > 0.0) || params.edge_density > 1.0)
    throw BadParameters("random_instance: edge_density must be in (0, 1]");
  if (params.tie_prob < 0.0 || params.tie_prob > 1.0)
    throw BadParameters("random_instance: tie_prob must be in [0, 1]");
  if (params.tie_prob > 0.0 && params.variant != Variant::HAT)
    throw BadParameters("random_instance: ties are only valid for hat");

  std::mt19937_64 rng(params.seed);
  const int nl = params.n_left, nr = params.n_right;
  std::vector<std::vector<char>> adj(nl, std::vector<char>(nr, 0));
  for (int a = 0; a < nl; ++a)
    for (int h = 0; h < nr; ++h) adj[a][h] = rand_chance(rng, params.edge_density);
  for (int a = 0; a < nl; ++a) {
    bool any = false;
    for (int h = 0; h < nr; ++h) any |= adj[a][h];
    if (!any) adj[a][rand_below(rng, nr)] = 1;
  }
  for (int h = 0; h < nr; ++h) {
    bool any = false;
    for (int a = 0; a < nl; ++a) any |= adj[a][h];
    if (!any) adj[rand_below(rng, nl)][h] = 1;
  }

  auto sample_pref = [&](const std::vector<int>& neighbors) {
    std::vector<int> order = neighbors;
    for (int i = int(order.size()) - 1; i > 0; --i)
      std::swap(order[i], order[rand_below(rng, i + 1)]);
    PrefList pl;
    for (size_t i = 0; i < order.size(); ++i) {
      if (i > 0 && rand_chance(rng, params.tie_prob))
        pl.groups.back().push_back(order[i]);
      else
        pl.groups.push_back({order[i]});
    }
    return pl;
  };

  std::vector<PrefList> prefs_left(nl);
  for (int a = 0; a < nl; ++a) {
    std::vector<int> nbr;
    for (int h = 0; h < nr; ++h)
      if (adj[a][h]) nbr.push_back(h);
    prefs_left[a] = sample_pref(nbr);
  }
  std::vector<PrefList> prefs_right;
  if (params.variant == Variant::SMI) {
    prefs_right.resize(nr);
    for (int h = 0; h < nr; ++h) {
      std::vector<int> nbr;
      for (int a = 0; a < nl; ++a)
        if (adj[a][h]) nbr.push_back(a);
      prefs_right[h] = sample_pref(nbr);
    }
  }

  std::vector<std::string> left_names, right_names;
  for (int a = 0; a < nl; ++a) left_names.push_back("a" + std::to_string(a + 1));
  for (int h = 0; h < nr; ++h) right_names.push_back("h" + std::to_string(h + 1));
  return Instance(params.variant, std::move(left_names), std::move(right_names),
                  std::move(prefs_left), std::move(prefs_right));
}

std::uint64_t instance_digest(const Instance& inst) {
  std::string s = serialize_instance(inst);
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a 64
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace popmatch
