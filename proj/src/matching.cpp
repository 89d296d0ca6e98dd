#include "popmatch/matching.hpp"

#include <map>
#include <sstream>

namespace popmatch {

std::optional<VertexId> Matching::partner(VertexId v) const {
  if (v.side == Side::Left) {
    auto p = left_to_right_[v.index];
    if (!p) return std::nullopt;
    return right_vertex(*p);
  }
  auto p = right_to_left_[v.index];
  if (!p) return std::nullopt;
  return left_vertex(*p);
}

void Matching::add(int left, int right) {
  if (left_to_right_[left] || right_to_left_[right])
    throw WouldDoubleMatch("vertex already matched");
  left_to_right_[left] = right;
  right_to_left_[right] = left;
}

void Matching::remove(int left, int right) {
  if (left_to_right_[left] != right) throw InternalError("removing absent matched edge");
  left_to_right_[left] = std::nullopt;
  right_to_left_[right] = std::nullopt;
}

int Matching::size() const {
  int n = 0;
  for (const auto& p : left_to_right_) n += p.has_value();
  return n;
}

std::vector<Edge> Matching::edges() const {
  std::vector<Edge> out;
  for (int a = 0; a < n_left(); ++a)
    if (left_to_right_[a]) out.push_back(Edge{a, *left_to_right_[a]});
  return out;
}

Matching parse_matching(const Instance& inst, const std::string& text) {
  std::map<std::string, int> left_index, right_index;
  for (int a = 0; a < inst.n_left(); ++a) left_index[inst.left_name(a)] = a;
  for (int h = 0; h < inst.n_right(); ++h) right_index[inst.right_name(h)] = h;

  std::string flat = text;
  for (char& c : flat)
    if (c == '\n' || c == '\r' || c == '\t') c = ' ';
  if (size_t hash = flat.find('#'); hash != std::string::npos) flat = flat.substr(0, hash);

  Matching m(inst.n_left(), inst.n_right());
  size_t pos = 0;
  while (pos <= flat.size()) {
    size_t semi = flat.find(';', pos);
    std::string seg = semi == std::string::npos ? flat.substr(pos) : flat.substr(pos, semi - pos);
    std::istringstream in(seg);
    std::vector<std::string> toks;
    std::string tok;
    while (in >> tok) toks.push_back(tok);
    if (!toks.empty()) {
      if (toks.size() != 2)
        throw ParseError(1, "expected \"<left> <right>\" pair, got \"" + seg + "\"");
      auto li = left_index.find(toks[0]);
      auto ri = right_index.find(toks[1]);
      if (li == left_index.end())
        throw ParseError(1, "unknown left vertex \"" + toks[0] + "\"");
      if (ri == right_index.end())
        throw ParseError(1, "unknown right vertex \"" + toks[1] + "\"");
      if (!inst.has_edge(li->second, ri->second))
        throw NotAnEdge("not an edge: " + toks[0] + " " + toks[1]);
      if (m.left_partner(li->second))
        throw VertexReused("vertex reused: " + toks[0]);
      if (m.right_partner(ri->second))
        throw VertexReused("vertex reused: " + toks[1]);
      m.add(li->second, ri->second);
    }
    if (semi == std::string::npos) break;
    pos = semi + 1;
  }

  // One-sided matchings are implicitly completed: an omitted left vertex
  // takes its (always free) last resort.
  if (inst.variant() != Variant::SMI && inst.augmented())
    for (int a = 0; a < inst.n_left(); ++a)
      if (!m.left_partner(a)) m.add(a, inst.n_original_right() + a);
  return m;
}

std::string serialize_matching(const Instance& inst, const Matching& m) {
  std::ostringstream out;
  bool first = true;
  for (int a = 0; a < m.n_left(); ++a) {
    auto p = m.left_partner(a);
    if (!p) continue;
    if (!first) out << "; ";
    first = false;
    out << inst.left_name(a) << ' ' << inst.right_name(*p);
  }
  return out.str();
}

bool matching_uses_instance_edges(const Instance& inst, const Matching& m) {
  if (m.n_left() != inst.n_left() || m.n_right() != inst.n_right()) return false;
  for (int a = 0; a < m.n_left(); ++a) {
    auto p = m.left_partner(a);
    if (!p) continue;
    if (!inst.has_edge(a, *p)) return false;
    if (m.right_partner(*p) != a) return false;
  }
  for (int h = 0; h < m.n_right(); ++h) {
    auto p = m.right_partner(h);
    if (p && m.left_partner(*p) != h) return false;
  }
  return true;
}

bool is_left_perfect(const Matching& m) {
  for (int a = 0; a < m.n_left(); ++a)
    if (!m.left_partner(a)) return false;
  return true;
}

}  // namespace popmatch
