#include "popmatch/structure.hpp"

#include <algorithm>

namespace popmatch {

namespace {

void require_one_sided_augmented(const Instance& inst) {
  if (inst.variant() == Variant::SMI)
    throw BadParameters("first/second choice structure needs a one-sided instance");
  if (!inst.augmented())
    throw BadParameters("first/second choice structure needs an augmented instance");
}

}  // namespace

FirstSecondHA compute_fs_ha(const Instance& inst) {
  require_one_sided_augmented(inst);
  const int nl = inst.n_left();
  FirstSecondHA fs;
  fs.f.resize(nl);
  fs.s.assign(nl, -1);
  fs.in_f_image.assign(inst.n_right(), 0);

  for (int a = 0; a < nl; ++a) {
    const auto& groups = inst.pref_left(a).groups;
    if (groups[0].size() != 1) throw BadParameters("strict structure needs tie-free lists");
    fs.f[a] = groups[0][0];
    fs.in_f_image[fs.f[a]] = 1;
  }
  for (int a = 0; a < nl; ++a) {
    for (const auto& grp : inst.pref_left(a).groups) {
      if (grp.size() != 1) throw BadParameters("strict structure needs tie-free lists");
      if (!fs.in_f_image[grp[0]]) {
        fs.s[a] = grp[0];
        break;
      }
    }
    // The last resort has degree 1 and is strictly last in a's list, so it is
    // nobody's top choice; the scan cannot run off the end.
    if (fs.s[a] == -1) throw InternalError("no second choice found");
  }
  return fs;
}

bool FirstSecondHAT::in_f(int a, int h) const {
  return std::binary_search(f[a].begin(), f[a].end(), h);
}

bool FirstSecondHAT::in_s(int a, int h) const {
  return std::binary_search(s[a].begin(), s[a].end(), h);
}

FirstSecondHAT compute_fs_hat(const Instance& inst) {
  require_one_sided_augmented(inst);
  const int nl = inst.n_left();
  FirstSecondHAT fs;
  fs.f.resize(nl);
  fs.s.resize(nl);

  std::vector<Edge> f_edges;
  std::vector<int> f_source;
  for (int id = 0; id < int(inst.edges().size()); ++id) {
    const Edge& e = inst.edges()[id];
    if (inst.rank_left(e.left, e.right) == 0) {
      f_edges.push_back(e);
      f_source.push_back(id);
    }
  }
  fs.g_f = Graph::from_edges(nl, inst.n_right(), std::move(f_edges), std::move(f_source));
  fs.mm_f = maximum_matching(fs.g_f);
  fs.labels = dm_labels(fs.g_f, fs.mm_f);

  for (int a = 0; a < nl; ++a) {
    fs.f[a] = inst.pref_left(a).groups[0];  // already sorted
    for (const auto& grp : inst.pref_left(a).groups) {
      std::vector<int> even;
      for (int h : grp)
        if (fs.labels.right[h] == DMLabel::Even) even.push_back(h);
      if (!even.empty()) {
        fs.s[a] = std::move(even);
        break;
      }
    }
    // Last resorts are isolated in g_f, hence Even, so the scan terminates.
    if (fs.s[a].empty()) throw InternalError("no even right in any tie group");
  }
  return fs;
}

}  // namespace popmatch
