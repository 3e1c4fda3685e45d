#include "oracles.hpp"

#include <algorithm>

namespace oracle {

using creature::CellFamily;
using creature::ColoringParams;
using creature::Condition;
using creature::Creature;

std::vector<bool> reachable_colors(const ColoringParams& params, const CellFamily& family, std::uint32_t a) {
  const int half = family.ell / 2;
  // reach[r]: some choice of constants on the cells seen so far sums to r mod N.
  std::vector<bool> reach(static_cast<std::size_t>(params.N), false);
  reach[0] = true;
  for (const auto& cell : family.cells) {
    int ones = 0;
    for (int x : cell) ones += static_cast<int>(a >> x & 1U);
    int zeros = static_cast<int>(cell.size()) - ones;
    std::vector<bool> next(reach.size(), false);
    for (int r = 0; r < params.N; ++r) {
      if (!reach[static_cast<std::size_t>(r)]) continue;
      if (zeros >= half) next[static_cast<std::size_t>(r)] = true;
      if (ones >= half) next[static_cast<std::size_t>((r + 1) % params.N)] = true;
    }
    reach = std::move(next);
  }
  return reach;
}

bool coloring_witness_exists(const ColoringParams& params, const CellFamily& family) {
  for (std::uint32_t a = 0; a < (1U << params.M); ++a) {
    auto reach = reachable_colors(params, family, a);
    if (std::all_of(reach.begin(), reach.end(), [](bool b) { return b; })) return true;
  }
  return false;
}

std::vector<std::vector<int>> extensions(const std::vector<int>& w, const std::vector<Creature>& creatures) {
  std::vector<std::vector<int>> out{w};
  for (const Creature& t : creatures) {
    for (const auto& set : t.product().coords) {
      std::vector<std::vector<int>> grown;
      for (const auto& v : out) {
        for (int x : set) {
          auto u = v;
          u.push_back(x);
          grown.push_back(std::move(u));
        }
      }
      out = std::move(grown);
    }
  }
  return out;
}

namespace {

bool in_sigma(const Creature& s, const Creature& t, const creature::CreatingPair& pair) {
  auto family = pair.sigma(t, 1'000'000);
  return std::find(family.begin(), family.end(), s) != family.end();
}

}  // namespace

bool leq(const Condition& p, const Condition& q) {
  if (!p.pair->same_as(*q.pair)) return false;
  std::vector<Creature> consumed;
  std::size_t length = p.stem.size();
  for (std::size_t shift = 0;; ++shift) {
    if (length == q.stem.size()) {
      auto ext = extensions(p.stem, consumed);
      bool stem_ok = std::find(ext.begin(), ext.end(), q.stem) != ext.end();
      bool tail_ok = stem_ok;
      for (std::size_t n = 0; tail_ok && (n < q.creatures.size() || n + shift < p.creatures.size()); ++n)
        tail_ok = in_sigma(q.creature_at(n), p.creature_at(n + shift), *p.pair);
      if (tail_ok) return true;
    }
    if (length >= q.stem.size()) return false;
    Creature next = p.creature_at(shift);
    consumed.push_back(next);
    length += static_cast<std::size_t>(next.width());
  }
}

std::vector<CellFamily> all_families(int M, int d, int ell) {
  std::vector<std::vector<int>> subsets;
  for (std::uint32_t mask = 0; mask < (1U << M); ++mask) {
    if (__builtin_popcount(mask) != ell) continue;
    std::vector<int> s;
    for (int x = 0; x < M; ++x)
      if (mask >> x & 1U) s.push_back(x);
    subsets.push_back(std::move(s));
  }
  std::vector<CellFamily> out;
  std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
  while (true) {
    CellFamily f{ell, {}};
    for (std::size_t i : idx) f.cells.push_back(subsets[i]);
    out.push_back(std::move(f));
    std::size_t j = idx.size();
    while (true) {
      if (j == 0) return out;
      --j;
      if (++idx[j] < subsets.size()) break;
      idx[j] = 0;
    }
  }
}

std::vector<Condition> all_conditions(const creature::PairPtr& pair, int end) {
  std::vector<Condition> out;
  std::vector<int> starts = pair->creature_starts();
  starts.push_back(pair->slot_count());
  for (int s : starts) {
    if (s > end) continue;
    std::vector<std::vector<int>> stems{{}};
    for (int m = 0; m < s; ++m) {
      std::vector<std::vector<int>> grown;
      for (const auto& w : stems) {
        for (int x = 0; x < *pair->slot_size(m); ++x) {
          auto v = w;
          v.push_back(x);
          grown.push_back(std::move(v));
        }
      }
      stems = std::move(grown);
    }
    // Creature sequences from slot s, every prefix included.
    std::vector<std::vector<Creature>> sequences{{}};
    std::vector<std::vector<Creature>> frontier{{}};
    while (!frontier.empty()) {
      std::vector<std::vector<Creature>> next;
      for (const auto& seq : frontier) {
        int slot = seq.empty() ? s : seq.back().m_up;
        if (slot >= pair->slot_count()) continue;
        for (const Creature& t : pair->creatures_at(slot, 1'000'000)) {
          if (t.m_up > end) continue;
          auto longer = seq;
          longer.push_back(t);
          next.push_back(longer);
          sequences.push_back(std::move(longer));
        }
      }
      frontier = std::move(next);
    }
    for (const auto& w : stems)
      for (const auto& seq : sequences) out.push_back(Condition{pair, w, seq});
  }
  return out;
}

}  // namespace oracle
