#include "creature/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "creature/errors.hpp"

namespace creature {

SlotSpace::SlotSpace(std::vector<int> sizes) : sizes_(std::move(sizes)) {
  for (std::size_t m = 0; m < sizes_.size(); ++m) {
    if (sizes_[m] < 2) throw PreconditionError("slot " + std::to_string(m) + " has fewer than 2 values");
  }
}

int SlotSpace::size(int m) const {
  if (m < 0 || m >= count()) throw PreconditionError("slot " + std::to_string(m) + " outside the represented range");
  return sizes_[static_cast<std::size_t>(m)];
}

BigInt SlotSpace::prefix_product(int end) const {
  BigInt product = 1;
  for (int m = 0; m < end; ++m) product *= size(m);
  return product;
}

BigInt ProductPos::cardinality() const {
  BigInt total = 1;
  for (const ValueSet& set : coords) total *= set.size();
  return total;
}

bool ProductPos::contains(std::span<const int> values) const {
  if (values.size() != coords.size()) return false;
  for (std::size_t j = 0; j < coords.size(); ++j) {
    if (!std::binary_search(coords[j].begin(), coords[j].end(), values[j])) return false;
  }
  return true;
}

bool ProductPos::subset_of(const ProductPos& other) const {
  if (coords.size() != other.coords.size()) return false;
  for (std::size_t j = 0; j < coords.size(); ++j) {
    if (!std::includes(other.coords[j].begin(), other.coords[j].end(), coords[j].begin(), coords[j].end()))
      return false;
  }
  return true;
}

const ProductPos& Creature::product() const {
  if (const auto* p = std::get_if<ProductPos>(&pos)) return *p;
  throw NotEnumerable("creature at slot " + std::to_string(m_dn) + " has a symbolic possibility set");
}

const LogLogCard& Creature::card() const {
  if (const auto* c = std::get_if<LogLogCard>(&pos)) return *c;
  throw PreconditionError("creature at slot " + std::to_string(m_dn) + " has an explicit possibility set");
}

Creature Creature::local(int m, ValueSet values, double nor) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return Creature{m, m + 1, nor, ProductPos{{std::move(values)}}, std::monostate{}};
}

bool operator==(const SumInfo& a, const SumInfo& b) { return a.parts == b.parts; }

bool operator==(const Creature& a, const Creature& b) {
  return a.m_dn == b.m_dn && a.m_up == b.m_up && a.nor == b.nor && a.pos == b.pos && a.dis == b.dis;
}

std::vector<int> CreatingPair::creature_starts() const {
  std::vector<int> starts(static_cast<std::size_t>(slot_count()));
  for (int m = 0; m < slot_count(); ++m) starts[static_cast<std::size_t>(m)] = m;
  return starts;
}

std::optional<Creature> CreatingPair::shrink_to(const Creature&, const ProductPos&) const { return std::nullopt; }

std::shared_ptr<const CreatingPair> CreatingPair::reindexed(std::span<const int>) const {
  throw PreconditionError(describe() + " cannot be reindexed");
}

Creature CreatingPair::relocated(const Creature&, int) const {
  throw PreconditionError(describe() + " cannot relocate creatures");
}

int Condition::horizon_end() const { return creatures.empty() ? i() : creatures.back().m_up; }

Creature Condition::creature_at(std::size_t n) const {
  if (n < creatures.size()) return creatures[n];
  int slot = horizon_end();
  for (std::size_t c = creatures.size();; ++c) {
    Creature full = pair->full_creature(slot);
    if (c == n) return full;
    slot = full.m_up;
  }
}

void Condition::validate() const {
  if (!pair) throw PreconditionError("condition has no creating pair");
  for (std::size_t m = 0; m < stem.size(); ++m) {
    int slot = static_cast<int>(m);
    if (slot >= pair->slot_count()) throw PreconditionError("stem longer than the represented slot range");
    auto size = pair->slot_size(slot);
    if (stem[m] < 0 || (size && stem[m] >= *size))
      throw PreconditionError("stem value " + std::to_string(stem[m]) + " outside H(" + std::to_string(m) + ")");
  }
  int expected = i();
  for (std::size_t n = 0; n < creatures.size(); ++n) {
    const Creature& t = creatures[n];
    if (t.m_dn != expected)
      throw PreconditionError("creature " + std::to_string(n) + " starts at slot " + std::to_string(t.m_dn) +
                              ", expected " + std::to_string(expected));
    if (!pair->member(t)) throw PreconditionError("creature " + std::to_string(n) + " is not in " + pair->describe());
    expected = t.m_up;
  }
}

bool operator==(const Condition& a, const Condition& b) {
  bool same_pair = (a.pair == b.pair) || (a.pair && b.pair && a.pair->same_as(*b.pair));
  return same_pair && a.stem == b.stem && a.creatures == b.creatures;
}

namespace {

void check_aligned(std::size_t stem_length, std::span<const Creature> creatures) {
  int expected = static_cast<int>(stem_length);
  for (const Creature& t : creatures) {
    if (t.m_dn != expected) throw PreconditionError("creatures are not aligned with the stem");
    expected = t.m_up;
  }
}

}  // namespace

BigInt pos_product_count(std::span<const Creature> creatures) {
  BigInt total = 1;
  for (const Creature& t : creatures) total *= t.product().cardinality();
  return total;
}

std::vector<std::vector<int>> pos_product(std::span<const int> w, std::span<const Creature> creatures,
                                          std::size_t budget) {
  check_aligned(w.size(), creatures);
  std::vector<const ValueSet*> coords;
  for (const Creature& t : creatures) {
    if (t.is_symbolic()) throw NotEnumerable("pos product over a symbolic creature at slot " + std::to_string(t.m_dn));
    for (const ValueSet& set : t.product().coords) coords.push_back(&set);
  }
  BigInt count = pos_product_count(creatures);
  if (count > budget) throw BudgetExceeded("pos product too large to enumerate", count.convert_to<double>());

  std::vector<std::vector<int>> out;
  if (count == 0) return out;
  out.reserve(count.convert_to<std::size_t>());
  std::vector<std::size_t> odometer(coords.size(), 0);
  std::vector<int> v(w.begin(), w.end());
  v.resize(w.size() + coords.size());
  while (true) {
    for (std::size_t j = 0; j < coords.size(); ++j) v[w.size() + j] = (*coords[j])[odometer[j]];
    out.push_back(v);
    std::size_t j = coords.size();
    while (j > 0) {
      --j;
      if (++odometer[j] < coords[j]->size()) break;
      odometer[j] = 0;
      if (j == 0) return out;
    }
    if (coords.empty()) return out;
  }
}

bool pos_product_contains(std::span<const int> w, std::span<const Creature> creatures, std::span<const int> v) {
  check_aligned(w.size(), creatures);
  std::size_t end = creatures.empty() ? w.size() : static_cast<std::size_t>(creatures.back().m_up);
  if (v.size() != end || !std::equal(w.begin(), w.end(), v.begin())) return false;
  for (const Creature& t : creatures) {
    if (!t.product().contains(v.subspan(static_cast<std::size_t>(t.m_dn), static_cast<std::size_t>(t.width()))))
      return false;
  }
  return true;
}

bool leq(const Condition& p, const Condition& q) {
  if (!p.pair || !q.pair || !p.pair->same_as(*q.pair))
    throw PreconditionError("conditions are over different creating pairs");
  if (q.stem.size() < p.stem.size() || !std::equal(p.stem.begin(), p.stem.end(), q.stem.begin())) return false;

  // Consume creatures of p until the stem of q is covered; that count is the i of the ordering.
  std::size_t consumed = 0;
  int slot = p.i();
  std::span<const int> w_q(q.stem);
  while (slot < q.i()) {
    Creature t = p.creature_at(consumed);
    if (t.m_up > q.i()) return false;
    auto block = w_q.subspan(static_cast<std::size_t>(t.m_dn), static_cast<std::size_t>(t.width()));
    if (!t.product().contains(block)) return false;
    slot = t.m_up;
    ++consumed;
  }
  for (std::size_t n = 0; n < q.creatures.size() || n + consumed < p.creatures.size(); ++n) {
    Creature stronger = q.creature_at(n);
    Creature weaker = p.creature_at(n + consumed);
    if (stronger.m_dn != weaker.m_dn || !p.pair->refines(stronger, weaker)) return false;
  }
  return true;
}

bool GoodPairReport::passed() const {
  return std::all_of(laws.begin(), laws.end(), [](const LawResult& r) { return r.failed == 0; });
}

const LawResult& GoodPairReport::law(const std::string& name) const {
  for (const LawResult& r : laws) {
    if (r.law == name) return r;
  }
  throw PreconditionError("no law named " + name);
}

std::string describe(const Creature& t) {
  std::ostringstream os;
  os << "[" << t.m_dn << "," << t.m_up << ") nor=" << t.nor << " pos=";
  if (t.is_symbolic()) {
    os << "loglog " << t.card().to_string();
  } else {
    os << "{";
    for (std::size_t j = 0; j < t.product().coords.size(); ++j) {
      if (j) os << " x ";
      os << "{";
      const ValueSet& set = t.product().coords[j];
      for (std::size_t e = 0; e < set.size(); ++e) os << (e ? "," : "") << set[e];
      os << "}";
    }
    os << "}";
  }
  if (const auto* info = std::get_if<SymbolicInfo>(&t.dis)) os << " i=" << to_string(info->drop) << " k=" << info->k;
  return os.str();
}

GoodPairReport check_good_pair(const CreatingPair& pair, const GoodPairScope& scope) {
  enum Law { kFullness, kMembership, kNorm, kReflexivity, kMonotonicity, kTransitivity, kAgreement, kLawCount };
  GoodPairReport report;
  for (const char* name :
       {"fullness", "membership", "norm", "reflexivity", "pos_monotonicity", "transitivity", "sigma_agreement"}) {
    report.laws.push_back(LawResult{name, 0, 0, ""});
  }
  auto check = [&](Law law, bool ok, const auto& witness) {
    LawResult& r = report.laws[law];
    ++r.checked;
    if (!ok && r.failed++ == 0) r.counterexample = witness();
  };

  std::vector<int> starts = scope.starts;
  if (starts.empty()) {
    for (int m : pair.creature_starts()) {
      if (m < scope.max_slots) starts.push_back(m);
    }
  }

  for (int start : starts) {
    std::vector<Creature> family = pair.creatures_at(start, scope.budget);
    std::vector<std::vector<Creature>> sigmas;
    double work = static_cast<double>(family.size()) * static_cast<double>(family.size());
    for (const Creature& t : family) {
      sigmas.push_back(pair.sigma(t, scope.budget));
      work += static_cast<double>(sigmas.back().size()) * static_cast<double>(sigmas.back().size());
    }
    if (work > static_cast<double>(scope.budget) * 100.0)
      throw BudgetExceeded("good-pair law check at slot " + std::to_string(start), work);

    report.creatures += family.size();
    for (std::size_t a = 0; a < family.size(); ++a) {
      const Creature& t = family[a];
      const std::vector<Creature>& sig = sigmas[a];
      auto who = [&] { return describe(t); };

      bool nonempty = t.is_symbolic() || std::all_of(t.product().coords.begin(), t.product().coords.end(),
                                                     [](const ValueSet& s) { return !s.empty(); });
      check(kFullness, nonempty && t.m_dn < t.m_up, who);
      check(kMembership, pair.member(t), who);
      check(kNorm, std::abs(t.nor - pair.norm(t)) <= 1e-12, who);
      bool self = pair.refines(t, t) && std::find(sig.begin(), sig.end(), t) != sig.end();
      check(kReflexivity, self, who);

      for (const Creature& s : sig) {
        bool shrinks = s.m_dn == t.m_dn && s.m_up == t.m_up;
        if (shrinks) {
          if (s.is_symbolic() != t.is_symbolic()) shrinks = false;
          else if (s.is_symbolic()) shrinks = s.card() <= t.card();
          else shrinks = s.product().subset_of(t.product());
        }
        check(kMonotonicity, shrinks, [&] { return describe(s) + " in Sigma(" + describe(t) + ")"; });
        for (const Creature& r : pair.sigma(s, scope.budget)) {
          check(kTransitivity, pair.refines(r, t),
                [&] { return describe(r) + " in Sigma(" + describe(s) + ") but not Sigma(" + describe(t) + ")"; });
        }
      }

      std::size_t decided = 0;
      for (const Creature& s : family) decided += pair.refines(s, t) ? 1 : 0;
      bool enumerated_refine = std::all_of(sig.begin(), sig.end(), [&](const Creature& s) { return pair.refines(s, t); });
      check(kAgreement, decided == sig.size() && enumerated_refine, who);
    }
  }
  return report;
}

}  // namespace creature
