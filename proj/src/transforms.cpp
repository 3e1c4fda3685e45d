#include "creature/transforms.hpp"

#include <algorithm>
#include <sstream>

#include "creature/errors.hpp"

namespace creature {

Creature sum_creatures(std::span<const Creature> parts, bool tight) {
  if (parts.empty()) throw PreconditionError("a sum needs at least one part");
  Creature sum;
  sum.m_dn = parts.front().m_dn;
  sum.m_up = parts.back().m_up;
  ProductPos pos;
  double nor = parts.front().nor;
  for (std::size_t n = 0; n < parts.size(); ++n) {
    const Creature& t = parts[n];
    if (n > 0) {
      int gap = t.m_dn - parts[n - 1].m_up;
      if (gap < 0) throw PreconditionError("summands overlap at slot " + std::to_string(t.m_dn));
      if (gap > 0 && tight) throw PreconditionError("tight sum requested but summands leave a gap");
      for (int g = 0; g < gap; ++g) pos.coords.push_back(ValueSet{0});
    }
    for (const ValueSet& set : t.product().coords) pos.coords.push_back(set);
    nor = std::min(nor, t.nor);
  }
  sum.nor = nor;
  sum.pos = std::move(pos);
  sum.dis = SumInfo{std::vector<Creature>(parts.begin(), parts.end())};
  return sum;
}

bool is_tight(const Creature& sum) {
  const auto* info = std::get_if<SumInfo>(&sum.dis);
  if (!info) return false;
  for (std::size_t n = 1; n < info->parts.size(); ++n) {
    if (info->parts[n].m_dn != info->parts[n - 1].m_up) return false;
  }
  return true;
}

// ----------------------------------------------------------- summarized pair

SummarizedPair::SummarizedPair(PairPtr base, std::vector<int> blocks) : base_(std::move(base)), blocks_(std::move(blocks)) {
  if (!base_ || !base_->is_local()) throw PreconditionError("summarization needs a local creating pair");
  if (blocks_.size() < 2 || blocks_.front() != 0) throw PreconditionError("blocks must start at 0");
  for (std::size_t i = 1; i < blocks_.size(); ++i) {
    if (blocks_[i] <= blocks_[i - 1]) throw PreconditionError("blocks must be strictly increasing");
  }
  if (blocks_.back() > base_->slot_count()) throw PreconditionError("blocks leave the base slot range");
}

int SummarizedPair::block_of_start(int m_dn) const {
  auto it = std::find(blocks_.begin(), blocks_.end() - 1, m_dn);
  if (it == blocks_.end() - 1) throw PreconditionError("slot " + std::to_string(m_dn) + " is not a block start");
  return static_cast<int>(it - blocks_.begin());
}

BigInt SummarizedPair::block_cardinality(int i) const {
  BigInt product = 1;
  for (int m = blocks_.at(static_cast<std::size_t>(i)); m < blocks_.at(static_cast<std::size_t>(i) + 1); ++m) {
    auto size = base_->slot_size(m);
    if (!size) throw NotEnumerable("symbolic slot inside block");
    product *= *size;
  }
  return product;
}

Creature SummarizedPair::make(std::span<const Creature> parts) const {
  Creature t = sum_creatures(parts, true);
  if (!member(t)) throw PreconditionError("not a creature of " + describe() + ": " + creature::describe(t));
  return t;
}

std::string SummarizedPair::describe() const {
  std::ostringstream os;
  os << "summarized(" << base_->describe() << ";m=";
  for (std::size_t i = 0; i < blocks_.size(); ++i) os << (i ? "," : "") << blocks_[i];
  os << ")";
  return os.str();
}

std::vector<int> SummarizedPair::creature_starts() const { return {blocks_.begin(), blocks_.end() - 1}; }

bool SummarizedPair::member(const Creature& t) const {
  const auto* info = std::get_if<SumInfo>(&t.dis);
  if (!info || t.is_symbolic()) return false;
  auto block = std::find(blocks_.begin(), blocks_.end() - 1, t.m_dn);
  if (block == blocks_.end() - 1 || t.m_up != *(block + 1)) return false;
  if (info->parts.size() != static_cast<std::size_t>(t.width())) return false;
  for (std::size_t n = 0; n < info->parts.size(); ++n) {
    const Creature& part = info->parts[n];
    if (part.m_dn != t.m_dn + static_cast<int>(n) || !base_->member(part)) return false;
  }
  return t == sum_creatures(info->parts, true);
}

bool SummarizedPair::refines(const Creature& s, const Creature& t) const {
  if (!member(s) || !member(t) || s.m_dn != t.m_dn) return false;
  const auto& small = std::get<SumInfo>(s.dis).parts;
  const auto& large = std::get<SumInfo>(t.dis).parts;
  for (std::size_t n = 0; n < small.size(); ++n) {
    if (!base_->refines(small[n], large[n])) return false;
  }
  return true;
}

double SummarizedPair::norm(const Creature& t) const {
  const auto& parts = std::get<SumInfo>(t.dis).parts;
  double nor = base_->norm(parts.at(0));
  for (const Creature& part : parts) nor = std::min(nor, base_->norm(part));
  return nor;
}

namespace {

std::vector<std::vector<Creature>> product_of(const std::vector<std::vector<Creature>>& choices, std::size_t budget) {
  double estimate = 1.0;
  for (const auto& c : choices) estimate *= static_cast<double>(c.size());
  if (estimate > static_cast<double>(budget)) throw BudgetExceeded("block sum enumeration", estimate);
  std::vector<std::vector<Creature>> out;
  std::vector<std::size_t> odometer(choices.size(), 0);
  while (true) {
    std::vector<Creature> pick;
    for (std::size_t j = 0; j < choices.size(); ++j) pick.push_back(choices[j][odometer[j]]);
    out.push_back(std::move(pick));
    std::size_t j = choices.size();
    while (true) {
      if (j == 0) return out;
      --j;
      if (++odometer[j] < choices[j].size()) break;
      odometer[j] = 0;
    }
  }
}

}  // namespace

std::vector<Creature> SummarizedPair::creatures_at(int m_dn, std::size_t budget) const {
  int block = block_of_start(m_dn);
  std::vector<std::vector<Creature>> choices;
  for (int m = m_dn; m < blocks_[static_cast<std::size_t>(block) + 1]; ++m) choices.push_back(base_->creatures_at(m, budget));
  std::vector<Creature> out;
  for (const auto& parts : product_of(choices, budget)) out.push_back(make(parts));
  return out;
}

std::vector<Creature> SummarizedPair::sigma(const Creature& t, std::size_t budget) const {
  std::vector<std::vector<Creature>> choices;
  for (const Creature& part : std::get<SumInfo>(t.dis).parts) choices.push_back(base_->sigma(part, budget));
  std::vector<Creature> out;
  for (const auto& parts : product_of(choices, budget)) out.push_back(make(parts));
  return out;
}

Creature SummarizedPair::full_creature(int m_dn) const {
  int block = block_of_start(m_dn);
  std::vector<Creature> parts;
  for (int m = m_dn; m < blocks_[static_cast<std::size_t>(block) + 1]; ++m) parts.push_back(base_->full_creature(m));
  return make(parts);
}

std::optional<Creature> SummarizedPair::shrink_to(const Creature& t, const ProductPos& pos) const {
  const auto& parts = std::get<SumInfo>(t.dis).parts;
  if (pos.coords.size() != parts.size()) return std::nullopt;
  std::vector<Creature> shrunk;
  for (std::size_t n = 0; n < parts.size(); ++n) {
    auto part = base_->shrink_to(parts[n], ProductPos{{pos.coords[n]}});
    if (!part) return std::nullopt;
    shrunk.push_back(std::move(*part));
  }
  return make(shrunk);
}

std::shared_ptr<const SummarizedPair> summarize_pair(PairPtr local_pair, std::vector<int> blocks) {
  return std::make_shared<SummarizedPair>(std::move(local_pair), std::move(blocks));
}

Condition summarize_condition(const Condition& p, const std::shared_ptr<const SummarizedPair>& summarized) {
  if (!p.pair || !p.pair->same_as(*summarized->base())) throw PreconditionError("condition is not over the base pair");
  p.validate();
  const auto& blocks = summarized->blocks();
  auto boundary = std::find(blocks.begin(), blocks.end(), p.i());
  if (boundary == blocks.end()) throw PreconditionError("stem does not end on a block boundary");
  if (p.horizon_end() > blocks.back()) throw PreconditionError("horizon runs past the last block");

  Condition q{summarized, p.stem, {}};
  std::size_t n = 0;
  for (auto it = boundary; it + 1 != blocks.end() && *it < p.horizon_end(); ++it) {
    std::vector<Creature> parts;
    for (int m = *it; m < *(it + 1); ++m) parts.push_back(p.creature_at(n++));
    q.creatures.push_back(summarized->make(parts));
  }
  return q;
}

Condition embed_condition(const Condition& q) {
  auto summarized = std::dynamic_pointer_cast<const SummarizedPair>(q.pair);
  if (!summarized) throw PreconditionError("condition is not over a summarized pair");
  q.validate();
  Condition p{summarized->base(), q.stem, {}};
  for (const Creature& block : q.creatures) {
    for (const Creature& part : std::get<SumInfo>(block.dis).parts) p.creatures.push_back(part);
  }
  return p;
}

Condition aligned_extension(const Condition& p, const std::shared_ptr<const SummarizedPair>& summarized) {
  if (!p.pair || !p.pair->same_as(*summarized->base())) throw PreconditionError("condition is not over the base pair");
  const auto& blocks = summarized->blocks();
  auto next = std::lower_bound(blocks.begin(), blocks.end(), p.i());
  if (next == blocks.end()) throw PreconditionError("stem runs past the last block");

  Condition extended{p.pair, p.stem, {}};
  std::size_t n = 0;
  while (extended.i() < *next) extended.stem.push_back(p.creature_at(n++).product().coords[0].front());
  for (; n < p.creatures.size(); ++n) extended.creatures.push_back(p.creatures[n]);
  return summarize_condition(extended, summarized);
}

ReduceResult reduce_to_bad_form(const Condition& p, const ReduceOptions& options) {
  if (!p.pair || p.pair->kind() != PairKind::Subset) throw PreconditionError("reduction expects a subset-pair condition");
  if (options.blocks < 1) throw PreconditionError("need at least one creature block");
  if (options.growth_base < 0) throw PreconditionError("growth base must be nonnegative");
  p.validate();
  const auto& pair = static_cast<const SubsetPair&>(*p.pair);
  const std::size_t horizon = p.creatures.size();

  auto size_of = [&](std::size_t n) { return p.creatures[n].product().coords[0].size(); };
  // First creature index from which every creature in the horizon has at least `size` elements.
  auto tail_from = [&](std::size_t size) {
    std::size_t idx = horizon;
    while (idx > 0 && size_of(idx - 1) >= size) --idx;
    return idx;
  };
  auto min_length = [&](int i) -> std::size_t {
    if (options.growth_base == 0) return 1;
    std::size_t power = 1;
    for (int e = 0; e < i + 3; ++e) power *= static_cast<std::size_t>(options.growth_base);
    return power + 1;
  };
  auto insufficient = [&] {
    return PreconditionError("horizon of " + std::to_string(horizon) + " creatures is insufficient for " +
                             std::to_string(options.blocks) + " blocks");
  };

  // Block 0 is the stem [0, m_1); block i >= 1 starts at creature index starts[i-1].
  std::size_t first = tail_from(3);
  std::size_t stem_min = min_length(0);
  if (static_cast<std::size_t>(p.i()) + first < stem_min) first = stem_min - static_cast<std::size_t>(p.i());
  std::vector<std::size_t> starts{first};
  for (int i = 1; i <= options.blocks; ++i) {
    std::size_t end = starts.back() + min_length(i);
    if (i < options.blocks) end = std::max(end, tail_from(static_cast<std::size_t>(i) + 3));
    if (end > horizon) throw insufficient();
    starts.push_back(end);
  }

  ReduceResult result;
  result.q = Condition{p.pair, p.stem, {}};
  for (std::size_t n = 0; n < first; ++n) result.q.stem.push_back(p.creatures[n].product().coords[0].front());
  for (int i = 1; i <= options.blocks; ++i) {
    for (std::size_t n = starts[static_cast<std::size_t>(i) - 1]; n < starts[static_cast<std::size_t>(i)]; ++n) {
      const ValueSet& values = p.creatures[n].product().coords[0];
      result.q.creatures.push_back(pair.make(p.creatures[n].m_dn, ValueSet(values.begin(), values.begin() + i + 2)));
    }
  }
  for (std::size_t n = starts.back(); n < horizon; ++n) result.q.creatures.push_back(p.creatures[n]);

  result.blocks.push_back(0);
  for (std::size_t idx : starts) result.blocks.push_back(p.i() + static_cast<int>(idx));
  result.summarized = summarize_pair(p.pair, result.blocks);

  Condition block_part{p.pair, result.q.stem, {}};
  std::size_t block_creatures = starts.back() - first;
  block_part.creatures.assign(result.q.creatures.begin(), result.q.creatures.begin() + static_cast<long>(block_creatures));
  result.q_star = summarize_condition(block_part, result.summarized);
  return result;
}

}  // namespace creature
