#pragma once

#include <memory>
#include <span>
#include <vector>

#include "creature/core.hpp"
#include "creature/pairs.hpp"

namespace creature {

/// Sum of creatures with m_up(t_i) <= m_dn(t_{i+1}): possibilities are the
/// concatenated part possibilities with 0 on gap slots, nor is the least part
/// norm, and dis is the part list. A tight sum has no gaps.
Creature sum_creatures(std::span<const Creature> parts, bool tight);

bool is_tight(const Creature& sum);

/// The block-level pair of a local pair: its creatures are tight sums of base
/// creatures over one block [m_i, m_{i+1}), and Sigma acts part by part.
///
/// Creatures keep the slot numbering of the base pair, so a block creature
/// spans [m_i, m_{i+1}); block i of the summarized slot space is
/// H(m_i) x ... x H(m_{i+1} - 1).
class SummarizedPair final : public CreatingPair {
 public:
  SummarizedPair(PairPtr base, std::vector<int> blocks);

  const PairPtr& base() const noexcept { return base_; }
  const std::vector<int>& blocks() const noexcept { return blocks_; }
  int block_count() const noexcept { return static_cast<int>(blocks_.size()) - 1; }
  int block_of_start(int m_dn) const;
  /// |H^m(i)| = prod_{m_i <= m < m_{i+1}} |H(m)|.
  BigInt block_cardinality(int i) const;
  Creature make(std::span<const Creature> parts) const;

  PairKind kind() const override { return PairKind::Summarized; }
  std::string describe() const override;
  bool is_local() const override { return false; }
  int slot_count() const override { return blocks_.back(); }
  std::optional<int> slot_size(int m) const override { return base_->slot_size(m); }
  std::vector<int> creature_starts() const override;
  bool member(const Creature& t) const override;
  bool refines(const Creature& s, const Creature& t) const override;
  double norm(const Creature& t) const override;
  std::vector<Creature> creatures_at(int m_dn, std::size_t budget) const override;
  std::vector<Creature> sigma(const Creature& t, std::size_t budget) const override;
  Creature full_creature(int m_dn) const override;
  std::optional<Creature> shrink_to(const Creature& t, const ProductPos& pos) const override;

 private:
  PairPtr base_;
  std::vector<int> blocks_;
};

/// Block boundaries m_0 = 0 < m_1 < ... inside the base pair's slot range.
std::shared_ptr<const SummarizedPair> summarize_pair(PairPtr local_pair, std::vector<int> blocks);

/// Regroups a block-aligned condition of the base pair into block sums. The
/// stem must end on a boundary; a horizon ending mid-block is padded with
/// full creatures up to the next boundary.
Condition summarize_condition(const Condition& p, const std::shared_ptr<const SummarizedPair>& summarized);

/// Flattens block creatures into their parts: the embedding of the summarized
/// forcing into the base one.
Condition embed_condition(const Condition& q);

/// A stronger base condition in the image of the embedding: the stem is
/// extended through the least possibilities up to the next boundary and the
/// horizon is padded to a boundary.
Condition aligned_extension(const Condition& p, const std::shared_ptr<const SummarizedPair>& summarized);

struct ReduceOptions {
  /// Number of creature blocks (block 0 is the stem).
  int blocks = 2;
  /// Block i must satisfy m_{i+1} - m_i > growth_base^(i+3); 0 disables the bound.
  int growth_base = 4;
};

struct ReduceResult {
  Condition q;
  std::vector<int> blocks;  // m_0 = 0, m_1 = lh(w^q), ...
  std::shared_ptr<const SummarizedPair> summarized;
  Condition q_star;
};

/// Strengthens a subset-pair condition to the bad form: creatures below the
/// first block are absorbed into the stem through their least element, and
/// every creature of block i >= 1 is shrunk to its least i + 2 elements. q* is
/// the block sum of q over the creature blocks.
ReduceResult reduce_to_bad_form(const Condition& p, const ReduceOptions& options = {});

}  // namespace creature
