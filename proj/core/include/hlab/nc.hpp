#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace hlab {

/// Elements are labelled 1..n throughout this header.
using Block = std::vector<int>;

/// Guards on enumeration size. |NC_2(2m)| and |NC(n)| are Catalan numbers, so
/// these grow like 4^m.
struct NcLimits {
  int max_pair_half = 10;  // largest m for NC_2(2m); C_10 = 16796
  int max_partition = 12;  // largest n for NC(n); C_12 = 208012
};

/// A non-crossing perfect matching of {1, ..., 2m}. Pairs are stored as (u, v)
/// with u < v, sorted by u.
class PairPartition {
 public:
  /// Validates the matching and the non-crossing condition; throws MalformedInputError.
  static PairPartition from_pairs(int m, std::vector<std::pair<int, int>> pairs);

  int half_size() const noexcept { return m_; }
  int ground_size() const noexcept { return 2 * m_; }
  const std::vector<std::pair<int, int>>& pairs() const noexcept { return pairs_; }
  /// The element matched with i.
  int partner(int i) const { return partner_.at(static_cast<std::size_t>(i - 1)); }

  friend bool operator==(const PairPartition& a, const PairPartition& b) {
    return a.pairs_ == b.pairs_;
  }
  friend auto operator<=>(const PairPartition& a, const PairPartition& b) {
    return a.pairs_ <=> b.pairs_;
  }

 private:
  PairPartition(int m, std::vector<std::pair<int, int>> pairs);

  int m_ = 0;
  std::vector<std::pair<int, int>> pairs_;
  std::vector<int> partner_;
};

/// A non-crossing partition of {1, ..., n}, blocks sorted internally and by minimum.
class NonCrossingPartition {
 public:
  static NonCrossingPartition from_blocks(int n, std::vector<Block> blocks);

  int size() const noexcept { return n_; }
  const std::vector<Block>& blocks() const noexcept { return blocks_; }
  /// 0-based block index of element i.
  int block_of(int i) const { return owner_.at(static_cast<std::size_t>(i - 1)); }

  friend bool operator==(const NonCrossingPartition& a, const NonCrossingPartition& b) {
    return a.n_ == b.n_ && a.blocks_ == b.blocks_;
  }

 private:
  NonCrossingPartition(int n, std::vector<Block> blocks);

  int n_ = 0;
  std::vector<Block> blocks_;
  std::vector<int> owner_;
};

/// Kreweras complement of a pair partition with blocks V_1, ..., V_{m+1} ordered
/// by their largest element, and tsigma[i-1] = j iff i is in V_j.
struct KrewerasLabeling {
  PairPartition source;
  std::vector<Block> blocks;
  std::vector<int> tsigma;
};

/// Every element of NC_2(2m) once, in lexicographic order of the sorted pair lists.
std::vector<PairPartition> enumerate_nc2(int m, const NcLimits& limits = {});

/// Every non-crossing partition of {1..n} once, in restricted-growth-string order.
std::vector<NonCrossingPartition> enumerate_nc(int n, const NcLimits& limits = {});

/// True iff no a<b<c<d has a,c in one block and b,d in another.
/// Throws MalformedInputError unless blocks partition {1..n}.
bool is_noncrossing(const std::vector<Block>& blocks, int n);

KrewerasLabeling kreweras(const PairPartition& sigma);

/// Kreweras complement on NC(n): the maximal partition of the barred points such
/// that the union with pi is non-crossing on 1, 1bar, 2, 2bar, ..., n, nbar.
/// Computed as the cycles of pi^{-1} composed with the long cycle (1 2 ... n).
NonCrossingPartition kreweras_complement(const NonCrossingPartition& pi);

/// A pair partition together with its Kreweras labelling, as consumed by the moment formula.
struct LabeledPairing {
  PairPartition sigma;
  KrewerasLabeling labeling;
};
std::vector<LabeledPairing> labeled_nc2(int m, const NcLimits& limits = {});

/// binomial(2n, n) / (n + 1); n <= 30.
std::uint64_t catalan(int n);

/// "(1 2)(3 4)"
std::string format_pairs(const PairPartition& sigma);
/// "{1}{3}{2 4}" in V_1, V_2, ... order.
std::string format_blocks(const std::vector<Block>& blocks);

}  // namespace hlab
