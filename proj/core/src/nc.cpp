#include "hlab/nc.hpp"

#include <algorithm>
#include <numeric>

#include "hlab/errors.hpp"

namespace hlab {

namespace {

// Validates that blocks partition {1..n}; returns owner[i-1] = block index.
std::vector<int> owners_of(const std::vector<Block>& blocks, int n) {
  if (n < 1) throw MalformedInputError("partition ground set must be nonempty");
  std::vector<int> owner(static_cast<std::size_t>(n), -1);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (blocks[b].empty()) throw MalformedInputError("partition has an empty block");
    for (int e : blocks[b]) {
      if (e < 1 || e > n)
        throw MalformedInputError("element " + std::to_string(e) + " outside {1.." +
                                  std::to_string(n) + "}");
      auto& slot = owner[static_cast<std::size_t>(e - 1)];
      if (slot != -1)
        throw MalformedInputError("element " + std::to_string(e) + " appears twice");
      slot = static_cast<int>(b);
    }
  }
  for (int i = 0; i < n; ++i)
    if (owner[static_cast<std::size_t>(i)] == -1)
      throw MalformedInputError("element " + std::to_string(i + 1) + " is not covered");
  return owner;
}

// Two blocks cross iff the label sequence restricted to their union has >= 4 runs.
bool blocks_cross(const std::vector<int>& owner, int a, int b) {
  int runs = 0;
  int last = -1;
  for (int o : owner) {
    if (o != a && o != b) continue;
    if (o != last) {
      ++runs;
      last = o;
    }
  }
  return runs >= 4;
}

bool crossing_free(const std::vector<int>& owner, int block_count) {
  for (int a = 0; a < block_count; ++a)
    for (int b = a + 1; b < block_count; ++b)
      if (blocks_cross(owner, a, b)) return false;
  return true;
}

void canonicalize(std::vector<Block>& blocks) {
  for (auto& b : blocks) std::sort(b.begin(), b.end());
  std::sort(blocks.begin(), blocks.end(),
            [](const Block& x, const Block& y) { return x.front() < y.front(); });
}

void matchings_of(const std::vector<int>& elements,
                  std::vector<std::vector<std::pair<int, int>>>& out) {
  if (elements.empty()) {
    out.emplace_back();
    return;
  }
  const int first = elements.front();
  for (std::size_t k = 1; k < elements.size(); k += 2) {
    std::vector<int> inside(elements.begin() + 1, elements.begin() + static_cast<long>(k));
    std::vector<int> outside(elements.begin() + static_cast<long>(k) + 1, elements.end());
    std::vector<std::vector<std::pair<int, int>>> in_list;
    std::vector<std::vector<std::pair<int, int>>> out_list;
    matchings_of(inside, in_list);
    matchings_of(outside, out_list);
    for (const auto& a : in_list)
      for (const auto& b : out_list) {
        std::vector<std::pair<int, int>> pairs;
        pairs.reserve(1 + a.size() + b.size());
        pairs.emplace_back(first, elements[k]);
        pairs.insert(pairs.end(), a.begin(), a.end());
        pairs.insert(pairs.end(), b.begin(), b.end());
        out.push_back(std::move(pairs));
      }
  }
}

// Restricted growth strings with the non-crossing pruning rule: element i may join
// block b (last element l) only if no other block has an element in (l, i) together
// with an element below l.
void grow_nc(int n, int i, std::vector<Block>& blocks, std::vector<NonCrossingPartition>& out) {
  if (i > n) {
    out.push_back(NonCrossingPartition::from_blocks(n, blocks));
    return;
  }
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const int last = blocks[b].back();
    bool allowed = true;
    for (std::size_t c = 0; c < blocks.size() && allowed; ++c) {
      if (c == b) continue;
      const auto& other = blocks[c];
      const bool below = other.front() < last;
      const bool between = std::any_of(other.begin(), other.end(),
                                       [&](int e) { return e > last && e < i; });
      if (below && between) allowed = false;
    }
    if (!allowed) continue;
    blocks[b].push_back(i);
    grow_nc(n, i + 1, blocks, out);
    blocks[b].pop_back();
  }
  blocks.push_back({i});
  grow_nc(n, i + 1, blocks, out);
  blocks.pop_back();
}

// Cycles of pi^{-1} o gamma, with gamma the long cycle i -> i+1 (mod n).
std::vector<Block> complement_blocks(const std::vector<Block>& blocks, int n) {
  std::vector<int> inverse(static_cast<std::size_t>(n) + 1, 0);
  for (const auto& b : blocks)
    for (std::size_t j = 0; j < b.size(); ++j)
      inverse[static_cast<std::size_t>(b[j])] = b[(j + b.size() - 1) % b.size()];
  std::vector<bool> seen(static_cast<std::size_t>(n) + 1, false);
  std::vector<Block> result;
  for (int start = 1; start <= n; ++start) {
    if (seen[static_cast<std::size_t>(start)]) continue;
    Block cycle;
    int i = start;
    while (!seen[static_cast<std::size_t>(i)]) {
      seen[static_cast<std::size_t>(i)] = true;
      cycle.push_back(i);
      const int next = i == n ? 1 : i + 1;
      i = inverse[static_cast<std::size_t>(next)];
    }
    result.push_back(std::move(cycle));
  }
  canonicalize(result);
  return result;
}

}  // namespace

PairPartition::PairPartition(int m, std::vector<std::pair<int, int>> pairs)
    : m_(m), pairs_(std::move(pairs)), partner_(static_cast<std::size_t>(2 * m), 0) {
  for (auto [u, v] : pairs_) {
    partner_[static_cast<std::size_t>(u - 1)] = v;
    partner_[static_cast<std::size_t>(v - 1)] = u;
  }
}

PairPartition PairPartition::from_pairs(int m, std::vector<std::pair<int, int>> pairs) {
  if (m < 1) throw MalformedInputError("pair partition needs m >= 1");
  if (pairs.size() != static_cast<std::size_t>(m))
    throw MalformedInputError("pair partition of 2m points needs exactly m pairs");
  std::vector<Block> blocks;
  for (auto& [u, v] : pairs) {
    if (u > v) std::swap(u, v);
    if (u == v) throw MalformedInputError("pair joins an element with itself");
    blocks.push_back({u, v});
  }
  if (!is_noncrossing(blocks, 2 * m))
    throw MalformedInputError("pair partition is crossing");
  std::sort(pairs.begin(), pairs.end());
  return PairPartition(m, std::move(pairs));
}

NonCrossingPartition::NonCrossingPartition(int n, std::vector<Block> blocks)
    : n_(n), blocks_(std::move(blocks)), owner_(owners_of(blocks_, n)) {}

NonCrossingPartition NonCrossingPartition::from_blocks(int n, std::vector<Block> blocks) {
  if (!is_noncrossing(blocks, n)) throw MalformedInputError("partition is crossing");
  canonicalize(blocks);
  return NonCrossingPartition(n, std::move(blocks));
}

bool is_noncrossing(const std::vector<Block>& blocks, int n) {
  const auto owner = owners_of(blocks, n);
  return crossing_free(owner, static_cast<int>(blocks.size()));
}

std::vector<PairPartition> enumerate_nc2(int m, const NcLimits& limits) {
  if (m < 1) throw MalformedInputError("enumerate_nc2 needs m >= 1");
  if (m > limits.max_pair_half)
    throw SizeLimitError("NC_2(2m) enumeration with m = " + std::to_string(m),
                         static_cast<std::size_t>(limits.max_pair_half));
  std::vector<int> ground(static_cast<std::size_t>(2 * m));
  std::iota(ground.begin(), ground.end(), 1);
  std::vector<std::vector<std::pair<int, int>>> raw;
  matchings_of(ground, raw);
  for (auto& pairs : raw) std::sort(pairs.begin(), pairs.end());
  std::sort(raw.begin(), raw.end());
  std::vector<PairPartition> out;
  out.reserve(raw.size());
  for (auto& pairs : raw) out.push_back(PairPartition::from_pairs(m, std::move(pairs)));
  return out;
}

std::vector<NonCrossingPartition> enumerate_nc(int n, const NcLimits& limits) {
  if (n < 1) throw MalformedInputError("enumerate_nc needs n >= 1");
  if (n > limits.max_partition)
    throw SizeLimitError("NC(n) enumeration with n = " + std::to_string(n),
                         static_cast<std::size_t>(limits.max_partition));
  std::vector<NonCrossingPartition> out;
  out.reserve(static_cast<std::size_t>(catalan(n)));
  std::vector<Block> blocks{{1}};
  grow_nc(n, 2, blocks, out);
  return out;
}

NonCrossingPartition kreweras_complement(const NonCrossingPartition& pi) {
  return NonCrossingPartition::from_blocks(pi.size(), complement_blocks(pi.blocks(), pi.size()));
}

KrewerasLabeling kreweras(const PairPartition& sigma) {
  std::vector<Block> pair_blocks;
  for (auto [u, v] : sigma.pairs()) pair_blocks.push_back({u, v});
  const int n = sigma.ground_size();
  auto blocks = complement_blocks(pair_blocks, n);
  std::sort(blocks.begin(), blocks.end(),
            [](const Block& a, const Block& b) { return a.back() < b.back(); });
  std::vector<int> tsigma(static_cast<std::size_t>(n), 0);
  for (std::size_t j = 0; j < blocks.size(); ++j)
    for (int e : blocks[j]) tsigma[static_cast<std::size_t>(e - 1)] = static_cast<int>(j) + 1;
  return KrewerasLabeling{sigma, std::move(blocks), std::move(tsigma)};
}

std::vector<LabeledPairing> labeled_nc2(int m, const NcLimits& limits) {
  auto pairings = enumerate_nc2(m, limits);
  std::vector<LabeledPairing> out;
  out.reserve(pairings.size());
  for (auto& sigma : pairings) {
    auto labeling = kreweras(sigma);
    out.push_back(LabeledPairing{std::move(sigma), std::move(labeling)});
  }
  return out;
}

std::uint64_t catalan(int n) {
  if (n < 0) throw DomainError("catalan needs n >= 0");
  if (n > 30) throw SizeLimitError("catalan(" + std::to_string(n) + ") overflow guard", 30);
  std::uint64_t c = 1;
  for (int k = 0; k < n; ++k)
    c = c * static_cast<std::uint64_t>(2 * (2 * k + 1)) / static_cast<std::uint64_t>(k + 2);
  return c;
}

std::string format_pairs(const PairPartition& sigma) {
  std::string out;
  for (auto [u, v] : sigma.pairs()) out += "(" + std::to_string(u) + " " + std::to_string(v) + ")";
  return out;
}

std::string format_blocks(const std::vector<Block>& blocks) {
  std::string out;
  for (const auto& b : blocks) {
    out += "{";
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (i) out += " ";
      out += std::to_string(b[i]);
    }
    out += "}";
  }
  return out;
}

}  // namespace hlab
