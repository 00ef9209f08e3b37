// Brute-force references shared by the unit and acceptance tests. Everything here
// is written directly from the definitions and avoids the library's algorithms.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <utility>
#include <vector>

namespace oracle {

using Pairs = std::vector<std::pair<int, int>>;
using Partition = std::vector<std::vector<int>>;

inline bool pairs_cross(const Pairs& p) {
  for (const auto& [a, b] : p)
    for (const auto& [c, d] : p)
      if (a < c && c < b && b < d) return true;
  return false;
}

/// Calls visit on every perfect matching of {1..2m}; (2m-1)!! of them.
inline void for_each_matching(int m, const std::function<void(const Pairs&)>& visit) {
  Pairs cur;
  std::vector<char> used(static_cast<std::size_t>(2 * m + 1), 0);
  std::function<void()> rec = [&] {
    int first = 0;
    for (int i = 1; i <= 2 * m; ++i)
      if (!used[static_cast<std::size_t>(i)]) {
        first = i;
        break;
      }
    if (first == 0) {
      visit(cur);
      return;
    }
    used[static_cast<std::size_t>(first)] = 1;
    for (int j = first + 1; j <= 2 * m; ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      used[static_cast<std::size_t>(j)] = 1;
      cur.emplace_back(first, j);
      rec();
      cur.pop_back();
      used[static_cast<std::size_t>(j)] = 0;
    }
    used[static_cast<std::size_t>(first)] = 0;
  };
  rec();
}

inline std::vector<Pairs> all_matchings(int m) {
  std::vector<Pairs> out;
  for_each_matching(m, [&](const Pairs& p) { out.push_back(p); });
  return out;
}

inline std::vector<Pairs> noncrossing_matchings(int m) {
  std::vector<Pairs> out;
  for_each_matching(m, [&](const Pairs& p) {
    if (!pairs_cross(p)) out.push_back(p);
  });
  std::sort(out.begin(), out.end());
  return out;
}

/// Every set partition of {1..n} via restricted growth strings, blocks sorted by minimum.
inline std::vector<Partition> all_partitions(int n) {
  std::vector<Partition> out;
  std::vector<int> label(static_cast<std::size_t>(n), 0);
  std::function<void(int, int)> rec = [&](int i, int blocks) {
    if (i == n) {
      Partition p(static_cast<std::size_t>(blocks));
      for (int e = 0; e < n; ++e) p[static_cast<std::size_t>(label[static_cast<std::size_t>(e)])].push_back(e + 1);
      out.push_back(p);
      return;
    }
    for (int b = 0; b <= blocks; ++b) {
      label[static_cast<std::size_t>(i)] = b;
      rec(i + 1, std::max(blocks, b + 1));
    }
  };
  if (n == 0) return {Partition{}};
  rec(0, 0);
  return out;
}

/// Labels on a sequence of positions; a crossing is a<b<c<d with a,c in one block and b,d in another.
inline bool crossing_labels(const std::vector<int>& labels) {
  const int n = static_cast<int>(labels.size());
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c) {
        if (labels[static_cast<std::size_t>(a)] != labels[static_cast<std::size_t>(c)] ||
            labels[static_cast<std::size_t>(a)] == labels[static_cast<std::size_t>(b)])
          continue;
        for (int d = c + 1; d < n; ++d)
          if (labels[static_cast<std::size_t>(d)] == labels[static_cast<std::size_t>(b)]) return true;
      }
  return false;
}

inline std::vector<int> labels_of(const Partition& p, int n) {
  std::vector<int> l(static_cast<std::size_t>(n));
  for (std::size_t b = 0; b < p.size(); ++b)
    for (int e : p[b]) l[static_cast<std::size_t>(e - 1)] = static_cast<int>(b);
  return l;
}

inline std::vector<Partition> noncrossing_partitions(int n) {
  std::vector<Partition> out;
  for (auto& p : all_partitions(n))
    if (!crossing_labels(labels_of(p, n))) out.push_back(p);
  return out;
}

/// Kreweras complement by its defining property: among partitions K of the barred points
/// such that pi on 1..n together with K on 1bar..nbar is non-crossing on the interleaved
/// sequence 1, 1bar, 2, 2bar, ..., the maximal one (fewest blocks; it is unique).
inline Partition kreweras_bruteforce(const Partition& pi, int n) {
  const auto pl = labels_of(pi, n);
  const int offset = static_cast<int>(pi.size());
  Partition best;
  std::size_t best_blocks = static_cast<std::size_t>(n) + 1;
  int ties = 0;
  // A valid K is non-crossing on its own, so only those candidates need the interleaved test.
  static std::vector<std::vector<Partition>> candidates;
  if (candidates.size() <= static_cast<std::size_t>(n)) candidates.resize(static_cast<std::size_t>(n) + 1);
  auto& pool = candidates[static_cast<std::size_t>(n)];
  if (pool.empty()) pool = noncrossing_partitions(n);
  for (const auto& k : pool) {
    const auto kl = labels_of(k, n);
    std::vector<int> seq;
    for (int i = 0; i < n; ++i) {
      seq.push_back(pl[static_cast<std::size_t>(i)]);
      seq.push_back(offset + kl[static_cast<std::size_t>(i)]);
    }
    if (crossing_labels(seq)) continue;
    if (k.size() < best_blocks) {
      best_blocks = k.size();
      best = k;
      ties = 1;
    } else if (k.size() == best_blocks) {
      ++ties;
    }
  }
  if (ties != 1) return {};
  return best;
}

inline Partition pairs_to_partition(const Pairs& p) {
  Partition out;
  for (const auto& [a, b] : p) out.push_back({a, b});
  std::sort(out.begin(), out.end());
  return out;
}

inline Partition canonical(Partition p) {
  for (auto& b : p) std::sort(b.begin(), b.end());
  std::sort(p.begin(), p.end());
  return p;
}

inline unsigned long long catalan(int n) {
  // Direct binomial(2n, n)/(n+1) in exact integer steps.
  unsigned long long c = 1;
  for (int k = 1; k <= n; ++k) c = c * static_cast<unsigned long long>(n + k) / static_cast<unsigned long long>(k);
  return c / static_cast<unsigned long long>(n + 1);
}

/// Adaptive Simpson quadrature of a smooth function on [a, b].
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                               int depth = 50) {
  std::function<double(double, double, double, double, double, double, int)> rec =
      [&](double lo, double hi, double flo, double fmid, double fhi, double whole, int d) {
        const double mid = 0.5 * (lo + hi);
        const double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
        const double flm = f(lm), frm = f(rm);
        const double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
        const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
        if (d <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
          return left + right + (left + right - whole) / 15.0;
        return rec(lo, mid, flo, flm, fmid, left, d - 1) + rec(mid, hi, fmid, frm, fhi, right, d - 1);
      };
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return rec(a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), depth);
}

}  // namespace oracle
