#include "magicsq/exact.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <unordered_map>

namespace magicsq {

namespace {

struct VecHash {
  std::size_t operator()(const std::vector<int>& v) const {
    std::size_t h = 0x811c9dc5u;
    for (int x : v) {
      h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ULL;
      h *= 0x100000001b3ULL;
    }
    return h;
  }
};

using StateMap = std::unordered_map<std::vector<int>, BigCount, VecHash>;

// Enumerate the fillings of one row (sum = row_sum, entry j capped by the
// residual column sum) and push the resulting residual states.
void expand_row(std::vector<int>& resid, const std::vector<long long>& suffix_cap, int col,
                long long remaining, bool canonical, const BigCount& weight, StateMap& next,
                std::uint64_t& work, std::uint64_t work_budget) {
  if (++work > work_budget)
    throw size_error("exact_count: work budget exceeded during row expansion");
  const int n = static_cast<int>(resid.size());
  if (col == n - 1) {
    if (remaining > resid[col]) return;  // last entry forced by the row sum
    resid[col] -= static_cast<int>(remaining);
    std::vector<int> key = resid;
    if (canonical) std::sort(key.begin(), key.end(), std::greater<int>());
    next[std::move(key)] += weight;
    resid[col] += static_cast<int>(remaining);
    return;
  }
  if (remaining > suffix_cap[col]) return;
  const long long hi = std::min<long long>(resid[col], remaining);
  for (long long e = 0; e <= hi; ++e) {
    resid[col] -= static_cast<int>(e);
    expand_row(resid, suffix_cap, col + 1, remaining - e, canonical, weight, next, work,
               work_budget);
    resid[col] += static_cast<int>(e);
  }
}

}  // namespace

BigCount exact_count(const Margins& margins, std::uint64_t state_budget) {
  margins.check();
  const int m = static_cast<int>(margins.row_sums.size());
  const int n = static_cast<int>(margins.col_sums.size());

  std::vector<int> initial(n);
  for (int j = 0; j < n; ++j) {
    if (margins.col_sums[j] > std::numeric_limits<int>::max())
      throw size_error("exact_count: column sum too large");
    initial[j] = static_cast<int>(margins.col_sums[j]);
  }

  StateMap cur;
  cur[initial] = 1;

  // Bounds time as well as memory: row expansion can blow up combinatorially
  // before the distinct-state count does.
  std::uint64_t work = 0;
  const std::uint64_t work_budget =
      state_budget > (1ULL << 58) ? ~0ULL : 2 * state_budget;

  for (int i = 0; i < m; ++i) {
    // Sorting the residuals is valid whenever the remaining rows all carry
    // the same sum (column permutations are then a symmetry of the tail).
    bool canonical = true;
    for (int k = i + 1; k < m; ++k)
      if (margins.row_sums[k] != margins.row_sums[i + 1]) canonical = false;

    StateMap next;
    for (auto& [state, weight] : cur) {
      std::vector<int> resid = state;
      std::vector<long long> suffix_cap(n + 1, 0);
      for (int j = n - 1; j >= 0; --j) suffix_cap[j] = suffix_cap[j + 1] + resid[j];
      expand_row(resid, suffix_cap, 0, margins.row_sums[i], canonical && i + 1 < m,
                 weight, next, work, work_budget);
      if (next.size() > state_budget)
        throw size_error("exact_count: state budget exceeded (" +
                         std::to_string(next.size()) + " states after row " +
                         std::to_string(i) + ")");
    }
    cur = std::move(next);
    if (cur.empty()) return 0;
  }

  BigCount total = 0;
  for (auto& [state, weight] : cur) {
    bool zero = std::all_of(state.begin(), state.end(), [](int v) { return v == 0; });
    if (zero) total += weight;
  }
  return total;
}

BigCount enumerate_count(const Margins& margins) {
  margins.check();
  const int m = static_cast<int>(margins.row_sums.size());
  const int n = static_cast<int>(margins.col_sums.size());
  if (m > 4 || n > 4 || margins.total() > 12)
    throw size_error("enumerate_count: restricted to N <= 12 and dims <= 4x4");

  std::vector<int> col_resid(n);
  for (int j = 0; j < n; ++j) col_resid[j] = static_cast<int>(margins.col_sums[j]);

  BigCount count = 0;
  // Cell-by-cell recursion over the whole table.
  std::function<void(int, int, long long)> rec = [&](int i, int j, long long row_left) {
    if (i == m) {
      for (int c : col_resid)
        if (c != 0) return;
      ++count;
      return;
    }
    if (j == n) {
      if (row_left == 0) rec(i + 1, 0, i + 1 < m ? margins.row_sums[i + 1] : 0);
      return;
    }
    const long long hi = std::min<long long>(col_resid[j], row_left);
    for (long long e = 0; e <= hi; ++e) {
      col_resid[j] -= static_cast<int>(e);
      rec(i, j + 1, row_left - e);
      col_resid[j] += static_cast<int>(e);
    }
  };
  rec(0, 0, margins.row_sums[0]);
  return count;
}

double log_big(const BigCount& c) {
  if (c == 0) return kNegInf;
  if (c < 0) throw numeric_error("log_big: negative count");
  long exp2 = 0;
  const double mant = mpz_get_d_2exp(&exp2, c.get_mpz_t());
  return std::log(mant) + static_cast<double>(exp2) * std::log(2.0);
}

}  // namespace magicsq
