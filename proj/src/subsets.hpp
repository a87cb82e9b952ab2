#pragma once

#include <functional>
#include <vector>

namespace fairmatch::detail {

/// Visits the nonempty subsets of `pool` by ascending size, each size in lexicographic order.
/// Stops early when visit returns false.
inline void for_each_subset_by_size(const std::vector<int>& pool, int min_size, int max_size,
                                    const std::function<bool(const std::vector<int>&)>& visit) {
  const int n = static_cast<int>(pool.size());
  for (int size = min_size; size <= max_size && size <= n; ++size) {
    std::vector<int> idx(size);
    for (int i = 0; i < size; ++i) idx[i] = i;
    while (true) {
      std::vector<int> subset(size);
      for (int i = 0; i < size; ++i) subset[i] = pool[idx[i]];
      if (!visit(subset)) return;
      int pos = size - 1;
      while (pos >= 0 && idx[pos] == n - size + pos) --pos;
      if (pos < 0) break;
      ++idx[pos];
      for (int i = pos + 1; i < size; ++i) idx[i] = idx[i - 1] + 1;
    }
  }
}

}  // namespace fairmatch::detail
