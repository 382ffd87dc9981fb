#include "ves/exclusion.hpp"

#include <numeric>

namespace ves {

void ExclusionReport::add(const std::string& rule, std::size_t row) {
  ++counts[rule];
  rows.push_back(row);
}

void ExclusionReport::merge(const ExclusionReport& other) {
  for (const auto& [rule, n] : other.counts) counts[rule] += n;
  rows.insert(rows.end(), other.rows.begin(), other.rows.end());
}

std::size_t ExclusionReport::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::size_t{0},
                         [](std::size_t acc, const auto& kv) { return acc + kv.second; });
}

}  // namespace ves
