#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace ves {

/// Rule name -> count of rejected rows, plus the rejected row indices.
struct ExclusionReport {
  std::map<std::string, std::size_t> counts;
  std::vector<std::size_t> rows;

  void add(const std::string& rule, std::size_t row);
  void merge(const ExclusionReport& other);
  std::size_t total() const;
};

}  // namespace ves
