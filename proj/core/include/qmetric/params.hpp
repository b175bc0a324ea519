#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qmetric {

// Immutable named parameter values, ordered as given at construction.
// Duplicate or non-finite entries are rejected.
class ParamPoint {
 public:
  using Entry = std::pair<std::string, double>;

  ParamPoint() = default;
  explicit ParamPoint(std::vector<Entry> entries);
  ParamPoint(std::initializer_list<Entry> entries);

  double at(std::string_view name) const;  // ContractError if absent
  bool contains(std::string_view name) const;

  // Copy with one value replaced (the name must already exist).
  ParamPoint with(std::string_view name, double value) const;

  std::span<const Entry> entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  std::vector<std::string> names() const;

  bool operator==(const ParamPoint&) const = default;

 private:
  std::vector<Entry> entries_;
};

}  // namespace qmetric
