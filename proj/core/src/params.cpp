#include "qmetric/params.hpp"

#include <cmath>

#include "qmetric/errors.hpp"

namespace qmetric {

namespace {

void validate(const std::vector<ParamPoint::Entry>& entries) {
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].first.empty())
      throw ContractError("parameter name must be non-empty");
    if (!std::isfinite(entries[i].second))
      throw ContractError("parameter '" + entries[i].first +
                          "' has non-finite value");
    for (std::size_t j = 0; j < i; ++j)
      if (entries[j].first == entries[i].first)
        throw ContractError("duplicate parameter '" + entries[i].first + "'");
  }
}

}  // namespace

ParamPoint::ParamPoint(std::vector<Entry> entries)
    : entries_(std::move(entries)) {
  validate(entries_);
}

ParamPoint::ParamPoint(std::initializer_list<Entry> entries)
    : entries_(entries) {
  validate(entries_);
}

double ParamPoint::at(std::string_view name) const {
  for (const auto& [key, value] : entries_)
    if (key == name) return value;
  throw ContractError("unknown parameter '" + std::string(name) + "'");
}

bool ParamPoint::contains(std::string_view name) const {
  for (const auto& [key, value] : entries_)
    if (key == name) return true;
  return false;
}

ParamPoint ParamPoint::with(std::string_view name, double value) const {
  if (!std::isfinite(value))
    throw ContractError("parameter '" + std::string(name) +
                        "' has non-finite value");
  ParamPoint out = *this;
  for (auto& [key, stored] : out.entries_) {
    if (key == name) {
      stored = value;
      return out;
    }
  }
  throw ContractError("unknown parameter '" + std::string(name) + "'");
}

std::vector<std::string> ParamPoint::names() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& [key, value] : entries_) out.push_back(key);
  return out;
}

}  // namespace qmetric
