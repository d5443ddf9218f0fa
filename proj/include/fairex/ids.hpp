#pragma once

#include <string>
#include <unordered_map>
#include <vector>

namespace fairex {

// Bidirectional string <-> dense index map.  Indices are assigned in
// first-seen order, so every downstream vector indexed by user or item is
// laid out by load order.
class IdIndex {
 public:
  int intern(const std::string& name) {
    auto [it, fresh] = index_.try_emplace(name, static_cast<int>(names_.size()));
    if (fresh) names_.push_back(name);
    return it->second;
  }

  // -1 when the name was never interned.
  int lookup(const std::string& name) const {
    auto it = index_.find(name);
    return it == index_.end() ? -1 : it->second;
  }

  const std::string& name(int id) const { return names_.at(static_cast<std::size_t>(id)); }

  int size() const { return static_cast<int>(names_.size()); }

 private:
  std::unordered_map<std::string, int> index_;
  std::vector<std::string> names_;
};

}  // namespace fairex
