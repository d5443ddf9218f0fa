#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "fairex/errors.hpp"

namespace fairex {

// Sparse user x item grade table.  Only grades > 0 are stored; every other
// pair reads as 0.  Grades live in [0, 1].
class RelevanceTable {
 public:
  RelevanceTable(int num_users, int num_items)
      : num_users_(num_users), num_items_(num_items), rows_(static_cast<std::size_t>(num_users)) {
    if (num_users < 0 || num_items < 0) throw ConfigError("relevance table dimensions must be non-negative");
  }

  void add(int user, int item, double grade) {
    check_user(user);
    if (item < 0 || item >= num_items_) throw StructuralError("item index " + std::to_string(item) + " outside universe");
    if (!(grade >= 0.0 && grade <= 1.0)) throw DomainError("grade " + std::to_string(grade) + " outside [0, 1]");
    if (grade > 0.0) {
      rows_[static_cast<std::size_t>(user)].emplace_back(item, grade);
      finalized_ = false;
    }
  }

  // Sorts rows by item and rejects duplicate (user, item) entries.  Loaders
  // report duplicates earlier with line numbers; this is a backstop.
  void finalize() {
    for (int u = 0; u < num_users_; ++u) {
      auto& row = rows_[static_cast<std::size_t>(u)];
      std::sort(row.begin(), row.end());
      for (std::size_t j = 1; j < row.size(); ++j) {
        if (row[j].first == row[j - 1].first) {
          throw StructuralError("duplicate grade for user index " + std::to_string(u) + ", item index " +
                                std::to_string(row[j].first));
        }
      }
    }
    finalized_ = true;
  }

  double grade(int user, int item) const {
    const auto& row = relevant(user);
    auto it = std::lower_bound(row.begin(), row.end(), std::pair<int, double>{item, -1.0});
    if (it != row.end() && it->first == item) return it->second;
    return 0.0;
  }

  // Items with grade > 0, ascending by item index.
  std::span<const std::pair<int, double>> relevant(int user) const {
    check_user(user);
    return rows_[static_cast<std::size_t>(user)];
  }

  int num_relevant(int user) const { return static_cast<int>(relevant(user).size()); }

  int num_users() const { return num_users_; }
  int num_items() const { return num_items_; }
  bool finalized() const { return finalized_; }

  // Widens the item universe; existing grades keep their indices.
  void extend_items(int new_num_items) {
    if (new_num_items < num_items_) throw ConfigError("cannot shrink item universe");
    num_items_ = new_num_items;
  }

  static RelevanceTable from_triples(int num_users, int num_items,
                                     const std::vector<std::tuple<int, int, double>>& triples) {
    RelevanceTable t(num_users, num_items);
    for (const auto& [u, i, g] : triples) t.add(u, i, g);
    t.finalize();
    return t;
  }

 private:
  void check_user(int user) const {
    if (user < 0 || user >= num_users_) throw StructuralError("user index " + std::to_string(user) + " outside universe");
  }

  int num_users_;
  int num_items_;
  std::vector<std::vector<std::pair<int, double>>> rows_;
  bool finalized_ = true;
};

// One ranked list.  items[p] is the item at rank p+1; scores is either empty
// or parallel to items.
struct RankedList {
  std::vector<int> items;
  std::vector<double> scores;

  bool scored() const { return !scores.empty(); }
  int depth() const { return static_cast<int>(items.size()); }
};

// Rankings for every (user, round) slot of a run.  Slots without a stored
// list read as empty lists; a missing list is legal input for evaluation and
// distinct from a short one.
class RunData {
 public:
  RunData(int num_users, int num_items, int num_rounds = 1)
      : num_users_(num_users),
        num_items_(num_items),
        num_rounds_(num_rounds),
        lists_(static_cast<std::size_t>(num_users) * static_cast<std::size_t>(num_rounds)),
        stamp_(static_cast<std::size_t>(num_items), 0) {
    if (num_users < 0 || num_items < 0) throw ConfigError("run dimensions must be non-negative");
    if (num_rounds < 1) throw ConfigError("run needs at least one round");
  }

  void set_list(int user, int round, RankedList list) {
    std::size_t slot = index(user, round);
    if (!list.scores.empty() && list.scores.size() != list.items.size())
      throw ConfigError("scores not parallel to items");
    ++epoch_;
    for (std::size_t p = 0; p < list.items.size(); ++p) {
      int item = list.items[p];
      if (item < 0 || item >= num_items_)
        throw StructuralError("item index " + std::to_string(item) + " outside universe");
      if (stamp_[static_cast<std::size_t>(item)] == epoch_)
        throw StructuralError("duplicate item index " + std::to_string(item) + " in list for user index " +
                              std::to_string(user) + ", round " + std::to_string(round + 1));
      stamp_[static_cast<std::size_t>(item)] = epoch_;
    }
    lists_[slot] = std::move(list);
  }

  const RankedList& list(int user, int round) const { return lists_[index(user, round)]; }

  bool has_list(int user, int round) const { return !lists_[index(user, round)].items.empty(); }

  int depth(int user, int round) const { return lists_[index(user, round)].depth(); }

  int num_users() const { return num_users_; }
  int num_items() const { return num_items_; }
  int num_rounds() const { return num_rounds_; }

  // Count of non-empty lists across all (user, round) slots.
  int num_lists() const {
    int c = 0;
    for (const auto& l : lists_)
      if (!l.items.empty()) ++c;
    return c;
  }

  // Minimum depth over non-empty lists; 0 when the run has none.
  int min_depth() const {
    int d = 0;
    bool seen = false;
    for (const auto& l : lists_) {
      if (l.items.empty()) continue;
      if (!seen || l.depth() < d) d = l.depth();
      seen = true;
    }
    return seen ? d : 0;
  }

  int max_depth() const {
    int d = 0;
    for (const auto& l : lists_) d = std::max(d, l.depth());
    return d;
  }

  // Widens the item universe (indices stay valid).
  void extend_items(int new_num_items) {
    if (new_num_items < num_items_) throw ConfigError("cannot shrink item universe");
    num_items_ = new_num_items;
    stamp_.resize(static_cast<std::size_t>(new_num_items), 0);
  }

  // f(user, round, const RankedList&) over non-empty lists.
  template <typename F>
  void for_each_list(F&& f) const {
    for (int u = 0; u < num_users_; ++u) {
      for (int w = 0; w < num_rounds_; ++w) {
        const RankedList& l = lists_[index(u, w)];
        if (!l.items.empty()) f(u, w, l);
      }
    }
  }

 private:
  std::size_t index(int user, int round) const {
    if (user < 0 || user >= num_users_) throw StructuralError("user index " + std::to_string(user) + " outside universe");
    if (round < 0 || round >= num_rounds_) throw StructuralError("round " + std::to_string(round + 1) + " outside run");
    return static_cast<std::size_t>(user) * static_cast<std::size_t>(num_rounds_) + static_cast<std::size_t>(round);
  }

  int num_users_;
  int num_items_;
  int num_rounds_;
  std::vector<RankedList> lists_;
  mutable std::vector<std::uint64_t> stamp_;  // scratch for O(depth) duplicate checks
  std::uint64_t epoch_ = 0;
};

}  // namespace fairex
