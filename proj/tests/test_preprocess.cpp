#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "fairex/preprocess.hpp"
#include "fairex/rng.hpp"

namespace {

fairex::Interaction ix(std::string user, std::string item, double rating = -1.0, long long ts = -1) {
  fairex::Interaction x;
  x.user = std::move(user);
  x.item = std::move(item);
  if (rating >= 0.0) {
    x.rating = rating;
    x.has_rating = true;
  }
  if (ts >= 0) {
    x.timestamp = ts;
    x.has_timestamp = true;
  }
  return x;
}

std::multiset<std::pair<std::string, std::string>> keys(const std::vector<fairex::Interaction>& xs) {
  std::multiset<std::pair<std::string, std::string>> out;
  for (const auto& x : xs) out.emplace(x.user, x.item);
  return out;
}

}  // namespace

TEST_CASE("ratings at or above the threshold become grade 1") {
  std::vector<fairex::Interaction> xs{ix("u1", "i1", 4.0), ix("u1", "i2", 2.0), ix("u2", "i1")};
  auto out = fairex::binarize(std::move(xs), 3.5);
  REQUIRE(out.size() == 2);
  CHECK(out[0].rating == 1.0);
  CHECK(out[1].user == "u2");  // implicit rows pass through untouched
  CHECK_FALSE(out[1].has_rating);
}

TEST_CASE("core filtering reaches a fixpoint") {
  // u1 has 3 interactions but two survive only while i3 does
  std::vector<fairex::Interaction> xs{
      ix("u1", "i1"), ix("u1", "i2"), ix("u1", "i3"), ix("u2", "i1"), ix("u2", "i2"), ix("u3", "i3"),
  };
  auto out = fairex::kcore_filter(xs, 2);
  // i3 appears twice at first but u3 has a single interaction; dropping u3
  // leaves i3 with one, which drops u1's i3 row too
  auto k = keys(out);
  CHECK(k.size() == 4);
  CHECK(k.count({"u1", "i3"}) == 0);
  CHECK(k.count({"u3", "i3"}) == 0);

  SECTION("already-stable input passes through unchanged") {
    auto again = fairex::kcore_filter(out, 2);
    CHECK(keys(again) == k);
  }
  SECTION("every user and item in the result meets the core size") {
    std::map<std::string, int> uc, ic;
    for (const auto& x : out) {
      ++uc[x.user];
      ++ic[x.item];
    }
    for (const auto& [u, c] : uc) CHECK(c >= 2);
    for (const auto& [i, c] : ic) CHECK(c >= 2);
  }
}

TEST_CASE("core filtering rejects a zero core size") {
  CHECK_THROWS_AS(fairex::kcore_filter({}, 0), fairex::ConfigError);
}

TEST_CASE("temporal splits cut the timeline at the declared ratios") {
  std::vector<fairex::Interaction> xs;
  for (int j = 0; j < 10; ++j) xs.push_back(ix("u1", "i" + std::to_string(j), -1.0, 100 - j));  // reverse order
  auto b = fairex::split_interactions(xs, {}, fairex::SplitMode::temporal, 0, /*min_train=*/1);
  CHECK(b.train.size() == 6);
  CHECK(b.validation.size() == 2);
  CHECK(b.test.size() == 2);
  CHECK(b.dropped.empty());
  // train must hold the oldest six
  for (const auto& x : b.train) CHECK(x.timestamp <= 96);
  for (const auto& x : b.test) CHECK(x.timestamp >= 99);
}

TEST_CASE("splits partition the input multiset") {
  fairex::Rng g(3);
  std::vector<fairex::Interaction> xs;
  for (int j = 0; j < 57; ++j)
    xs.push_back(ix("u" + std::to_string(fairex::draw_below(g, 6)), "i" + std::to_string(fairex::draw_below(g, 20)),
                    -1.0, static_cast<long long>(j)));
  auto orig = keys(xs);
  for (auto mode : {fairex::SplitMode::temporal, fairex::SplitMode::random}) {
    auto b = fairex::split_interactions(xs, {}, mode, 42, 3);
    auto all = keys(b.train);
    for (const auto& k : keys(b.validation)) all.insert(k);
    for (const auto& k : keys(b.test)) all.insert(k);
    for (const auto& k : keys(b.dropped)) all.insert(k);
    CHECK(all == orig);
  }
}

TEST_CASE("random splits are seed-reproducible and seed-sensitive") {
  std::vector<fairex::Interaction> xs;
  for (int j = 0; j < 40; ++j) xs.push_back(ix("u" + std::to_string(j % 4), "i" + std::to_string(j)));
  auto a = fairex::split_interactions(xs, {}, fairex::SplitMode::random, 7, 1);
  auto b = fairex::split_interactions(xs, {}, fairex::SplitMode::random, 7, 1);
  CHECK(keys(a.train) == keys(b.train));
  CHECK(keys(a.test) == keys(b.test));
  auto c = fairex::split_interactions(xs, {}, fairex::SplitMode::random, 8, 1);
  bool differs = keys(a.train) != keys(c.train) || keys(a.test) != keys(c.test);
  CHECK(differs);
}

TEST_CASE("users with thin training history are dropped whole") {
  std::vector<fairex::Interaction> xs;
  for (int j = 0; j < 8; ++j) xs.push_back(ix("heavy", "i" + std::to_string(j), -1.0, j));
  xs.push_back(ix("light", "x1", -1.0, 3));
  xs.push_back(ix("light", "x2", -1.0, 100));
  auto b = fairex::split_interactions(xs, {}, fairex::SplitMode::temporal, 0, 4);
  for (const auto& x : b.train) CHECK(x.user == "heavy");
  for (const auto& x : b.validation) CHECK(x.user == "heavy");
  for (const auto& x : b.test) CHECK(x.user == "heavy");
  CHECK(b.dropped.size() == 2);
  for (const auto& x : b.dropped) CHECK(x.user == "light");
}

TEST_CASE("split preconditions are validated") {
  std::vector<fairex::Interaction> xs{ix("u1", "i1")};  // no timestamp
  CHECK_THROWS_AS(fairex::split_interactions(xs, {}, fairex::SplitMode::temporal, 0, 1), fairex::ConfigError);
  fairex::SplitRatios bad{0.5, 0.2, 0.2};
  CHECK_THROWS_AS(fairex::split_interactions(xs, bad, fairex::SplitMode::random, 0, 1), fairex::ConfigError);
}
