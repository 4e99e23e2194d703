#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "eierl/replay.hpp"

using namespace eierl;

namespace {

Transition tagged(int tag) {
  Transition t;
  t.s = {static_cast<double>(tag)};
  t.a = tag;
  t.r = tag;
  t.s_next = {static_cast<double>(tag)};
  t.done = false;
  return t;
}

std::vector<Transition> tagged_range(int n, int start = 0) {
  std::vector<Transition> ts;
  for (int i = 0; i < n; ++i) ts.push_back(tagged(start + i));
  return ts;
}

}  // namespace

TEST_CASE("M = 1 stores every transition") {
  ReplayBuffer buf(100);
  Rng rng = make_rng(1);
  const auto ts = tagged_range(50);
  CHECK(buf.push_subsampled(ts, 1, rng) == 50);
  CHECK(buf.size() == 50);
}

TEST_CASE("M = 0 is rejected") {
  ReplayBuffer buf(10);
  Rng rng = make_rng(1);
  CHECK_THROWS_AS(buf.push_subsampled(tagged_range(3), 0, rng),
                  std::invalid_argument);
}

TEST_CASE("M = 4 store count lands in the 99.9% binomial interval") {
  ReplayBuffer buf(20000);
  Rng rng = make_rng(2);
  const std::size_t stored = buf.push_subsampled(tagged_range(10000), 4, rng);
  // n = 10000, p = 1/4: the CI is computed right here, not hard-coded.
  const double n = 10000.0, p = 0.25;
  const double mu = n * p;
  const double sigma = std::sqrt(n * p * (1.0 - p));
  const double z = 3.2905;  // two-sided 99.9%
  CHECK(static_cast<double>(stored) > mu - z * sigma);
  CHECK(static_cast<double>(stored) < mu + z * sigma);
}

TEST_CASE("subsampling acceptance rate converges to 1/M") {
  ReplayBuffer buf(200000);
  Rng rng = make_rng(3);
  const int n = 60000;
  const std::size_t stored = buf.push_subsampled(tagged_range(n), 3, rng);
  const double rate = static_cast<double>(stored) / n;
  const double sigma = std::sqrt((1.0 / 3) * (2.0 / 3) / n);
  CHECK(std::fabs(rate - 1.0 / 3) < 5.0 * sigma);
}

TEST_CASE("FIFO eviction: capacity 5000, push 6000, first 1000 gone") {
  ReplayBuffer buf(5000);
  Rng rng = make_rng(4);
  buf.push_subsampled(tagged_range(6000), 1, rng);
  CHECK(buf.size() == 5000);
  CHECK(buf[0].a == 1000);  // oldest surviving transition
  CHECK(buf[4999].a == 5999);
  // Insertion order preserved.
  for (std::size_t i = 0; i + 1 < buf.size(); ++i)
    CHECK(buf[i].a + 1 == buf[i + 1].a);
}

TEST_CASE("minibatch from an exactly-full buffer is a permutation") {
  ReplayBuffer buf(100);
  Rng rng = make_rng(5);
  for (int i = 0; i < 16; ++i) buf.push(tagged(i));
  const std::vector<Transition> batch = buf.sample_minibatch(16, rng);
  REQUIRE(batch.size() == 16);
  std::vector<int> tags;
  for (const Transition& t : batch) tags.push_back(t.a);
  std::sort(tags.begin(), tags.end());
  for (int i = 0; i < 16; ++i) CHECK(tags[static_cast<std::size_t>(i)] == i);
}

TEST_CASE("within-batch draws never repeat") {
  ReplayBuffer buf(64);
  Rng rng = make_rng(6);
  for (int i = 0; i < 40; ++i) buf.push(tagged(i));
  for (int round = 0; round < 200; ++round) {
    const auto batch = buf.sample_minibatch(16, rng);
    std::vector<int> tags;
    for (const Transition& t : batch) tags.push_back(t.a);
    std::sort(tags.begin(), tags.end());
    CHECK(std::adjacent_find(tags.begin(), tags.end()) == tags.end());
  }
}

TEST_CASE("selection frequency is uniform within 5 sigma") {
  ReplayBuffer buf(128);
  Rng rng = make_rng(7);
  for (int i = 0; i < 100; ++i) buf.push(tagged(i));

  std::map<int, int> counts;
  const int draws = 10000;
  for (int d = 0; d < draws; ++d) {
    for (const Transition& t : buf.sample_minibatch(1, rng)) ++counts[t.a];
  }
  const double p = 1.0 / 100.0;
  const double mu = draws * p;
  const double sigma = std::sqrt(draws * p * (1.0 - p));
  for (int i = 0; i < 100; ++i)
    CHECK(std::fabs(counts[i] - mu) < 5.0 * sigma);
}

TEST_CASE("underfull buffer rejects sampling") {
  ReplayBuffer buf(64);
  Rng rng = make_rng(8);
  for (int i = 0; i < 10; ++i) buf.push(tagged(i));
  CHECK_THROWS_AS(buf.sample_minibatch(16, rng), std::invalid_argument);
}

TEST_CASE("eviction count equals max(0, inserted - capacity)") {
  ReplayBuffer buf(7);
  Rng rng = make_rng(9);
  const int inserted = 23;
  buf.push_subsampled(tagged_range(inserted), 1, rng);
  CHECK(buf.size() == 7);
  CHECK(buf[0].a == inserted - 7);  // 16 evicted, oldest first
}
