#include <gtest/gtest.h>

#include <set>

#include "trdecomp/verify.hpp"

using namespace trdecomp;

TEST(InvariantSuite, AllChecksPass) {
  for (std::uint64_t seed : {0u, 1u, 2u}) {
    const auto results = run_invariant_suite(seed);
    EXPECT_GE(results.size(), 8u);
    std::set<std::string> names;
    for (const auto& r : results) {
      EXPECT_TRUE(r.passed) << r.name << ": " << r.detail;
      EXPECT_FALSE(r.detail.empty());
      names.insert(r.name);
    }
    EXPECT_EQ(names.size(), results.size());
  }
}
