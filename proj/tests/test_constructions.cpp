#include <gtest/gtest.h>

#include <array>

#include "oracles.hpp"
#include "trdecomp/als.hpp"
#include "trdecomp/constructions.hpp"
#include "trdecomp/errors.hpp"
#include "trdecomp/unfolding.hpp"

using namespace trdecomp;

namespace {

DenseTensor all_last(std::size_t d, std::size_t n) {
  DenseTensor out = indicator(n, n);
  for (std::size_t i = 1; i < d; ++i) out = outer(out, indicator(n, n));
  return out;
}

std::vector<std::array<std::size_t, 3>> grid() {
  std::vector<std::array<std::size_t, 3>> out;
  for (std::size_t d : {3, 4})
    for (std::size_t r : {2, 3})
      for (std::size_t extra : {1, 3}) out.push_back({d, r, r * r + extra});
  return out;
}

std::size_t ipow(std::size_t b, std::size_t e) {
  std::size_t v = 1;
  while (e-- > 0) v *= b;
  return v;
}

}  // namespace

TEST(BuildT0, MatchesDefiningSum) {
  for (auto [d, r, n] : grid()) {
    const DenseTensor t = build_t0(d, r, n);
    EXPECT_EQ(t, oracle::t0(d, r, n)) << d << ' ' << r << ' ' << n;
    std::size_t ones = 0;
    for (double v : t.values()) {
      EXPECT_TRUE(v == 0.0 || v == 1.0);
      ones += v == 1.0;
    }
    EXPECT_EQ(ones, ipow(r, d) + 1);
    EXPECT_EQ(inner(t, t), static_cast<double>(ipow(r, d) + 1));
  }
}

TEST(BuildT0, ZeroPadding) {
  const DenseTensor small = build_t0(3, 2, 5);
  const DenseTensor big = build_t0(3, 2, 6);
  for (std::size_t k = 0; k < big.size(); ++k) {
    const auto x = pi_inv(k + 1, big.dims());
    const bool last = x == std::vector<std::size_t>{6, 6, 6};
    const bool inner_block = x[0] <= 4 && x[1] <= 4 && x[2] <= 4;
    const double expected = last ? 1.0 : inner_block ? small(x) : 0.0;
    EXPECT_EQ(big[k], expected);
  }
}

TEST(BuildT0, RejectsBadParameters) {
  EXPECT_THROW((void)build_t0(2, 2, 5), DomainError);
  EXPECT_THROW((void)build_t0(3, 1, 5), DomainError);
  EXPECT_THROW((void)build_t0(3, 2, 4), DomainError);
  EXPECT_THROW((void)build_u0(3, 2, 4), DomainError);
  EXPECT_THROW((void)build_u0(2, 2, 5), DomainError);
}

TEST(BuildU0, MatchesDeltaPattern) {
  for (auto [d, r, n] : grid()) {
    const TRCores u = build_u0(d, r, n);
    EXPECT_EQ(u.bond_dimension(), ipow(r, d - 1));
    EXPECT_EQ(u, oracle::u0(d, r, n)) << d << ' ' << r << ' ' << n;
  }
}

TEST(BuildU0, ByteCap) {
  EXPECT_THROW((void)build_u0(4, 3, 10, 1000), DomainError);
  EXPECT_NO_THROW((void)build_u0(3, 2, 5, 4 * 5 * 4 * 3 * 8));
}

TEST(SpuriousInstance, ExactInvariantsOnGrid) {
  for (auto [d, r, n] : grid()) {
    const auto inst = build_spurious_instance(d, r, n);
    EXPECT_EQ(objective(inst.target, inst.local_min), 0.5) << d << ' ' << r << ' ' << n;
    EXPECT_EQ(tau(inst.local_min), inst.target - all_last(d, n));
  }
}

TEST(SpuriousInstance, OpenChainIsKroneckerProduct) {
  // sum over k_2..k_{d-1} of u^1_{pi(p),k_2} (x) ... (x) u^{d-1}_{k_{d-1},pi(q)}
  // equals (x)_i e_{pi(p_i, q_i)}, checked by explicit summation.
  for (std::size_t d : {3, 4}) {
    const std::size_t r = 2, n = 5, m = ipow(r, d - 1);
    const TRCores u = build_u0(d, r, n);
    const Shape rs(d - 1, r), ns(d - 1, n), inner_ks(d - 2, m);
    double worst = 0.0;
    for (std::size_t po = 0; po < m; ++po) {
      const auto p = oracle::digits(po, rs);
      for (std::size_t qo = 0; qo < m; ++qo) {
        const auto q = oracle::digits(qo, rs);
        for (std::size_t xo = 0; xo < ipow(n, d - 1); ++xo) {
          const auto x = oracle::digits(xo, ns);
          double sum = 0.0;
          for (std::size_t ko = 0; ko < ipow(m, d - 2); ++ko) {
            const auto k = oracle::digits(ko, inner_ks);
            double term = 1.0;
            for (std::size_t i = 0; i + 1 < d; ++i) {
              const std::size_t left = i == 0 ? po : k[i - 1];
              const std::size_t right = i + 2 == d ? qo : k[i];
              term *= u.core(i)[(left * n + x[i]) * m + right];
            }
            sum += term;
          }
          double expected = 1.0;
          for (std::size_t i = 0; i + 1 < d; ++i) expected *= x[i] == p[i] * r + q[i] ? 1.0 : 0.0;
          worst = std::max(worst, std::abs(sum - expected));
        }
      }
    }
    EXPECT_LE(worst, 1e-12) << "d=" << d;
  }
}

TEST(Generalized, StandardParamsReduceToBaseCase) {
  const GeneralizedInstance g = build_generalized_t0(3, 2, 6, standard_generalized_params(3, 2, 6));
  EXPECT_EQ(g.target, build_t0(3, 2, 6));
  EXPECT_EQ(g.cores, build_u0(3, 2, 6));
}

TEST(Generalized, RotatedBasisKeepsHalf) {
  for (std::size_t d : {3, 4}) {
    const std::size_t r = 2, n = 7;
    GeneralizedParams params = standard_generalized_params(d, r, n);
    for (std::size_t i = 0; i < d; ++i) {
      const Eigen::MatrixXd q =
          Eigen::HouseholderQR<Eigen::MatrixXd>(oracle::gaussian(n, n, 70 + i)).householderQ();
      params.bases[i] = q.leftCols(r * r + 1);
    }
    const GeneralizedInstance g = build_generalized_t0(d, r, n, params);
    EXPECT_NEAR(objective(g.target, g.cores), 0.5, 1e-10) << "d=" << d;
  }
}

TEST(Generalized, ReweightedKeepsHalf) {
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t k = 0; k < 4; ++k) {
      GeneralizedParams params = standard_generalized_params(3, 2, 5);
      params.lambdas[i][k] = 2.0;
      const GeneralizedInstance g = build_generalized_t0(3, 2, 5, params);
      EXPECT_NEAR(objective(g.target, g.cores), 0.5, 1e-10) << i << ' ' << k;
    }
  }
}

TEST(Generalized, ResidualWeightScalesObjective) {
  GeneralizedParams params = standard_generalized_params(3, 2, 5);
  params.lambdas[0][4] = 3.0;
  const GeneralizedInstance g = build_generalized_t0(3, 2, 5, params);
  EXPECT_NEAR(objective(g.target, g.cores), 4.5, 1e-10);
}

TEST(Generalized, RejectsBadParameters) {
  GeneralizedParams params = standard_generalized_params(3, 2, 5);
  params.lambdas[1][2] = 0.0;
  EXPECT_THROW((void)build_generalized_t0(3, 2, 5, params), DomainError);
  params = standard_generalized_params(3, 2, 5);
  params.bases[2](0, 1) = 0.5;
  EXPECT_THROW((void)build_generalized_t0(3, 2, 5, params), DomainError);
  params = standard_generalized_params(3, 2, 5);
  params.bases.pop_back();
  EXPECT_THROW((void)build_generalized_t0(3, 2, 5, params), DomainError);
}

TEST(WitnessW, ContractsToT0WithoutCorner) {
  for (std::size_t d : {3, 4}) {
    for (std::size_t r : {2, 3}) {
      const std::size_t n = r * r + 1;
      const DenseTensor t = tau(build_witness_w(d, r, n));
      EXPECT_EQ(t, build_t0(d, r, n) - all_last(d, n));
      EXPECT_EQ(inner(t, t), static_cast<double>(ipow(r, d)));
    }
  }
  EXPECT_THROW((void)build_witness_w(3, 3, 8), DomainError);
}

TEST(WitnessU, ReconstructsTarget) {
  for (std::size_t d : {3, 4}) {
    const DenseTensor t = tau(build_witness_w(d, 2, 4));
    EXPECT_EQ(tau(build_witness_u(t, d, 2)), t);
  }
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const DenseTensor t = tau(random_w_cores(3, 2, Shape{4, 4, 6}, seed));
    EXPECT_LE(fnorm(tau(build_witness_u(t, 3, 2)) - t), 1e-10);
  }
}

TEST(WitnessU, RejectsUnsupportedTarget) {
  EXPECT_THROW((void)build_witness_u(build_t0(3, 2, 5), 3, 2), DomainError);
  EXPECT_THROW((void)build_witness_u(DenseTensor(Shape{3, 3, 3}), 3, 2), DomainError);
}

TEST(WitnessU, CoefficientMatricesFullRank) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const DenseTensor t = tau(random_w_cores(3, 2, Shape{4, 4, 4}, 40 + seed));
    for (std::size_t j = 1; j < 3; ++j) {
      Eigen::FullPivLU<Eigen::MatrixXd> lu(reshape_tj(t, j, 2));
      ASSERT_EQ(lu.rank(), 8);
    }
    const TRCores u = build_witness_u(t, 3, 2);
    for (std::size_t j = 1; j <= 3; ++j) {
      EXPECT_TRUE(check_full_column_rank(alpha(u, Mode(j))).full_rank) << "seed " << seed << " j " << j;
    }
  }
}
