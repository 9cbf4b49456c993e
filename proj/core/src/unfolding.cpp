#include "trdecomp/unfolding.hpp"

#include <string>
#include <vector>

#include "trdecomp/errors.hpp"

namespace trdecomp {

namespace {

void check_mode(Mode mode, std::size_t d) {
  if (mode.value() < 1 || mode.value() > d) {
    throw DomainError("mode " + std::to_string(mode.value()) + " out of range [1, " +
                      std::to_string(d) + "]");
  }
}

std::size_t ipow(std::size_t base, std::size_t exp) {
  std::size_t v = 1;
  while (exp-- > 0) v *= base;
  return v;
}

}  // namespace

Eigen::MatrixXd unfold_target(const DenseTensor& target, Mode mode) {
  const std::size_t d = target.order();
  check_mode(mode, d);
  const Shape& dims = target.dims();
  const std::size_t i = mode.offset();
  std::size_t prefix = 1;
  for (std::size_t j = 0; j < i; ++j) prefix *= dims[j];
  std::size_t suffix = 1;
  for (std::size_t j = i + 1; j < d; ++j) suffix *= dims[j];
  const std::size_t ni = dims[i];

  // Row pi(x_{i+1}..x_d, x_1..x_{i-1}) = suf * prefix + pre.
  Eigen::MatrixXd b(prefix * suffix, ni);
  for (std::size_t pre = 0; pre < prefix; ++pre) {
    for (std::size_t x = 0; x < ni; ++x) {
      const double* src = target.data() + (pre * ni + x) * suffix;
      for (std::size_t suf = 0; suf < suffix; ++suf) b(suf * prefix + pre, x) = src[suf];
    }
  }
  return b;
}

Eigen::MatrixXd alpha(std::span<const DenseTensor> chain) {
  return chain_contract(chain);
}

Eigen::MatrixXd alpha(const TRCores& u, Mode mode) {
  const std::size_t d = u.order();
  check_mode(mode, d);
  std::vector<DenseTensor> chain;
  chain.reserve(d - 1);
  for (std::size_t step = 1; step < d; ++step) chain.push_back(u.core((mode.offset() + step) % d));
  return alpha(chain);
}

Eigen::MatrixXd gamma(const DenseTensor& core) {
  if (core.order() != 3) throw DomainError("gamma: core is not third order");
  const std::size_t r = core.dim(0);
  const std::size_t n = core.dim(1);
  const std::size_t rn = core.dim(2);
  Eigen::MatrixXd x(rn * r, n);
  for (std::size_t a = 0; a < r; ++a) {
    for (std::size_t s = 0; s < n; ++s) {
      for (std::size_t b = 0; b < rn; ++b) x(b * r + a, s) = core[(a * n + s) * rn + b];
    }
  }
  return x;
}

DenseTensor gamma_inv(const Eigen::MatrixXd& x, std::size_t r_left, std::size_t n,
                      std::size_t r_right) {
  if (static_cast<std::size_t>(x.rows()) != r_left * r_right ||
      static_cast<std::size_t>(x.cols()) != n) {
    throw DomainError("gamma_inv: matrix shape does not match the requested core shape");
  }
  DenseTensor core(Shape{r_left, n, r_right});
  for (std::size_t a = 0; a < r_left; ++a) {
    for (std::size_t s = 0; s < n; ++s) {
      for (std::size_t b = 0; b < r_right; ++b) core[(a * n + s) * r_right + b] = x(b * r_left + a, s);
    }
  }
  return core;
}

LSProblem build_ls_problem(const DenseTensor& target, const TRCores& u, Mode mode) {
  if (target.dims() != u.dims()) {
    throw DomainError("build_ls_problem: target dims differ from the external dims of the cores");
  }
  return LSProblem{alpha(u, mode), unfold_target(target, mode), mode};
}

RankCheck check_full_column_rank(const Eigen::MatrixXd& a, double tol) {
  if (a.rows() < a.cols() || a.cols() == 0) return RankCheck{};
  const Eigen::VectorXd sigma = Eigen::BDCSVD<Eigen::MatrixXd>(a).singularValues();
  RankCheck out;
  out.sigma_max = sigma(0);
  out.sigma_min = sigma(sigma.size() - 1);
  out.full_rank = out.sigma_max > 0.0 && out.sigma_min > tol * out.sigma_max;
  return out;
}

Eigen::MatrixXd reshape_tj(const DenseTensor& target, std::size_t j, std::size_t r) {
  const std::size_t d = target.order();
  if (d < 2) throw DomainError("reshape_tj: target order must be at least 2");
  if (j < 1 || j > d - 1) {
    throw DomainError("reshape_tj: split " + std::to_string(j) + " out of range [1, " +
                      std::to_string(d - 1) + "]");
  }
  if (r == 0) throw DomainError("reshape_tj: r must be positive");
  const std::size_t r2 = r * r;
  for (std::size_t n : target.dims()) {
    if (n < r2) throw DomainError("reshape_tj: every external dim must be at least r^2");
  }

  const std::size_t digits = d - 1;
  const std::size_t block = ipow(r, d - 2);
  const std::size_t side = ipow(r, d);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(side, side);

  std::vector<std::size_t> p(digits, 0);
  std::vector<std::size_t> q(digits, 0);
  std::vector<std::size_t> x(d, 0);
  const std::size_t count = ipow(r, 2 * digits);
  for (std::size_t flat = 0; flat < count; ++flat) {
    std::size_t rest = flat;
    for (std::size_t l = digits; l-- > 0;) {
      q[l] = rest % r;
      rest /= r;
    }
    for (std::size_t l = digits; l-- > 0;) {
      p[l] = rest % r;
      rest /= r;
    }

    // 0-based digit positions: p_1..p_{j-1} = p[0..j-2], q_{j+1}..q_{d-1} = q[j..d-2].
    std::size_t first = 0;
    for (std::size_t l = 0; l + 1 < j; ++l) first = first * r + p[l];
    for (std::size_t l = j; l < digits; ++l) first = first * r + q[l];
    std::size_t col = 0;
    for (std::size_t l = 0; l < j; ++l) col = col * r + q[l];
    for (std::size_t l = j - 1; l < digits; ++l) col = col * r + p[l];

    std::size_t offset = 0;
    for (std::size_t l = 0; l < digits; ++l) offset = offset * target.dim(l) + (p[l] * r + q[l]);
    const std::size_t nd = target.dim(d - 1);
    for (std::size_t s = 0; s < r2; ++s) {
      const std::size_t row = ((s / r) * block + first) * r + s % r;
      out(row, col) = target[offset * nd + s];
    }
  }
  return out;
}

}  // namespace trdecomp
