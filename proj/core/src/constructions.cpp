#include "trdecomp/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "trdecomp/errors.hpp"

namespace trdecomp {

namespace {

std::size_t ipow(std::size_t base, std::size_t exp) {
  std::size_t v = 1;
  while (exp-- > 0) v *= base;
  return v;
}

void check_spurious_params(std::size_t d, std::size_t r, std::size_t n, const char* who) {
  if (d < 3) throw DomainError(std::string(who) + ": d must be at least 3");
  if (r < 2) throw DomainError(std::string(who) + ": r must be at least 2");
  if (n < r * r + 1) {
    throw DomainError(std::string(who) + ": n must be at least r^2 + 1 = " +
                      std::to_string(r * r + 1));
  }
}

void check_byte_cap(std::size_t d, std::size_t m, std::size_t n, std::size_t cap) {
  const long double bytes = static_cast<long double>(d) * m * m * n * sizeof(double);
  if (bytes > static_cast<long double>(cap)) {
    throw DomainError("cores of bond " + std::to_string(m) + " need " +
                      std::to_string(static_cast<unsigned long long>(bytes)) +
                      " bytes, above the cap of " + std::to_string(cap));
  }
}

// Calls emit(p, q, x) for every nonzero fiber position of the delta pattern
// shared by u0 and the witness: core `mode` (0-based, < d-1) links row
// p = pi(p_1..p_{d-1}) to column q (p with digit `mode` replaced) at external
// position x = pi(p_mode, q_mode), all 0-based.
template <typename Emit>
void for_each_delta_fiber(std::size_t d, std::size_t r, std::size_t mode, Emit&& emit) {
  const std::size_t m = ipow(r, d - 1);
  const std::size_t stride = ipow(r, d - 2 - mode);
  for (std::size_t p = 0; p < m; ++p) {
    const std::size_t digit = (p / stride) % r;
    for (std::size_t qd = 0; qd < r; ++qd) {
      const std::size_t q = p - digit * stride + qd * stride;
      emit(p, q, digit * r + qd);
    }
  }
}

// Last core of u0: row p, column q = (p_2..p_{d-1}, q_{d-1}), position pi(p_1, q_{d-1}).
template <typename Emit>
void for_each_closing_fiber(std::size_t d, std::size_t r, Emit&& emit) {
  const std::size_t m = ipow(r, d - 1);
  const std::size_t tail = ipow(r, d - 2);
  for (std::size_t p = 0; p < m; ++p) {
    const std::size_t lead = p / tail;
    for (std::size_t ql = 0; ql < r; ++ql) {
      emit(p, (p % tail) * r + ql, lead * r + ql);
    }
  }
}

// Adds scale * v_1 (x) ... (x) v_d into t (row-major).
void add_rank_one(DenseTensor& t, const std::vector<Eigen::VectorXd>& vectors, double scale) {
  std::vector<double> acc{scale};
  for (const auto& v : vectors) {
    std::vector<double> next;
    next.reserve(acc.size() * static_cast<std::size_t>(v.size()));
    for (double a : acc) {
      for (Eigen::Index s = 0; s < v.size(); ++s) next.push_back(a * v(s));
    }
    acc = std::move(next);
  }
  for (std::size_t k = 0; k < acc.size(); ++k) t[k] += acc[k];
}

}  // namespace

DenseTensor build_t0(std::size_t d, std::size_t r, std::size_t n) {
  check_spurious_params(d, r, n, "build_t0");
  DenseTensor t(Shape(d, n));
  std::vector<std::size_t> k(d, 0);
  const std::size_t terms = ipow(r, d);
  for (std::size_t flat = 0; flat < terms; ++flat) {
    std::size_t rest = flat;
    for (std::size_t l = d; l-- > 0;) {
      k[l] = rest % r;
      rest /= r;
    }
    std::size_t offset = 0;
    for (std::size_t i = 0; i < d; ++i) offset = offset * n + (k[(i + 1) % d] * r + k[i]);
    if (t[offset] != 0.0) throw DomainError("build_t0: index collision between summands");
    t[offset] = 1.0;
  }
  t[t.size() - 1] = 1.0;
  return t;
}

TRCores build_u0(std::size_t d, std::size_t r, std::size_t n, std::size_t byte_cap) {
  check_spurious_params(d, r, n, "build_u0");
  const std::size_t m = ipow(r, d - 1);
  check_byte_cap(d, m, n, byte_cap);
  std::vector<DenseTensor> cores;
  for (std::size_t i = 0; i + 1 < d; ++i) {
    DenseTensor c(Shape{m, n, m});
    for_each_delta_fiber(d, r, i, [&](std::size_t p, std::size_t q, std::size_t x) {
      c[(p * n + x) * m + q] = 1.0;
    });
    cores.push_back(std::move(c));
  }
  DenseTensor last(Shape{m, n, m});
  for_each_closing_fiber(d, r, [&](std::size_t p, std::size_t q, std::size_t x) {
    last[(p * n + x) * m + q] = 1.0;
  });
  cores.push_back(std::move(last));
  return TRCores(std::move(cores));
}

SpuriousInstance build_spurious_instance(std::size_t d, std::size_t r, std::size_t n,
                                         std::size_t byte_cap) {
  return SpuriousInstance{build_t0(d, r, n), build_u0(d, r, n, byte_cap), d, r, n};
}

GeneralizedParams standard_generalized_params(std::size_t d, std::size_t r, std::size_t n) {
  check_spurious_params(d, r, n, "standard_generalized_params");
  const std::size_t k = r * r + 1;
  GeneralizedParams params;
  for (std::size_t i = 0; i < d; ++i) {
    params.lambdas.emplace_back(k, 1.0);
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, k);
    for (std::size_t c = 0; c + 1 < k; ++c) g(c, c) = 1.0;
    g(n - 1, k - 1) = 1.0;
    params.bases.push_back(std::move(g));
  }
  return params;
}

GeneralizedInstance build_generalized_t0(std::size_t d, std::size_t r, std::size_t n,
                                         const GeneralizedParams& params) {
  check_spurious_params(d, r, n, "build_generalized_t0");
  const std::size_t k = r * r + 1;
  if (params.lambdas.size() != d || params.bases.size() != d) {
    throw DomainError("build_generalized_t0: need one weight list and one basis per mode");
  }
  for (std::size_t i = 0; i < d; ++i) {
    if (params.lambdas[i].size() != k) {
      throw DomainError("build_generalized_t0: mode " + std::to_string(i + 1) + " needs " +
                        std::to_string(k) + " weights");
    }
    for (double l : params.lambdas[i]) {
      if (!(l > 0.0)) throw DomainError("build_generalized_t0: weights must be positive");
    }
    const auto& g = params.bases[i];
    if (static_cast<std::size_t>(g.rows()) != n || static_cast<std::size_t>(g.cols()) != k) {
      throw DomainError("build_generalized_t0: basis of mode " + std::to_string(i + 1) +
                        " must be n x (r^2 + 1)");
    }
    const double defect =
        (g.transpose() * g - Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(k),
                                                       static_cast<Eigen::Index>(k)))
            .cwiseAbs()
            .maxCoeff();
    if (defect > 1e-10) {
      throw DomainError("build_generalized_t0: basis of mode " + std::to_string(i + 1) +
                        " is not orthonormal");
    }
  }

  const auto fiber = [&](std::size_t mode, std::size_t x) -> Eigen::VectorXd {
    return params.lambdas[mode][x] * params.bases[mode].col(static_cast<Eigen::Index>(x));
  };

  GeneralizedInstance out{DenseTensor(Shape(d, n)), TRCores{}};
  std::vector<std::size_t> kk(d, 0);
  std::vector<Eigen::VectorXd> vectors(d);
  const std::size_t terms = ipow(r, d);
  for (std::size_t flat = 0; flat < terms; ++flat) {
    std::size_t rest = flat;
    for (std::size_t l = d; l-- > 0;) {
      kk[l] = rest % r;
      rest /= r;
    }
    for (std::size_t i = 0; i < d; ++i) vectors[i] = fiber(i, kk[(i + 1) % d] * r + kk[i]);
    add_rank_one(out.target, vectors, 1.0);
  }
  for (std::size_t i = 0; i < d; ++i) vectors[i] = fiber(i, k - 1);
  add_rank_one(out.target, vectors, 1.0);

  const std::size_t m = ipow(r, d - 1);
  check_byte_cap(d, m, n, kDefaultCoreByteCap);
  std::vector<DenseTensor> cores;
  const auto write_fiber = [&](DenseTensor& c, std::size_t mode, std::size_t p, std::size_t q,
                               std::size_t x) {
    const Eigen::VectorXd v = fiber(mode, x);
    for (std::size_t s = 0; s < n; ++s) c[(p * n + s) * m + q] = v(static_cast<Eigen::Index>(s));
  };
  for (std::size_t i = 0; i + 1 < d; ++i) {
    DenseTensor c(Shape{m, n, m});
    for_each_delta_fiber(d, r, i, [&](std::size_t p, std::size_t q, std::size_t x) {
      write_fiber(c, i, p, q, x);
    });
    cores.push_back(std::move(c));
  }
  DenseTensor last(Shape{m, n, m});
  for_each_closing_fiber(d, r, [&](std::size_t p, std::size_t q, std::size_t x) {
    write_fiber(last, d - 1, p, q, x);
  });
  cores.push_back(std::move(last));
  out.cores = TRCores(std::move(cores));
  return out;
}

TRCores build_witness_w(std::size_t d, std::size_t r, std::size_t n) {
  if (d < 2) throw DomainError("build_witness_w: d must be at least 2");
  if (r < 1) throw DomainError("build_witness_w: r must be positive");
  if (n < r * r) throw DomainError("build_witness_w: n must be at least r^2");
  std::vector<DenseTensor> cores;
  for (std::size_t i = 0; i < d; ++i) {
    DenseTensor c(Shape{r, n, r});
    for (std::size_t k1 = 0; k1 < r; ++k1) {
      for (std::size_t k2 = 0; k2 < r; ++k2) c[(k1 * n + (k2 * r + k1)) * r + k2] = 1.0;
    }
    cores.push_back(std::move(c));
  }
  return TRCores(std::move(cores));
}

TRCores build_witness_u(const DenseTensor& target, std::size_t d, std::size_t r,
                        std::size_t byte_cap) {
  if (d < 2) throw DomainError("build_witness_u: d must be at least 2");
  if (r < 1) throw DomainError("build_witness_u: r must be positive");
  if (target.order() != d) throw DomainError("build_witness_u: target order differs from d");
  const std::size_t r2 = r * r;
  const Shape& dims = target.dims();
  for (std::size_t i = 0; i + 1 < d; ++i) {
    if (dims[i] < r2) throw DomainError("build_witness_u: external dims 1..d-1 must be >= r^2");
  }
  // Support check: T vanishes wherever some x_i > r^2, i < d.
  for (std::size_t offset = 0; offset < target.size(); ++offset) {
    if (target[offset] == 0.0) continue;
    std::size_t rest = offset / dims[d - 1];
    for (std::size_t i = d - 1; i-- > 0;) {
      if (rest % dims[i] >= r2) {
        throw DomainError("build_witness_u: target has support beyond position r^2 in mode " +
                          std::to_string(i + 1));
      }
      rest /= dims[i];
    }
  }

  const std::size_t m = ipow(r, d - 1);
  std::size_t largest = 0;
  for (std::size_t n : dims) largest = std::max(largest, n);
  check_byte_cap(d, m, largest, byte_cap);

  std::vector<DenseTensor> cores;
  for (std::size_t i = 0; i + 1 < d; ++i) {
    const std::size_t n = dims[i];
    DenseTensor c(Shape{m, n, m});
    for_each_delta_fiber(d, r, i, [&](std::size_t p, std::size_t q, std::size_t x) {
      c[(p * n + x) * m + q] = 1.0;
    });
    cores.push_back(std::move(c));
  }

  // u^d(pi(p), :, pi(q)) = T(pi(q_1, p_1), ..., pi(q_{d-1}, p_{d-1}), :).
  const std::size_t nd = dims[d - 1];
  DenseTensor last(Shape{m, nd, m});
  for (std::size_t p = 0; p < m; ++p) {
    for (std::size_t q = 0; q < m; ++q) {
      std::size_t offset = 0;
      std::size_t stride = m / r;
      for (std::size_t i = 0; i + 1 < d; ++i) {
        const std::size_t pd = (p / stride) % r;
        const std::size_t qd = (q / stride) % r;
        offset = offset * dims[i] + (qd * r + pd);
        stride = stride > 1 ? stride / r : 1;
      }
      for (std::size_t s = 0; s < nd; ++s) last[(p * nd + s) * m + q] = target[offset * nd + s];
    }
  }
  cores.push_back(std::move(last));
  return TRCores(std::move(cores));
}

}  // namespace trdecomp
