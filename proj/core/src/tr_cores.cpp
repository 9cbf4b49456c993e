#include "trdecomp/tr_cores.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "trdecomp/errors.hpp"
#include "trdecomp/random.hpp"

namespace trdecomp {

namespace {

using ConstRowMap = Eigen::Map<const RowMatrix>;

void check_third_order(const DenseTensor& core, std::size_t k) {
  if (core.order() != 3) {
    throw DomainError("core " + std::to_string(k + 1) + " is not third order");
  }
}

Eigen::MatrixXd checked_inverse(const Eigen::MatrixXd& a, std::size_t k) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw DomainError("gauge matrix " + std::to_string(k + 1) + " is not square");
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sigma = svd.singularValues();
  const double smax = sigma(0);
  const double smin = sigma(sigma.size() - 1);
  if (!(smax > 0.0) || smin <= kGaugeSingularTolerance * smax) {
    throw DomainError("gauge matrix " + std::to_string(k + 1) + " is singular (sigma_min = " +
                      std::to_string(smin) + ")");
  }
  return svd.matrixV() * sigma.cwiseInverse().asDiagonal() * svd.matrixU().transpose();
}

}  // namespace

TRCores::TRCores(std::vector<DenseTensor> cores) : cores_(std::move(cores)) {
  if (cores_.size() < 2) throw DomainError("a tensor ring needs at least 2 cores");
  const std::size_t d = cores_.size();
  for (std::size_t k = 0; k < d; ++k) check_third_order(cores_[k], k);
  for (std::size_t k = 0; k < d; ++k) {
    const std::size_t next = (k + 1) % d;
    if (cores_[k].dim(2) != cores_[next].dim(0)) {
      throw DomainError("internal dims of cores " + std::to_string(k + 1) + " and " +
                        std::to_string(next + 1) + " do not match");
    }
  }
}

void TRCores::set_core(std::size_t k, DenseTensor core) {
  if (core.dims() != cores_.at(k).dims()) {
    throw DomainError("set_core: replacement core has a different shape");
  }
  cores_[k] = std::move(core);
}

Shape TRCores::ranks() const {
  Shape r;
  for (const auto& c : cores_) r.push_back(c.dim(0));
  return r;
}

Shape TRCores::dims() const {
  Shape n;
  for (const auto& c : cores_) n.push_back(c.dim(1));
  return n;
}

std::size_t TRCores::bond_dimension() const {
  std::size_t m = 0;
  for (const auto& c : cores_) m = std::max(m, c.dim(0));
  return m;
}

TRCores& TRCores::operator+=(const TRCores& other) {
  if (order() != other.order()) throw DomainError("TRCores +=: order mismatch");
  for (std::size_t k = 0; k < order(); ++k) cores_[k] += other.cores_[k];
  return *this;
}

TRCores& TRCores::operator-=(const TRCores& other) {
  if (order() != other.order()) throw DomainError("TRCores -=: order mismatch");
  for (std::size_t k = 0; k < order(); ++k) cores_[k] -= other.cores_[k];
  return *this;
}

TRCores operator+(TRCores lhs, const TRCores& rhs) { return lhs += rhs; }
TRCores operator-(TRCores lhs, const TRCores& rhs) { return lhs -= rhs; }

TRCores zero_cores(std::span<const std::size_t> dims, std::size_t m) {
  if (m == 0) throw DomainError("bond dimension must be positive");
  std::vector<DenseTensor> cores;
  for (std::size_t n : dims) cores.emplace_back(Shape{m, n, m});
  return TRCores(std::move(cores));
}

Eigen::MatrixXd core_slice(const DenseTensor& core, std::size_t x) {
  const std::size_t r = core.dim(0);
  const std::size_t n = core.dim(1);
  const std::size_t rn = core.dim(2);
  if (x < 1 || x > n) throw DomainError("core_slice: external index out of range");
  Eigen::MatrixXd s(r, rn);
  for (std::size_t a = 0; a < r; ++a) {
    for (std::size_t b = 0; b < rn; ++b) s(a, b) = core[(a * n + (x - 1)) * rn + b];
  }
  return s;
}

RowMatrix chain_contract(std::span<const DenseTensor> chain) {
  if (chain.empty()) throw DomainError("chain_contract: empty chain");
  for (std::size_t l = 0; l < chain.size(); ++l) check_third_order(chain[l], l);
  for (std::size_t l = 0; l + 1 < chain.size(); ++l) {
    if (chain[l].dim(2) != chain[l + 1].dim(0)) {
      throw DomainError("chain_contract: chain mismatch between positions " +
                        std::to_string(l + 1) + " and " + std::to_string(l + 2));
    }
  }

  const std::size_t r_first = chain[0].dim(0);
  std::size_t rows = chain[0].dim(1);
  std::size_t r_last = chain[0].dim(2);

  // First core: M[x, a*r2 + b] = c(a, x, b).
  RowMatrix m(rows, r_first * r_last);
  for (std::size_t a = 0; a < r_first; ++a) {
    for (std::size_t x = 0; x < rows; ++x) {
      for (std::size_t b = 0; b < r_last; ++b) {
        m(x, a * r_last + b) = chain[0][(a * rows + x) * r_last + b];
      }
    }
  }

  for (std::size_t l = 1; l < chain.size(); ++l) {
    const DenseTensor& c = chain[l];
    const std::size_t n = c.dim(1);
    const std::size_t r_next = c.dim(2);
    // View M as (rows*r_first) x r_last and the core as r_last x (n*r_next).
    ConstRowMap lhs(m.data(), static_cast<Eigen::Index>(rows * r_first),
                    static_cast<Eigen::Index>(r_last));
    ConstRowMap rhs(c.data(), static_cast<Eigen::Index>(r_last),
                    static_cast<Eigen::Index>(n * r_next));
    const RowMatrix g = lhs * rhs;  // [(p, a), (x, c)]

    RowMatrix next(rows * n, r_first * r_next);
    for (std::size_t p = 0; p < rows; ++p) {
      for (std::size_t a = 0; a < r_first; ++a) {
        const double* src = g.data() + (p * r_first + a) * n * r_next;
        for (std::size_t x = 0; x < n; ++x) {
          double* dst = next.data() + ((p * n + x) * r_first + a) * r_next;
          std::copy_n(src + x * r_next, r_next, dst);
        }
      }
    }
    m = std::move(next);
    rows *= n;
    r_last = r_next;
  }
  return m;
}

DenseTensor tau(const TRCores& u) {
  const std::size_t d = u.order();
  if (d < 2) throw DomainError("tau: need at least 2 cores");
  const RowMatrix open = chain_contract(std::span(u.cores()).first(d - 1));

  // Close the ring with the last core: W[(a, b), x] = u^d(b, x, a).
  const DenseTensor& last = u.core(d - 1);
  const std::size_t rd = last.dim(0);
  const std::size_t nd = last.dim(1);
  const std::size_t r1 = last.dim(2);
  RowMatrix w(r1 * rd, nd);
  for (std::size_t b = 0; b < rd; ++b) {
    for (std::size_t x = 0; x < nd; ++x) {
      for (std::size_t a = 0; a < r1; ++a) w(a * rd + b, x) = last[(b * nd + x) * r1 + a];
    }
  }
  const RowMatrix full = open * w;
  return DenseTensor(u.dims(), std::vector<double>(full.data(), full.data() + full.size()));
}

double tau_entry(const TRCores& u, std::span<const std::size_t> x) {
  if (x.size() != u.order()) throw DomainError("tau_entry: multi-index has wrong order");
  Eigen::MatrixXd product = core_slice(u.core(0), x[0]);
  for (std::size_t k = 1; k < u.order(); ++k) product = product * core_slice(u.core(k), x[k]);
  return product.trace();
}

GaugeTuple inverse(const GaugeTuple& gauge) {
  GaugeTuple inv;
  for (std::size_t k = 0; k < gauge.matrices.size(); ++k) {
    inv.matrices.push_back(checked_inverse(gauge.matrices[k], k));
  }
  return inv;
}

TRCores gauge_transform(const TRCores& u, const GaugeTuple& gauge) {
  const std::size_t d = u.order();
  if (gauge.matrices.size() != d) throw DomainError("gauge tuple has wrong length");
  const Shape ranks = u.ranks();
  for (std::size_t k = 0; k < d; ++k) {
    const auto& a = gauge.matrices[k];
    if (static_cast<std::size_t>(a.rows()) != ranks[k] ||
        static_cast<std::size_t>(a.cols()) != ranks[k]) {
      throw DomainError("gauge matrix " + std::to_string(k + 1) + " does not match rank r_" +
                        std::to_string(k + 1));
    }
  }
  const GaugeTuple inv = inverse(gauge);

  std::vector<DenseTensor> cores;
  cores.reserve(d);
  for (std::size_t k = 0; k < d; ++k) {
    const DenseTensor& c = u.core(k);
    const std::size_t r = c.dim(0);
    const std::size_t n = c.dim(1);
    const std::size_t rn = c.dim(2);
    const Eigen::MatrixXd& left = gauge.matrices[k];
    const Eigen::MatrixXd& right = inv.matrices[(k + 1) % d];
    DenseTensor out(c.dims());
    for (std::size_t x = 1; x <= n; ++x) {
      const Eigen::MatrixXd s = left * core_slice(c, x) * right;
      for (std::size_t a = 0; a < r; ++a) {
        for (std::size_t b = 0; b < rn; ++b) out[(a * n + (x - 1)) * rn + b] = s(a, b);
      }
    }
    cores.push_back(std::move(out));
  }
  return TRCores(std::move(cores));
}

double max_norm(const TRCores& u) {
  double m = 0.0;
  for (const auto& c : u.cores()) {
    for (double v : c.values()) m = std::max(m, std::abs(v));
  }
  return m;
}

double max_norm_slice_n(const TRCores& v) {
  const Shape dims = v.dims();
  if (dims.empty()) return 0.0;
  const std::size_t n = dims.front();
  if (!std::all_of(dims.begin(), dims.end(), [n](std::size_t x) { return x == n; })) {
    throw DomainError("max_norm_slice_n: external dims are not uniform");
  }
  double m = 0.0;
  for (const auto& c : v.cores()) {
    const std::size_t r = c.dim(0);
    const std::size_t rn = c.dim(2);
    for (std::size_t a = 0; a < r; ++a) {
      for (std::size_t b = 0; b < rn; ++b) {
        m = std::max(m, std::abs(c[(a * n + (n - 1)) * rn + b]));
      }
    }
  }
  return m;
}

TRCores random_cores(std::size_t d, std::size_t m, std::span<const std::size_t> dims,
                     std::uint64_t seed) {
  if (dims.size() != d) throw DomainError("random_cores: dims length differs from d");
  if (m == 0) throw DomainError("random_cores: bond dimension must be positive");
  Rng rng(seed);
  std::vector<DenseTensor> cores;
  for (std::size_t k = 0; k < d; ++k) {
    if (dims[k] == 0) throw DomainError("random_cores: external dims must be positive");
    DenseTensor c(Shape{m, dims[k], m});
    for (double& v : c.values()) v = rng.normal();
    cores.push_back(std::move(c));
  }
  return TRCores(std::move(cores));
}

TRCores random_w_cores(std::size_t d, std::size_t r, std::span<const std::size_t> dims,
                       std::uint64_t seed) {
  if (dims.size() != d) throw DomainError("random_w_cores: dims length differs from d");
  if (r == 0) throw DomainError("random_w_cores: bond dimension must be positive");
  const std::size_t support = r * r;
  for (std::size_t n : dims) {
    if (n < support) {
      throw DomainError("random_w_cores: external dim " + std::to_string(n) + " < r^2 = " +
                        std::to_string(support));
    }
  }
  Rng rng(seed);
  std::vector<DenseTensor> cores;
  for (std::size_t k = 0; k < d; ++k) {
    const std::size_t n = dims[k];
    DenseTensor c(Shape{r, n, r});
    for (std::size_t a = 0; a < r; ++a) {
      for (std::size_t x = 0; x < support; ++x) {
        for (std::size_t b = 0; b < r; ++b) c[(a * n + x) * r + b] = rng.normal();
      }
    }
    cores.push_back(std::move(c));
  }
  return TRCores(std::move(cores));
}

}  // namespace trdecomp
