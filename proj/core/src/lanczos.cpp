#include "specclust/lanczos.hpp"

#include "specclust/symmetric_eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace specclust {

namespace {

constexpr std::size_t kRowBlock = 2048;

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += a[i] * b[i];
  }
  return acc;
}

double norm2(std::span<const double> v) { return std::sqrt(dot(v.data(), v.data(), v.size())); }

std::size_t retained_count(std::size_t k, std::size_t m) {
  return std::min(m - 1, k + (m - k) / 2);
}

} // namespace

std::size_t default_subspace_dim(std::size_t n, std::size_t k) {
  return std::min(n, std::max(2 * k, k + 8));
}

LanczosConfig resolve_config(std::size_t n, LanczosConfig cfg) {
  if (cfg.m == 0) {
    cfg.m = default_subspace_dim(n, cfg.k);
  }
  if (cfg.k < 1 || cfg.k >= cfg.m || cfg.m > n) {
    throw Error(ErrorCode::BadConfig,
                "Lanczos needs 1 <= k < m <= n (k=" + std::to_string(cfg.k) +
                    ", m=" + std::to_string(cfg.m) + ", n=" + std::to_string(n) + ")");
  }
  if (!(cfg.tol > 0.0) || !std::isfinite(cfg.tol)) {
    throw Error(ErrorCode::BadConfig, "Lanczos tolerance must be positive");
  }
  return cfg;
}

RciSession::RciSession(std::size_t n, const LanczosConfig& cfg)
    : n_(n), cfg_(resolve_config(n, cfg)), rng_(cfg.seed), basis_(cfg_.m * n),
      h_(cfg_.m, cfg_.m), in_(n), out_(n) {
  std::vector<double> v(n);
  for (auto& x : v) {
    x = rng_.uniform() - 0.5;
  }
  const double nv = norm2(v);
  for (auto& x : v) {
    x /= nv;
  }
  std::copy(v.begin(), v.end(), column(0));
  size_ = 1;
  in_ = std::move(v);
}

double RciSession::breakdown_threshold() const noexcept {
  return 1e-12 * anorm_;
}

RciState RciSession::fail(ErrorCode code, std::string message) {
  state_ = RciState::Failed;
  failure_code_ = code;
  failure_message_ = std::move(message);
  return state_;
}

// Classical Gram-Schmidt, applied twice. Coefficients are dot products
// computed serially per basis vector and the update accumulates each entry in
// basis order, so the result is independent of the thread count.
std::vector<double> RciSession::orthogonalize(std::vector<double>& w,
                                              std::size_t count) const {
  std::vector<double> total(count, 0.0);
  std::vector<double> c(count);
  const auto sc = static_cast<std::ptrdiff_t>(count);
  const auto nblocks = static_cast<std::ptrdiff_t>((n_ + kRowBlock - 1) / kRowBlock);
  const bool par = n_ * count > 65536;
  for (int pass = 0; pass < 2; ++pass) {
#pragma omp parallel for schedule(static) if (par)
    for (std::ptrdiff_t i = 0; i < sc; ++i) {
      c[i] = dot(column(static_cast<std::size_t>(i)), w.data(), n_);
    }
#pragma omp parallel for schedule(static) if (par)
    for (std::ptrdiff_t b = 0; b < nblocks; ++b) {
      const std::size_t lo = static_cast<std::size_t>(b) * kRowBlock;
      const std::size_t hi = std::min(n_, lo + kRowBlock);
      for (std::size_t i = 0; i < count; ++i) {
        const double* v = column(i);
        const double ci = c[i];
        for (std::size_t r = lo; r < hi; ++r) {
          w[r] -= ci * v[r];
        }
      }
    }
    for (std::size_t i = 0; i < count; ++i) {
      total[i] += c[i];
    }
  }
  return total;
}

void RciSession::random_orthogonal(std::vector<double>& w, std::size_t count) {
  for (int attempt = 0; attempt < 3; ++attempt) {
    for (auto& x : w) {
      x = rng_.uniform() - 0.5;
    }
    const double before = norm2(w);
    orthogonalize(w, count);
    const double after = norm2(w);
    if (after > 1e-8 * before) {
      for (auto& x : w) {
        x /= after;
      }
      return;
    }
  }
  throw Error(ErrorCode::Breakdown,
              "cannot extend the Krylov basis: random directions lie in its span");
}

RciState RciSession::advance() {
  if (state_ != RciState::NeedMatvec) {
    return state_;
  }
  ++matvecs_;
  for (double x : out_) {
    if (!std::isfinite(x)) {
      return fail(ErrorCode::InvalidArgument, "operator produced a non-finite value");
    }
  }
  try {
    return phase_ == Phase::Extend ? advance_extend() : advance_residual();
  } catch (const Error& e) {
    return fail(e.code(), e.what());
  }
}

RciState RciSession::advance_extend() {
  const std::size_t j = size_ - 1;
  std::vector<double> w(out_.begin(), out_.end());
  const auto coeff = orthogonalize(w, size_);
  // Column j of V^T A V; keeps the projection exact after restarts.
  for (std::size_t i = 0; i < j; ++i) {
    h_(i, j) = coeff[i];
    h_(j, i) = coeff[i];
  }
  const double alpha = coeff[j];
  h_(j, j) = alpha;
  const double beta = norm2(w);
  anorm_ = std::max({anorm_, std::abs(alpha), beta});

  if (size_ == cfg_.m) {
    resid_ = std::move(w);
    end_of_fill(beta);
    return state_;
  }

  double coupling = beta;
  if (beta <= breakdown_threshold() || beta == 0.0) {
    ++breakdowns_;
    random_orthogonal(w, size_);
    coupling = 0.0;
  } else {
    for (auto& x : w) {
      x /= beta;
    }
  }
  h_(size_, j) = coupling;
  h_(j, size_) = coupling;
  std::copy(w.begin(), w.end(), column(size_));
  ++size_;
  in_ = std::move(w);
  return state_;
}

void RciSession::end_of_fill(double beta) {
  const std::size_t m = cfg_.m;
  const std::size_t k = cfg_.k;
  if (beta <= breakdown_threshold()) {
    beta = 0.0; // the basis spans an invariant subspace
  }
  const auto eig = symmetric_eigen(h_);
  for (double t : eig.values) {
    anorm_ = std::max(anorm_, std::abs(t));
  }

  estimates_.assign(k, 0.0);
  bool converged = true;
  for (std::size_t i = 0; i < k; ++i) {
    estimates_[i] = std::abs(beta * eig.vectors(m - 1, i));
    if (estimates_[i] > cfg_.tol * std::max(1.0, std::abs(eig.values[i]))) {
      converged = false;
    }
  }

  if (verifying_) {
    verifying_ = false;
    bool found_new = false;
    for (std::size_t i = 0; i < k; ++i) {
      const double slack = 10.0 * cfg_.tol * std::max(1.0, std::abs(reference_[i]));
      if (eig.values[i] > reference_[i] + slack) {
        found_new = true;
      }
    }
    if (converged && !found_new) {
      begin_residuals(eig.values, eig.vectors);
      return;
    }
  } else {
    history_.push_back(*std::max_element(estimates_.begin(), estimates_.end()));
    if (converged) {
      if (restarts_ >= cfg_.max_restarts) {
        begin_residuals(eig.values, eig.vectors);
        return;
      }
      ++restarts_;
      verifying_ = true;
      reference_.assign(eig.values.begin(), eig.values.begin() + static_cast<std::ptrdiff_t>(k));
      restart(eig.values, eig.vectors, beta, true);
      return;
    }
  }

  if (restarts_ >= cfg_.max_restarts) {
    throw ConvergenceError(ErrorCode::MaxRestartsExceeded,
                           "Lanczos did not converge within " +
                               std::to_string(cfg_.max_restarts) + " restarts",
                           estimates_);
  }
  ++restarts_;
  restart(eig.values, eig.vectors, beta, false);
}

void RciSession::ritz_vectors(const DenseMatrix& y, std::size_t count,
                              std::vector<double>& dst) const {
  const std::size_t m = cfg_.m;
  dst.assign(count * n_, 0.0);
  const auto nblocks = static_cast<std::ptrdiff_t>((n_ + kRowBlock - 1) / kRowBlock);
#pragma omp parallel for schedule(static) if (n_ * m * count > 262144)
  for (std::ptrdiff_t b = 0; b < nblocks; ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kRowBlock;
    const std::size_t hi = std::min(n_, lo + kRowBlock);
    for (std::size_t i = 0; i < count; ++i) {
      double* out = dst.data() + i * n_;
      for (std::size_t j = 0; j < m; ++j) {
        const double yji = y(j, i);
        const double* v = column(j);
        for (std::size_t r = lo; r < hi; ++r) {
          out[r] += yji * v[r];
        }
      }
    }
  }
}

void RciSession::restart(const std::vector<double>& theta, const DenseMatrix& y,
                         double beta, bool fresh_direction) {
  const std::size_t m = cfg_.m;
  // A verification restart keeps only the converged wanted vectors, whose
  // couplings to the discarded residual are below tolerance.
  const std::size_t keep = fresh_direction ? cfg_.k : retained_count(cfg_.k, m);

  std::vector<double> kept;
  ritz_vectors(y, keep, kept);
  std::copy(kept.begin(), kept.end(), basis_.begin());

  h_ = DenseMatrix(m, m);
  for (std::size_t i = 0; i < keep; ++i) {
    h_(i, i) = theta[i];
  }

  std::vector<double> v(n_);
  if (fresh_direction || beta == 0.0) {
    if (!fresh_direction) {
      ++breakdowns_;
    }
    random_orthogonal(v, keep);
  } else {
    for (std::size_t r = 0; r < n_; ++r) {
      v[r] = resid_[r] / beta;
    }
    for (std::size_t i = 0; i < keep; ++i) {
      const double s = beta * y(m - 1, i);
      h_(keep, i) = s;
      h_(i, keep) = s;
    }
  }
  std::copy(v.begin(), v.end(), column(keep));
  size_ = keep + 1;
  in_ = std::move(v);
}

void RciSession::begin_residuals(const std::vector<double>& theta, const DenseMatrix& y) {
  const std::size_t k = cfg_.k;
  values_.assign(theta.begin(), theta.begin() + static_cast<std::ptrdiff_t>(k));
  ritz_vectors(y, k, vectors_);
  for (std::size_t i = 0; i < k; ++i) {
    std::span<double> x(vectors_.data() + i * n_, n_);
    const double nx = norm2(x);
    // Sign convention: the largest-magnitude entry (lowest index on ties) is positive.
    std::size_t arg = 0;
    for (std::size_t r = 1; r < n_; ++r) {
      if (std::abs(x[r]) > std::abs(x[arg])) {
        arg = r;
      }
    }
    const double s = x[arg] < 0.0 ? -1.0 / nx : 1.0 / nx;
    for (auto& e : x) {
      e *= s;
    }
  }
  residuals_.assign(k, 0.0);
  residual_index_ = 0;
  phase_ = Phase::Residuals;
  std::copy(vectors_.begin(), vectors_.begin() + static_cast<std::ptrdiff_t>(n_), in_.begin());
}

RciState RciSession::advance_residual() {
  const std::size_t i = residual_index_;
  const double* x = vectors_.data() + i * n_;
  double sq = 0.0;
  for (std::size_t r = 0; r < n_; ++r) {
    const double d = out_[r] - values_[i] * x[r];
    sq += d * d;
  }
  residuals_[i] = std::sqrt(sq);
  if (++residual_index_ == cfg_.k) {
    state_ = RciState::Converged;
    return state_;
  }
  const double* next = vectors_.data() + residual_index_ * n_;
  std::copy(next, next + n_, in_.begin());
  return state_;
}

EigenBasis RciSession::extract() const {
  if (state_ != RciState::Converged) {
    throw Error(ErrorCode::NotConverged,
                state_ == RciState::Failed ? "eigensolver failed: " + failure_message_
                                           : std::string("eigensolver has not converged"));
  }
  EigenBasis out;
  out.values = values_;
  out.residuals = residuals_;
  out.restarts = restarts_;
  out.matvecs = matvecs_;
  out.vectors = DenseMatrix(n_, cfg_.k);
  for (std::size_t i = 0; i < cfg_.k; ++i) {
    for (std::size_t r = 0; r < n_; ++r) {
      out.vectors(r, i) = vectors_[i * n_ + r];
    }
  }
  return out;
}

EigenBasis eigensolve(const CsrMatrix& a, const LanczosConfig& cfg) {
  if (a.n_rows != a.n_cols) {
    throw Error(ErrorCode::NotSquare, "eigensolve requires a square matrix");
  }
  const std::size_t n = a.n_rows;
  const auto resolved = resolve_config(n, cfg);

  double fro = 0.0;
  for (double v : a.vals) {
    fro += v * v;
  }
  fro = std::sqrt(fro);
  Rng probe(cfg.seed, 0x5359u, 0x4d4du);
  std::vector<double> x(n);
  std::vector<double> y(n);
  for (int trial = 0; trial < 3; ++trial) {
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = probe.uniform() - 0.5;
      y[i] = probe.uniform() - 0.5;
    }
    const auto ax = spmv(a, x);
    const auto ay = spmv(a, y);
    const double xay = dot(x.data(), ay.data(), n);
    const double yax = dot(y.data(), ax.data(), n);
    if (std::abs(xay - yax) > 1e-10 * fro * norm2(x) * norm2(y)) {
      throw Error(ErrorCode::NotSymmetric, "eigensolve requires a symmetric matrix");
    }
  }

  RciSession session(n, resolved);
  while (session.state() == RciState::NeedMatvec) {
    spmv(a, session.in_slot(), session.out_slot());
    session.advance();
  }
  if (session.state() == RciState::Failed) {
    throw ConvergenceError(session.failure_code(), session.failure_message(),
                           session.residual_estimates());
  }
  return session.extract();
}

} // namespace specclust
