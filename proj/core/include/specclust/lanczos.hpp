#pragma once

#include "specclust/dense.hpp"
#include "specclust/error.hpp"
#include "specclust/rng.hpp"
#include "specclust/sparse.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace specclust {

struct LanczosConfig {
  std::size_t k = 1;             ///< wanted eigenpairs (largest algebraic)
  std::size_t m = 0;             ///< subspace dimension; 0 selects the default
  double tol = 1e-8;             ///< relative residual tolerance
  std::size_t max_restarts = 300;
  std::uint64_t seed = 0;        ///< start-vector RNG seed
};

/// min(n, max(2k, k + 8)).
std::size_t default_subspace_dim(std::size_t n, std::size_t k);

/// Fills in a default m and checks 1 <= k < m <= n, tol > 0. Throws BadConfig.
LanczosConfig resolve_config(std::size_t n, LanczosConfig cfg);

/// Top-k eigenpairs, values descending, unit-norm vector columns.
struct EigenBasis {
  std::vector<double> values;
  DenseMatrix vectors; ///< n x k
  std::vector<double> residuals; ///< |A v_i - lambda_i v_i|_2, measured
  std::size_t restarts = 0;
  std::size_t matvecs = 0;
};

enum class RciState { NeedMatvec, Converged, Failed };

/// Reverse-communication driver for explicitly (thick) restarted Lanczos
/// with full reorthogonalization. The caller owns the operator:
///
///   RciSession s(n, cfg);
///   while (s.state() == RciState::NeedMatvec) {
///     apply(s.in_slot(), s.out_slot());
///     s.advance();
///   }
///   EigenBasis basis = s.extract();
///
/// The operator must be symmetric. Once the wanted Ritz pairs meet the
/// tolerance the session runs one verification restart seeded with a fresh
/// random direction, which uncovers eigenvalues missed because of exact
/// multiplicity; it then requests one more product per pair to measure true
/// residuals. Single owner; not safe for concurrent use.
class RciSession {
public:
  RciSession(std::size_t n, const LanczosConfig& cfg);

  RciState state() const noexcept { return state_; }

  /// Vector the caller must multiply while state() == NeedMatvec.
  std::span<const double> in_slot() const noexcept { return in_; }
  /// Destination for the product.
  std::span<double> out_slot() noexcept { return out_; }

  /// Consumes out_slot() and moves the iteration forward by one vector.
  RciState advance();

  /// Throws NotConverged unless state() == Converged.
  EigenBasis extract() const;

  const LanczosConfig& config() const noexcept { return cfg_; }
  std::size_t restarts() const noexcept { return restarts_; }
  std::size_t matvecs() const noexcept { return matvecs_; }
  std::size_t breakdowns() const noexcept { return breakdowns_; }

  /// Largest wanted-pair residual estimate at the end of each ordinary
  /// subspace fill (verification fills excluded).
  const std::vector<double>& residual_history() const noexcept { return history_; }

  /// Residual estimates of the wanted pairs at the last fill.
  const std::vector<double>& residual_estimates() const noexcept { return estimates_; }

  ErrorCode failure_code() const noexcept { return failure_code_; }
  const std::string& failure_message() const noexcept { return failure_message_; }

private:
  enum class Phase { Extend, Residuals };

  double* column(std::size_t j) { return basis_.data() + j * n_; }
  const double* column(std::size_t j) const { return basis_.data() + j * n_; }

  RciState advance_extend();
  RciState advance_residual();
  void end_of_fill(double beta);
  void restart(const std::vector<double>& theta, const DenseMatrix& y, double beta,
               bool fresh_direction);
  void begin_residuals(const std::vector<double>& theta, const DenseMatrix& y);
  void ritz_vectors(const DenseMatrix& y, std::size_t count, std::vector<double>& dst) const;
  std::vector<double> orthogonalize(std::vector<double>& w, std::size_t count) const;
  void random_orthogonal(std::vector<double>& w, std::size_t count);
  double breakdown_threshold() const noexcept;
  RciState fail(ErrorCode code, std::string message);

  std::size_t n_;
  LanczosConfig cfg_;
  Rng rng_;
  RciState state_ = RciState::NeedMatvec;
  Phase phase_ = Phase::Extend;

  std::vector<double> basis_; // m columns of length n
  std::size_t size_ = 0;      // basis vectors in use; the last one is in_
  DenseMatrix h_;             // projected operator V^T A V
  double anorm_ = 0.0;
  std::vector<double> in_;
  std::vector<double> out_;
  std::vector<double> resid_;

  bool verifying_ = false;
  std::vector<double> reference_;

  std::vector<double> values_;
  std::vector<double> vectors_; // k columns of length n
  std::vector<double> residuals_;
  std::size_t residual_index_ = 0;

  std::size_t restarts_ = 0;
  std::size_t matvecs_ = 0;
  std::size_t breakdowns_ = 0;
  std::vector<double> history_;
  std::vector<double> estimates_;
  ErrorCode failure_code_ = ErrorCode::NotConverged;
  std::string failure_message_;
};

/// Top-k eigenpairs of a symmetric CSR matrix, using spmv as the operator.
/// Throws NotSquare, NotSymmetric (randomized bilinear-form check), BadConfig,
/// or ConvergenceError on failure.
EigenBasis eigensolve(const CsrMatrix& a, const LanczosConfig& cfg);

} // namespace specclust
