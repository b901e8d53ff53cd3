#pragma once

#include <limits>
#include <memory>
#include <vector>

#include "fdflow/assembly.hpp"
#include "fdflow/sparse.hpp"

namespace fdflow {

struct SaddleSolveReport {
  double rel_residual = std::numeric_limits<double>::quiet_NaN();
  int refine_iterations = 0;
  bool factorization_ok = false;
  bool converged = false;
};

/// Sparse LU (fill-reducing ordering) with Ruiz equilibration and iterative
/// refinement on the original operator. The pattern is fixed at construction;
/// update_values re-factorizes numerically on the same symbolic analysis.
class DirectSolver {
 public:
  explicit DirectSolver(const CsrMatrix& a);
  ~DirectSolver();
  DirectSolver(DirectSolver&&) noexcept;
  DirectSolver& operator=(DirectSolver&&) noexcept;

  bool factorization_ok() const;

  /// Refines until ||b - A x||_2 / ||b||_2 <= tol (or stagnation); x is
  /// overwritten. The report records the verified relative residual.
  SaddleSolveReport solve(const std::vector<double>& b, std::vector<double>& x,
                          double tol) const;

  /// New values on the identical pattern; returns factorization success.
  bool update_values(const CsrMatrix& a);

  /// Order-of-magnitude 1-norm condition estimate (Hager); +inf on breakdown.
  double condition_estimate() const;

  const CsrMatrix& matrix() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// The per-step saddle-point operator
///   [ A    B^T  0 ] [u]   [f]
///   [ B    0    e ] [p] = [0]
///   [ 0    e^T  0 ] [l]   [0]
/// with A the combined scalar velocity operator expanded to both components,
/// B the divergence coupling, and e the pressure mean-zero border. Dirichlet
/// rows/columns of the box boundary are reduced to the identity.
class SaddleSystem {
 public:
  SaddleSystem(const VelocitySpace& vs, const PressureSpace& ps,
               const ScalarPattern& sp);

  /// Installs combined scalar velocity-block values (raw; Dirichlet applied
  /// here) and re-factorizes. Returns factorization success.
  bool set_velocity_block(const std::vector<double>& a_scalar);

  struct Result {
    std::vector<double> u, p;
    double lambda = 0.0;
    SaddleSolveReport report;
    bool ok = false;
  };

  /// rhs_vel is the raw velocity load; boundary entries are zeroed. The
  /// returned pressure is shifted to exact zero mean and the reported
  /// residual is re-verified after the shift.
  Result solve(const std::vector<double>& rhs_vel, double tol) const;

  double condition_estimate() const;

  const CsrMatrix& full_matrix() const { return full_; }
  std::vector<double> build_full_rhs(const std::vector<double>& rhs_vel) const;
  Index n_total() const { return full_.rows; }

 private:
  const VelocitySpace& vs_;
  const PressureSpace& ps_;
  const ScalarPattern& sp_;
  CsrMatrix full_;
  std::array<std::vector<std::int32_t>, 2> scatter_;
  std::vector<double> e_;
  std::vector<double> scalar_bc_;
  std::unique_ptr<DirectSolver> solver_;
};

}  // namespace fdflow
