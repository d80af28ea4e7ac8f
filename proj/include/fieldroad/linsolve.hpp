#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fieldroad {

/// Row-compressed sparse matrix. All operators assembled in this project are
/// SPD M-matrices; check_m_matrix() is run at assembly time so the discrete
/// maximum principle the monotone iteration leans on cannot silently break.
struct SparseOperator {
  int n = 0;
  std::vector<int> row_ptr;   // size n+1
  std::vector<int> cols;
  std::vector<double> vals;
  bool symmetric = false;

  void mul(std::span<const double> x, std::span<double> y) const;
  double diag(int row) const;
};

/// Incremental row-wise builder; rows must be appended in order.
struct SparseBuilder {
  explicit SparseBuilder(int n);
  void add(int row, int col, double val);
  SparseOperator finish(bool symmetric);

 private:
  int n_ = 0;
  int current_row_ = -1;
  std::vector<int> row_ptr_;
  std::vector<int> cols_;
  std::vector<double> vals_;
};

struct SolveOptions {
  double rel_tol = 1e-12;
  int max_iter = 0;  // 0 means 20 * dimension
  enum class Precond { None, Jacobi } precond = Precond::Jacobi;
};

class SolveFailure : public std::runtime_error {
 public:
  SolveFailure(const std::string& msg, std::vector<double> history)
      : std::runtime_error(msg), residual_history(std::move(history)) {}
  std::vector<double> residual_history;
};

/// Throws if the matrix is not an M-matrix: positive diagonal, nonpositive
/// off-diagonals, weakly dominant rows with at least one strictly dominant.
void check_m_matrix(const SparseOperator& A);

/// Throws if any A(i,j) and A(j,i) differ by more than rel_tol relatively.
void check_symmetric(const SparseOperator& A, double rel_tol = 1e-14);

/// Preconditioned conjugate gradients with fixed-order reductions; the
/// returned x satisfies ||Ax - b||_2 <= rel_tol * ||b||_2 (verified against
/// the explicitly recomputed residual, not the recurrence).
std::vector<double> solve_spd(const SparseOperator& A, std::span<const double> b,
                              const SolveOptions& opts = {});

/// Thomas elimination for diagonally dominant tridiagonal systems.
/// lower/upper have size n-1. Throws SolveFailure on a vanishing pivot.
std::vector<double> solve_tridiag(std::span<const double> lower,
                                  std::span<const double> diag,
                                  std::span<const double> upper,
                                  std::span<const double> b);

}  // namespace fieldroad
