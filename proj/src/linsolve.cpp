#include "fieldroad/linsolve.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fieldroad {

void SparseOperator::mul(std::span<const double> x, std::span<double> y) const {
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s += vals[k] * x[cols[k]];
    y[i] = s;
  }
}

double SparseOperator::diag(int row) const {
  for (int k = row_ptr[row]; k < row_ptr[row + 1]; ++k)
    if (cols[k] == row) return vals[k];
  return 0.0;
}

SparseBuilder::SparseBuilder(int n) : n_(n) { row_ptr_.assign(1, 0); }

void SparseBuilder::add(int row, int col, double val) {
  if (row < current_row_)
    throw std::logic_error("SparseBuilder: rows must be appended in order");
  while (current_row_ < row) {
    ++current_row_;
    if (current_row_ > 0 && static_cast<int>(row_ptr_.size()) <= current_row_)
      row_ptr_.push_back(static_cast<int>(cols_.size()));
  }
  if (static_cast<int>(row_ptr_.size()) <= row)
    row_ptr_.resize(row + 1, static_cast<int>(cols_.size()));
  cols_.push_back(col);
  vals_.push_back(val);
}

SparseOperator SparseBuilder::finish(bool symmetric) {
  row_ptr_.resize(n_ + 1, static_cast<int>(cols_.size()));
  // ensure row starts are monotone for rows that were skipped entirely
  for (int i = 1; i <= n_; ++i)
    row_ptr_[i] = std::max(row_ptr_[i], row_ptr_[i - 1]);
  SparseOperator A;
  A.n = n_;
  A.row_ptr = std::move(row_ptr_);
  A.cols = std::move(cols_);
  A.vals = std::move(vals_);
  A.symmetric = symmetric;
  return A;
}

void check_m_matrix(const SparseOperator& A) {
  bool any_strict = false;
  for (int i = 0; i < A.n; ++i) {
    double d = 0.0, off = 0.0;
    for (int k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k) {
      if (A.cols[k] == i) {
        d = A.vals[k];
      } else {
        if (A.vals[k] > 0.0) {
          std::ostringstream os;
          os << "M-matrix violation: positive off-diagonal A(" << i << ","
             << A.cols[k] << ") = " << A.vals[k];
          throw std::runtime_error(os.str());
        }
        off += -A.vals[k];
      }
    }
    if (!(d > 0.0)) {
      std::ostringstream os;
      os << "M-matrix violation: nonpositive diagonal at row " << i;
      throw std::runtime_error(os.str());
    }
    if (d < off * (1.0 - 1e-12)) {
      std::ostringstream os;
      os << "M-matrix violation: row " << i << " not diagonally dominant ("
         << d << " < " << off << ")";
      throw std::runtime_error(os.str());
    }
    if (d > off * (1.0 + 1e-12)) any_strict = true;
  }
  if (!any_strict)
    throw std::runtime_error("M-matrix violation: no strictly dominant row");
}

void check_symmetric(const SparseOperator& A, double rel_tol) {
  for (int i = 0; i < A.n; ++i) {
    for (int k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k) {
      const int j = A.cols[k];
      if (j <= i) continue;
      double aji = 0.0;
      bool found = false;
      for (int kk = A.row_ptr[j]; kk < A.row_ptr[j + 1]; ++kk) {
        if (A.cols[kk] == i) {
          aji = A.vals[kk];
          found = true;
          break;
        }
      }
      const double scale = std::max(std::abs(A.vals[k]), std::abs(aji));
      if (!found || std::abs(A.vals[k] - aji) > rel_tol * std::max(scale, 1.0)) {
        std::ostringstream os;
        os << "symmetry violation at (" << i << "," << j << ")";
        throw std::runtime_error(os.str());
      }
    }
  }
}

namespace {
// Sequential dot product; the fixed summation order is what makes repeated
// runs bit-identical.
double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }
}  // namespace

std::vector<double> solve_spd(const SparseOperator& A, std::span<const double> b,
                              const SolveOptions& opts) {
  const int n = A.n;
  if (static_cast<int>(b.size()) != n)
    throw std::invalid_argument("solve_spd: rhs size mismatch");
  const double bnorm = norm2(b);
  std::vector<double> x(n, 0.0);
  if (bnorm == 0.0) return x;

  std::vector<double> inv_diag(n, 1.0);
  if (opts.precond == SolveOptions::Precond::Jacobi) {
    for (int i = 0; i < n; ++i) {
      const double d = A.diag(i);
      if (!(d > 0.0)) throw std::runtime_error("solve_spd: nonpositive diagonal");
      inv_diag[i] = 1.0 / d;
    }
  }

  const int max_iter = opts.max_iter > 0 ? opts.max_iter : 20 * n;
  const double target = opts.rel_tol * bnorm;

  std::vector<double> r(b.begin(), b.end());
  std::vector<double> z(n), p(n), Ap(n);
  for (int i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
  p = z;
  double rz = dot(r, z);
  std::vector<double> history;
  history.push_back(norm2(r));

  for (int it = 0; it < max_iter; ++it) {
    A.mul(p, Ap);
    const double pAp = dot(p, Ap);
    if (!(pAp > 0.0))
      throw SolveFailure("solve_spd: matrix not positive definite", history);
    const double alpha = rz / pAp;
    for (int i = 0; i < n; ++i) x[i] += alpha * p[i];
    for (int i = 0; i < n; ++i) r[i] -= alpha * Ap[i];
    const double rnorm = norm2(r);
    history.push_back(rnorm);
    if (rnorm <= target) {
      // certify against the true residual; recurrence drift would hide here
      A.mul(x, Ap);
      double true_r = 0.0;
      for (int i = 0; i < n; ++i) {
        const double d = b[i] - Ap[i];
        true_r += d * d;
      }
      true_r = std::sqrt(true_r);
      if (true_r <= target) return x;
      for (int i = 0; i < n; ++i) r[i] = b[i] - Ap[i];
    }
    for (int i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  std::ostringstream os;
  os << "solve_spd: no convergence in " << max_iter
     << " iterations (last residual " << history.back() << ", target " << target
     << ")";
  throw SolveFailure(os.str(), history);
}

std::vector<double> solve_tridiag(std::span<const double> lower,
                                  std::span<const double> diag,
                                  std::span<const double> upper,
                                  std::span<const double> b) {
  const int n = static_cast<int>(diag.size());
  if (static_cast<int>(lower.size()) != n - 1 ||
      static_cast<int>(upper.size()) != n - 1 ||
      static_cast<int>(b.size()) != n)
    throw std::invalid_argument("solve_tridiag: size mismatch");
  std::vector<double> c(n - 1), d(n), x(n);
  if (diag[0] == 0.0) throw SolveFailure("solve_tridiag: zero pivot at row 0", {});
  if (n == 1) {
    x[0] = b[0] / diag[0];
    return x;
  }
  c[0] = upper[0] / diag[0];
  d[0] = b[0] / diag[0];
  for (int i = 1; i < n; ++i) {
    const double piv = diag[i] - lower[i - 1] * c[i - 1];
    if (piv == 0.0) {
      std::ostringstream os;
      os << "solve_tridiag: zero pivot at row " << i;
      throw SolveFailure(os.str(), {});
    }
    if (i < n - 1) c[i] = upper[i] / piv;
    d[i] = (b[i] - lower[i - 1] * d[i - 1]) / piv;
  }
  x[n - 1] = d[n - 1];
  for (int i = n - 2; i >= 0; --i) x[i] = d[i] - c[i] * x[i + 1];
  return x;
}

}  // namespace fieldroad
