#pragma once

// Dense two-phase primal simplex for
//
//     minimize   sum(t)
//     subject to M t = b,  t >= 0
//
// plus a vertex-enumeration reference solver for small instances.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "daqc/errors.hpp"

namespace daqc::lp {

template <typename Scalar = double>
struct LinearProgram {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Matrix constraints;  // rows = equations, cols = variables
  Vector rhs;

  Eigen::Index rows() const { return constraints.rows(); }
  Eigen::Index cols() const { return constraints.cols(); }
};

enum class LpStatus { Optimal, Infeasible };

template <typename Scalar = double>
struct LpSolution {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> times;
  Scalar objective_value = 0;
  LpStatus status = LpStatus::Infeasible;
  std::size_t pivots = 0;

  bool optimal() const { return status == LpStatus::Optimal; }
};

struct SimplexOptions {
  double feasibility_tol = 1e-9;
  double pivot_tol = 1e-10;
  std::size_t max_pivots = 1'000'000;
};

namespace detail {

template <typename Scalar>
void validate(const LinearProgram<Scalar>& lp) {
  if (lp.rows() < 1) throw ValidationError("linear program needs at least one row");
  if (lp.rhs.size() != lp.rows()) throw ValidationError("rhs length does not match row count");
  if (!lp.constraints.allFinite() || !lp.rhs.allFinite())
    throw ValidationError("linear program has non-finite entries");
}

template <typename Scalar>
Scalar scale_of(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& b) {
  return std::max<Scalar>(Scalar(1), b.size() ? b.cwiseAbs().maxCoeff() : Scalar(0));
}

/// Simplex tableau over [M | I] with artificial columns n..n+m-1.
template <typename Scalar>
class Tableau {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Tableau(const LinearProgram<Scalar>& lp, const SimplexOptions& opt)
      : m_(lp.rows()), n_(lp.cols()), opt_(opt) {
    a_ = Matrix::Zero(m_, n_ + m_);
    b_ = lp.rhs;
    for (Eigen::Index i = 0; i < m_; ++i) {
      const Scalar sign = b_(i) < 0 ? Scalar(-1) : Scalar(1);
      a_.row(i).head(n_) = sign * lp.constraints.row(i);
      a_(i, n_ + i) = Scalar(1);
      b_(i) *= sign;
    }
    basis_.resize(static_cast<std::size_t>(m_));
    for (Eigen::Index i = 0; i < m_; ++i) basis_[static_cast<std::size_t>(i)] = n_ + i;
    enterable_.assign(static_cast<std::size_t>(n_ + m_), true);
  }

  /// Minimizes cost^T x from the current basis with Bland's rule.
  void run(const Vector& cost) {
    const Scalar pivot_tol(opt_.pivot_tol);
    std::vector<bool> in_basis(static_cast<std::size_t>(n_ + m_), false);
    for (;;) {
      std::fill(in_basis.begin(), in_basis.end(), false);
      Vector cb(m_);
      for (Eigen::Index i = 0; i < m_; ++i) {
        const Eigen::Index bi = basis_[static_cast<std::size_t>(i)];
        in_basis[static_cast<std::size_t>(bi)] = true;
        cb(i) = cost(bi);
      }

      Eigen::Index entering = -1;
      for (Eigen::Index j = 0; j < n_ + m_; ++j) {
        if (in_basis[static_cast<std::size_t>(j)] || !enterable_[static_cast<std::size_t>(j)]) continue;
        const Scalar reduced = cost(j) - cb.dot(a_.col(j));
        if (reduced < -pivot_tol) {
          entering = j;
          break;
        }
      }
      if (entering < 0) return;

      Eigen::Index leaving = -1;
      Scalar best_ratio = std::numeric_limits<Scalar>::infinity();
      for (Eigen::Index i = 0; i < m_; ++i) {
        const Scalar aij = a_(i, entering);
        if (aij <= pivot_tol) continue;
        const Scalar ratio = std::max(Scalar(0), b_(i)) / aij;
        if (leaving < 0 || ratio < best_ratio - pivot_tol) {
          best_ratio = ratio;
          leaving = i;
        } else if (std::abs(ratio - best_ratio) <= pivot_tol &&
                   basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leaving)]) {
          leaving = i;
        }
      }
      if (leaving < 0) throw ConsistencyError("simplex: unbounded direction with nonnegative costs");
      pivot(leaving, entering);
    }
  }

  void pivot(Eigen::Index row, Eigen::Index col) {
    if (++pivots_ > opt_.max_pivots) {
      throw SolverStallError("simplex exceeded " + std::to_string(opt_.max_pivots) + " pivots");
    }
    const Scalar p = a_(row, col);
    a_.row(row) /= p;
    b_(row) /= p;
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (i == row) continue;
      const Scalar f = a_(i, col);
      if (f == Scalar(0)) continue;
      a_.row(i) -= f * a_.row(row);
      b_(i) -= f * b_(row);
    }
    basis_[static_cast<std::size_t>(row)] = col;
  }

  /// Pivots basic artificials out wherever an original column allows it.
  /// Rows that stay artificial are linearly dependent on the others.
  void expel_artificials() {
    const Scalar pivot_tol(opt_.pivot_tol);
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (basis_[static_cast<std::size_t>(i)] < n_) continue;
      Eigen::Index best = -1;
      Scalar best_mag(0);
      for (Eigen::Index j = 0; j < n_; ++j) {
        if (is_basic(j)) continue;
        const Scalar mag = std::abs(a_(i, j));
        if (mag > pivot_tol && mag > best_mag) {
          best = j;
          best_mag = mag;
        }
      }
      if (best >= 0) pivot(i, best);
    }
    for (Eigen::Index j = n_; j < n_ + m_; ++j) enterable_[static_cast<std::size_t>(j)] = false;
  }

  Scalar artificial_sum() const {
    Scalar s(0);
    for (Eigen::Index i = 0; i < m_; ++i)
      if (basis_[static_cast<std::size_t>(i)] >= n_) s += std::abs(b_(i));
    return s;
  }

  bool is_basic(Eigen::Index j) const {
    return std::find(basis_.begin(), basis_.end(), j) != basis_.end();
  }

  const std::vector<Eigen::Index>& basis() const { return basis_; }
  const Vector& rhs() const { return b_; }
  std::size_t pivots() const { return pivots_; }

 private:
  Eigen::Index m_;
  Eigen::Index n_;
  SimplexOptions opt_;
  Matrix a_;
  Vector b_;
  std::vector<Eigen::Index> basis_;
  std::vector<bool> enterable_;
  std::size_t pivots_ = 0;
};

}  // namespace detail

/// Two-phase primal simplex with Bland's anti-cycling rule.
///
/// The basic solution of the final basis is re-solved against the original
/// data, so the returned residual is at rounding level rather than carrying
/// the accumulated tableau error. Negative roundoff in `times` is clamped to 0.
template <typename Scalar>
LpSolution<Scalar> solve(const LinearProgram<Scalar>& lp, const SimplexOptions& opt = {}) {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  detail::validate(lp);
  const Eigen::Index m = lp.rows();
  const Eigen::Index n = lp.cols();
  const Scalar scale = detail::scale_of<Scalar>(lp.rhs);
  const Scalar tol = Scalar(opt.feasibility_tol) * scale;

  detail::Tableau<Scalar> tab(lp, opt);
  Vector phase1 = Vector::Zero(n + m);
  phase1.tail(m).setOnes();
  tab.run(phase1);

  LpSolution<Scalar> sol;
  if (tab.artificial_sum() > tol) {
    sol.status = LpStatus::Infeasible;
    sol.pivots = tab.pivots();
    return sol;
  }

  tab.expel_artificials();
  Vector phase2 = Vector::Zero(n + m);
  phase2.head(n).setOnes();
  tab.run(phase2);

  std::vector<Eigen::Index> cols;
  Vector times = Vector::Zero(n);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index j = tab.basis()[static_cast<std::size_t>(i)];
    if (j < n) {
      cols.push_back(j);
      times(j) = tab.rhs()(i);
    }
  }

  if (!cols.empty()) {
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> basic(m, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c)
      basic.col(static_cast<Eigen::Index>(c)) = lp.constraints.col(cols[c]);
    const Vector refined = basic.colPivHouseholderQr().solve(lp.rhs);
    if (refined.allFinite() && refined.minCoeff() >= -tol) {
      Vector candidate = Vector::Zero(n);
      for (std::size_t c = 0; c < cols.size(); ++c) candidate(cols[c]) = refined(static_cast<Eigen::Index>(c));
      const Scalar old_res = (lp.constraints * times - lp.rhs).cwiseAbs().maxCoeff();
      const Scalar new_res = (lp.constraints * candidate - lp.rhs).cwiseAbs().maxCoeff();
      if (new_res <= old_res) times = candidate;
    }
  }
  times = times.cwiseMax(Scalar(0));

  const Scalar residual = (lp.constraints * times - lp.rhs).cwiseAbs().maxCoeff();
  if (residual > tol) {
    throw ConsistencyError("simplex returned a solution with residual " + std::to_string(double(residual)));
  }
  sol.status = LpStatus::Optimal;
  sol.times = std::move(times);
  sol.objective_value = sol.times.sum();
  sol.pivots = tab.pivots();
  return sol;
}

/// Reference optimum by enumerating every basic feasible solution.
///
/// Refuses instances larger than 6 rows or 12 columns. Intended as a test
/// oracle: it shares no code path with `solve`.
template <typename Scalar>
LpSolution<Scalar> brute_force_optimum(const LinearProgram<Scalar>& lp, double tol = 1e-9) {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  detail::validate(lp);
  if (lp.rows() > 6 || lp.cols() > 12) {
    throw ValidationError("brute-force oracle refuses instances above 6x12");
  }
  const Eigen::Index n = lp.cols();
  const Scalar eps = Scalar(tol) * detail::scale_of<Scalar>(lp.rhs);

  LpSolution<Scalar> best;
  best.status = LpStatus::Infeasible;

  Eigen::FullPivLU<Matrix> full_lu(lp.constraints);
  const Eigen::Index rank = full_lu.rank();
  if (rank == 0) {
    if (lp.rhs.cwiseAbs().maxCoeff() <= eps) {
      best.status = LpStatus::Optimal;
      best.times = Vector::Zero(n);
    }
    return best;
  }

  // Enumerate column subsets of size `rank` via a selection mask.
  std::vector<bool> mask(static_cast<std::size_t>(n), false);
  std::fill(mask.begin(), mask.begin() + rank, true);
  do {
    std::vector<Eigen::Index> cols;
    for (Eigen::Index j = 0; j < n; ++j)
      if (mask[static_cast<std::size_t>(j)]) cols.push_back(j);
    Matrix sub(lp.rows(), rank);
    for (Eigen::Index c = 0; c < rank; ++c) sub.col(c) = lp.constraints.col(cols[static_cast<std::size_t>(c)]);
    Eigen::FullPivLU<Matrix> lu(sub);
    if (lu.rank() < rank) continue;
    const Vector x = sub.fullPivHouseholderQr().solve(lp.rhs);
    if ((sub * x - lp.rhs).cwiseAbs().maxCoeff() > eps) continue;
    if (x.minCoeff() < -eps) continue;
    const Scalar obj = x.cwiseMax(Scalar(0)).sum();
    if (best.status == LpStatus::Infeasible || obj < best.objective_value) {
      best.status = LpStatus::Optimal;
      best.objective_value = obj;
      best.times = Vector::Zero(n);
      for (Eigen::Index c = 0; c < rank; ++c) best.times(cols[static_cast<std::size_t>(c)]) = std::max(Scalar(0), x(c));
    }
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return best;
}

/// Debug dump: `rows cols`, the matrix rows, then `rhs` and its entries.
template <typename Scalar>
void write_lp_debug(std::ostream& out, const LinearProgram<Scalar>& lp) {
  const auto prec = out.precision(17);
  out << lp.rows() << ' ' << lp.cols() << '\n';
  for (Eigen::Index i = 0; i < lp.rows(); ++i) {
    for (Eigen::Index j = 0; j < lp.cols(); ++j) out << (j ? " " : "") << double(lp.constraints(i, j));
    out << '\n';
  }
  out << "rhs";
  for (Eigen::Index i = 0; i < lp.rhs.size(); ++i) out << ' ' << double(lp.rhs(i));
  out << '\n';
  out.precision(prec);
}

}  // namespace daqc::lp
