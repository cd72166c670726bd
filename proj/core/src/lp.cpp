#include "coarselab/lp.hpp"

#include "coarselab/error.hpp"

namespace coarselab::lp {
namespace {

template <class T>
class Tableau {
 public:
  using A = Arith<T>;

  explicit Tableau(const Problem<T>& p) : n_(p.vars) {
    const std::size_t m = p.rows.size();
    std::size_t extra = 0;
    for (const auto& r : p.rows) extra += r.sense == Sense::GreaterEq ? 2 : 1;
    cols_ = n_ + extra;
    t_.assign(m, std::vector<T>(cols_ + 1, T(0)));
    basis_.assign(m, 0);
    artificial_.assign(cols_, 0);
    std::size_t next = n_;
    for (std::size_t i = 0; i < m; ++i) {
      const auto& r = p.rows[i];
      bool flip = A::negative(r.rhs);
      Sense s = r.sense;
      if (flip) s = s == Sense::LessEq ? Sense::GreaterEq : s == Sense::GreaterEq ? Sense::LessEq : s;
      for (const auto& [j, v] : r.terms) {
        if (j >= n_) fail_precondition("lp: row references an unknown variable");
        t_[i][j] += flip ? T(-v) : v;
      }
      t_[i][cols_] = flip ? T(-r.rhs) : r.rhs;
      if (s == Sense::LessEq) {
        t_[i][next] = T(1);
        basis_[i] = next++;
      } else if (s == Sense::GreaterEq) {
        t_[i][next++] = T(-1);
        t_[i][next] = T(1);
        artificial_[next] = 1;
        basis_[i] = next++;
      } else {
        t_[i][next] = T(1);
        artificial_[next] = 1;
        basis_[i] = next++;
      }
    }
  }

  Solution<T> run(const std::vector<T>& cost) {
    Solution<T> sol;
    // Phase 1: minimize the sum of artificials.
    bool any_art = false;
    obj_.assign(cols_ + 1, T(0));
    for (std::size_t i = 0; i < t_.size(); ++i) {
      if (!artificial_[basis_[i]]) continue;
      any_art = true;
      for (std::size_t j = 0; j <= cols_; ++j)
        if (!artificial_[j]) obj_[j] -= t_[i][j];
    }
    if (any_art) {
      if (!iterate(sol.pivots)) fail_invariant("lp: phase one unbounded");
      if (A::negative(obj_[cols_])) {
        sol.status = Status::Infeasible;
        return sol;
      }
      drive_out_artificials(sol.pivots);
    }
    // Phase 2.
    obj_.assign(cols_ + 1, T(0));
    for (std::size_t j = 0; j < n_; ++j) obj_[j] = cost[j];
    for (std::size_t i = 0; i < t_.size(); ++i) {
      const std::size_t b = basis_[i];
      if (b >= n_ || A::zero(cost[b])) continue;
      const T cb = cost[b];
      for (std::size_t j = 0; j <= cols_; ++j)
        if (!A::zero(t_[i][j])) obj_[j] -= cb * t_[i][j];
    }
    for (std::size_t j = 0; j < cols_; ++j) if (artificial_[j]) obj_[j] = T(0);
    if (!iterate(sol.pivots)) {
      sol.status = Status::Unbounded;
      return sol;
    }
    sol.status = Status::Optimal;
    sol.x.assign(n_, T(0));
    for (std::size_t i = 0; i < t_.size(); ++i)
      if (basis_[i] < n_) sol.x[basis_[i]] = t_[i][cols_];
    sol.objective = T(-obj_[cols_]);
    return sol;
  }

 private:
  // Returns false when unbounded.
  bool iterate(std::size_t& pivots) {
    bool bland = false;
    std::size_t degenerate_run = 0;
    for (;;) {
      std::size_t enter = cols_;
      T best(0);
      for (std::size_t j = 0; j < cols_; ++j) {
        if (artificial_[j] || !A::negative(obj_[j])) continue;
        if (bland) {
          enter = j;
          break;
        }
        if (enter == cols_ || obj_[j] < best) {
          enter = j;
          best = obj_[j];
        }
      }
      if (enter == cols_) return true;
      std::size_t leave = t_.size();
      T best_ratio(0);
      for (std::size_t i = 0; i < t_.size(); ++i) {
        if (!A::positive(t_[i][enter])) continue;
        T ratio = t_[i][cols_] / t_[i][enter];
        if (leave == t_.size() || ratio < best_ratio ||
            (!(best_ratio < ratio) && basis_[i] < basis_[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
      if (leave == t_.size()) return false;
      if (A::zero(best_ratio)) {
        if (++degenerate_run > 50) bland = true;
      } else {
        degenerate_run = 0;
      }
      pivot(leave, enter);
      ++pivots;
    }
  }

  void pivot(std::size_t r, std::size_t c) {
    auto& prow = t_[r];
    const T inv = T(1) / prow[c];
    std::vector<std::size_t> nz;
    for (std::size_t j = 0; j <= cols_; ++j) {
      if (A::zero(prow[j])) {
        prow[j] = T(0);
        continue;
      }
      prow[j] *= inv;
      nz.push_back(j);
    }
    prow[c] = T(1);
    auto eliminate = [&](std::vector<T>& row) {
      if (A::zero(row[c])) {
        row[c] = T(0);
        return;
      }
      const T f = row[c];
      for (std::size_t j : nz) row[j] -= f * prow[j];
      row[c] = T(0);
    };
    for (std::size_t i = 0; i < t_.size(); ++i)
      if (i != r) eliminate(t_[i]);
    eliminate(obj_);
    basis_[r] = c;
  }

  void drive_out_artificials(std::size_t& pivots) {
    for (std::size_t i = 0; i < t_.size();) {
      if (!artificial_[basis_[i]]) {
        ++i;
        continue;
      }
      std::size_t col = cols_;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (!artificial_[j] && !A::zero(t_[i][j])) {
          col = j;
          break;
        }
      }
      if (col == cols_) {
        // Redundant constraint.
        t_.erase(t_.begin() + static_cast<std::ptrdiff_t>(i));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
        continue;
      }
      pivot(i, col);
      ++pivots;
      ++i;
    }
  }

  std::size_t n_;
  std::size_t cols_ = 0;
  std::vector<std::vector<T>> t_;
  std::vector<T> obj_;
  std::vector<std::size_t> basis_;
  std::vector<char> artificial_;
};

}  // namespace

template <class T>
Solution<T> solve(const Problem<T>& problem) {
  if (problem.cost.size() != problem.vars) fail_precondition("lp: cost vector size mismatch");
  Tableau<T> tab(problem);
  return tab.run(problem.cost);
}

template Solution<double> solve(const Problem<double>&);
template Solution<Rational> solve(const Problem<Rational>&);

}  // namespace coarselab::lp
