#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

namespace coarselab::lp {

using Rational = mpq_class;

enum class Sense { LessEq, GreaterEq, Equal };
enum class Status { Optimal, Infeasible, Unbounded };

template <class T>
struct Row {
  std::vector<std::pair<std::size_t, T>> terms;
  Sense sense = Sense::LessEq;
  T rhs{0};
};

/// minimize cost . x  subject to rows, x >= 0.
template <class T>
struct Problem {
  std::size_t vars = 0;
  std::vector<T> cost;
  std::vector<Row<T>> rows;

  std::size_t add_var(T c = T(0)) {
    cost.push_back(c);
    return vars++;
  }
  void add_row(std::vector<std::pair<std::size_t, T>> terms, Sense sense, T rhs) {
    rows.push_back(Row<T>{std::move(terms), sense, std::move(rhs)});
  }
};

template <class T>
struct Solution {
  Status status = Status::Infeasible;
  T objective{0};
  std::vector<T> x;
  std::size_t pivots = 0;
};

template <class T>
struct Arith;

template <>
struct Arith<double> {
  static constexpr double eps = 1e-9;
  static bool positive(double v) { return v > eps; }
  static bool negative(double v) { return v < -eps; }
  static bool zero(double v) { return std::abs(v) <= eps; }
};

template <>
struct Arith<Rational> {
  static bool positive(const Rational& v) { return sgn(v) > 0; }
  static bool negative(const Rational& v) { return sgn(v) < 0; }
  static bool zero(const Rational& v) { return sgn(v) == 0; }
};

/// Dense two-phase tableau simplex. Uses the most-negative reduced cost and
/// switches permanently to Bland's rule after a run of degenerate pivots, so
/// it always terminates. Exact when T is Rational.
template <class T>
Solution<T> solve(const Problem<T>& problem);

extern template Solution<double> solve(const Problem<double>&);
extern template Solution<Rational> solve(const Problem<Rational>&);

}  // namespace coarselab::lp
