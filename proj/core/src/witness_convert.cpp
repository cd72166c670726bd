#include "coarselab/error.hpp"
#include "coarselab/linalg.hpp"
#include "coarselab/witness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace coarselab {

std::vector<std::uint64_t> quantize(const std::vector<double>& p, std::uint64_t M) {
  require(M > 0, "quantization constant M must be positive");
  std::vector<std::uint64_t> out(p.size());
  std::vector<std::pair<double, std::size_t>> rem;
  std::uint64_t used = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    require(p[i] >= 0.0, "quantize: negative weight");
    const double scaled = p[i] * static_cast<double>(M);
    const double fl = std::floor(scaled + 1e-12);
    out[i] = static_cast<std::uint64_t>(fl);
    used += out[i];
    rem.emplace_back(std::max(0.0, scaled - fl), i);
  }
  require(used <= M, "quantize: weights sum above one");
  std::stable_sort(rem.begin(), rem.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t k = 0; used < M; ++k, ++used) {
    require(k < rem.size() && rem[k].first > 0.0, "quantize: weights sum below one");
    ++out[rem[k].second];
  }
  return out;
}

namespace {

double rel_slack(double bound) { return 1e-9 * std::max(1.0, std::abs(bound)); }

struct Ctx {
  const FiniteMetricSpace& space;
  const ConversionParams& params;
  Conversion& out;
};

void finish(Conversion& c, double out_quantity, double bound, double s_out, double s_bound) {
  c.out_quantity = out_quantity;
  c.bound = bound;
  c.bound_holds = !(out_quantity > bound + rel_slack(bound));
  c.S_bound = s_bound;
  c.S_holds = !(s_out > s_bound + rel_slack(s_bound));
}

// A-family -> normalized counting measure in l^1.
void a_to_lp(const AFamily& a, Ctx ctx) {
  const std::size_t n = ctx.space.size();
  LpWitness w;
  w.xi = Matrix::Zero(n, n);
  for (Index x = 0; x < n; ++x) {
    const double size = static_cast<double>(a.sets[x].size());
    for (const auto& [y, tag] : a.sets[x]) w.xi(x, y) += 1.0 / size;
  }
  w.params = a.params;
  w.params.p = 1.0;
  auto& c = ctx.out;
  c.route = "1->2";
  c.eps_in = c.input.eps_with_flagged;
  c.witness = w;
  c.space = ctx.space;
  c.output = measure_witness(c.witness, c.space, ctx.params.R);
  finish(c, c.output.eps_measured, 2.0 * c.eps_in, c.output.S_measured, c.input.S_measured);
}

// xi -> xi^{p/q} in l^q.
void lp_to_lq(const LpWitness& w, Ctx ctx) {
  const double p = w.params.p;
  const double q = ctx.params.q;
  require(q >= 1.0 && std::isfinite(q), "2->3 requires a finite target exponent q >= 1");
  LpWitness o;
  o.xi = w.xi.cwiseAbs().array().pow(p / q).matrix();
  o.params = w.params;
  o.params.p = q;
  auto& c = ctx.out;
  c.route = "2->3";
  // The bound is controlled by the l^1 distance of the p-th powers, which is
  // the variation itself when p = 1.
  Matrix powers = w.xi.cwiseAbs().array().pow(p).matrix();
  double e = 0.0;
  for (Index x = 0; x < ctx.space.size(); ++x)
    for (Index y = x + 1; y < ctx.space.size(); ++y)
      if (ctx.space.within(x, y, ctx.params.R)) e = std::max(e, lp_distance(powers, x, powers, y, 1.0));
  c.eps_in = e;
  if (p != 1.0) c.notes.push_back("bound uses the l^1 variation of xi^p");
  c.witness = o;
  c.space = ctx.space;
  c.output = measure_witness(c.witness, c.space, ctx.params.R);
  finish(c, c.output.eps_measured, std::pow(e, 1.0 / q), c.output.S_measured, c.input.S_measured);
}

void lp_to_a(const LpWitness& w, Ctx ctx) {
  require(w.params.p == 1.0, "3->1 requires an l^1 witness (p = 1)");
  if (!ctx.params.N) fail_precondition("3->1 requires the bounded-geometry bound N");
  const std::size_t n = ctx.space.size();
  const std::size_t N = *ctx.params.N;
  std::size_t support = 0;
  for (Index x = 0; x < n; ++x) {
    std::size_t s = 0;
    for (Index y = 0; y < n; ++y) s += w.xi(x, y) != 0.0 ? 1 : 0;
    support = std::max(support, s);
  }
  if (support > N)
    fail_precondition("3->1: support size " + std::to_string(support) + " exceeds N = " + std::to_string(N));
  auto& c = ctx.out;
  c.route = "3->1";
  c.eps_in = c.input.eps_measured;
  std::uint64_t M;
  if (ctx.params.M) {
    M = *ctx.params.M;
  } else if (c.eps_in > 0.0) {
    M = static_cast<std::uint64_t>(std::floor(static_cast<double>(N) / c.eps_in)) + 1;
  } else {
    M = std::max<std::uint64_t>(N, 1);
  }
  AFamily a;
  a.params = w.params;
  a.sets.resize(n);
  for (Index x = 0; x < n; ++x) {
    std::vector<double> row(n);
    for (Index y = 0; y < n; ++y) row[y] = std::abs(w.xi(x, y));
    const double total = std::accumulate(row.begin(), row.end(), 0.0);
    for (double& v : row) v /= total;
    auto counts = quantize(row, M);
    for (Index y = 0; y < n; ++y)
      for (std::uint64_t j = 1; j <= counts[y]; ++j) a.sets[x].emplace_back(y, static_cast<std::uint32_t>(j));
  }
  const double e = std::max(c.eps_in, static_cast<double>(N) / static_cast<double>(M));
  c.notes.push_back("M = " + std::to_string(M) + ", N = " + std::to_string(N) +
                    ", effective eps = " + std::to_string(e));
  c.witness = a;
  c.space = ctx.space;
  c.output = measure_witness(c.witness, c.space, ctx.params.R);
  const double bound = 1.5 * e < 1.0 ? 3.0 * e / (1.0 - 1.5 * e) : kInf;
  if (std::isinf(bound)) c.notes.push_back("bound vacuous: 1.5 * eps >= 1");
  finish(c, c.output.eps_measured, bound, c.output.S_measured, c.input.S_measured);
}

void lp_to_tail(const LpWitness& w, Ctx ctx) {
  TailWitness t;
  t.zeta = w.xi.cwiseAbs();
  t.params = w.params;
  t.params.R = ctx.params.R;
  t.params.S = ctx.out.input.S_measured;
  t.params.delta = ctx.params.delta;
  auto& c = ctx.out;
  c.route = "3->4";
  c.eps_in = c.input.eps_measured;
  c.witness = t;
  c.space = ctx.space;
  c.output = measure_witness(c.witness, c.space, ctx.params.R);
  finish(c, c.output.eps_measured, c.eps_in, c.output.S_measured, c.input.S_measured);
}

void tail_to_tail(const TailWitness& w, Ctx ctx) {
  const double p = w.params.p;
  const std::size_t n = ctx.space.size();
  auto& c = ctx.out;
  c.route = "4->5";
  c.eps_in = c.input.eps_measured;
  const double delta = w.params.delta > 0.0 ? w.params.delta : ctx.params.delta;
  require(delta > 0.0 && delta < 1.0, "4->5 requires 0 < delta < 1");
  const double delta_p = std::min(delta, std::pow(c.eps_in, p));
  // Smallest distance value S' whose tails all carry p-mass below delta'.
  double chosen = ctx.out.input.S_measured;
  for (double s : ctx.space.distance_values()) {
    bool ok = true;
    for (Index x = 0; x < n && ok; ++x) {
      double tail = 0.0;
      for (Index y = 0; y < n; ++y)
        if (ctx.space.d(x, y) > s + ctx.space.tolerance()) tail += std::pow(std::abs(w.zeta(x, y)), p);
      ok = delta_p > 0.0 ? tail < delta_p : tail == 0.0;
    }
    if (ok) {
      chosen = s;
      break;
    }
  }
  TailWitness o = w;
  o.params.R = ctx.params.R;
  o.params.S = chosen;
  o.params.delta = delta;
  c.notes.push_back("delta = " + std::to_string(delta) + ", delta' = " + std::to_string(delta_p) +
                    ", S' = " + std::to_string(chosen));
  c.witness = o;
  c.space = ctx.space;
  c.output = measure_witness(c.witness, c.space, ctx.params.R);
  // The quantity bounded here is the annulus mass, which must stay below eps.
  finish(c, c.output.annulus_max, c.eps_in, chosen, c.input.S_measured);
}

void tail_to_lp(const TailWitness& w, Ctx ctx) {
  const double p = w.params.p;
  const double R = ctx.params.R;
  const double S = w.params.S;
  const std::size_t n = ctx.space.size();
  LpWitness o;
  o.xi = Matrix::Zero(n, n);
  for (Index x = 0; x < n; ++x) {
    for (Index y = 0; y < n; ++y)
      if (ctx.space.within(x, y, R + S)) o.xi(x, y) = std::abs(w.zeta(x, y));
    const double norm = lp_norm_row(o.xi, x, p);
    require(norm > 0.0, "5->2: zeta vanishes on a ball of radius R + S");
    o.xi.row(static_cast<Eigen::Index>(x)) /= norm;
  }
  o.params = w.params;
  o.params.S = R + S;
  auto& c = ctx.out;
  c.route = "5->2";
  c.eps_in = std::max(c.input.eps_measured, c.input.annulus_max);
  const double delta_m = std::max(0.0, 1.0 - c.input.in_ball_min);
  c.notes.push_back("measured delta = " + std::to_string(delta_m));
  c.witness = o;
  c.space = ctx.space;
  c.output = measure_witness(c.witness, c.space, R);
  const double bound = delta_m < 1.0 ? 6.0 * c.eps_in / (1.0 - delta_m) : kInf;
  finish(c, c.output.eps_measured, bound, c.output.S_measured, R + S);
}

void lp_to_partition(const LpWitness& w, Ctx ctx) {
  require(w.params.p == 1.0, "3->6 requires an l^1 witness (p = 1)");
  const std::size_t n = ctx.space.size();
  PartitionWitness o;
  std::vector<Eigen::Index> rows;
  double radius = 0.0;
  for (Index x = 0; x < n; ++x) {
    std::vector<Index> u;
    for (Index y = 0; y < n; ++y)
      if (w.xi(y, x) != 0.0) {
        u.push_back(y);
        radius = std::max(radius, ctx.space.d(x, y));
      }
    if (u.empty()) continue;
    o.cover.push_back(std::move(u));
    rows.push_back(static_cast<Eigen::Index>(x));
  }
  o.phi = Matrix::Zero(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (Index y = 0; y < n; ++y) o.phi(static_cast<Eigen::Index>(i), y) = std::abs(w.xi(y, rows[i]));
  o.params = w.params;
  auto& c = ctx.out;
  c.route = "3->6";
  c.eps_in = c.input.eps_measured;
  c.notes.push_back("cover radius " + std::to_string(radius) + " around the indexing points");
  if (radius > c.input.S_measured + ctx.space.tolerance()) c.S_holds = false;
  c.witness = o;
  c.space = ctx.space;
  c.output = measure_witness(c.witness, c.space, ctx.params.R);
  const bool radius_ok = c.S_holds;
  finish(c, c.output.eps_measured, c.eps_in, c.output.S_measured, 2.0 * c.input.S_measured);
  c.S_holds = c.S_holds && radius_ok;
}

FiniteMetricSpace discrete_space(std::size_t m) {
  Matrix d = Matrix::Ones(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  d.diagonal().setZero();
  return FiniteMetricSpace(d);
}

void partition_to_lp(const PartitionWitness& w, Ctx ctx) {
  const std::size_t n = ctx.space.size();
  const std::size_t m = w.cover.size();
  require(m > 0, "6->2 requires a nonempty cover");
  auto product = lp_product(ctx.space, discrete_space(m), 1.0);
  const std::size_t big = n * m;
  LpWitness o;
  o.xi = Matrix::Zero(static_cast<Eigen::Index>(big), static_cast<Eigen::Index>(big));
  for (std::size_t j = 0; j < m; ++j) {
    require(!w.cover[j].empty(), "6->2: empty cover set");
    const Index rep = w.cover[j].front() * m + j;
    for (Index x = 0; x < n; ++x) {
      const double v = std::abs(w.phi(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(x)));
      if (v == 0.0) continue;
      for (std::size_t i = 0; i < m; ++i) o.xi(static_cast<Eigen::Index>(x * m + i), static_cast<Eigen::Index>(rep)) += v;
    }
  }
  o.params = w.params;
  o.params.p = 1.0;
  auto& c = ctx.out;
  c.route = "6->2";
  c.eps_in = c.input.eps_measured;
  c.witness = o;
  c.space = product;
  c.output = measure_witness(c.witness, c.space, ctx.params.R);
  finish(c, c.output.eps_measured, c.eps_in, c.output.S_measured, c.input.S_measured + 2.0);
}

void lp_to_vector(const LpWitness& w, Ctx ctx) {
  require(w.params.p == 2.0, "3->7 requires an l^2 witness (p = 2)");
  VectorWitness o;
  o.f = w.xi.cwiseAbs();
  o.params = w.params;
  o.params.S = 2.0 * ctx.out.input.S_measured;
  auto& c = ctx.out;
  c.route = "3->7";
  c.eps_in = c.input.eps_measured;
  c.witness = o;
  c.space = ctx.space;
  c.output = measure_witness(c.witness, c.space, ctx.params.R);
  finish(c, c.output.eps_measured, c.eps_in, c.output.S_measured, 2.0 * c.input.S_measured);
}

void vector_to_kernel(const VectorWitness& w, Ctx ctx) {
  KernelWitness o;
  o.k = w.f * w.f.transpose();
  o.params = w.params;
  auto& c = ctx.out;
  c.route = "7->8";
  c.eps_in = c.input.eps_measured;
  c.witness = o;
  c.space = ctx.space;
  c.output = measure_witness(c.witness, c.space, ctx.params.R);
  finish(c, c.output.eps_measured, c.eps_in * c.eps_in / 2.0, c.output.S_measured, c.input.S_measured);
}

void kernel_to_lp(const KernelWitness& w, Ctx ctx) {
  const std::size_t n = ctx.space.size();
  auto& c = ctx.out;
  if (c.input.min_eigenvalue < -1e-9 * std::max(1.0, linalg::max_abs(w.k)))
    fail_precondition("8->2 requires a positive-type kernel");
  double clipped = 0.0;
  const Matrix root = linalg::psd_sqrt(w.k, 1e-9 * std::max(1.0, linalg::max_abs(w.k)), &clipped);
  const double eps_k = c.input.eps_measured;

  auto truncate = [&](double t, Matrix& m, double& err, double& min_norm2) {
    m = root;
    for (Index x = 0; x < n; ++x)
      for (Index y = 0; y < n; ++y)
        if (!ctx.space.within(x, y, t)) m(x, y) = 0.0;
    Matrix g = m * m.transpose();
    err = (g - w.k).cwiseAbs().maxCoeff();
    min_norm2 = g.diagonal().minCoeff();
  };

  Matrix m;
  double err = 0.0, min_norm2 = 0.0, radius = ctx.space.diameter();
  if (ctx.params.truncation) {
    radius = *ctx.params.truncation;
    truncate(radius, m, err, min_norm2);
  } else {
    const double prop = c.input.S_measured;
    bool found = false;
    for (double t : ctx.space.distance_values()) {
      if (t < prop - ctx.space.tolerance()) continue;
      truncate(t, m, err, min_norm2);
      if (err <= std::max(eps_k, 1e-12) && min_norm2 > 0.5) {
        radius = t;
        found = true;
        break;
      }
    }
    if (!found) truncate(radius, m, err, min_norm2);
  }
  require(min_norm2 > 0.0, "8->2: truncation removed a whole row of the square root");
  LpWitness o;
  o.xi = m.cwiseAbs();
  for (Index x = 0; x < n; ++x) o.xi.row(static_cast<Eigen::Index>(x)) /= o.xi.row(static_cast<Eigen::Index>(x)).norm();
  o.params = w.params;
  o.params.p = 2.0;
  o.params.S = radius;
  c.route = "8->2";
  const double e = std::max(eps_k, err);
  c.eps_in = e;
  c.notes.push_back("truncation radius " + std::to_string(radius) + ", entrywise error " +
                    std::to_string(err) + ", mass loss " + std::to_string(1.0 - min_norm2) +
                    ", clipped eigenvalue mass " + std::to_string(clipped));
  c.witness = o;
  c.space = ctx.space;
  c.output = measure_witness(c.witness, c.space, ctx.params.R);
  const double bound = e < 0.5 ? 2.0 * std::sqrt(6.0 * e / (1.0 - 2.0 * e)) : kInf;
  finish(c, c.output.eps_measured, bound, c.output.S_measured, radius);
}

}  // namespace

Conversion convert_witness(const Witness& w, const FiniteMetricSpace& space, Form target,
                           const ConversionParams& params) {
  require(params.R >= 0.0, "conversion scale R must be nonnegative");
  Conversion c;
  c.input = measure_witness(w, space, params.R);
  if (!c.input.valid) fail_precondition("input witness invalid: " + c.input.violations.front());
  Ctx ctx{space, params, c};
  const Form src = form_of(w);
  auto unsupported = [&] {
    fail_precondition("unsupported conversion " + form_name(src) + " -> " + form_name(target));
  };
  switch (src) {
    case Form::AFamily:
      if (target != Form::Lp) unsupported();
      a_to_lp(std::get<AFamily>(w), ctx);
      break;
    case Form::Lp: {
      const auto& lw = std::get<LpWitness>(w);
      switch (target) {
        case Form::Lp: lp_to_lq(lw, ctx); break;
        case Form::AFamily: lp_to_a(lw, ctx); break;
        case Form::Tail: lp_to_tail(lw, ctx); break;
        case Form::Partition: lp_to_partition(lw, ctx); break;
        case Form::Vector: lp_to_vector(lw, ctx); break;
        default: unsupported();
      }
      break;
    }
    case Form::Tail:
      if (target == Form::Tail)
        tail_to_tail(std::get<TailWitness>(w), ctx);
      else if (target == Form::Lp)
        tail_to_lp(std::get<TailWitness>(w), ctx);
      else
        unsupported();
      break;
    case Form::Partition:
      if (target != Form::Lp) unsupported();
      partition_to_lp(std::get<PartitionWitness>(w), ctx);
      break;
    case Form::Vector:
      if (target != Form::Kernel) unsupported();
      vector_to_kernel(std::get<VectorWitness>(w), ctx);
      break;
    case Form::Kernel:
      if (target != Form::Lp) unsupported();
      kernel_to_lp(std::get<KernelWitness>(w), ctx);
      break;
  }
  return c;
}

}  // namespace coarselab
