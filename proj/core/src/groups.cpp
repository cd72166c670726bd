#include "coarselab/groups.hpp"

#include "coarselab/error.hpp"

#include <algorithm>
#include <deque>

namespace coarselab {

FiniteGroup::FiniteGroup(std::vector<std::string> elements, std::vector<std::vector<Index>> table,
                         std::vector<Index> generators, std::optional<std::vector<int>> lengths)
    : elements_(std::move(elements)), table_(std::move(table)), generators_(std::move(generators)) {
  const std::size_t n = elements_.size();
  require(n >= 1, "group must have at least one element");
  require(table_.size() == n, "multiplication table must have one row per element");
  for (Index a = 0; a < n; ++a) {
    require(table_[a].size() == n, "multiplication table row " + std::to_string(a) + " has the wrong length");
    std::vector<char> seen(n, 0);
    for (Index b = 0; b < n; ++b) {
      require(table_[a][b] < n, "multiplication table entry out of range at (" + elements_[a] + "," +
                                    elements_[b] + ")");
      if (seen[table_[a][b]]) fail_invariant("row " + elements_[a] + " of the table is not a permutation");
      seen[table_[a][b]] = 1;
    }
  }
  bool found = false;
  for (Index e = 0; e < n && !found; ++e) {
    bool ok = true;
    for (Index a = 0; a < n && ok; ++a) ok = table_[e][a] == a && table_[a][e] == a;
    if (ok) {
      identity_ = e;
      found = true;
    }
  }
  if (!found) fail_invariant("multiplication table has no identity element");
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b)
      for (Index c = 0; c < n; ++c)
        if (table_[table_[a][b]][c] != table_[a][table_[b][c]])
          fail_invariant("associativity fails for (" + elements_[a] + "," + elements_[b] + "," + elements_[c] + ")");
  inverse_.assign(n, 0);
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b)
      if (table_[a][b] == identity_) inverse_[a] = b;

  std::vector<char> in_set(n, 0);
  for (Index s : generators_) {
    require(s < n, "generator index out of range");
    require(s != identity_, "generating set must not contain the identity");
    require(!in_set[s], "generator " + elements_[s] + " listed twice");
    in_set[s] = 1;
  }
  for (Index s : generators_)
    require(in_set[inverse_[s]], "generating set is not symmetric: missing inverse of " + elements_[s]);

  if (lengths) {
    lengths_ = std::move(*lengths);
    user_lengths_ = true;
    require(lengths_.size() == n, "length table must have one entry per element");
    for (Index a = 0; a < n; ++a) {
      if ((lengths_[a] == 0) != (a == identity_))
        fail_invariant("length vanishes exactly at the identity, violated at " + elements_[a]);
      if (lengths_[a] < 0) fail_invariant("negative length at " + elements_[a]);
      if (lengths_[a] != lengths_[inverse_[a]]) fail_invariant("|g| != |g^-1| at " + elements_[a]);
    }
    for (Index a = 0; a < n; ++a)
      for (Index b = 0; b < n; ++b)
        if (lengths_[table_[a][b]] > lengths_[a] + lengths_[b])
          fail_invariant("length is not subadditive at (" + elements_[a] + "," + elements_[b] + ")");
  } else {
    const auto words = word_lengths(*this);
    lengths_.assign(n, 0);
    for (Index a = 0; a < n; ++a) {
      if (!words[a]) fail_precondition("generators do not generate: " + elements_[a] + " is unreachable");
      lengths_[a] = *words[a];
    }
  }
}

std::optional<Index> FiniteGroup::find(const std::string& name) const {
  for (Index i = 0; i < elements_.size(); ++i)
    if (elements_[i] == name) return i;
  return std::nullopt;
}

bool FiniteGroup::generates() const {
  for (const auto& w : word_lengths(*this))
    if (!w) return false;
  return true;
}

std::vector<Index> FiniteGroup::ball(double r) const {
  std::vector<Index> out;
  for (Index g = 0; g < size(); ++g)
    if (lengths_[g] <= r + 1e-9) out.push_back(g);
  return out;
}

std::vector<std::optional<int>> word_lengths(const FiniteGroup& g) {
  std::vector<std::optional<int>> len(g.size());
  std::deque<Index> queue{g.identity()};
  len[g.identity()] = 0;
  while (!queue.empty()) {
    const Index a = queue.front();
    queue.pop_front();
    for (Index s : g.generators()) {
      const Index b = g.mul(a, s);
      if (!len[b]) {
        len[b] = *len[a] + 1;
        queue.push_back(b);
      }
    }
  }
  return len;
}

FiniteGroup cyclic_group(std::size_t n) {
  require(n >= 1, "cyclic_group needs n >= 1");
  std::vector<std::string> names;
  std::vector<std::vector<Index>> table(n, std::vector<Index>(n));
  for (Index a = 0; a < n; ++a) {
    names.push_back(std::to_string(a));
    for (Index b = 0; b < n; ++b) table[a][b] = (a + b) % n;
  }
  std::vector<Index> gens;
  if (n >= 2) gens.push_back(1);
  if (n >= 3) gens.push_back(n - 1);
  return FiniteGroup(std::move(names), std::move(table), std::move(gens));
}

FiniteGroup z2_power(std::size_t k) {
  require(k <= 12, "z2_power: exponent at most 12");
  const std::size_t n = std::size_t{1} << k;
  std::vector<std::string> names;
  std::vector<std::vector<Index>> table(n, std::vector<Index>(n));
  for (Index a = 0; a < n; ++a) {
    std::string bits(k, '0');
    for (std::size_t j = 0; j < k; ++j)
      if ((a >> j) & 1U) bits[j] = '1';
    names.push_back(k == 0 ? "e" : bits);
    for (Index b = 0; b < n; ++b) table[a][b] = a ^ b;
  }
  std::vector<Index> gens;
  for (std::size_t j = 0; j < k; ++j) gens.push_back(Index{1} << j);
  return FiniteGroup(std::move(names), std::move(table), std::move(gens));
}

FiniteGroup dihedral_group(std::size_t n) {
  require(n >= 1, "dihedral_group needs n >= 1");
  // r^i has index i, s r^i has index n + i.
  const std::size_t m = 2 * n;
  std::vector<std::string> names;
  for (Index i = 0; i < n; ++i) names.push_back(i == 0 ? "e" : "r" + std::to_string(i));
  for (Index i = 0; i < n; ++i) names.push_back(i == 0 ? "s" : "sr" + std::to_string(i));
  std::vector<std::vector<Index>> table(m, std::vector<Index>(m));
  for (Index x = 0; x < m; ++x) {
    for (Index y = 0; y < m; ++y) {
      const bool fx = x >= n, fy = y >= n;
      const Index a = x % n, b = y % n;
      // s^e1 r^a s^e2 r^b = s^(e1+e2) r^(+-a + b)
      const Index exp = fy ? (n - a + b) % n : (a + b) % n;
      table[x][y] = (fx != fy ? n : 0) + exp;
    }
  }
  std::vector<Index> gens;
  auto add = [&](Index g) {
    if (g != 0 && std::find(gens.begin(), gens.end(), g) == gens.end()) gens.push_back(g);
  };
  if (n >= 2) add(1);
  if (n >= 2) add(n - 1);
  add(n);
  return FiniteGroup(std::move(names), std::move(table), std::move(gens));
}

FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b) {
  const std::size_t na = a.size(), nb = b.size(), n = na * nb;
  std::vector<std::string> names;
  for (Index i = 0; i < na; ++i)
    for (Index j = 0; j < nb; ++j) names.push_back("(" + a.element(i) + "," + b.element(j) + ")");
  std::vector<std::vector<Index>> table(n, std::vector<Index>(n));
  for (Index x = 0; x < n; ++x)
    for (Index y = 0; y < n; ++y) table[x][y] = a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb);
  std::vector<Index> gens;
  for (Index s : a.generators()) gens.push_back(s * nb + b.identity());
  for (Index t : b.generators()) gens.push_back(a.identity() * nb + t);
  return FiniteGroup(std::move(names), std::move(table), std::move(gens));
}

FiniteGroup direct_power(const FiniteGroup& base, std::size_t n) {
  require(n >= 1, "direct_power needs n >= 1");
  if (n == 1) return base;
  const std::size_t m = base.size();
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    total *= m;
    require(total <= 4096, "direct_power: group too large");
  }
  // Mixed radix: the first coordinate is the most significant digit.
  auto digits = [&](Index x) {
    std::vector<Index> d(n);
    for (std::size_t i = n; i-- > 0;) {
      d[i] = x % m;
      x /= m;
    }
    return d;
  };
  auto encode = [&](const std::vector<Index>& d) {
    Index x = 0;
    for (Index v : d) x = x * m + v;
    return x;
  };
  std::vector<std::string> names;
  for (Index x = 0; x < total; ++x) {
    std::string s = "(";
    const auto d = digits(x);
    for (std::size_t i = 0; i < n; ++i) s += (i ? "," : "") + base.element(d[i]);
    names.push_back(s + ")");
  }
  std::vector<std::vector<Index>> table(total, std::vector<Index>(total));
  for (Index x = 0; x < total; ++x) {
    const auto dx = digits(x);
    for (Index y = 0; y < total; ++y) {
      auto dy = digits(y);
      for (std::size_t i = 0; i < n; ++i) dy[i] = base.mul(dx[i], dy[i]);
      table[x][y] = encode(dy);
    }
  }
  std::vector<Index> gens;
  for (std::size_t i = 0; i < n; ++i)
    for (Index s : base.generators()) {
      std::vector<Index> d(n, base.identity());
      d[i] = s;
      gens.push_back(encode(d));
    }
  return FiniteGroup(std::move(names), std::move(table), std::move(gens));
}

FiniteMetricSpace cayley_metric(const FiniteGroup& g) {
  const auto words = word_lengths(g);
  for (Index a = 0; a < g.size(); ++a)
    if (!words[a]) fail_precondition("cayley_metric: generators do not generate " + g.element(a));
  const auto n = static_cast<Eigen::Index>(g.size());
  Matrix d(n, n);
  for (Index a = 0; a < g.size(); ++a)
    for (Index b = 0; b < g.size(); ++b) d(a, b) = *words[g.mul(g.inv(a), b)];
  return FiniteMetricSpace(g.elements(), std::move(d));
}

FiniteMetricSpace length_metric(const FiniteGroup& g) {
  const auto n = static_cast<Eigen::Index>(g.size());
  Matrix d(n, n);
  for (Index a = 0; a < g.size(); ++a)
    for (Index b = 0; b < g.size(); ++b) d(a, b) = g.distance(a, b);
  return FiniteMetricSpace(g.elements(), std::move(d));
}

RegularGraph cayley_graph(const FiniteGroup& g) {
  require(g.size() >= 2, "cayley_graph needs a nontrivial group");
  require(g.generates(), "cayley_graph: generators do not generate the group");
  const std::size_t n = g.size();
  Adjacency adj(n, std::vector<int>(n, 0));
  std::vector<std::vector<int>> colors(n, std::vector<int>(n, -1));
  for (Index a = 0; a < n; ++a)
    for (std::size_t i = 0; i < g.generators().size(); ++i) {
      const Index b = g.mul(a, g.generators()[i]);
      adj[a][b] = 1;
      colors[a][b] = static_cast<int>(i);
    }
  return RegularGraph(std::move(adj), std::move(colors));
}

bool is_subgroup(const FiniteGroup& g, const std::vector<Index>& k) {
  std::vector<char> member(g.size(), 0);
  for (Index x : k) {
    if (x >= g.size() || member[x]) return false;
    member[x] = 1;
  }
  if (k.empty() || !member[g.identity()]) return false;
  for (Index a : k)
    for (Index b : k)
      if (!member[g.mul(a, b)]) return false;
  return true;
}

bool is_normal(const FiniteGroup& g, const std::vector<Index>& k) {
  if (!is_subgroup(g, k)) return false;
  std::vector<char> member(g.size(), 0);
  for (Index x : k) member[x] = 1;
  for (Index a = 0; a < g.size(); ++a)
    for (Index x : k)
      if (!member[g.mul(g.mul(a, x), g.inv(a))]) return false;
  return true;
}

std::vector<Index> generated_subgroup(const FiniteGroup& g, const std::vector<Index>& gens) {
  std::vector<char> member(g.size(), 0);
  std::vector<Index> out{g.identity()};
  member[g.identity()] = 1;
  for (std::size_t head = 0; head < out.size(); ++head)
    for (Index s : gens) {
      require(s < g.size(), "generated_subgroup: element out of range");
      const Index b = g.mul(out[head], s);
      if (!member[b]) {
        member[b] = 1;
        out.push_back(b);
      }
    }
  std::sort(out.begin(), out.end());
  return out;
}

Quotient quotient(const FiniteGroup& g, const std::vector<Index>& k) {
  if (!is_subgroup(g, k)) fail_precondition("quotient: the element set is not a subgroup");
  if (!is_normal(g, k)) fail_precondition("quotient: the subgroup is not normal");
  const std::size_t n = g.size();
  Quotient q;
  q.kernel = k;
  std::sort(q.kernel.begin(), q.kernel.end());
  q.projection.assign(n, n);
  for (Index a = 0; a < n; ++a) {
    if (q.projection[a] != n) continue;
    const Index c = q.representative.size();
    q.representative.push_back(a);
    for (Index x : k) q.projection[g.mul(a, x)] = c;
  }
  const std::size_t m = q.representative.size();
  std::vector<std::string> names;
  std::vector<int> lengths(m, -1);
  for (Index c = 0; c < m; ++c) names.push_back("[" + g.element(q.representative[c]) + "]");
  for (Index a = 0; a < n; ++a) {
    int& l = lengths[q.projection[a]];
    if (l < 0 || g.length(a) < l) l = g.length(a);
  }
  std::vector<std::vector<Index>> table(m, std::vector<Index>(m));
  for (Index c = 0; c < m; ++c)
    for (Index d = 0; d < m; ++d)
      table[c][d] = q.projection[g.mul(q.representative[c], q.representative[d])];
  std::vector<Index> gens;
  const Index e = q.projection[g.identity()];
  for (Index s : g.generators()) {
    const Index c = q.projection[s];
    if (c != e && std::find(gens.begin(), gens.end(), c) == gens.end()) gens.push_back(c);
  }
  q.group = FiniteGroup(std::move(names), std::move(table), std::move(gens), std::move(lengths));
  q.space = length_metric(q.group);
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b)
      if (q.space.d(q.projection[a], q.projection[b]) > g.distance(a, b) + 1e-9)
        fail_invariant("quotient map expands the pair (" + g.element(a) + "," + g.element(b) + ")");
  return q;
}

FiniteMetricSpace quotient_metric(const FiniteGroup& g, const std::vector<Index>& k) {
  return quotient(g, k).space;
}

QuotientChain::QuotientChain(FiniteGroup group, std::vector<std::vector<Index>> subgroups)
    : group_(std::move(group)), subgroups_(std::move(subgroups)) {
  require(!subgroups_.empty(), "quotient chain is empty");
  for (std::size_t i = 0; i < subgroups_.size(); ++i) {
    auto& k = subgroups_[i];
    std::sort(k.begin(), k.end());
    if (!is_normal(group_, k))
      fail_precondition("quotient chain entry " + std::to_string(i) + " is not a normal subgroup");
    if (i > 0 && !std::includes(subgroups_[i - 1].begin(), subgroups_[i - 1].end(), k.begin(), k.end()))
      fail_precondition("quotient chain is not decreasing at entry " + std::to_string(i));
  }
  intersection_ = subgroups_.back();
}

QuotientChain dyadic_chain(std::size_t m) {
  require(m >= 1 && m <= 10, "dyadic_chain: m must lie in [1, 10]");
  const std::size_t n = std::size_t{1} << m;
  auto g = cyclic_group(n);
  std::vector<std::vector<Index>> subs;
  for (std::size_t level = 1; level <= m; ++level)
    subs.push_back(generated_subgroup(g, {static_cast<Index>((std::size_t{1} << level) % n)}));
  return QuotientChain(std::move(g), std::move(subs));
}

FiniteMetricSpace hypercube_space(const FiniteGroup& base, std::size_t n_max) {
  require(n_max >= 1, "hypercube_space needs n_max >= 1");
  std::vector<FiniteMetricSpace> blocks;
  for (std::size_t n = 1; n <= n_max; ++n) blocks.push_back(cayley_metric(direct_power(base, n)));
  return separated_union(blocks, GapPolicy::Nowak);
}

}  // namespace coarselab
