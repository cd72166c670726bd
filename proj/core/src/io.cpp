#include "coarselab/io.hpp"

#include "coarselab/error.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace coarselab::io {

namespace {

Json num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

const Json& field(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(path + "." + key, "missing field");
  return *it;
}

double number(const Json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  throw SchemaError(path, "expected a number");
}

std::size_t index(const Json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 0) throw SchemaError(path, "expected a nonnegative integer");
  return j.get<std::size_t>();
}

std::string text(const Json& j, const std::string& path) {
  if (!j.is_string()) throw SchemaError(path, "expected a string");
  return j.get<std::string>();
}

const Json& array(const Json& j, const std::string& path) {
  if (!j.is_array()) throw SchemaError(path, "expected an array");
  return j;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

std::vector<std::size_t> index_list(const Json& j, const std::string& path) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < array(j, path).size(); ++i) out.push_back(index(j[i], at(path, i)));
  return out;
}

Json params_to_json(const WitnessParams& p) {
  return Json{{"R", num(p.R)}, {"eps", num(p.eps)}, {"S", num(p.S)}, {"p", num(p.p)}, {"delta", num(p.delta)}};
}

WitnessParams params_from_json(const Json& j, const std::string& path) {
  WitnessParams p;
  p.R = number(field(j, "R", path), path + ".R");
  p.eps = number(field(j, "eps", path), path + ".eps");
  p.S = number(field(j, "S", path), path + ".S");
  if (j.contains("p")) p.p = number(j["p"], path + ".p");
  if (j.contains("delta")) p.delta = number(j["delta"], path + ".delta");
  return p;
}

std::size_t element_ref(const Json& j, const std::vector<std::string>& names, const std::string& path) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == s) return i;
    throw SchemaError(path, "unknown element '" + s + "'");
  }
  const auto i = index(j, path);
  if (i >= names.size()) throw SchemaError(path, "element index out of range");
  return i;
}

}  // namespace

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("$", "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw SchemaError("$", std::string("invalid JSON in ") + path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << body;
}

void write_json_file(const std::string& path, const Json& doc) { write_text_file(path, doc.dump(2) + "\n"); }

void check_schema(const Json& doc) {
  if (!doc.is_object()) throw SchemaError("$", "expected an object");
  auto it = doc.find("schema");
  if (it == doc.end()) throw SchemaError("$.schema", "missing field");
  if (!it->is_string() || it->get<std::string>() != kSchema)
    throw SchemaError("$.schema", std::string("expected \"") + kSchema + "\"");
}

std::string format_double(double v) {
  const Json j = num(v);
  return j.is_string() ? j.get<std::string>() : j.dump();
}

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(num(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j, const std::string& path) {
  array(j, path);
  const std::size_t rows = j.size();
  const std::size_t cols = rows ? array(j[0], at(path, 0)).size() : 0;
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    const auto rp = at(path, r);
    if (array(j[r], rp).size() != cols) throw SchemaError(rp, "ragged matrix row");
    for (std::size_t c = 0; c < cols; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = number(j[r][c], at(rp, c));
  }
  return m;
}

Json space_to_json(const FiniteMetricSpace& space) {
  Json doc{{"schema", kSchema}, {"points", space.points()}, {"dist", matrix_to_json(space.dist())}};
  if (space.has_blocks()) doc["blocks"] = space.blocks();
  return doc;
}

FiniteMetricSpace space_from_json(const Json& doc, const std::string& path) {
  if (path == "$") check_schema(doc);
  std::vector<std::string> points;
  const auto& pts = array(field(doc, "points", path), path + ".points");
  for (std::size_t i = 0; i < pts.size(); ++i) points.push_back(text(pts[i], at(path + ".points", i)));
  Matrix dist = matrix_from_json(field(doc, "dist", path), path + ".dist");
  if (static_cast<std::size_t>(dist.rows()) != points.size() || dist.rows() != dist.cols())
    throw SchemaError(path + ".dist", "distance matrix must be square with one row per point");
  std::vector<int> blocks;
  if (doc.contains("blocks")) {
    const auto& b = array(doc["blocks"], path + ".blocks");
    if (b.size() != points.size()) throw SchemaError(path + ".blocks", "one block label per point");
    for (std::size_t i = 0; i < b.size(); ++i) blocks.push_back(static_cast<int>(index(b[i], at(path + ".blocks", i))));
  }
  return FiniteMetricSpace(std::move(points), std::move(dist), std::move(blocks));
}

Json witness_to_json(const Witness& w, const FiniteMetricSpace* space) {
  Json data;
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, AFamily>) {
          Json sets = Json::array();
          for (const auto& s : v.sets) {
            Json row = Json::array();
            for (const auto& [y, n] : s) row.push_back(Json::array({y, n}));
            sets.push_back(std::move(row));
          }
          data = Json{{"sets", std::move(sets)}};
          if (!v.truncated.empty()) {
            std::vector<int> flags(v.truncated.begin(), v.truncated.end());
            data["truncated"] = flags;
          }
        } else if constexpr (std::is_same_v<T, LpWitness>) {
          data = Json{{"xi", matrix_to_json(v.xi)}};
        } else if constexpr (std::is_same_v<T, TailWitness>) {
          data = Json{{"zeta", matrix_to_json(v.zeta)}};
        } else if constexpr (std::is_same_v<T, PartitionWitness>) {
          data = Json{{"cover", v.cover}, {"phi", matrix_to_json(v.phi)}};
        } else if constexpr (std::is_same_v<T, VectorWitness>) {
          data = Json{{"f", matrix_to_json(v.f)}};
        } else {
          data = Json{{"k", matrix_to_json(v.k)}};
        }
      },
      w);
  Json doc{{"schema", kSchema},
           {"form", form_name(form_of(w))},
           {"params", params_to_json(params_of(w))},
           {"data", std::move(data)}};
  if (space) doc["space"] = space_to_json(*space);
  return doc;
}

WitnessDocument witness_from_json(const Json& doc) {
  check_schema(doc);
  const auto form_text = text(field(doc, "form", "$"), "$.form");
  Form form;
  try {
    form = parse_form(form_text);
  } catch (const Error&) {
    throw SchemaError("$.form", "unknown witness form '" + form_text + "'");
  }
  const auto params = params_from_json(field(doc, "params", "$"), "$.params");
  const auto& data = field(doc, "data", "$");
  WitnessDocument out;
  switch (form) {
    case Form::AFamily: {
      AFamily a;
      a.params = params;
      const auto& sets = array(field(data, "sets", "$.data"), "$.data.sets");
      for (std::size_t x = 0; x < sets.size(); ++x) {
        const auto px = at("$.data.sets", x);
        std::vector<Tag> s;
        for (std::size_t k = 0; k < array(sets[x], px).size(); ++k) {
          const auto pk = at(px, k);
          const auto& pair = array(sets[x][k], pk);
          if (pair.size() != 2) throw SchemaError(pk, "expected [point, index]");
          s.emplace_back(index(pair[0], at(pk, 0)), static_cast<std::uint32_t>(index(pair[1], at(pk, 1))));
        }
        std::sort(s.begin(), s.end());
        if (std::adjacent_find(s.begin(), s.end()) != s.end()) throw SchemaError(px, "duplicate tag");
        a.sets.push_back(std::move(s));
      }
      if (data.contains("truncated"))
        for (std::size_t i = 0; i < array(data["truncated"], "$.data.truncated").size(); ++i)
          a.truncated.push_back(static_cast<char>(index(data["truncated"][i], at("$.data.truncated", i)) != 0));
      out.witness = std::move(a);
      break;
    }
    case Form::Lp:
      out.witness = LpWitness{matrix_from_json(field(data, "xi", "$.data"), "$.data.xi"), params};
      break;
    case Form::Tail:
      out.witness = TailWitness{matrix_from_json(field(data, "zeta", "$.data"), "$.data.zeta"), params};
      break;
    case Form::Partition: {
      PartitionWitness p;
      p.params = params;
      const auto& cover = array(field(data, "cover", "$.data"), "$.data.cover");
      for (std::size_t i = 0; i < cover.size(); ++i) p.cover.push_back(index_list(cover[i], at("$.data.cover", i)));
      p.phi = matrix_from_json(field(data, "phi", "$.data"), "$.data.phi");
      if (static_cast<std::size_t>(p.phi.rows()) != p.cover.size())
        throw SchemaError("$.data.phi", "one row per cover set");
      out.witness = std::move(p);
      break;
    }
    case Form::Vector:
      out.witness = VectorWitness{matrix_from_json(field(data, "f", "$.data"), "$.data.f"), params};
      break;
    case Form::Kernel:
      out.witness = KernelWitness{matrix_from_json(field(data, "k", "$.data"), "$.data.k"), params};
      break;
  }
  if (doc.contains("space")) out.space = space_from_json(doc["space"], "$.space");
  return out;
}

Json kernel_to_json(const Kernel& k, const FiniteMetricSpace* space) {
  Json doc{{"schema", kSchema},
           {"matrix", matrix_to_json(k.values())},
           {"normalized", k.normalization() != Kernel::Normalization::None}};
  if (space) doc["propagation"] = num(k.propagation(*space));
  return doc;
}

Kernel kernel_from_json(const Json& doc) {
  check_schema(doc);
  Matrix m = matrix_from_json(field(doc, "matrix", "$"), "$.matrix");
  if (m.rows() != m.cols()) throw SchemaError("$.matrix", "kernel matrix must be square");
  return Kernel(std::move(m));
}

Json graph_to_json(const RegularGraph& g) {
  Json doc{{"schema", kSchema}, {"adjacency", g.adjacency()}, {"degree", g.degree()}};
  if (g.colored()) doc["colors"] = g.colors();
  return doc;
}

Adjacency adjacency_from_json(const Json& doc) {
  check_schema(doc);
  const auto& a = array(field(doc, "adjacency", "$"), "$.adjacency");
  Adjacency adj;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto p = at("$.adjacency", i);
    std::vector<int> row;
    for (std::size_t j = 0; j < array(a[i], p).size(); ++j) {
      const auto v = index(a[i][j], at(p, j));
      if (v > 1) throw SchemaError(at(p, j), "adjacency entries must be 0 or 1");
      row.push_back(static_cast<int>(v));
    }
    if (row.size() != a.size()) throw SchemaError(p, "adjacency matrix must be square");
    adj.push_back(std::move(row));
  }
  return adj;
}

std::optional<std::vector<std::vector<int>>> colors_from_json(const Json& doc) {
  if (!doc.contains("colors")) return std::nullopt;
  const auto& c = array(doc["colors"], "$.colors");
  std::vector<std::vector<int>> out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    std::vector<int> row;
    for (std::size_t j = 0; j < array(c[i], at("$.colors", i)).size(); ++j) {
      if (!c[i][j].is_number_integer()) throw SchemaError(at(at("$.colors", i), j), "expected an integer");
      row.push_back(c[i][j].get<int>());
    }
    out.push_back(std::move(row));
  }
  return out;
}

Json group_to_json(const FiniteGroup& g) {
  std::vector<std::string> gens;
  for (Index s : g.generators()) gens.push_back(g.element(s));
  Json doc{{"schema", kSchema}, {"elements", g.elements()}, {"table", g.table()}, {"generators", gens}};
  if (g.user_lengths()) doc["lengths"] = g.lengths();
  return doc;
}

FiniteGroup group_from_json(const Json& doc) {
  check_schema(doc);
  std::vector<std::string> names;
  const auto& e = array(field(doc, "elements", "$"), "$.elements");
  for (std::size_t i = 0; i < e.size(); ++i) names.push_back(text(e[i], at("$.elements", i)));
  const auto& t = array(field(doc, "table", "$"), "$.table");
  if (t.size() != names.size()) throw SchemaError("$.table", "one row per element");
  std::vector<std::vector<Index>> table;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto p = at("$.table", i);
    if (array(t[i], p).size() != names.size()) throw SchemaError(p, "one entry per element");
    std::vector<Index> row;
    for (std::size_t j = 0; j < t[i].size(); ++j) row.push_back(element_ref(t[i][j], names, at(p, j)));
    table.push_back(std::move(row));
  }
  std::vector<Index> gens;
  const auto& g = array(field(doc, "generators", "$"), "$.generators");
  for (std::size_t i = 0; i < g.size(); ++i) gens.push_back(element_ref(g[i], names, at("$.generators", i)));
  std::optional<std::vector<int>> lengths;
  if (doc.contains("lengths")) {
    const auto& l = array(doc["lengths"], "$.lengths");
    if (l.size() != names.size()) throw SchemaError("$.lengths", "one length per element");
    lengths.emplace();
    for (std::size_t i = 0; i < l.size(); ++i) lengths->push_back(static_cast<int>(index(l[i], at("$.lengths", i))));
  }
  return FiniteGroup(std::move(names), std::move(table), std::move(gens), std::move(lengths));
}

Json action_to_json(const GroupAction& a) {
  Json perms = Json::object();
  for (Index g = 0; g < a.group().size(); ++g) perms[a.group().element(g)] = a.permutations()[g];
  return Json{{"schema", kSchema}, {"permutations", std::move(perms)}};
}

GroupAction action_from_json(const Json& doc, const FiniteGroup& g, const FiniteMetricSpace& space) {
  check_schema(doc);
  const auto& p = field(doc, "permutations", "$");
  if (!p.is_object()) throw SchemaError("$.permutations", "expected an object keyed by element");
  std::vector<std::vector<Index>> perms(g.size());
  for (Index a = 0; a < g.size(); ++a) {
    const auto path = "$.permutations." + g.element(a);
    if (!p.contains(g.element(a))) throw SchemaError(path, "missing permutation");
    perms[a] = index_list(p[g.element(a)], path);
  }
  return GroupAction(g, space, std::move(perms));
}

Json folner_to_json(const FiniteGroup& g, const FolnerFunction& f, const std::string& group_id) {
  Json values = Json::object();
  for (Index h = 0; h < g.size(); ++h)
    if (f.values[h] != 0.0) values[g.element(h)] = num(f.values[h]);
  return Json{{"schema", kSchema}, {"group", group_id}, {"values", std::move(values)}, {"S", num(f.S)}};
}

FolnerFunction folner_from_json(const Json& doc, const FiniteGroup& g) {
  check_schema(doc);
  const auto& v = field(doc, "values", "$");
  if (!v.is_object()) throw SchemaError("$.values", "expected an object keyed by element");
  std::vector<double> values(g.size(), 0.0);
  for (auto it = v.begin(); it != v.end(); ++it) {
    const auto h = g.find(it.key());
    if (!h) throw SchemaError("$.values." + it.key(), "unknown group element");
    values[*h] = number(it.value(), "$.values." + it.key());
  }
  auto f = make_folner(g, std::move(values));
  if (doc.contains("S") && f.S > number(doc["S"], "$.S") + 1e-9)
    throw SchemaError("$.S", "declared support radius is smaller than the actual support");
  return f;
}

Json report_to_json(const WitnessReport& r, const FiniteMetricSpace& space) {
  Json doc{{"schema", kSchema},
           {"form", form_name(r.form)},
           {"R", num(r.R_target)},
           {"eps", num(r.eps_measured)},
           {"S", num(r.S_measured)},
           {"norm_deviation", num(r.norm_deviation)},
           {"pairs_checked", r.pairs_checked},
           {"flagged_pairs", r.flagged_pairs},
           {"eps_with_flagged", num(r.eps_with_flagged)},
           {"valid", r.valid},
           {"violations", r.violations},
           {"tolerance", num(space.tolerance())}};
  if (r.worst_pair) doc["worst_pair"] = {space.id(r.worst_pair->first), space.id(r.worst_pair->second)};
  if (r.form == Form::Kernel) doc["min_eigenvalue"] = num(r.min_eigenvalue);
  if (r.form == Form::Tail) {
    doc["in_ball_min"] = num(r.in_ball_min);
    doc["annulus_max"] = num(r.annulus_max);
  }
  return doc;
}

Json conversion_to_json(const Conversion& c) {
  return Json{{"schema", kSchema},
              {"route", c.route},
              {"input", report_to_json(c.input, c.space)},
              {"output", report_to_json(c.output, c.space)},
              {"eps_in", num(c.eps_in)},
              {"bound", num(c.bound)},
              {"out_quantity", num(c.out_quantity)},
              {"bound_holds", c.bound_holds},
              {"S_bound", num(c.S_bound)},
              {"S_holds", c.S_holds},
              {"ok", c.ok()},
              {"notes", c.notes}};
}

std::string profile_csv(const CompressionProfile& profile) {
  std::ostringstream out;
  out << "r_lo,r_hi,rho1,rho2\n";
  for (const auto& b : profile.bins)
    out << format_double(b.r_lo) << ',' << format_double(b.r_hi) << ',' << format_double(b.rho1) << ','
        << format_double(b.rho2) << '\n';
  return out.str();
}

std::string diam_csv(const std::vector<DiamTable>& tables) {
  std::ostringstream out;
  out << "target,form,R,eps,S,optimal_defect\n";
  for (const auto& t : tables)
    for (const auto& e : t.entries)
      out << csv_field(t.target) << ',' << diam_form_name(t.form) << ',' << format_double(e.R) << ',' << format_double(e.eps)
          << ',' << e.S << ',' << format_double(e.optimal_defect) << '\n';
  return out.str();
}

std::string embedding_csv(const FiniteMetricSpace& space, const Matrix& coords) {
  std::ostringstream out;
  out << "id";
  for (Eigen::Index c = 0; c < coords.cols(); ++c) out << ",x" << c;
  out << '\n';
  for (Eigen::Index r = 0; r < coords.rows(); ++r) {
    out << csv_field(space.id(static_cast<Index>(r)));
    for (Eigen::Index c = 0; c < coords.cols(); ++c) out << ',' << format_double(coords(r, c));
    out << '\n';
  }
  return out.str();
}

}  // namespace coarselab::io
