#include "generators.hpp"

#include <coarselab/amenability.hpp>
#include <coarselab/error.hpp>
#include <coarselab/io.hpp>
#include <coarselab/kernels.hpp>
#include <coarselab/spectral.hpp>
#include <coarselab/witness.hpp>

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace coarselab;
using io::Json;

namespace {

enum Status : int { kOk = 0, kCheckFailed = 1, kSchema = 2, kRejected = 3 };

struct Globals {
  std::uint64_t seed = 0;
  double tol = 1e-9;
  bool exact = false;
};

Json num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

void emit(const Json& doc, const std::string& out) {
  if (out.empty())
    std::cout << doc.dump(2) << '\n';
  else
    io::write_json_file(out, doc);
}

void add_generator_options(CLI::App* sub, cli::GeneratorSpec& spec) {
  sub->add_option("--n", spec.n, "Size parameter");
  sub->add_option("--branch", spec.branch, "Tree branching factor");
  sub->add_option("--depth", spec.depth, "Tree depth");
  sub->add_option("--degree", spec.degree, "Degree of random regular graphs");
  sub->add_option("--base", spec.base, "Base group z<k> of nowak spaces");
}

Index point_index(const FiniteMetricSpace& space, const std::string& id) {
  if (auto found = space.find(id)) return *found;
  fail_precondition("no point named '" + id + "'");
}

// ------------------------------------------------------------------ space

struct SpaceArgs {
  cli::GeneratorSpec spec;
  std::string in, out;
  std::vector<double> radii{1.0, 2.0};
};

int space_gen(const SpaceArgs& a, const Globals& g) {
  auto spec = a.spec;
  spec.seed = g.seed;
  const auto space = cli::make_space(spec);
  auto doc = io::space_to_json(space);
  emit(doc, a.out);
  return kOk;
}

int space_info(const SpaceArgs& a, const Globals& g) {
  const auto space = io::space_from_json(io::read_json_file(a.in));
  const auto stats = bounded_geometry_stats(space, a.radii);
  Json balls = Json::array();
  for (std::size_t i = 0; i < a.radii.size(); ++i) balls.push_back({{"r", a.radii[i]}, {"N", stats[i]}});
  std::set<int> blocks(space.blocks().begin(), space.blocks().end());
  emit(Json{{"schema", io::kSchema},
            {"points", space.size()},
            {"diameter", num(space.diameter())},
            {"integral", space.integral()},
            {"blocks", blocks.size()},
            {"ball_sizes", balls},
            {"tolerance", num(std::max(space.tolerance(), g.tol))}},
       a.out);
  return kOk;
}

// ------------------------------------------------------------------ group

struct GroupArgs {
  std::string kind = "zn";
  std::size_t n = 4;
  std::string out, graph, space;
};

int group_gen(const GroupArgs& a) {
  const auto group = cli::make_group(a.kind, a.n);
  if (!a.graph.empty()) io::write_json_file(a.graph, io::graph_to_json(cayley_graph(group)));
  if (!a.space.empty()) io::write_json_file(a.space, io::space_to_json(cayley_metric(group)));
  emit(io::group_to_json(group), a.out);
  return kOk;
}

// ---------------------------------------------------------------- witness

struct WitnessArgs {
  std::string in, space, out, report;
  std::string kind = "ball";
  std::string to = "lp";
  std::string root;
  std::string boundary = "truncate";
  std::string group = "z2pow";
  std::size_t group_n = 2;
  double radius = 1.0;
  double R = 1.0;
  double eps = 0.5;
  double p = 1.0;
  double q = 2.0;
  double S = 1.0;
  double delta = 0.5;
  std::optional<std::size_t> N;
  std::optional<std::uint64_t> M;
  std::optional<double> truncation;
};

LpWitness ball_witness(const FiniteMetricSpace& space, double r, double p, double R) {
  const auto n = static_cast<Eigen::Index>(space.size());
  LpWitness w{Matrix::Zero(n, n), {}};
  for (Index x = 0; x < space.size(); ++x) {
    const auto ball = space.closed_ball(x, r);
    const double v = std::pow(static_cast<double>(ball.size()), -1.0 / p);
    for (Index y : ball) w.xi(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) = v;
  }
  w.params.R = R;
  w.params.S = r;
  w.params.p = p;
  return w;
}

void set_eps(Witness& w, double eps) {
  std::visit([&](auto& v) { v.params.eps = eps; }, w);
}

void print_failure(const WitnessReport& r, const FiniteMetricSpace& space) {
  std::cerr << "witness check failed";
  if (r.worst_pair) std::cerr << " at pair (" << space.id(r.worst_pair->first) << ", " << space.id(r.worst_pair->second) << ")";
  std::cerr << '\n';
  for (const auto& v : r.violations) std::cerr << "  " << v << '\n';
}

FiniteMetricSpace witness_space(const io::WitnessDocument& doc, const std::string& path) {
  if (!path.empty()) return io::space_from_json(io::read_json_file(path));
  if (doc.space) return *doc.space;
  fail_precondition("witness document carries no space; pass --space");
}

int witness_build(const WitnessArgs& a) {
  FiniteMetricSpace space;
  Witness w;
  if (a.kind == "folner") {
    const auto group = cli::make_group(a.group, a.group_n);
    const auto opt = optimal_folner(group, a.R, a.S);
    space = length_metric(group);
    w = folner_to_witness(group, opt.f, a.R);
  } else {
    space = io::space_from_json(io::read_json_file(a.space));
    if (a.kind == "ball") {
      w = ball_witness(space, a.radius, a.p, a.R);
    } else if (a.kind == "tree") {
      const Index end = a.root.empty() ? space.size() - 1 : point_index(space, a.root);
      const auto boundary = a.boundary == "extend" ? TreeBoundary::ExtendRay : TreeBoundary::Truncate;
      w = tree_witness(space, end, a.R, a.eps, boundary).family;
    } else if (a.kind == "trivial") {
      w = trivial_partition(space);
    } else {
      fail_precondition("unknown witness kind '" + a.kind + "'");
    }
  }
  const auto report = measure_witness(w, space, a.R);
  if (a.kind != "tree") set_eps(w, report.eps_measured);
  if (!a.report.empty()) io::write_json_file(a.report, io::report_to_json(report, space));
  if (!report.valid) {
    print_failure(report, space);
    return kCheckFailed;
  }
  emit(io::witness_to_json(w, &space), a.out);
  return kOk;
}

int witness_convert(const WitnessArgs& a) {
  const auto doc = io::witness_from_json(io::read_json_file(a.in));
  const auto space = witness_space(doc, a.space);
  ConversionParams params;
  params.R = a.R;
  params.q = a.q;
  params.N = a.N;
  if (!params.N) {
    const double S = measure_witness(doc.witness, space, a.R).S_measured;
    if (std::isfinite(S)) params.N = bounded_geometry_stats(space, {S}).front();
  }
  params.M = a.M;
  params.delta = a.delta;
  params.truncation = a.truncation;
  const auto c = convert_witness(doc.witness, space, parse_form(a.to), params);
  if (!a.report.empty()) io::write_json_file(a.report, io::conversion_to_json(c));
  if (!c.ok()) {
    print_failure(c.output, c.space);
    if (!c.bound_holds) std::cerr << "  degradation bound " << c.bound << " exceeded: " << c.out_quantity << '\n';
    if (!c.S_holds) std::cerr << "  support bound " << c.S_bound << " exceeded\n";
    return kCheckFailed;
  }
  emit(io::witness_to_json(c.witness, &c.space), a.out);
  return kOk;
}

int witness_verify(const WitnessArgs& a, bool R_given) {
  const auto doc = io::witness_from_json(io::read_json_file(a.in));
  const auto space = witness_space(doc, a.space);
  const double R = R_given ? a.R : params_of(doc.witness).R;
  const auto report = measure_witness(doc.witness, space, R);
  emit(io::report_to_json(report, space), a.report.empty() ? a.out : a.report);
  if (!report.valid) {
    print_failure(report, space);
    return kCheckFailed;
  }
  return kOk;
}

// ----------------------------------------------------------------- kernel

struct KernelArgs {
  std::string in, space, out;
  std::string kind = "distance";
  std::string op = "exp";
  double alpha = 1.0;
  double t = 1.0;
};

Json classification(const Kernel& k, const KernelClass& c, const FiniteMetricSpace* space) {
  const char* norm = "none";
  switch (k.normalization(c.tol)) {
    case Kernel::Normalization::Positive: norm = "positive"; break;
    case Kernel::Normalization::Negative: norm = "negative"; break;
    case Kernel::Normalization::None: break;
  }
  Json doc{{"schema", io::kSchema},
           {"points", k.size()},
           {"positive_type", c.positive_type},
           {"min_eigenvalue", num(c.min_eigenvalue)},
           {"negative_type", c.negative_type},
           {"max_meanzero", num(c.max_meanzero)},
           {"normalization", norm},
           {"scale", num(c.scale)},
           {"tolerance", num(c.tol)}};
  if (space) doc["propagation"] = num(k.propagation(*space, c.tol));
  return doc;
}

int kernel_gen(const KernelArgs& a) {
  const auto space = io::space_from_json(io::read_json_file(a.space));
  Matrix m;
  if (a.kind == "distance") {
    require(a.alpha > 0.0, "--alpha must be positive");
    m = space.dist().array().pow(a.alpha).matrix();
  } else if (a.kind == "exp") {
    require(a.t > 0.0, "--t must be positive");
    m = (-a.t * space.dist()).array().exp().matrix();
  } else {
    fail_precondition("unknown kernel kind '" + a.kind + "'");
  }
  emit(io::kernel_to_json(Kernel(m), &space), a.out);
  return kOk;
}

int kernel_classify(const KernelArgs& a, const Globals& g) {
  const auto k = io::kernel_from_json(io::read_json_file(a.in));
  std::optional<FiniteMetricSpace> space;
  if (!a.space.empty()) space = io::space_from_json(io::read_json_file(a.space));
  emit(classification(k, classify_kernel(k, g.tol), space ? &*space : nullptr), a.out);
  return kOk;
}

int kernel_transform(const KernelArgs& a, const Globals& g) {
  const auto k = io::kernel_from_json(io::read_json_file(a.in));
  Kernel out;
  if (a.op == "exp")
    out = exp_transform(k, a.t, g.tol);
  else if (a.op == "power")
    out = power_transform(k, a.alpha, g.tol);
  else
    fail_precondition("unknown transform '" + a.op + "'");
  emit(io::kernel_to_json(out), a.out);
  return kOk;
}

// --------------------------------------------------------------- spectral

struct SpectralArgs {
  cli::GeneratorSpec spec;
  std::string graph, out, csv;
  bool expansion = false;
  bool kazhdan = false;
  std::size_t samples = 20000;
};

int spectral(const SpectralArgs& a, const Globals& g) {
  RegularGraph graph;
  if (!a.graph.empty()) {
    const auto doc = io::read_json_file(a.graph);
    auto colors = io::colors_from_json(doc);
    graph = RegularGraph(io::adjacency_from_json(doc), colors ? *colors : std::vector<std::vector<int>>{});
  } else {
    auto spec = a.spec;
    spec.seed = g.seed;
    graph = cli::make_graph(spec);
  }
  const auto rep = laplacian_gap(graph);
  std::vector<double> spectrum(rep.spectrum.data(), rep.spectrum.data() + rep.spectrum.size());
  Json doc{{"schema", io::kSchema},
           {"vertices", graph.size()},
           {"degree", graph.degree()},
           {"lambda", num(rep.lambda)},
           {"spectrum", spectrum},
           {"tolerance", num(g.tol)},
           {"seed", g.seed}};
  int status = kOk;
  if (a.expansion) {
    ExpansionOptions opts;
    if (graph.size() > 20) {
      opts.mode = ExpansionOptions::Mode::Sampled;
      opts.samples = a.samples;
      opts.seed = g.seed;
    }
    const auto e = expansion_constant(graph.adjacency(), opts);
    doc["expansion"] = {{"c", num(e.c)}, {"exact", e.exact}, {"evaluated", e.evaluated}, {"subset", e.subset}};
  }
  if (a.kazhdan) {
    KazhdanOptions opts;
    opts.seed = g.seed;
    opts.samples = a.samples;
    const auto k = kazhdan_gap(graph, opts);
    doc["kazhdan"] = {{"eps", num(k.eps)},
                      {"eps_upper", num(k.eps_upper)},
                      {"spectral_bound", num(k.spectral_bound)},
                      {"exact", k.exact},
                      {"expansion_exact", k.expansion_exact},
                      {"subsets_checked", k.subsets_checked},
                      {"expansion_holds", k.expansion_holds},
                      {"worst_margin", num(k.worst_margin)},
                      {"worst_subset", k.worst_subset}};
    if (!k.expansion_holds) {
      std::cerr << "expansion inequality fails on subset of size " << k.worst_subset.size() << '\n';
      status = kCheckFailed;
    }
  }
  if (!a.csv.empty()) {
    std::ostringstream csv;
    csv << "index,eigenvalue\n";
    for (std::size_t i = 0; i < spectrum.size(); ++i) csv << i << ',' << io::format_double(spectrum[i]) << '\n';
    io::write_text_file(a.csv, csv.str());
  }
  emit(doc, a.out);
  return status;
}

// ------------------------------------------------------------------- diam

struct DiamArgs {
  std::string group = "z2pow";
  std::size_t n = 1;
  std::string group_file;
  std::vector<double> R{1.0};
  std::vector<double> eps{0.5};
  std::string form = "F";
  bool growth = false;
  std::string base = "z2";
  std::string csv, out;
};

Json table_to_json(const DiamTable& t) {
  Json entries = Json::array();
  for (const auto& e : t.entries)
    entries.push_back({{"R", num(e.R)}, {"eps", num(e.eps)}, {"S", e.S}, {"optimal_defect", num(e.optimal_defect)}});
  return {{"target", t.target},
          {"form", diam_form_name(t.form)},
          {"exact", t.exact},
          {"monotone", t.monotone()},
          {"entries", entries}};
}

int diam(const DiamArgs& a, const Globals& g) {
  const auto arithmetic = g.exact ? Arithmetic::Exact : Arithmetic::Auto;
  FiniteGroup group;
  std::string label;
  if (!a.group_file.empty()) {
    group = io::group_from_json(io::read_json_file(a.group_file));
    label = a.group_file;
  } else if (!a.growth) {
    group = cli::make_group(a.group, a.n);
    label = cli::group_label(a.group, a.n);
  }

  if (a.growth) {
    const auto base = a.group_file.empty() ? cli::base_group(a.base) : group;
    std::ostringstream csv;
    csv << "n,order,S,defect\n";
    Json rows = Json::array();
    for (double eps : a.eps) {
      const auto r = growth_experiment(base, eps, a.n);
      for (const auto& row : r.rows) {
        csv << row.n << ',' << row.order << ',' << row.S << ',' << io::format_double(row.defect) << '\n';
        rows.push_back({{"n", row.n}, {"order", row.order}, {"eps", num(eps)}, {"S", row.S}, {"defect", num(row.defect)}});
      }
      if (r.truncated) std::cerr << "growth stopped at n = " << r.truncated_at << " (group too large)\n";
    }
    std::cout << csv.str();
    if (!a.csv.empty()) io::write_text_file(a.csv, csv.str());
    if (!a.out.empty()) io::write_json_file(a.out, Json{{"schema", io::kSchema}, {"rows", rows}});
    return kOk;
  }

  std::vector<DiamTable> tables;
  if (a.form == "F" || a.form == "both") tables.push_back(diam_folner(group, label, a.R, a.eps, arithmetic));
  if (a.form == "A" || a.form == "both")
    tables.push_back(diam_property_a(length_metric(group), label, a.R, a.eps, arithmetic));
  require(!tables.empty(), "--form must be F, A or both");
  const auto csv = io::diam_csv(tables);
  std::cout << csv;
  if (!a.csv.empty()) io::write_text_file(a.csv, csv);
  if (!a.out.empty()) {
    Json list = Json::array();
    for (const auto& t : tables) list.push_back(table_to_json(t));
    io::write_json_file(a.out, Json{{"schema", io::kSchema}, {"tables", list}, {"tolerance", num(g.tol)}});
  }
  int status = kOk;
  for (const auto& t : tables)
    if (!t.monotone()) {
      std::cerr << diam_form_name(t.form) << " table is not monotone\n";
      status = kCheckFailed;
    }
  if (tables.size() == 2)
    for (double R : a.R)
      for (double eps : a.eps)
        if (tables[0].lookup(R, eps) != tables[1].lookup(R, eps)) {
          std::cerr << "diamF and diamA differ at R = " << R << ", eps = " << eps << '\n';
          status = kCheckFailed;
        }
  return status;
}

// ------------------------------------------------------------------ embed

struct EmbedArgs {
  std::string kernel, space, out, csv, profile;
  std::string mode = "negative";
  double bin = 1.0;
};

int embed(const EmbedArgs& a, const Globals& g) {
  const auto k = io::kernel_from_json(io::read_json_file(a.kernel));
  const auto space = io::space_from_json(io::read_json_file(a.space));
  require(k.size() == space.size(), "kernel and space sizes differ");
  const auto mode = a.mode == "positive" ? KernelMode::Positive : KernelMode::Negative;
  require(a.mode == "positive" || a.mode == "negative", "--mode must be positive or negative");
  const auto e = embed_from_kernel(k, mode, g.tol);
  const auto profile = compression_profile(PointMap::into_coordinates(space, e.embedding.coords, 2.0), a.bin);
  if (!a.csv.empty()) io::write_text_file(a.csv, io::embedding_csv(space, e.embedding.coords));
  if (!a.profile.empty()) io::write_text_file(a.profile, io::profile_csv(profile));
  Json bins = Json::array();
  for (const auto& b : profile.bins)
    bins.push_back({{"r_lo", num(b.r_lo)}, {"r_hi", num(b.r_hi)}, {"rho1", num(b.rho1)}, {"rho2", num(b.rho2)}, {"pairs", b.pairs}});
  emit(Json{{"schema", io::kSchema},
            {"mode", a.mode},
            {"dimension", e.embedding.dimension()},
            {"clipped_mass", num(e.clipped_mass)},
            {"reconstruction_error", num(e.reconstruction_error)},
            {"proper", profile.proper},
            {"profile", bins},
            {"tolerance", num(g.tol)}},
       a.out);
  return kOk;
}

// ----------------------------------------------------------------- report

struct ReportArgs {
  std::string in, space, group_file, out;
  double R = 1.0;
};

int report(const ReportArgs& a, const Globals& g) {
  const auto doc = io::read_json_file(a.in);
  if (doc.contains("form")) {
    WitnessArgs w;
    w.in = a.in;
    w.space = a.space;
    w.out = a.out;
    return witness_verify(w, false);
  }
  if (doc.contains("dist")) {
    SpaceArgs s;
    s.in = a.in;
    s.out = a.out;
    return space_info(s, g);
  }
  if (doc.contains("matrix")) {
    KernelArgs k;
    k.in = a.in;
    k.space = a.space;
    k.out = a.out;
    return kernel_classify(k, g);
  }
  if (doc.contains("adjacency")) {
    SpectralArgs s;
    s.graph = a.in;
    s.out = a.out;
    return spectral(s, g);
  }
  if (doc.contains("table")) {
    const auto group = io::group_from_json(doc);
    int longest = 0;
    for (int l : group.lengths()) longest = std::max(longest, l);
    emit(Json{{"schema", io::kSchema},
              {"order", group.size()},
              {"generators", group.generators().size()},
              {"generates", group.generates()},
              {"max_length", longest}},
         a.out);
    return kOk;
  }
  if (doc.contains("values")) {
    require(!a.group_file.empty(), "a Folner document needs --group-file");
    const auto group = io::group_from_json(io::read_json_file(a.group_file));
    const auto f = io::folner_from_json(doc, group);
    emit(Json{{"schema", io::kSchema},
              {"S", num(f.S)},
              {"R", num(a.R)},
              {"reiter_defect", num(reiter_defect(group, f, a.R))},
              {"tolerance", num(g.tol)}},
         a.out);
    return kOk;
  }
  throw SchemaError("$", "unrecognised document");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-scale coarse geometry toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals globals;
  app.add_option("--seed", globals.seed, "Seed for every random choice")->capture_default_str();
  app.add_option("--tol", globals.tol, "Numerical tolerance")->capture_default_str();
  app.add_flag("--exact", globals.exact, "Force exact rational arithmetic");

  int status = kOk;

  SpaceArgs space_args;
  auto* space_cmd = app.add_subcommand("space", "Generate or inspect finite metric spaces");
  space_cmd->require_subcommand(1);
  auto* space_gen_cmd = space_cmd->add_subcommand("gen", "Generate a space");
  space_gen_cmd->add_option("--kind", space_args.spec.kind,
                            "cycle, path, tree, hypercube, complete, random-regular, z2pow, zn, dihedral, box, nowak")
      ->required();
  add_generator_options(space_gen_cmd, space_args.spec);
  space_gen_cmd->add_option("--out", space_args.out, "Output JSON");
  space_gen_cmd->callback([&] { status = space_gen(space_args, globals); });
  auto* space_info_cmd = space_cmd->add_subcommand("info", "Summarise a space");
  space_info_cmd->add_option("--in", space_args.in)->required();
  space_info_cmd->add_option("--radius", space_args.radii, "Radii for ball-size statistics");
  space_info_cmd->add_option("--out", space_args.out);
  space_info_cmd->callback([&] { status = space_info(space_args, globals); });

  GroupArgs group_args;
  auto* group_cmd = app.add_subcommand("group", "Generate finite groups");
  group_cmd->require_subcommand(1);
  auto* group_gen_cmd = group_cmd->add_subcommand("gen", "Generate a group");
  group_gen_cmd->add_option("--kind", group_args.kind, "zn, z2pow, dihedral or z<k> for a power of Z/k");
  group_gen_cmd->add_option("--n", group_args.n);
  group_gen_cmd->add_option("--out", group_args.out);
  group_gen_cmd->add_option("--graph", group_args.graph, "Also write the Cayley graph");
  group_gen_cmd->add_option("--space", group_args.space, "Also write the word metric");
  group_gen_cmd->callback([&] { status = group_gen(group_args); });

  WitnessArgs w;
  bool R_given = false;
  auto* witness_cmd = app.add_subcommand("witness", "Build, convert and verify witnesses");
  witness_cmd->require_subcommand(1);
  auto* build = witness_cmd->add_subcommand("build", "Build a witness");
  build->add_option("--kind", w.kind, "ball, tree, trivial or folner");
  build->add_option("--space", w.space, "Space JSON");
  build->add_option("--radius", w.radius, "Ball radius");
  build->add_option("--R", w.R);
  build->add_option("--eps", w.eps);
  build->add_option("--p", w.p);
  build->add_option("--S", w.S, "Support radius for folner witnesses");
  build->add_option("--root", w.root, "Ray end of tree witnesses");
  build->add_option("--boundary", w.boundary, "truncate or extend");
  build->add_option("--group", w.group);
  build->add_option("--group-n", w.group_n);
  build->add_option("--out", w.out);
  build->add_option("--report", w.report);
  build->callback([&] { status = witness_build(w); });
  auto* convert = witness_cmd->add_subcommand("convert", "Convert a witness to another form");
  convert->add_option("--in", w.in)->required();
  convert->add_option("--space", w.space);
  convert->add_option("--to", w.to, "a-family, lp, tail, partition, vector or kernel")->required();
  convert->add_option("--R", w.R);
  convert->add_option("--p,--q", w.q, "Target exponent");
  convert->add_option("--N", w.N, "Bounded-geometry constant (defaults to the largest ball at the measured support)");
  convert->add_option("--M", w.M);
  convert->add_option("--delta", w.delta);
  convert->add_option("--truncation", w.truncation);
  convert->add_option("--out", w.out);
  convert->add_option("--report", w.report);
  convert->callback([&] { status = witness_convert(w); });
  auto* verify = witness_cmd->add_subcommand("verify", "Measure a witness");
  verify->add_option("--in", w.in)->required();
  verify->add_option("--space", w.space);
  auto* verify_R = verify->add_option("--R", w.R, "Scale (defaults to the declared R)");
  verify->add_option("--out,--report", w.out);
  verify->callback([&] {
    R_given = verify_R->count() > 0;
    status = witness_verify(w, R_given);
  });

  KernelArgs k;
  auto* kernel_cmd = app.add_subcommand("kernel", "Generate, classify and transform kernels");
  kernel_cmd->require_subcommand(1);
  auto* kgen = kernel_cmd->add_subcommand("gen", "Kernel from a space");
  kgen->add_option("--space", k.space)->required();
  kgen->add_option("--kind", k.kind, "distance (d^alpha) or exp (e^-t d)");
  kgen->add_option("--alpha", k.alpha);
  kgen->add_option("--t", k.t);
  kgen->add_option("--out", k.out);
  kgen->callback([&] { status = kernel_gen(k); });
  auto* kclass = kernel_cmd->add_subcommand("classify", "Positive and negative type tests");
  kclass->add_option("--in", k.in)->required();
  kclass->add_option("--space", k.space);
  kclass->add_option("--out", k.out);
  kclass->callback([&] { status = kernel_classify(k, globals); });
  auto* ktrans = kernel_cmd->add_subcommand("transform", "exp(-t k) or k^alpha");
  ktrans->add_option("--in", k.in)->required();
  ktrans->add_option("--op", k.op, "exp or power");
  ktrans->add_option("--t", k.t);
  ktrans->add_option("--alpha", k.alpha);
  ktrans->add_option("--out", k.out);
  ktrans->callback([&] { status = kernel_transform(k, globals); });

  SpectralArgs s;
  auto* spectral_cmd = app.add_subcommand("spectral", "Laplacian spectrum, expansion and Kazhdan constants");
  spectral_cmd->add_option("--graph,--in", s.graph, "Graph JSON");
  spectral_cmd->add_option("--kind", s.spec.kind, "cycle, hypercube, complete, random-regular, zn, z2pow, dihedral");
  add_generator_options(spectral_cmd, s.spec);
  spectral_cmd->add_flag("--expansion", s.expansion);
  spectral_cmd->add_flag("--kazhdan", s.kazhdan);
  spectral_cmd->add_option("--samples", s.samples);
  spectral_cmd->add_option("--csv", s.csv, "Spectrum CSV");
  spectral_cmd->add_option("--out", s.out);
  spectral_cmd->callback([&] { status = spectral(s, globals); });

  DiamArgs d;
  auto* diam_cmd = app.add_subcommand("diam", "Optimal support radius tables");
  diam_cmd->add_option("--group", d.group, "zn, z2pow, dihedral or z<k>");
  diam_cmd->add_option("--n", d.n);
  diam_cmd->add_option("--group-file", d.group_file);
  diam_cmd->add_option("--r,--R", d.R);
  diam_cmd->add_option("--eps", d.eps);
  diam_cmd->add_option("--form", d.form, "F, A or both");
  diam_cmd->add_flag("--growth", d.growth, "diamF(B^k; 1, eps) for k = 1..n");
  diam_cmd->add_option("--base", d.base, "Base group z<k> of the growth experiment");
  diam_cmd->add_option("--csv", d.csv);
  diam_cmd->add_option("--out", d.out);
  diam_cmd->callback([&] { status = diam(d, globals); });

  EmbedArgs e;
  auto* embed_cmd = app.add_subcommand("embed", "Embed a kernel and export its compression profile");
  embed_cmd->add_option("--kernel,--in", e.kernel)->required();
  embed_cmd->add_option("--space", e.space)->required();
  embed_cmd->add_option("--mode", e.mode, "positive or negative");
  embed_cmd->add_option("--bin", e.bin, "Profile bin width");
  embed_cmd->add_option("--csv", e.csv, "Coordinates CSV");
  embed_cmd->add_option("--profile", e.profile, "Profile CSV");
  embed_cmd->add_option("--out", e.out);
  embed_cmd->callback([&] { status = embed(e, globals); });

  ReportArgs r;
  auto* report_cmd = app.add_subcommand("report", "Report on any coarselab document");
  report_cmd->add_option("--in", r.in)->required();
  report_cmd->add_option("--space", r.space);
  report_cmd->add_option("--group-file", r.group_file);
  report_cmd->add_option("--R", r.R);
  report_cmd->add_option("--out", r.out);
  report_cmd->callback([&] { status = report(r, globals); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    return app.exit(err);
  } catch (const SchemaError& err) {
    std::cerr << "schema error at " << err.what() << '\n';
    return kSchema;
  } catch (const Error& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kRejected;
  }
  return status;
}
