#include "hclab/cli.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "hclab/chessboard.hpp"
#include "hclab/entropy.hpp"
#include "hclab/expansion.hpp"
#include "hclab/graph.hpp"
#include "hclab/hardcore.hpp"
#include "hclab/order.hpp"
#include "hclab/suite.hpp"
#include "hclab/verify.hpp"

namespace hclab {

namespace {

constexpr const char* kCsvVersion = "1";

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Every option any command may read; unused ones keep their defaults.
struct Options {
  // graph source
  std::string in;
  std::vector<int> torus;
  int cycle = 0;
  int hypercube = 0;
  // common parameters
  std::string lambda = "1";
  std::vector<std::string> lambda_grid;
  std::optional<std::uint64_t> seed;
  std::size_t cap = kEnumerationCap;
  bool unsafe_caps = false;
  std::string out;
  std::string json;
  std::string method = "auto";
  std::string grid;
  // module parameters
  int L = 4, d = 2, ell = 1, m = 1, k = 2, m0 = 4, max_degree = 3, n_max = 60;
  std::string c0_text = "2";
  double c0 = 4.0;
  double r = 1.0;
  double c = 1.0;
  std::string c_alpha = "1/100";
  std::string obs = "one";
  std::string config_bits;
  std::string event = "all";
  std::string base = "K2";
  std::size_t trials = 10;
  std::size_t steps = 100000;
  std::size_t samples = 100000;
  std::size_t delta = 4;
  std::optional<std::size_t> fixed_size;
  std::size_t N = 1;
  std::vector<int> deltas;
};

void add_graph_source(CLI::App* app, Options& o) {
  app->add_option("--in", o.in, "graph file");
  app->add_option("--torus", o.torus, "torus side and dimension: L d")->expected(2);
  app->add_option("--cycle", o.cycle, "cycle length");
  app->add_option("--hypercube", o.hypercube, "hypercube dimension");
}

BipartiteGraph load_source(const Options& o) {
  int given = !o.in.empty() + !o.torus.empty() + (o.cycle > 0) + (o.hypercube > 0);
  if (given != 1) throw UsageError("give exactly one of --in, --torus, --cycle, --hypercube");
  if (!o.in.empty()) {
    if (!std::filesystem::exists(o.in)) throw UsageError("no such graph file " + o.in);
    return load_graph_file(o.in);
  }
  if (!o.torus.empty()) return build_torus({o.torus[0], o.torus[1]});
  if (o.cycle > 0) return build_cycle(o.cycle);
  return build_hypercube(o.hypercube);
}

std::optional<TorusSpec> source_torus(const Options& o) {
  if (o.torus.size() == 2) return TorusSpec{o.torus[0], o.torus[1]};
  if (o.cycle > 0) return TorusSpec{o.cycle, 1};
  if (o.hypercube > 0) return TorusSpec{2, o.hypercube};
  return std::nullopt;
}

std::uint64_t need_seed(const Options& o) {
  if (!o.seed) throw UsageError("this command is stochastic: --seed is required");
  return *o.seed;
}

std::size_t checked_cap(const Options& o) {
  if (o.cap > kEnumerationCap && !o.unsafe_caps)
    throw UsageError("--cap above " + std::to_string(kEnumerationCap) + " needs --unsafe-caps");
  return o.cap;
}

std::vector<FugacityParams> parse_grid(const std::vector<std::string>& g) {
  std::vector<FugacityParams> out;
  for (const auto& s : g) out.push_back(FugacityParams::parse(s));
  return out;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty())
    out << text;
  else
    write_file_atomic(path, text);
}

std::string csv_header(const std::string& name, const std::vector<std::string>& cols) {
  std::string h = "# hclab " + name + " csv v" + kCsvVersion + " columns:";
  for (const auto& c : cols) h += " " + c;
  h += "\n";
  for (std::size_t i = 0; i < cols.size(); ++i) h += (i ? "," : "") + cols[i];
  return h + "\n";
}

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// ---------------------------------------------------------------- graph

int cmd_graph(const std::string& kind, const Options& o, std::ostream& out) {
  BipartiteGraph g;
  if (kind == "torus") g = build_torus({o.L, o.d});
  else if (kind == "cycle") g = build_cycle(o.L);
  else if (kind == "hypercube") g = build_hypercube(o.d);
  else if (kind == "gadget") g = build_linear_gadget(o.m).graph;
  else if (kind == "blowup") g = blow_up(load_source(o), o.m);
  else if (kind == "stretch") g = stretch_by_gadget(load_source(o), o.m);
  else throw UsageError("unknown graph kind " + kind);
  std::ostringstream os;
  save_graph(os, g);
  emit(os.str(), o.out, out);
  return kExitOk;
}

// ---------------------------------------------------------------- z and sample

int cmd_z(const Options& o, std::ostream& out) {
  auto lam = FugacityParams::parse(o.lambda);
  auto cap = checked_cap(o);
  auto spec = source_torus(o);
  std::string method = o.method;
  if (method == "auto") {
    auto g = load_source(o);
    method = g.vertex_count() <= cap || !spec ? "brute" : "transfer";
  }
  PartitionResult z;
  if (method == "brute") {
    z = partition_bruteforce(load_source(o), lam, cap);
  } else if (method == "transfer") {
    if (!spec) throw UsageError("the transfer method needs --torus");
    z = partition_transfer_torus(*spec, lam);
  } else {
    throw UsageError("unknown method " + method);
  }
  Json j = z.to_json();
  j["lambda"] = lam.label();
  emit(dump(j), o.json, out);
  return kExitOk;
}

int cmd_sample(const Options& o, std::ostream& out) {
  auto g = load_source(o);
  auto lam = FugacityParams::parse(o.lambda);
  const auto seed = need_seed(o);
  Json j;
  j["seed"] = seed;
  j["steps"] = o.steps;
  if (o.fixed_size) {
    auto s = sample_fixed_size(g, *o.fixed_size, o.steps, seed, checked_cap(o));
    j["mode"] = "fixed_size";
    j["N"] = *o.fixed_size;
    j["config"] = s.config.to_bits();
    j["uniform_start"] = s.uniform_start;
    if (s.irreducible) j["irreducible"] = *s.irreducible;
    if (s.class_size) j["class_size"] = s.class_size;
  } else {
    auto s = glauber_run(g, lam.lambda, o.steps, seed);
    j["mode"] = "glauber";
    j["lambda"] = lam.label();
    j["config"] = s.to_bits();
    j["occupied"] = s.count();
  }
  emit(dump(j), o.json, out);
  return kExitOk;
}

// ---------------------------------------------------------------- order

int cmd_order(const std::string& kind, const Options& o, std::ostream& out) {
  if (kind == "phi") {
    auto g = load_source(o);
    auto s = Configuration::from_bits(o.config_bits);
    if (s.size() != g.vertex_count()) throw UsageError("--config length differs from |V|");
    if (!is_independent(g, s)) throw UsageError("--config is not an independent set");
    auto f = coarse_field(g, s);
    auto r = roughness(g, s);
    auto occ = occupation(g, s);
    std::string phi;
    for (auto b : f.phi) phi += b ? '1' : '0';
    Json j;
    j["phi"] = phi;
    j["Phi"] = to_string(r.value);
    j["Phi_odd_formula"] = to_string(r.odd_formula);
    j["even"] = occ.even;
    j["odd"] = occ.odd;
    j["M"] = occ.m;
    emit(dump(j), o.json, out);
    return kExitOk;
  }
  if (kind == "scan-ebal") {
    TorusSpec spec{o.L, o.d};
    auto g = build_torus(spec);
    auto space = ConfigSpace::build(g, checked_cap(o));
    const std::uint64_t even = g.class_mask(Parity::Even);
    std::string csv = csv_header("order scan-ebal", {"L", "d", "lambda", "mu_balanced"});
    for (const auto& lam : parse_grid(o.lambda_grid)) {
      auto w = ConfigSpace::powers(lam.lambda, g.vertex_count());
      double z = 0, b = 0;
      for (auto s : space.configs) {
        auto occ = occupation_mask(s, even);
        z += w[occ.total];
        if (balanced_event(occ, g.vertex_count(), lam)) b += w[occ.total];
      }
      csv += std::to_string(o.L) + "," + std::to_string(o.d) + "," + lam.label() + "," + num(b / z) + "\n";
    }
    emit(csv, o.out, out);
    return kExitOk;
  }
  throw UsageError("unknown order command " + kind);
}

// ---------------------------------------------------------------- expansion

int report_exit(const CheckReport& r, const Options& o, std::ostream& out) {
  emit(dump(r.to_json()), o.json, out);
  return r.pass ? kExitOk : kExitFail;
}

int cmd_expansion(const std::string& kind, const Options& o, std::ostream& out) {
  if (kind == "cheeger") {
    auto g = load_source(o);
    auto c = cheeger_exact(g);
    Json j;
    j["h"] = to_string(c.value);
    j["h_value"] = c.value.get_d();
    j["witness"] = c.witness;
    if (auto spec = source_torus(o)) j["torus_bound"] = to_string(torus_cheeger_bound(*spec));
    emit(dump(j), o.json, out);
    return kExitOk;
  }
  if (kind == "cert-torus") {
    TorusSpec spec{o.L, o.d};
    auto cert = torus_local_expansion_certificate(spec);
    auto rep = verify_local_expansion(build_torus(spec), cert, VerifyMode::Exact);
    rep.details["C_LE"] = to_string(cert.c_le);
    rep.details["M_LE"] = to_string(cert.m_le);
    return report_exit(rep, o, out);
  }
  if (kind == "green") {
    auto g = load_source(o);
    auto table = green_table(g, o.m0);
    auto pos = check_green_positivity(table, g);
    CheckAccumulator acc("green", 0.0);
    acc.add_exact(pos.pass, pos.lhs, pos.rhs, "positivity");
    Json j;
    j["positivity"] = pos.to_json();
    try {
      auto wc = local_expansion_from_walk(g, o.m0, parse_rational(o.c0_text));
      acc.add_exact(wc.path_vert.pass, wc.path_vert.lhs, wc.path_vert.rhs, "path_vert");
      acc.add_exact(wc.edge_union.pass, wc.edge_union.lhs, wc.edge_union.rhs, "edge union");
      j["premise"] = wc.premise.to_json();
      j["path_vert"] = wc.path_vert.to_json();
      j["edge_union"] = wc.edge_union.to_json();
      j["C_LE"] = to_string(wc.cert.c_le);
      j["M_LE"] = to_string(wc.cert.m_le);
    } catch (const PreconditionError& e) {
      j["precondition"] = e.what();
    }
    auto r = acc.finish();
    r.details = j;
    return report_exit(r, o, out);
  }
  throw UsageError("unknown expansion command " + kind);
}

// ---------------------------------------------------------------- chess

LocalObservable chess_observable(const Options& o, const ReflectionGroupSpec& spec, const FugacityParams& lam) {
  const int bits = spec.block_bits();
  if (o.obs == "one") return LocalObservable::constant(bits, 1.0);
  if (o.obs.rfind("site:", 0) == 0) return LocalObservable::site_indicator(bits, std::stoi(o.obs.substr(5)));
  if (o.obs == "f" || o.obs == "indicator-b" || o.obs == "indicator-b0") {
    auto ph = phase_observable(spec, lam, parse_rational(o.c_alpha));
    if (o.obs == "f") return ph.as_local();
    return o.obs == "indicator-b" ? ph.indicator_b() : ph.indicator_b0();
  }
  if (std::filesystem::exists(o.obs)) {
    std::ifstream in(o.obs);
    LocalObservable f{bits, {}};
    double x;
    while (in >> x) f.table.push_back(x);
    if (f.table.size() != (std::size_t{1} << bits))
      throw UsageError("observable file needs 2^" + std::to_string(bits) + " values");
    return f;
  }
  throw UsageError("unknown observable " + o.obs + " (one, site:<b>, f, indicator-b, indicator-b0, or a file)");
}

int cmd_chess(const std::string& kind, const Options& o, std::ostream& out) {
  ReflectionGroupSpec spec{o.ell, o.L, o.d};
  spec.validate();
  auto lam = FugacityParams::parse(o.lambda);
  if (kind == "seminorm") {
    auto ctx = ChessContext::build(spec, checked_cap(o));
    auto f = chess_observable(o, spec, lam);
    auto v = chessboard_seminorm(ctx, f, lam.lambda);
    Json j;
    j["norm"] = v.norm;
    j["inner"] = v.inner;
    j["clamped"] = v.clamped;
    j["group_size"] = ctx.elements.size();
    emit(dump(j), o.json, out);
    return kExitOk;
  }
  if (kind == "compare-tori") {
    auto f = chess_observable(o, spec, lam);
    return report_exit(seminorm_torus_comparison(f, o.ell, o.L, o.d, lam.lambda), o, out);
  }
  if (kind == "phase-scan") {
    auto ctx = ChessContext::build(spec, checked_cap(o));
    const Rational ca = parse_rational(o.c_alpha);
    std::string csv = csv_header("chess phase-scan",
                                 {"ell", "L", "d", "lambda", "c_alpha", "mean_f", "p_B", "separator_pass"});
    bool all = true;
    for (const auto& l : parse_grid(o.lambda_grid)) {
      auto ph = phase_observable(spec, l, ca);
      auto ez = check_f_expectation_zero(ctx, ph, l);
      auto sep = check_separator_exhaustive(ctx, ph);
      auto w = ConfigSpace::powers(l.lambda, ctx.graph.vertex_count());
      double z = 0, pb = 0;
      for (auto s : ctx.configs) {
        double wt = w[std::popcount(s)];
        z += wt;
        if (ph.in_b(ctx.pattern(s, 0))) pb += wt;
      }
      all = all && ez.pass && sep.pass;
      csv += std::to_string(o.ell) + "," + std::to_string(o.L) + "," + std::to_string(o.d) + "," + l.label() + "," +
             to_string(ca) + "," + num(ez.lhs) + "," + num(pb / z) + "," + (sep.pass ? "1" : "0") + "\n";
    }
    emit(csv, o.out, out);
    return all ? kExitOk : kExitFail;
  }
  throw UsageError("unknown chess command " + kind);
}

// ---------------------------------------------------------------- check

CheckReport run_check(const std::string& id, const Options& o) {
  auto lam = FugacityParams::parse(o.lambda);
  if (id == "shearer") {
    std::mt19937_64 rng(need_seed(o));
    CheckAccumulator acc("shearer", 1e-10);
    std::uniform_int_distribution<int> pick(1, 3);
    for (std::size_t i = 0; i < o.trials; ++i) {
      int coords = pick(rng);
      auto joint = random_tuple_distribution(coords, rng);
      auto k = random_subset_distribution(coords, rng);
      double p = k.min_inclusion(coords);
      for (const auto& r : {shearer_check(joint, coords, k, p), shearer_chain_route_check(joint, coords, k, p),
                            shearer_choquet_route_check(joint, coords, k, p)})
        acc.add_exact(r.pass, r.lhs, r.rhs, r.id + " trial " + std::to_string(i));
    }
    auto r = acc.finish();
    r.details["trials"] = o.trials;
    r.details["seed"] = *o.seed;
    return r;
  }
  if (id == "variational") {
    // Gibbs law and the empty configuration; random laws only with --seed.
    auto g = load_source(o);
    CheckAccumulator acc("variational", 1e-10);
    auto add = [&](const FiniteDistribution& d, const std::string& tag) {
      auto r = variational_identity_check(g, lam, d);
      acc.add_eq(r.lhs, r.rhs, tag);
    };
    add(gibbs_distribution(g, lam), "gibbs");
    add(FiniteDistribution::point_mass(0), "empty");
    if (o.seed) {
      std::mt19937_64 rng(*o.seed);
      auto configs = enumerate_configs(g, checked_cap(o));
      for (std::size_t i = 0; i < o.trials; ++i) add(random_config_distribution(configs, rng), "trial " + std::to_string(i));
    }
    return acc.finish();
  }
  if (id == "trivial-bound") return trivial_lower_bound_check(load_source(o), lam, checked_cap(o));
  if (id == "m-le-phi") {
    auto g = load_source(o);
    Rational h = cheeger_exact(g).value;
    CheckAccumulator acc("m_le_phi", 0.0);
    for_each_config(g, [&](std::uint64_t s) {
      auto r = check_M_le_Phi(g, Configuration::from_mask(g.vertex_count(), s), h);
      acc.add_exact(r.pass, r.lhs, r.rhs, "mask " + std::to_string(s));
    }, checked_cap(o));
    auto r = acc.finish();
    r.details["h"] = to_string(h);
    return r;
  }
  if (id == "three-term" || id == "gain-terms" || id == "loss-term") {
    auto g = load_source(o);
    auto scheme = ExposureScheme::iid(g);
    std::vector<FiniteDistribution> dists{gibbs_distribution(g, lam)};
    if (o.seed) {
      std::mt19937_64 rng(*o.seed);
      auto configs = enumerate_configs(g, checked_cap(o));
      for (std::size_t i = 0; i < o.trials; ++i) dists.push_back(random_config_distribution(configs, rng));
    }
    CheckAccumulator acc(id, 1e-10);
    Json reports = Json::array();
    std::optional<CertifiedExpansion> ce;
    if (id == "loss-term") ce = certified_expansion(g, source_torus(o));
    for (const auto& d : dists) {
      CheckReport r;
      if (id == "three-term") r = three_term_check(g, d, scheme, lam);
      else if (id == "gain-terms") r = gain_terms_check(g, d, scheme, lam);
      else r = loss_term_check(g, phi_distribution(g, d), scheme.a_dist, ce->cert);
      acc.add_exact(r.pass, r.lhs, r.rhs);
      reports.push_back(r.to_json());
    }
    auto r = acc.finish();
    r.details["instances"] = reports;
    if (ce) r.details["certificate"] = ce->kind;
    return r;
  }
  if (id == "coupling") return two_neighbour_coupling_check(load_source(o), ExposureScheme::iid(load_source(o)));
  if (id == "exposure") return exposure_density_check(o.delta, o.samples, need_seed(o));
  if (id == "hoeffding") {
    std::vector<Rational> ps;
    for (int i = 1; i <= 9; ++i) ps.push_back(ratio(i, 10));
    return hoeffding_check(o.n_max, ps);
  }
  if (id == "fixed-size") {
    auto g = load_source(o);
    const std::uint64_t even = g.class_mask(Parity::Even);
    std::function<bool(std::uint64_t)> ev;
    if (o.event == "all") ev = [](std::uint64_t) { return true; };
    else if (o.event == "first-site") ev = [](std::uint64_t s) { return (s & 1) != 0; };
    else if (o.event == "m-ge-1") ev = [even](std::uint64_t s) { return occupation_mask(s, even).m >= 1; };
    else throw UsageError("unknown event " + o.event + " (all, first-site, m-ge-1)");
    return fixed_size_chain_check(g, o.N, ev);
  }
  if (id == "main") {
    auto g = load_source(o);
    return main_theorem_study(g, lam, o.r, cheeger_exact(g).value).report;
  }
  if (id == "corollary") return corollary_torus_study({o.L, o.d}, lam, o.c0).report;
  if (id == "free-energy-gap") return free_energy_gap({o.L, o.d}, lam);
  if (id == "separator" || id == "f-zero" || id == "contour" || id == "bad-norm" || id == "stabilizers" ||
      id == "group") {
    ReflectionGroupSpec spec{o.ell, o.L, o.d};
    if (id == "stabilizers") return check_stabilizers(spec);
    if (id == "group") return check_group_structure(spec);
    auto ctx = ChessContext::build(spec, checked_cap(o));
    auto ph = phase_observable(spec, lam, parse_rational(o.c_alpha));
    if (id == "separator") return check_separator_exhaustive(ctx, ph);
    if (id == "f-zero") return check_f_expectation_zero(ctx, ph, lam);
    if (id == "bad-norm") return bad_norm_halfspace_check(ctx, lam, parse_rational(o.c_alpha));
    std::vector<std::vector<int>> blocks;
    for (int i = 0; i < o.k && i < static_cast<int>(ctx.elements.size()); ++i) {
      std::vector<int> s(o.d, 0);
      s[0] = i;
      blocks.push_back(s);
    }
    return contour_probability_chain(ctx, ph, lam, blocks);
  }
  if (id == "blow-up") {
    BipartiteGraph f = o.base == "K2" ? build_torus({2, 1}) : o.base == "C4" ? build_cycle(4) : load_source(o);
    return blow_up_equivalence_check(f, o.m, parse_rational(o.lambda));
  }
  if (id == "gadget-reduction") return gadget_reduction_check(o.m, o.k, lam);
  if (id == "weitz") {
    Rational w = weitz_threshold(o.max_degree);
    double v = weitz_threshold_value(o.max_degree);
    auto r = eq_report("weitz", w.get_d(), v, 1e-12 * std::max(1.0, v));
    r.details["exact"] = to_string(w);
    r.details["delta_times_value_over_e"] = o.max_degree * v / std::exp(1.0);
    return r;
  }
  throw UsageError("unknown check id " + id);
}

const char* kCheckIds =
    "shearer variational trivial-bound m-le-phi three-term gain-terms loss-term coupling exposure hoeffding "
    "fixed-size main corollary free-energy-gap separator f-zero contour bad-norm stabilizers group blow-up "
    "gadget-reduction weitz";

// ---------------------------------------------------------------- fit

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw UsageError("bad JSON in " + path + ": " + e.what());
  }
}

BipartiteGraph graph_from_json(const Json& j) {
  if (j.contains("torus")) return build_torus({j["torus"][0].get<int>(), j["torus"][1].get<int>()});
  if (j.contains("cycle")) return build_cycle(j["cycle"].get<int>());
  if (j.contains("hypercube")) return build_hypercube(j["hypercube"].get<int>());
  if (j.contains("in")) return load_graph_file(j["in"].get<std::string>());
  throw UsageError("grid entry needs torus, cycle, hypercube or in");
}

std::optional<TorusSpec> torus_from_json(const Json& j) {
  if (j.contains("torus")) return TorusSpec{j["torus"][0].get<int>(), j["torus"][1].get<int>()};
  if (j.contains("cycle")) return TorusSpec{j["cycle"].get<int>(), 1};
  if (j.contains("hypercube")) return TorusSpec{2, j["hypercube"].get<int>()};
  return std::nullopt;
}

std::string lambda_text(const Json& j) {
  return j.is_string() ? j.get<std::string>() : num(j.get<double>());
}

ConstantFit run_fit(const std::string& id, const Options& o) {
  Json grid = o.grid.empty() ? Json::object() : read_json_file(o.grid);
  if (id == "prop-I-le-Phi") {
    Json graphs = grid.value("graphs", Json::parse(R"([{"cycle":4},{"torus":[4,2]},{"torus":[2,3]}])"));
    Json lambdas = grid.value("lambdas", Json::parse(R"(["1/2","1","2"])"));
    const std::size_t random = grid.value("random", std::size_t{50});
    std::mt19937_64 rng(grid.value("seed", o.seed.value_or(1)));
    std::vector<std::unique_ptr<BipartiteGraph>> keep;
    std::vector<PropInstance> inst;
    for (const auto& gj : graphs) {
      keep.push_back(std::make_unique<BipartiteGraph>(graph_from_json(gj)));
      const auto& g = *keep.back();
      auto ce = certified_expansion(g, torus_from_json(gj));
      auto configs = enumerate_configs(g, checked_cap(o));
      for (const auto& lj : lambdas) {
        auto lam = FugacityParams::parse(lambda_text(lj));
        const std::string label = gj.dump() + " lambda=" + lam.label();
        inst.push_back({label + " gibbs", &g, lam, gibbs_distribution(g, lam), ce.cert.c_le, ce.cert.m_le});
        inst.push_back({label + " empty", &g, lam, FiniteDistribution::point_mass(0), ce.cert.c_le, ce.cert.m_le});
        for (std::size_t i = 0; i < random; ++i)
          inst.push_back({label + " random " + std::to_string(i), &g, lam,
                          random_config_distribution(configs, rng), ce.cert.c_le, ce.cert.m_le});
      }
    }
    return prop_I_le_Phi_constant_fit(inst);
  }
  if (id == "main") {
    Json insts = grid.value("instances", Json::parse(R"([
      {"torus":[4,2],"lambda":"4","r":1},{"torus":[4,2],"lambda":"8","r":1},{"torus":[4,2],"lambda":"8","r":2},
      {"hypercube":4,"lambda":"4","r":1},{"hypercube":4,"lambda":"8","r":2}])"));
    std::vector<std::pair<std::string, MainStudy>> studies;
    for (const auto& ij : insts) {
      auto g = graph_from_json(ij);
      auto lam = FugacityParams::parse(lambda_text(ij["lambda"]));
      studies.emplace_back(ij.dump(), main_theorem_study(g, lam, ij.value("r", 1.0), cheeger_exact(g).value));
    }
    return main_theorem_fit(studies);
  }
  if (id == "corollary") {
    Json insts = grid.value("instances", Json::parse(R"([
      {"torus":[4,2],"lambda":"2","c0":4},{"torus":[4,2],"lambda":"4","c0":4},{"torus":[4,2],"lambda":"8","c0":4}])"));
    std::vector<std::tuple<TorusSpec, FugacityParams, double>> g;
    for (const auto& ij : insts)
      g.emplace_back(*torus_from_json(ij), FugacityParams::parse(lambda_text(ij["lambda"])), ij.value("c0", 4.0));
    return corollary_torus_fit(g);
  }
  if (id == "free-energy-gap") {
    Json insts = grid.value("instances", Json::parse(R"([
      {"torus":[4,2],"lambda":"1/2"},{"torus":[4,2],"lambda":"1"},{"torus":[4,2],"lambda":"2"},{"torus":[4,2],"lambda":"4"},
      {"torus":[6,2],"lambda":"1"},{"torus":[4,1],"lambda":"1"}])"));
    std::vector<std::pair<TorusSpec, FugacityParams>> g;
    for (const auto& ij : insts) g.emplace_back(*torus_from_json(ij), FugacityParams::parse(lambda_text(ij["lambda"])));
    return free_energy_gap_fit(g, grid.value("c", o.c));
  }
  throw UsageError("unknown fit id " + id + " (prop-I-le-Phi, main, corollary, free-energy-gap)");
}

// ---------------------------------------------------------------- sweep

int cmd_sweep(const std::string& name, const Options& o, std::ostream& out) {
  auto grid = parse_grid(o.lambda_grid);
  std::string csv;
  if (name == "gap") {
    csv = csv_header("sweep gap", {"L", "d", "lambda", "gap"});
    for (const auto& lam : grid) {
      auto r = free_energy_gap({o.L, o.d}, lam);
      csv += std::to_string(o.L) + "," + std::to_string(o.d) + "," + lam.label() + "," +
             num(r.details["gap"].get<double>()) + "\n";
    }
  } else if (name == "ebal") {
    csv = csv_header("sweep ebal", {"m", "k", "lambda", "mu_balanced"});
    for (const auto& lam : grid)
      csv += std::to_string(o.m) + "," + std::to_string(o.k) + "," + lam.label() + "," +
             num(gadget_balance_reduced(o.m, o.k, lam)) + "\n";
  } else if (name == "gadget-scan") {
    csv = csv_header("sweep gadget-scan", {"delta", "m", "lambda", "log_delta_over_delta", "mu_balanced"});
    std::vector<double> lams;
    for (const auto& l : grid) lams.push_back(l.lambda);
    for (const auto& row : gadget_threshold_scan(o.deltas, lams, o.m))
      csv += std::to_string(row.delta) + "," + std::to_string(row.m) + "," + num(row.lambda) + "," +
             num(row.log_delta_over_delta) + "," + num(row.mu_balanced) + "\n";
  } else if (name == "main-mu") {
    auto g = load_source(o);
    Rational h = cheeger_exact(g).value;
    csv = csv_header("sweep main-mu", {"lambda", "r", "mu_event", "log_ratio"});
    for (const auto& lam : grid) {
      auto st = main_theorem_study(g, lam, o.r, h);
      csv += lam.label() + "," + num(o.r) + "," + num(st.mu_event) + "," + num(st.log_ratio) + "\n";
    }
  } else {
    throw UsageError("unknown sweep " + name + " (gap, ebal, gadget-scan, main-mu)");
  }
  emit(csv, o.out, out);
  return kExitOk;
}

// ---------------------------------------------------------------- suite

int cmd_suite(const std::string& name, const Options& o, std::ostream& out) {
  if (name != "desk") throw UsageError("unknown suite " + name + " (desk)");
  bool all = true;
  Json j = Json::array();
  for (const auto& c : desk_criteria()) {
    auto r = run_criterion(c);
    all = all && r.pass;
    out << format_result_line(r) << std::endl;
    Json e;
    e["criterion"] = r.number;
    e["title"] = r.title;
    e["pass"] = r.pass;
    e["summary"] = r.summary;
    e["details"] = r.details;
    j.push_back(e);
  }
  if (!o.json.empty()) write_file_atomic(o.json, dump(j));
  out << (all ? "all criteria passed" : "some criteria failed") << std::endl;
  return all ? kExitOk : kExitFail;
}

// Appends "--key value" for config keys the command line does not set.
std::vector<std::string> merge_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i)
    if (args[i] == "--config-file") {
      if (i + 1 >= args.size()) throw UsageError("--config-file needs a file");
      path = args[i + 1];
      args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
      break;
    }
  if (path.empty()) return args;
  Json cfg = read_json_file(path);
  if (!cfg.is_object()) throw UsageError("config file must hold a JSON object");
  for (auto it = cfg.begin(); it != cfg.end(); ++it) {
    const std::string flag = "--" + it.key();
    bool present = false;
    for (const auto& a : args) present = present || a == flag || a.rfind(flag + "=", 0) == 0;
    if (present) continue;
    const Json& v = it.value();
    if (v.is_boolean()) {
      if (v.get<bool>()) args.push_back(flag);
    } else if (v.is_array()) {
      args.push_back(flag);
      for (const auto& x : v) args.push_back(x.is_string() ? x.get<std::string>() : x.dump());
    } else {
      args.push_back(flag);
      args.push_back(v.is_string() ? v.get<std::string>() : v.dump());
    }
  }
  return args;
}

}  // namespace

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + tmp.string());
    f << content;
    if (!f.flush()) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, target);
}

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"hclab: hard-core model library and checks"};
  app.require_subcommand(1);
  app.footer("Any command also takes --config-file FILE: a JSON object of option values; flags on the command line win.");
  std::string kind, id;

  auto common = [&](CLI::App* a) {
    a->add_option("--lambda", o.lambda, "fugacity, e.g. 1, 1/2, 0.25");
    a->add_option("--seed", o.seed, "random seed");
    a->add_option("--cap", o.cap, "enumeration cap on |V|");
    a->add_flag("--unsafe-caps", o.unsafe_caps, "allow caps above the defaults");
    a->add_option("--json", o.json, "write the JSON report here");
    a->add_option("--out", o.out, "write the output here");
  };
  auto sizes = [&](CLI::App* a) {
    a->add_option("--L", o.L, "torus side");
    a->add_option("--d", o.d, "dimension");
    a->add_option("--l", o.ell, "block side");
    a->add_option("--m", o.m, "gadget blocks or blow-up factor");
    a->add_option("--k", o.k, "blow-up factor or number of blocks");
    a->add_option("--lambda-grid", o.lambda_grid, "fugacity grid");
    a->add_option("--c-alpha", o.c_alpha, "phase observable constant");
  };

  auto* graph = app.add_subcommand("graph", "build and write graphs");
  graph->add_option("kind", kind, "torus, cycle, hypercube, gadget, blowup, stretch")->required();
  add_graph_source(graph, o);
  sizes(graph);
  common(graph);

  auto* z = app.add_subcommand("z", "partition function");
  add_graph_source(z, o);
  z->add_option("--method", o.method, "auto, brute or transfer");
  common(z);

  auto* sample = app.add_subcommand("sample", "Glauber or fixed-size sampling");
  add_graph_source(sample, o);
  sample->add_option("--steps", o.steps, "chain steps");
  sample->add_option("--fixed-size", o.fixed_size, "sample uniformly among sets of this size");
  common(sample);

  auto* order = app.add_subcommand("order", "coarse field and balance scans");
  order->add_option("kind", kind, "phi or scan-ebal")->required();
  add_graph_source(order, o);
  order->add_option("--config", o.config_bits, "configuration as 0/1 string");
  sizes(order);
  common(order);

  auto* expansion = app.add_subcommand("expansion", "Cheeger constants and local expansion");
  expansion->add_option("kind", kind, "cheeger, cert-torus or green")->required();
  add_graph_source(expansion, o);
  expansion->add_option("--M0", o.m0, "walk length");
  expansion->add_option("--C0", o.c0_text, "return-probability constant");
  sizes(expansion);
  common(expansion);

  auto* chess = app.add_subcommand("chess", "reflection group, seminorms and phase observable");
  chess->add_option("kind", kind, "seminorm, compare-tori or phase-scan")->required();
  chess->add_option("--obs", o.obs, "one, site:<b>, f, indicator-b, indicator-b0 or a file");
  sizes(chess);
  common(chess);

  auto* check = app.add_subcommand("check", std::string("run one check: ") + kCheckIds);
  check->add_option("id", id, "check id")->required();
  add_graph_source(check, o);
  sizes(check);
  common(check);
  check->add_option("--trials", o.trials, "random instances");
  check->add_option("--samples", o.samples, "Monte Carlo samples");
  check->add_option("--delta", o.delta, "degree");
  check->add_option("--n-max", o.n_max, "largest n");
  check->add_option("--N", o.N, "fixed size");
  check->add_option("--event", o.event, "all, first-site or m-ge-1");
  check->add_option("--r", o.r, "threshold on M");
  check->add_option("--c0", o.c0, "bad-event constant");
  check->add_option("--Delta", o.max_degree, "maximum degree");
  check->add_option("--base", o.base, "K2, C4 or graph source");

  auto* fit = app.add_subcommand("fit", "constant-fit studies");
  fit->add_option("id", id, "prop-I-le-Phi, main, corollary, free-energy-gap")->required();
  fit->add_option("--grid", o.grid, "grid JSON file");
  fit->add_option("--c", o.c, "decay constant for free-energy-gap");
  common(fit);

  auto* sweep = app.add_subcommand("sweep", "CSV sweeps");
  sweep->add_option("name", kind, "gap, ebal, gadget-scan, main-mu")->required();
  add_graph_source(sweep, o);
  sizes(sweep);
  sweep->add_option("--deltas", o.deltas, "degrees (multiples of 3)");
  sweep->add_option("--r", o.r, "threshold on M");
  common(sweep);

  auto* suite = app.add_subcommand("suite", "acceptance grid");
  suite->add_option("name", kind, "desk")->required();
  common(suite);

  try {
    args = merge_config(std::move(args));
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    std::string help;
    for (auto* sub : app.get_subcommands())
      if (sub->parsed()) help = sub->help();
    err << "error: " << e.what() << "\n";
    if (!help.empty()) err << help;
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (graph->parsed()) return cmd_graph(kind, o, out);
    if (z->parsed()) return cmd_z(o, out);
    if (sample->parsed()) return cmd_sample(o, out);
    if (order->parsed()) return cmd_order(kind, o, out);
    if (expansion->parsed()) return cmd_expansion(kind, o, out);
    if (chess->parsed()) return cmd_chess(kind, o, out);
    if (check->parsed()) return report_exit(run_check(id, o), o, out);
    if (fit->parsed()) {
      auto f = run_fit(id, o);
      emit(dump(f.to_json()), o.json, out);
      return f.certified ? kExitOk : kExitFail;
    }
    if (sweep->parsed()) return cmd_sweep(kind, o, out);
    if (suite->parsed()) return cmd_suite(kind, o, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const CapExceeded& e) {
    err << "error: " << e.what() << " (raise --cap with --unsafe-caps)\n";
    return kExitUsage;
  } catch (const GraphError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitUsage;
}

}  // namespace hclab
