#include "hofa/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include "hofa/consistency.hpp"
#include "hofa/factors.hpp"
#include "hofa/io.hpp"
#include "hofa/limits.hpp"
#include "hofa/linear_systems.hpp"
#include "hofa/uniformity.hpp"

namespace hofa::cli {

namespace {

using io::Json;

struct Config {
  std::string command;
  int p = 2;
  int n = 0;
  int d = 2;
  int k = 0;
  int r = 1;
  int m = 2;
  int t = 1;
  double tau = 0.26;
  double eps = 1e-3;
  std::uint64_t samples = 100000;
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "json";
  bool force = false;
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());

  std::string mode = "exact";
  std::string embedding = "sign";
  std::string kind;
  std::string action;
  std::string table;
  std::string poly;
  std::string system;
  std::string factor;
  std::string limit;
  std::vector<std::string> tables;
  std::vector<std::string> systems;
  std::vector<int> degrees;
  std::vector<int> depths;
  std::vector<int> tuple;
  bool exact_type = false;
  bool inversion = true;
  bool hex = false;
  std::size_t burn_in = 0;
  std::uint64_t cap = 1u << 16;
  std::uint64_t random_extra = 64;

  RunOptions options() const {
    RunOptions o;
    o.workers = workers;
    if (force) o.work_ceiling = std::numeric_limits<double>::infinity();
    return o;
  }

  Json to_json() const {
    return Json{{"command", command}, {"p", p}, {"n", n}, {"d", d}, {"k", k}, {"r", r}, {"m", m}, {"t", t},
                {"tau", tau}, {"eps", eps}, {"samples", samples}, {"seed", seed}, {"out", out},
                {"format", format}, {"force", force}, {"workers", workers}, {"mode", mode},
                {"embedding", embedding}, {"kind", kind}, {"action", action}, {"table", table},
                {"poly", poly}, {"system", system}, {"factor", factor}, {"limit", limit},
                {"tables", tables}, {"systems", systems}, {"degrees", degrees}, {"depths", depths},
                {"tuple", tuple}, {"exact_type", exact_type}, {"inversion", inversion}, {"hex", hex},
                {"burn_in", burn_in}, {"cap", cap}, {"random_extra", random_extra}};
  }
};

std::string rational_string(const Rational& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

void flatten(const Json& j, const std::string& path, std::ostream& os) {
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) flatten(value, path.empty() ? key : path + "." + key, os);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], path + "." + std::to_string(i), os);
  } else if (j.is_number_float()) {
    os << csv_field(path) << "," << format_double(j.get<double>()) << "\n";
  } else if (j.is_string()) {
    os << csv_field(path) << "," << csv_field(j.get<std::string>()) << "\n";
  } else if (j.is_null()) {
    os << csv_field(path) << ",\n";
  } else {
    os << csv_field(path) << "," << j.dump() << "\n";
  }
}

std::string render(const Json& result, const std::string& format) {
  if (format == "csv") {
    std::ostringstream os;
    os << "field,value\n";
    flatten(result, "", os);
    return os.str();
  }
  return result.dump(2) + "\n";
}

void log_line(std::ostream& err, const Json& j) { err << j.dump() << "\n"; }

void announce_work(std::ostream& err, double estimate, const RunOptions& options) {
  log_line(err, Json{{"work_estimate", estimate},
                     {"work_ceiling", std::isinf(options.work_ceiling) ? Json("none") : Json(options.work_ceiling)}});
}

void require(bool ok, const std::string& code, const std::string& message) {
  if (!ok) throw ValidationError(code, message);
}

LinearFormSystem load_system(const std::string& path) {
  require(!path.empty(), "config.missing", "--system is required");
  return io::system_from_json(io::read_json_file(path));
}

BoolFunction load_table(const std::string& path) {
  require(!path.empty(), "config.missing", "--table is required");
  return io::bool_table_from_json(io::read_json_file(path));
}

NCPolynomial load_poly(const std::string& path) {
  require(!path.empty(), "config.missing", "--poly is required");
  return io::polynomial_from_json(io::read_json_file(path));
}

// ---------------------------------------------------------- commands

Json cmd_gowers(const Config& c, std::ostream& err) {
  const auto opts = c.options();
  require(c.table.empty() != c.poly.empty(), "config.input", "give exactly one of --table or --poly");
  ComplexFunction f;
  if (!c.table.empty()) {
    const auto table = load_table(c.table);
    require(c.embedding == "sign" || c.embedding == "indicator", "config.embedding", "embedding must be sign or indicator");
    f = c.embedding == "sign" ? sign_embedding(table) : indicator_embedding(table);
  } else {
    f = phase(load_poly(c.poly));
  }
  require(c.d >= 1, "gowers.degree", "d must be at least 1");
  NormEstimate est;
  if (c.mode == "exact") {
    const double work = gowers_norm_exact_work(f.p, f.n, c.d, true);
    announce_work(err, work, opts);
    est = gowers_norm_exact(f, c.d, opts, true);
  } else {
    require(c.mode == "mc", "config.mode", "mode must be exact or mc");
    announce_work(err, static_cast<double>(c.samples) * std::pow(2.0, c.d), opts);
    est = gowers_norm_mc(f, c.d, c.samples, {c.seed, 0});
  }
  return Json{{"command", "gowers"}, {"p", f.p}, {"n", f.n}, {"d", c.d}, {"mode", c.mode},
              {"value", est.value}, {"inner", est.inner}, {"samples", est.samples},
              {"standard_error", est.standard_error}};
}

Json cmd_tl(const Config& c, std::ostream& err) {
  const auto opts = c.options();
  const auto f = load_table(c.table);
  const auto system = load_system(c.system);
  Json out{{"command", "tl"}, {"p", f.p}, {"n", f.n}, {"m", system.size()}, {"mode", c.mode}};
  if (c.mode == "exact") {
    announce_work(err, t_L_work(f.p, f.n, system), opts);
    const auto t = t_L_exact(f, system, opts);
    out["value"] = to_double(t);
    out["exact"] = rational_string(t);
  } else {
    require(c.mode == "mc", "config.mode", "mode must be exact or mc");
    announce_work(err, static_cast<double>(c.samples * std::max<std::size_t>(1, system.size())), opts);
    const auto est = t_L_mc(f, system, c.samples, {c.seed, 0});
    out["value"] = est.value;
    out["standard_error"] = est.standard_error;
    out["samples"] = est.samples;
  }
  return out;
}

Json cmd_mu(const Config& c, std::ostream& err) {
  const auto opts = c.options();
  const auto f = load_table(c.table);
  const auto system = load_system(c.system);
  const double base = t_L_work(f.p, f.n, system);
  announce_work(err, c.inversion ? base * std::pow(2.0, static_cast<double>(system.size())) : base, opts);
  const auto dist = mu_f_exact(f, system, opts);
  Json out{{"command", "mu"}, {"distribution", io::to_json(dist)}};
  if (c.inversion) {
    const auto t = subsystem_averages(f, system, opts);
    const auto rebuilt = mu_from_t(system, t);
    const auto tv = tv_distance_exact(dist, rebuilt);
    Json moments = Json::array();
    for (std::size_t mask = 0; mask < t.size(); ++mask) {
      moments.push_back(Json{{"subset", io::pattern_string(mask, system.size())}, {"t", to_double(t[mask])},
                             {"exact", rational_string(t[mask])}});
    }
    out["inversion"] = Json{{"moments", moments}, {"consistent", rebuilt.consistent},
                            {"tv", to_double(tv)}, {"tv_exact", rational_string(tv)}};
  }
  return out;
}

ConsistencySpec spec_from(const Config& c, int p) {
  if (c.degrees.empty()) return ConsistencySpec::single(p, c.d, c.k);
  require(c.degrees.size() == c.depths.size(), "config.spec", "--degrees and --depths differ in length");
  std::vector<DegreeDepth> coords;
  for (std::size_t i = 0; i < c.degrees.size(); ++i) coords.push_back({c.degrees[i], c.depths[i]});
  return {p, std::move(coords)};
}

Json cmd_consistency(const Config& c, std::ostream& err) {
  const auto opts = c.options();
  const auto system = load_system(c.system);
  const auto spec = spec_from(c, system.p());
  double work = 0;
  for (const auto& s : spec.coords) {
    work += std::pow(std::pow(static_cast<double>(system.p()), s.k + 1), static_cast<double>(system.size())) *
            static_cast<double>(std::max<std::size_t>(1, allowed_monomials(system.p(), system.ell(), s.d, s.k).size()));
  }
  announce_work(err, work, opts);
  if (!c.tuple.empty()) {
    require(spec.coords.size() == 1, "config.spec", "a tuple query takes a single (d, k)");
    ValueTuple b;
    for (int v : c.tuple) {
      require(v >= 0, "consistency.tuple", "numerators must be non-negative");
      b.push_back(static_cast<std::uint32_t>(v));
    }
    const auto res = is_consistent(system, spec.coords[0].d, spec.coords[0].k, b, c.exact_type, opts);
    Json out{{"command", "consistency"}, {"system", io::to_json(system)}, {"d", spec.coords[0].d},
             {"k", spec.coords[0].k}, {"tuple", c.tuple}, {"exact_type", c.exact_type}, {"consistent", res.consistent}};
    out["witness"] = res.witness ? io::to_json(*res.witness) : Json(nullptr);
    return out;
  }
  const auto set = enumerate_consistent(system, spec, opts);
  Json out = io::to_json(set);
  out["command"] = "consistency";
  return out;
}

PolynomialFactor factor_from(const Config& c) {
  if (!c.factor.empty()) return io::factor_from_json(io::read_json_file(c.factor));
  require(!c.degrees.empty(), "config.missing", "give --factor or --degrees/--depths with --r");
  require(c.degrees.size() == c.depths.size(), "config.spec", "--degrees and --depths differ in length");
  return high_rank_family(c.p, c.degrees, c.depths, c.r).factor;
}

Json cmd_equidist(const Config& c, std::ostream& err) {
  const auto opts = c.options();
  const auto factor = factor_from(c);
  const auto system = load_system(c.system);
  const bool exact = c.mode == "exact";
  require(exact || c.mode == "mc", "config.mode", "mode must be exact or mc");
  const double points = exact ? std::pow(std::pow(static_cast<double>(factor.p()), factor.n()), system.ell())
                              : static_cast<double>(c.samples);
  announce_work(err, points * static_cast<double>(system.size() * factor.size()), opts);
  const auto rep = equidistribution_report(factor, system, exact ? EquidistMode::exact : EquidistMode::mc, c.samples,
                                           {c.seed, 0}, opts);
  const auto set = enumerate_consistent(system, ConsistencySpec::of(factor), opts);
  Json freqs = Json::array();
  for (const auto& [t, count] : rep.counts) {
    freqs.push_back(Json{{"tuple", t}, {"count", count},
                         {"frequency", static_cast<double>(count) / static_cast<double>(rep.total)},
                         {"consistent", set.contains(t)}});
  }
  return Json{{"command", "equidist"}, {"mode", c.mode}, {"n", factor.n()}, {"m", system.size()},
              {"K", rep.K}, {"uniform", 1.0 / static_cast<double>(rep.K)}, {"max_deviation", rep.max_deviation},
              {"leakage", rep.leakage}, {"leaked_tuples", rep.leaked_tuples}, {"total", rep.total},
              {"frequencies", freqs}};
}

Json cmd_decompose(const Config& c, std::ostream& err) {
  const auto opts = c.options();
  const auto f = load_table(c.table);
  announce_work(err, static_cast<double>(f.n + 1) * static_cast<double>(f.size()), opts);
  const auto dec = decompose_degree1(f, c.tau);
  double identity_error = 0;
  bool f1_range = true, f2_range = true;
  for (std::uint64_t x = 0; x < f.size(); ++x) {
    identity_error = std::max(identity_error, std::abs(static_cast<double>(f[x]) - dec.f1[x] - dec.f2[x] - dec.f3[x]));
    f1_range = f1_range && dec.f1[x] >= 0 && dec.f1[x] <= 1;
    f2_range = f2_range && std::abs(dec.f2[x]) <= 1;
  }
  const double u2 = gowers_u2_fourier(to_complex(dec.f2));
  Json out{{"command", "decompose"}, {"n", f.n}, {"tau", c.tau}, {"large_characters", dec.large_characters},
           {"factor_complexity", dec.factor.size()}, {"factor", io::to_json(dec.factor)},
           {"identity_max_error", identity_error}, {"f1_in_unit_interval", f1_range}, {"f2_bounded", f2_range},
           {"u2_f2", u2}, {"u2_bound", std::sqrt(c.tau)}};
  if (!c.system.empty()) {
    const auto system = load_system(c.system);
    const auto rep = decomp_approx_check(f, system, c.tau, opts);
    out["approximation"] = Json{{"t_f", to_double(rep.t_f)}, {"t_f_exact", rational_string(rep.t_f)},
                                {"t_f1", rep.t_f1}, {"gap", rep.gap}, {"bound_context", rep.bound_context}};
  }
  return out;
}

Json cmd_construct(const Config& c, std::ostream& err) {
  const auto opts = c.options();
  if (c.kind == "ddrank") {
    require(c.degrees.size() == c.depths.size() && !c.degrees.empty(), "config.spec",
            "--degrees and --depths must be non-empty and of equal length");
    const auto fam = high_rank_family(c.p, c.degrees, c.depths, c.r);
    announce_work(err, static_cast<double>(fam.n_required), opts);
    return Json{{"command", "construct"}, {"kind", c.kind}, {"p", c.p}, {"r", c.r}, {"n_required", fam.n_required},
                {"factor", io::to_json(fam.factor)}};
  }
  if (c.kind == "lowcorr") {
    const auto q = lowcorr_witness(c.p, c.m, c.k, c.n);
    const auto [deg, depth] = degree_depth_structural(q);
    const auto fam = default_candidate_family(c.p, c.n, std::max(1, deg - 1), c.cap, c.random_extra, {c.seed, 0});
    announce_work(err, static_cast<double>(fam.polys.size()) * static_cast<double>(checked_pow(c.p, c.n)), opts);
    const auto scan = correlation_scan(q, fam.polys, opts);
    return Json{{"command", "construct"}, {"kind", c.kind}, {"polynomial", io::to_json(q)}, {"degree", deg},
                {"depth", depth}, {"candidate_degree", std::max(1, deg - 1)}, {"candidates", fam.polys.size()},
                {"exhaustive", fam.exhaustive}, {"max_correlation", scan.max_correlation},
                {"argmax", io::to_json(fam.polys.empty() ? NCPolynomial(c.p, c.n) : fam.polys[scan.argmax])}};
  }
  if (c.kind == "depth-reduce") {
    const auto poly = load_poly(c.poly);
    announce_work(err, static_cast<double>(checked_pow(poly.p(), poly.n())), opts);
    opts.check(static_cast<double>(checked_pow(poly.p(), poly.n())), "construct");
    const auto red = depth_reduce(poly, c.k);
    std::uint64_t mismatches = 0;
    for (std::uint64_t x = 0; x < red.Bp.size(); ++x) {
      if (!(red.reconstruct(red.A.eval_index(x), red.Bp.at(x), red.R.eval_index(x)) == poly.eval_index(x))) ++mismatches;
    }
    return Json{{"command", "construct"}, {"kind", c.kind}, {"k", c.k}, {"linear_coeffs", red.linear_coeffs},
                {"A", io::to_json(red.A)}, {"R", io::to_json(red.R)}, {"Bp_depth", red.Bp.depth},
                {"Bp", red.Bp.num}, {"points", red.Bp.size()}, {"mismatches", mismatches}};
  }
  throw ValidationError("config.kind", "kind must be ddrank, lowcorr or depth-reduce");
}

Json cmd_limit(const Config& c, std::ostream& err) {
  const auto opts = c.options();
  require(!c.limit.empty(), "config.missing", "--limit is required");
  const auto gamma = io::limit_from_json(io::read_json_file(c.limit));
  if (c.action == "t") {
    const auto system = load_system(c.system);
    announce_work(err, static_cast<double>(gamma.table().size()) * static_cast<double>(system.size()), opts);
    return Json{{"command", "limit"}, {"action", c.action}, {"m", system.size()}, {"value", t_L_gamma(gamma, system, opts)}};
  }
  if (c.action == "sample") {
    const auto system = load_system(c.system);
    announce_work(err, static_cast<double>(c.samples) * static_cast<double>(system.size()), opts);
    const auto draws = mu_gamma_samples(gamma, system, c.samples, {c.seed, 0}, opts);
    std::vector<std::uint64_t> counts(std::uint64_t{1} << system.size(), 0);
    for (auto g : draws) ++counts[g];
    Json patterns = Json::array();
    for (std::size_t g = 0; g < counts.size(); ++g) {
      patterns.push_back(Json{{"g", io::pattern_string(g, system.size())}, {"count", counts[g]},
                              {"frequency", static_cast<double>(counts[g]) / static_cast<double>(c.samples)}});
    }
    return Json{{"command", "limit"}, {"action", c.action}, {"samples", c.samples}, {"patterns", patterns}};
  }
  if (c.action == "coarsen") {
    announce_work(err, static_cast<double>(gamma.table().size()), opts);
    Json out = io::to_json(coarsen(gamma, c.t));
    return Json{{"command", "limit"}, {"action", c.action}, {"t", c.t}, {"limit", out}};
  }
  if (c.action == "realize") {
    const auto real = realize(gamma, c.r, {c.seed, 0}, opts);
    announce_work(err, static_cast<double>(real.f.size()), opts);
    Json out{{"command", "limit"}, {"action", c.action}, {"r", c.r}, {"n", real.f.n},
             {"factor", io::to_json(real.factor)}, {"f", io::to_json(real.f, c.hex)}, {"f_real", io::to_json(real.f_real)}};
    if (!c.system.empty()) {
      const auto system = load_system(c.system);
      out["t_L_f_real"] = t_L_exact(real.f_real, system, opts);
      out["t_L_gamma"] = t_L_gamma(gamma, system, opts);
    }
    return out;
  }
  throw ValidationError("config.action", "action must be t, sample, coarsen or realize");
}

Json cmd_converge(const Config& c, std::ostream& err) {
  const auto opts = c.options();
  require(!c.tables.empty(), "config.missing", "--table is required at least once");
  require(!c.systems.empty(), "config.missing", "--system is required at least once");
  std::vector<BoolFunction> seq;
  for (const auto& path : c.tables) seq.push_back(load_table(path));
  std::vector<LinearFormSystem> systems;
  for (const auto& path : c.systems) systems.push_back(load_system(path));
  double work = 0;
  for (const auto& s : systems) {
    for (const auto& f : seq) work += t_L_work(f.p, f.n, s);
  }
  announce_work(err, work, opts);
  const auto reports = convergence_test(seq, systems, c.eps, c.burn_in, c.samples, {c.seed, 0}, opts);
  Json rs = Json::array();
  for (const auto& r : reports) {
    rs.push_back(Json{{"system", io::to_json(r.system)}, {"exact", r.exact}, {"consecutive", r.consecutive},
                      {"distances", r.distances}, {"convergent", r.convergent}});
  }
  return Json{{"command", "converge"}, {"eps", c.eps}, {"burn_in", c.burn_in}, {"length", seq.size()}, {"reports", rs}};
}

void add_common(CLI::App* sub, Config& c) {
  sub->add_option("--p", c.p, "field characteristic");
  sub->add_option("--n", c.n, "dimension");
  sub->add_option("--d", c.d, "degree");
  sub->add_option("--k", c.k, "depth");
  sub->add_option("--r", c.r, "rank parameter");
  sub->add_option("--tau", c.tau, "decomposition threshold");
  sub->add_option("--eps", c.eps, "convergence tolerance");
  sub->add_option("--samples", c.samples, "Monte-Carlo samples");
  sub->add_option("--seed", c.seed, "random seed");
  sub->add_option("--out", c.out, "output file (default stdout)");
  sub->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  sub->add_flag("--force", c.force, "ignore work ceilings");
  sub->add_option("--workers", c.workers, "worker threads")->check(CLI::Range(1u, 1024u));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config c;
  CLI::App app{"Higher-order Fourier analysis toolkit"};
  app.require_subcommand(1);

  auto* gowers = app.add_subcommand("gowers", "Gowers uniformity norm of a table or polynomial phase");
  gowers->add_option("--table", c.table, "truth table JSON");
  gowers->add_option("--poly", c.poly, "polynomial JSON");
  gowers->add_option("--mode", c.mode, "exact or mc");
  gowers->add_option("--embedding", c.embedding, "sign or indicator (tables only)");

  auto* tl = app.add_subcommand("tl", "Linear-form average t_L(f)");
  tl->add_option("--table", c.table, "truth table JSON");
  tl->add_option("--system", c.system, "system JSON");
  tl->add_option("--mode", c.mode, "exact or mc");

  auto* mu = app.add_subcommand("mu", "Restriction-pattern distribution and moment inversion");
  mu->add_option("--table", c.table, "truth table JSON");
  mu->add_option("--system", c.system, "system JSON");
  mu->add_flag("!--no-inversion", c.inversion, "skip the moment round-trip");

  auto* cons = app.add_subcommand("consistency", "Consistency oracle and enumeration");
  cons->add_option("--system", c.system, "system JSON");
  cons->add_option("--tuple", c.tuple, "numerators over p^(k+1)")->delimiter(',');
  cons->add_option("--degrees", c.degrees, "degree sequence")->delimiter(',');
  cons->add_option("--depths", c.depths, "depth sequence")->delimiter(',');
  cons->add_flag("--exact-type", c.exact_type, "pad the witness to exact type (d, k)");

  auto* equi = app.add_subcommand("equidist", "Factor pattern frequencies on a system");
  equi->add_option("--factor", c.factor, "factor JSON");
  equi->add_option("--system", c.system, "system JSON");
  equi->add_option("--degrees", c.degrees, "high-rank family degrees")->delimiter(',');
  equi->add_option("--depths", c.depths, "high-rank family depths")->delimiter(',');
  equi->add_option("--mode", c.mode, "exact or mc");

  auto* dec = app.add_subcommand("decompose", "Degree-1 decomposition and t_L approximation gap");
  dec->add_option("--table", c.table, "truth table JSON");
  dec->add_option("--system", c.system, "system JSON with declared complexity 1");

  auto* cons2 = app.add_subcommand("construct", "Polynomial constructions");
  cons2->add_option("--kind", c.kind, "ddrank, lowcorr or depth-reduce")->required();
  cons2->add_option("--degrees", c.degrees, "degree sequence")->delimiter(',');
  cons2->add_option("--depths", c.depths, "depth sequence")->delimiter(',');
  cons2->add_option("--m", c.m, "block size");
  cons2->add_option("--poly", c.poly, "polynomial JSON");
  cons2->add_option("--cap", c.cap, "exhaustive candidate cap");
  cons2->add_option("--random-extra", c.random_extra, "random candidates");

  auto* lim = app.add_subcommand("limit", "Limit-object operations");
  lim->add_option("--limit", c.limit, "limit object JSON");
  lim->add_option("--action", c.action, "t, sample, coarsen or realize")->required();
  lim->add_option("--system", c.system, "system JSON");
  lim->add_option("--t", c.t, "truncation level");
  lim->add_flag("--hex", c.hex, "hex-pack the rounded table");

  auto* conv = app.add_subcommand("converge", "Convergence of restriction distributions");
  conv->add_option("--table", c.tables, "truth table JSON, repeated in sequence order");
  conv->add_option("--system", c.systems, "system JSON, repeatable");
  conv->add_option("--burn-in", c.burn_in, "first consecutive index checked");

  for (auto* sub : app.get_subcommands({})) add_common(sub, c);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    log_line(err, Json{{"error", "parse.args"}, {"message", e.what()}});
    return kExitValidation;
  }
  c.command = app.get_subcommands().front()->get_name();
  log_line(err, Json{{"config", c.to_json()}});

  try {
    Json result;
    if (c.command == "gowers") result = cmd_gowers(c, err);
    else if (c.command == "tl") result = cmd_tl(c, err);
    else if (c.command == "mu") result = cmd_mu(c, err);
    else if (c.command == "consistency") result = cmd_consistency(c, err);
    else if (c.command == "equidist") result = cmd_equidist(c, err);
    else if (c.command == "decompose") result = cmd_decompose(c, err);
    else if (c.command == "construct") result = cmd_construct(c, err);
    else if (c.command == "limit") result = cmd_limit(c, err);
    else result = cmd_converge(c, err);

    const auto text = render(result, c.format);
    if (c.out.empty()) {
      out << text;
    } else {
      std::ofstream file(c.out, std::ios::binary);
      if (!file) throw ValidationError("io.file", "cannot write " + c.out);
      file << text;
    }
    return kExitOk;
  } catch (const FactorComplexityError& e) {
    log_line(err, Json{{"error", e.code()}, {"message", e.what()}, {"estimate", e.estimate()},
                       {"ceiling", e.ceiling()}, {"succeeds_above", e.succeeds_above()}});
    return kExitWorkLimit;
  } catch (const WorkLimitError& e) {
    log_line(err, Json{{"error", e.code()}, {"message", e.what()}, {"estimate", e.estimate()}, {"ceiling", e.ceiling()}});
    return kExitWorkLimit;
  } catch (const ValidationError& e) {
    log_line(err, Json{{"error", e.code()}, {"message", e.what()}});
    return kExitValidation;
  }
}

}  // namespace hofa::cli
