#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <functional>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "unimod.hpp"

namespace unimod::cli {

using json = nlohmann::ordered_json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitOther = 1;
inline constexpr int kExitArgument = 2;
inline constexpr int kExitConvergence = 3;

// 64-bit FNV-1a.
inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string digest_string(std::string_view bytes) {
  std::ostringstream os;
  os << "fnv1a64:" << std::hex << std::setw(16) << std::setfill('0') << fnv1a64(bytes);
  return os.str();
}

inline std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

// Carries the exit code through to main.
class CliError : public std::runtime_error {
 public:
  CliError(int code, const std::string& what) : std::runtime_error(what), code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

inline int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::argument:
    case ErrorKind::domain:
    case ErrorKind::precondition:
    case ErrorKind::invalid_basis:
      return kExitArgument;
    case ErrorKind::convergence:
      return kExitConvergence;
    default:
      return kExitOther;
  }
}

// Runs f and, if it throws a library error, names the offending token.
template <class F>
auto blame(const std::string& token, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConvergenceError&) {
    throw;
  } catch (const Error& e) {
    throw CliError(exit_code_for(e.kind()), "'" + token + "': " + e.what());
  }
}

// "z2", "shear:x=0.3", "diag:s=1.5" or "basis:a,b,c,d" (row-major matrix,
// columns are the basis vectors).
inline LatticeBasis parse_lattice(std::string_view spec) {
  const std::string_view s = parse::trim(spec);
  if (s == "z2") return LatticeBasis::identity();
  const std::size_t colon = s.find(':');
  if (colon == std::string_view::npos) {
    throw ArgumentError("lattice '" + std::string(spec) + "': expected z2, shear:x=, diag:s= or basis:a,b,c,d");
  }
  const std::string_view kind = s.substr(0, colon);
  const std::string_view body = s.substr(colon + 1);
  if (kind == "shear") {
    const auto kv = parse::key_values(body, {"x"});
    return LatticeBasis::shear(parse::require(kv, "x", spec));
  }
  if (kind == "diag") {
    const auto kv = parse::key_values(body, {"s"});
    return LatticeBasis::diagonal(parse::require(kv, "s", spec));
  }
  if (kind == "basis") {
    const auto parts = parse::split(body, ',');
    if (parts.size() != 4) throw ArgumentError("lattice '" + std::string(spec) + "': basis needs 4 entries");
    return LatticeBasis::from_matrix(parse::number(parts[0]), parse::number(parts[1]),
                                     parse::number(parts[2]), parse::number(parts[3]));
  }
  throw ArgumentError("unknown lattice kind '" + std::string(kind) + "'");
}

// "lo:hi:n", n >= 2 points including both ends.
inline std::vector<double> parse_grid(std::string_view spec) {
  const auto parts = parse::split(spec, ':');
  if (parts.size() != 3) throw ArgumentError("grid '" + std::string(spec) + "': expected lo:hi:n");
  const double lo = parse::number(parts[0]);
  const double hi = parse::number(parts[1]);
  const double n = parse::number(parts[2]);
  if (!(n >= 2.0) || n != std::floor(n) || n > 1e7) {
    throw ArgumentError("grid '" + std::string(spec) + "': n must be an integer in [2, 1e7]");
  }
  if (!(hi > lo)) throw ArgumentError("grid '" + std::string(spec) + "': need hi > lo");
  std::vector<double> grid;
  const auto count = static_cast<std::size_t>(n);
  for (std::size_t i = 0; i < count; ++i) {
    grid.push_back(i + 1 == count ? hi : lo + (hi - lo) * static_cast<double>(i) / (n - 1.0));
  }
  return grid;
}

inline std::size_t sample_count(double n, const char* flag, double minimum = 1.0) {
  if (!(n >= minimum) || n != std::floor(n) || n > 1e12) {
    std::ostringstream os;
    os << "'" << flag << "': expected an integer >= " << minimum << ", got " << n;
    throw CliError(kExitArgument, os.str());
  }
  return static_cast<std::size_t>(n);
}

inline std::uint64_t require_seed(const std::optional<std::uint64_t>& seed, const std::string& what) {
  if (!seed) throw CliError(kExitArgument, "'--seed': required for " + what);
  return *seed;
}

inline json histogram_json(const std::map<std::uint64_t, std::uint64_t>& h) {
  json out = json::object();
  for (const auto& [k, v] : h) out[std::to_string(k)] = v;
  return out;
}

inline json fraction_json(const FractionEstimate& f) {
  return {{"fraction", f.fraction}, {"standard_error", f.standard_error}, {"hits", f.hits},
          {"samples", f.samples}};
}

// Result of one subcommand: either a JSON payload or CSV text.
struct Output {
  json params = json::object();
  std::optional<std::uint64_t> seed;
  std::optional<json> payload;
  std::string csv;
};

struct Settings {
  unsigned workers = default_workers();
};

// ----- subcommands -----

struct SiegelMeanArgs {
  std::string region;
  std::string route = "exact";
  double samples = 1e6;
  std::optional<std::uint64_t> seed;
};

inline Output siegel_mean_cmd(const SiegelMeanArgs& a, const Settings& settings) {
  Output out;
  const ConvexRegion region = blame(a.region, [&] { return parse_region(a.region); });
  out.params = {{"region", region.describe()}, {"route", a.route}};
  json p = {{"region", region.describe()}, {"route", a.route}, {"area", region.area()}};
  if (a.route == "exact") {
    p["value"] = siegel_mean_exact(region);
  } else {
    MonteCarloOptions mc;
    mc.seed = require_seed(a.seed, "--route mc");
    mc.samples = sample_count(a.samples, "-N", 1000);
    mc.workers = settings.workers;
    out.seed = mc.seed;
    out.params["N"] = mc.samples;
    const MonteCarloResult r = blame(a.region, [&] { return mc_moment(region, 1, mc); });
    p["value"] = r.mean;
    p["standard_error"] = r.standard_error;
    p["samples"] = r.samples;
    p["exact"] = siegel_mean_exact(region);
    p["histogram"] = histogram_json(r.histogram);
  }
  out.payload = p;
  return out;
}

struct SecondMomentArgs {
  std::string region;
  std::string route = "exact";
  double tol = 1e-6;
  double samples = 1e6;
  std::optional<std::uint64_t> seed;
};

inline Output second_moment_cmd(const SecondMomentArgs& a, const Settings& settings) {
  Output out;
  const ConvexRegion region = blame(a.region, [&] { return parse_region(a.region); });
  out.params = {{"region", region.describe()}, {"route", a.route}};
  json p = {{"region", region.describe()}, {"route", a.route}};
  if (a.route == "exact") {
    if (region.shape() == ConvexRegion::Shape::square) {
      p["value"] = blame(a.region, [&] { return second_moment_square_exact(region.parameter()); });
    } else if (region.shape() == ConvexRegion::Shape::disc) {
      p["value"] = blame(a.region, [&] { return second_moment_disc_exact(region.parameter()); });
    } else {
      throw CliError(kExitArgument, "'" + a.region +
                                        "': no closed form for this region; use --route quad or mc");
    }
  } else if (a.route == "quad") {
    out.params["tol"] = a.tol;
    QuadratureOptions q;
    q.tol = a.tol;
    const QuadratureResult r = blame("--tol", [&] { return second_moment_general(region, q); });
    p["value"] = r.value;
    p["error_estimate"] = r.error;
    p["cutoff"] = r.cutoff;
    p["cells"] = r.cells;
    p["symmetric"] = r.symmetric;
    p["terms"] = r.terms;
  } else {
    MonteCarloOptions mc;
    mc.seed = require_seed(a.seed, "--route mc");
    mc.samples = sample_count(a.samples, "-N", 1000);
    mc.workers = settings.workers;
    out.seed = mc.seed;
    out.params["N"] = mc.samples;
    const MonteCarloResult r = blame(a.region, [&] { return mc_moment(region, 2, mc); });
    p["value"] = r.mean;
    p["standard_error"] = r.standard_error;
    p["samples"] = r.samples;
    p["histogram"] = histogram_json(r.histogram);
  }
  out.payload = p;
  return out;
}

struct KrMeasureArgs {
  std::string r;
  std::string route = "exact";
  double samples = 1e6;
  std::optional<std::uint64_t> seed;
};

inline Output kr_measure_cmd(const KrMeasureArgs& a, const Settings& settings) {
  Output out;
  const double r = blame(a.r, [&] { return parse::number(a.r); });
  out.params = {{"r", r}, {"route", a.route}};
  json p = {{"r", r}, {"route", a.route}};
  if (a.route == "exact") {
    p["value"] = blame(a.r, [&] { return kr_measure_exact(r); });
  } else if (a.route == "asymptotic") {
    p["value"] = blame(a.r, [&] { return kr_measure_asymptotic(r); });
  } else {
    MonteCarloOptions mc;
    mc.seed = require_seed(a.seed, "--route mc");
    mc.samples = sample_count(a.samples, "-N", 1000);
    mc.workers = settings.workers;
    out.seed = mc.seed;
    out.params["N"] = mc.samples;
    const FractionEstimate f = blame(a.r, [&] { return mc_kr_fraction(r, mc); });
    p["value"] = f.fraction;
    p["standard_error"] = f.standard_error;
    p["hits"] = f.hits;
    p["samples"] = f.samples;
  }
  out.payload = p;
  return out;
}

struct ThickeningArgs {
  std::string r;
  double samples = 1e6;
  std::optional<double> delta;
  std::optional<std::uint64_t> seed;
};

inline Output thickening_cmd(const ThickeningArgs& a, const Settings& settings) {
  Output out;
  const double r = blame(a.r, [&] { return parse::number(a.r); });
  const double step = a.delta.value_or(r / 4.0);
  MonteCarloOptions mc;
  mc.seed = require_seed(a.seed, "thickening");
  mc.samples = sample_count(a.samples, "-N", 10000);
  mc.workers = settings.workers;
  out.seed = mc.seed;
  out.params = {{"r", r}, {"delta", step}, {"N", mc.samples}};
  const ThickeningEstimate e = blame(a.r, [&] { return thickening_measure_mc(r, step, mc); });
  out.payload = json{{"r", r},
                     {"delta", step},
                     {"measure", fraction_json(e.measure)},
                     {"indeterminate", fraction_json(e.indeterminate)},
                     {"kr", fraction_json(e.kr)},
                     {"indeterminate_ok", e.indeterminate_ok},
                     {"ratio_to_r_log_inv_r", e.measure.fraction / (r * std::log(1.0 / r))}};
  return out;
}

struct FlowTraceArgs {
  std::string lattice;
  std::string rate;
  double s_max = 0.0;
  double delta = 0.05;
  std::optional<double> s_min;
};

inline Output flow_trace_cmd(const FlowTraceArgs& a, const Settings&) {
  Output out;
  const LatticeBasis lattice = blame(a.lattice, [&] { return parse_lattice(a.lattice); });
  const RateFunction rate = blame(a.rate, [&] { return parse_rate(a.rate); });
  const double s_min = a.s_min.value_or(rate.s0());
  out.params = {{"lattice", a.lattice}, {"rate", rate.describe()}, {"smin", s_min},
                {"smax", a.s_max},      {"delta", a.delta}};
  if (!(a.delta > 0.0 && a.delta <= 0.5)) throw CliError(kExitArgument, "'--delta': must lie in (0, 0.5]");
  const auto grid = blame("--smax", [&] { return uniform_grid(s_min, a.s_max, a.delta); });
  const auto record = delta_trajectory(lattice, grid, a.lattice);
  const auto rows = blame(a.rate, [&] { return annotate(record, rate); });
  std::ostringstream os;
  os << std::setprecision(17);
  os << "s,delta,r_of_s,hit,margin\n";
  for (const AnnotatedSample& row : rows) {
    os << row.s << ',' << row.delta << ',' << row.rate << ',' << (row.hit ? 1 : 0) << ','
       << row.margin << '\n';
  }
  out.csv = os.str();
  return out;
}

struct BcArgs {
  std::string rate;
  double orbits = 500;
  double s_max = 1000.0;
  double delta = 0.05;
  std::string start = "haar";
  std::optional<std::uint64_t> seed;
};

inline Output bc_cmd(const BcArgs& a, const Settings& settings) {
  Output out;
  const RateFunction rate = blame(a.rate, [&] { return parse_rate(a.rate); });
  BcOptions o;
  o.seed = require_seed(a.seed, "bc-experiment");
  o.orbits = sample_count(a.orbits, "-N", 100);
  o.s_max = a.s_max;
  o.step = a.delta;
  o.start = a.start == "haar" ? OrbitStart::haar : OrbitStart::translate;
  o.workers = settings.workers;
  out.seed = o.seed;
  out.params = {{"rate", rate.describe()}, {"N", o.orbits}, {"smax", o.s_max},
                {"delta", o.step},         {"start", a.start}};
  const HitStatistics st = blame(a.rate, [&] { return bc_experiment(rate, o); });
  json windows = json::array();
  for (const WindowStatistics& w : st.windows) {
    windows.push_back({{"lo", w.lo}, {"hi", w.hi}, {"hits", w.hits}, {"fraction", w.fraction},
                       {"standard_error", w.standard_error}});
  }
  std::uint64_t ever = 0;
  for (const auto& f : st.first_hits) ever += f ? 1 : 0;
  out.payload = json{{"rate", st.rate},
                     {"start", to_string(st.start)},
                     {"orbits", st.orbits},
                     {"s0", st.s0},
                     {"smax", st.s_max},
                     {"delta", st.step},
                     {"windows", windows},
                     {"orbits_with_a_hit", ever},
                     {"uncertified_gaps", st.uncertified_gaps}};
  return out;
}

struct DaniConvertArgs {
  std::string from;
  std::string spec;
  std::string grid;
};

// psi -> r tabulates r(s) on a grid of s; rate -> psi tabulates psi(t) on a
// grid of t.
inline Output dani_convert_cmd(const DaniConvertArgs& a, const Settings&) {
  Output out;
  const auto grid = blame(a.grid, [&] { return parse_grid(a.grid); });
  std::ostringstream os;
  os << std::setprecision(17);
  if (a.from == "psi") {
    const PsiFunction psi = blame(a.spec, [&] { return parse_psi(a.spec); });
    out.params = {{"from", "psi"}, {"spec", psi.describe()}, {"grid", a.grid}};
    const ValidationReport report = validate_psi(psi);
    if (!report.ok()) throw CliError(kExitArgument, "'" + a.spec + "': " + report.summary());
    os << "s,r,residual\n";
    for (double s : grid) {
      const double r = blame(a.grid, [&] { return psi_to_r(psi, s); });
      os << s << ',' << r << ',' << correspondence_residual(psi, s, r) << '\n';
    }
  } else {
    const RateFunction rate = blame(a.spec, [&] { return parse_rate(a.spec); });
    out.params = {{"from", "rate"}, {"spec", rate.describe()}, {"grid", a.grid}};
    const ValidationReport report = validate_rate(rate);
    if (!report.ok()) throw CliError(kExitArgument, "'" + a.spec + "': " + report.summary());
    os << "t,psi\n";
    for (double t : grid) os << t << ',' << blame(a.grid, [&] { return r_to_psi(rate, t); }) << '\n';
  }
  out.csv = os.str();
  return out;
}

struct DirichletArgs {
  std::string x;
  std::string psi;
  double horizon = 1e6;
  std::string method = "cf";
  double delta = 0.01;
};

inline json cf_json(const CfVerdict& v) {
  json intervals = json::array();
  for (const DirichletInterval& in : v.intervals) {
    intervals.push_back({{"k", in.k}, {"q_k", in.q_k}, {"q_next", in.q_next}, {"error", in.error},
                         {"threshold", in.threshold}, {"fails", in.fails}, {"margin", in.margin}});
  }
  json quotients = json::array();
  for (const BigInt& q : v.cf.partial_quotients) quotients.push_back(q.str());
  return {{"dirichlet_so_far", v.dirichlet_so_far},
          {"exact_rational", v.exact},
          {"failures", v.failures},
          {"intervals", intervals},
          {"partial_quotients", quotients}};
}

inline Output dirichlet_cmd(const DirichletArgs& a, const Settings&) {
  Output out;
  const ExactRational x = blame(a.x, [&] { return ExactRational::parse(a.x); });
  const PsiFunction psi = blame(a.psi, [&] { return parse_psi(a.psi); });
  out.params = {{"x", a.x}, {"psi", psi.describe()}, {"horizon", a.horizon}, {"method", a.method}};
  if (a.method != "cf") out.params["delta"] = a.delta;
  const ValidationReport report = validate_psi(psi);
  if (!report.ok()) throw CliError(kExitArgument, "'" + a.psi + "': " + report.summary());
  json p = {{"x", a.x}, {"psi", psi.describe()}, {"horizon", a.horizon}};
  const CfVerdict cf = blame(a.x, [&] { return dirichlet_check_cf(x, psi, a.horizon); });
  if (a.method != "flow") p["cf"] = cf_json(cf);
  if (a.method != "cf") {
    if (!(a.delta > 0.0 && a.delta <= 0.5)) throw CliError(kExitArgument, "'--delta': must lie in (0, 0.5]");
    const double s_max = flow_horizon(psi, a.horizon);
    const FlowVerdict flow =
        blame(a.x, [&] { return dirichlet_check_flow(x.to_double(), psi, s_max, a.delta, &cf.cf); });
    json hits = json::array();
    for (const FlowHit& h : flow.hits) {
      hits.push_back({{"s", h.s}, {"t", h.t}, {"k", h.k}, {"margin", h.margin}});
    }
    p["flow"] = {{"s0", flow.s0},
                 {"smax", flow.s_max},
                 {"resolved", flow.resolved},
                 {"failure_intervals", flow.hit_intervals},
                 {"hits", hits}};
    if (a.method == "both") {
      const CrossReference xr = cross_reference(cf, flow, a.delta);
      p["cross_reference"] = {{"agreements", xr.agreements},
                              {"boundary", xr.boundary},
                              {"disagreements", xr.disagreements},
                              {"verdicts_agree", xr.verdicts_agree},
                              {"boundary_case", xr.boundary_case}};
    }
  }
  out.payload = p;
  return out;
}

struct SampleArgs {
  double samples = 10;
  std::optional<std::uint64_t> seed;
};

inline Output sample_cmd(const SampleArgs& a, const Settings&) {
  Output out;
  const std::uint64_t seed = require_seed(a.seed, "sample-lattices");
  const std::size_t n = sample_count(a.samples, "-N");
  out.seed = seed;
  out.params = {{"N", n}};
  HaarSampler sampler(seed);
  std::ostringstream os;
  os << std::setprecision(17);
  os << "index,x,y,phi,a,b,c,d,delta\n";
  for (std::size_t i = 0; i < n; ++i) {
    const BasePoint p = sampler.sample_base_point();
    const LatticeBasis b = HaarSampler::lattice_from(p);
    os << i << ',' << p.x << ',' << p.y << ',' << p.phi << ',' << b.b1().x << ',' << b.b2().x << ','
       << b.b1().y << ',' << b.b2().y << ',' << delta(b) << '\n';
  }
  out.csv = os.str();
  return out;
}

// ----- driver -----

inline void emit(const std::string& subcommand, const Output& o, double seconds, std::ostream& out) {
  json manifest = {{"subcommand", subcommand}, {"params", o.params}};
  manifest["seed"] = o.seed ? json(*o.seed) : json(nullptr);
  manifest["version"] = kVersion;
  manifest["wall_clock"] = {{"started", utc_now()}, {"seconds", seconds}};
  if (o.payload) {
    const std::string body = o.payload->dump();
    manifest["output_digest"] = digest_string(body);
    json report = {{"manifest", manifest}, {"payload", *o.payload}};
    out << report.dump(2) << '\n';
  } else {
    manifest["output_digest"] = digest_string(o.csv);
    out << "# manifest: " << manifest.dump() << '\n' << o.csv;
  }
}

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Statistics of unimodular lattices in the plane: Siegel transforms, moments,\n"
               "shrinking targets K_r, geodesic flow hits and the Dani correspondence.",
               "unimod"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  Settings settings;
  app.add_option("--workers", settings.workers,
                 "Worker threads for Monte Carlo; default: hardware threads (results do not depend on it)")
      ->check(CLI::PositiveNumber);
  app.option_defaults()->always_capture_default();

  const std::vector<std::string> mc_route{"exact", "mc"};

  SiegelMeanArgs sm;
  auto* c_sm = app.add_subcommand("siegel-mean", "Mean of the primitive count of a region");
  c_sm->add_option("region", sm.region, "square:r=R | disc:R=R | rect:x0,y0,x1,y1 | poly:x,y;...")->required();
  c_sm->add_option("--route", sm.route, "exact | mc")->check(CLI::IsMember({"exact", "mc"}));
  c_sm->add_option("-N", sm.samples, "Haar samples for --route mc");
  c_sm->add_option("--seed", sm.seed, "RNG seed (required for mc)");

  SecondMomentArgs mo;
  auto* c_mo = app.add_subcommand("second-moment", "Second moment of the primitive count of a region");
  c_mo->add_option("region", mo.region, "square:r=R | disc:R=R | rect:x0,y0,x1,y1 | poly:x,y;...")->required();
  c_mo->add_option("--route", mo.route, "exact (squares, discs) | quad | mc")
      ->check(CLI::IsMember({"exact", "quad", "mc"}));
  c_mo->add_option("--tol", mo.tol, "Relative tolerance of the quad route, in [1e-8, 1e-2]");
  c_mo->add_option("-N", mo.samples, "Haar samples for --route mc");
  c_mo->add_option("--seed", mo.seed, "RNG seed (required for mc)");

  KrMeasureArgs kr;
  auto* c_kr = app.add_subcommand("kr-measure", "Haar measure of K_r = {Delta <= r}");
  c_kr->add_option("r", kr.r, "Radius r >= 0")->required();
  c_kr->add_option("--route", kr.route, "exact | asymptotic | mc")
      ->check(CLI::IsMember({"exact", "asymptotic", "mc"}));
  c_kr->add_option("-N", kr.samples, "Haar samples for --route mc");
  c_kr->add_option("--seed", kr.seed, "RNG seed (required for mc)");

  ThickeningArgs th;
  auto* c_th = app.add_subcommand("thickening", "Monte Carlo measure of the union of a_{-s} K_r over s in [0, 1)");
  c_th->add_option("r", th.r, "Radius r > 0")->required();
  c_th->add_option("-N", th.samples, "Haar samples (>= 1e4)");
  c_th->add_option("--delta", th.delta, "Scan grid step in (0, r/4]; default r/4");
  c_th->add_option("--seed", th.seed, "RNG seed (required)");

  FlowTraceArgs ft;
  auto* c_ft = app.add_subcommand("flow-trace", "CSV trace of Delta(a_s L) against a rate r(s)");
  c_ft->add_option("lattice", ft.lattice, "z2 | shear:x=X | diag:s=S | basis:a,b,c,d (columns are basis vectors)")
      ->required();
  c_ft->add_option("--rate", ft.rate, "rate:const:c= | rate:pow:alpha= | rate:logpow:alpha=,beta= | rate:exp:lambda= | rate:tab:<path>")
      ->required();
  c_ft->add_option("--smax", ft.s_max, "Last flow time")->required()->default_str("");
  c_ft->add_option("--delta", ft.delta, "Grid step in (0, 0.5]");
  c_ft->add_option("--smin", ft.s_min, "First flow time; default the rate's s0");

  BcArgs bc;
  auto* c_bc = app.add_subcommand("bc-experiment", "Hit fractions of K_{r(s)} in dyadic time windows");
  c_bc->add_option("--rate", bc.rate, "Rate function, as for flow-trace")->required();
  c_bc->add_option("-N", bc.orbits, "Number of orbits (>= 100)");
  c_bc->add_option("--smax", bc.s_max, "End of the last window");
  c_bc->add_option("--delta", bc.delta, "Scan grid step");
  c_bc->add_option("--start", bc.start, "haar | translate (Lambda_x, x uniform in [0, 1))")
      ->check(CLI::IsMember({"haar", "translate"}));
  c_bc->add_option("--seed", bc.seed, "RNG seed (required)");

  DaniConvertArgs dc;
  auto* c_dani = app.add_subcommand("dani", "Dani correspondence between psi and r");
  c_dani->require_subcommand(1);
  auto* c_dc = c_dani->add_subcommand("convert", "Tabulate r from psi (grid in s) or psi from r (grid in t)");
  c_dc->add_option("--from", dc.from, "psi | rate")->required()->check(CLI::IsMember({"psi", "rate"}));
  c_dc->add_option("spec", dc.spec, "psi:pow:a= | psi:mod1:k= | psi:mod2:k=,gamma= | psi:tab:<path>, or a rate")
      ->required();
  c_dc->add_option("--grid", dc.grid, "lo:hi:n, n evenly spaced points")->required();

  DirichletArgs di;
  auto* c_di = app.add_subcommand("dirichlet-check", "Dirichlet improvability of x for psi up to a horizon");
  c_di->add_option("x", di.x, "x in (0, 1): decimal or p/q, read exactly")->required();
  c_di->add_option("--psi", di.psi, "Approximation function, as for dani convert")->required();
  c_di->add_option("--horizon", di.horizon, "Largest t (convergent denominators up to it)");
  c_di->add_option("--method", di.method, "cf | flow | both")->check(CLI::IsMember({"cf", "flow", "both"}));
  c_di->add_option("--delta", di.delta, "Flow scan grid step");

  SampleArgs sa;
  auto* c_sa = app.add_subcommand("sample-lattices", "CSV of Haar-random unimodular lattices");
  c_sa->add_option("-N", sa.samples, "Number of lattices");
  c_sa->add_option("--seed", sa.seed, "RNG seed (required)");

  // Name an unknown subcommand instead of reporting a missing one.
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--workers") {
      ++i;
      continue;
    }
    if (args[i].starts_with("-")) continue;
    if (app.get_subcommand_no_throw(args[i]) == nullptr) {
      err << "error: unknown subcommand '" << args[i] << "'\nRun with --help for more information.\n";
      return kExitArgument;
    }
    break;
  }

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitArgument;
  }

  const auto started = std::chrono::steady_clock::now();
  try {
    std::string name;
    Output o;
    if (*c_sm) {
      name = "siegel-mean";
      o = siegel_mean_cmd(sm, settings);
    } else if (*c_mo) {
      name = "second-moment";
      o = second_moment_cmd(mo, settings);
    } else if (*c_kr) {
      name = "kr-measure";
      o = kr_measure_cmd(kr, settings);
    } else if (*c_th) {
      name = "thickening";
      o = thickening_cmd(th, settings);
    } else if (*c_ft) {
      name = "flow-trace";
      o = flow_trace_cmd(ft, settings);
    } else if (*c_bc) {
      name = "bc-experiment";
      o = bc_cmd(bc, settings);
    } else if (*c_dc) {
      name = "dani convert";
      o = dani_convert_cmd(dc, settings);
    } else if (*c_di) {
      name = "dirichlet-check";
      o = dirichlet_cmd(di, settings);
    } else {
      name = "sample-lattices";
      o = sample_cmd(sa, settings);
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    emit(name, o, seconds, out);
    return kExitOk;
  } catch (const CliError& e) {
    err << "error: " << e.what() << '\n';
    return e.code();
  } catch (const ConvergenceError& e) {
    err << "error: convergence: " << e.what() << " (best estimate " << e.best_estimate()
        << ", error estimate " << e.error_estimate() << ")\n";
    return kExitConvergence;
  } catch (const Error& e) {
    err << "error: " << to_string(e.kind()) << ": " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitOther;
  }
}

}  // namespace unimod::cli
