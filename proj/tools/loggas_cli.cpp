// loggas: command-line front end.
//
//   loggas eval   --s 20 --kappa 0.4 --method all
//   loggas scan   --axis kappa --start 0.1 --stop 0.6 --steps 6 --s 20 --methods oracle,theorem1
//   loggas verify --suite theta --quick
//   loggas pn     --s 5 --n-max 12

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "loggas/evaluate.hpp"
#include "loggas/report.hpp"
#include "loggas/spectral.hpp"
#include "loggas/verify.hpp"

namespace {

constexpr const char* kVersion = "1.0.0";

enum Exit { kOk = 0, kUsage = 1, kErrorRows = 2, kVerifyFailed = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  int nodes = 0;
  double tol = 1e-3;
  double chi = 0.1;
  double delta = 0.05;
  double eps = 0.2;
  std::string config;

  loggas::evaluate::Options options() const {
    loggas::evaluate::Options o;
    o.nodes = nodes;
    o.chi = chi;
    o.delta = delta;
    o.eps = eps;
    o.m_cutoff = tol;
    return o;
  }
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--nodes", c.nodes, "Nystrom node count (0 = max(60, ceil(10 s)))")->check(CLI::NonNegativeNumber);
  sub->add_option("--tol", c.tol, "M-integral lower cutoff u_min; the dropped tail is bounded by C u_min")
      ->check(CLI::PositiveNumber);
  sub->add_option("--chi", c.chi, "band parameter for theorem2")->check(CLI::NonNegativeNumber);
  sub->add_option("--delta", c.delta, "theorem1 applies for kappa <= 1 - delta");
  sub->add_option("--eps", c.eps, "region-i advisory exponent");
  sub->add_option("--config", c.config, "flat key=value file; command-line flags take precedence");
}

// Fills options that were not given on the command line from the config file.
void apply_config(CLI::App* sub, const std::string& path) {
  if (path.empty()) return;
  for (const auto& [key, value] : loggas::report::load_config(path)) {
    if (key == "config") continue;
    CLI::Option* opt = sub->get_option_no_throw("--" + key);
    if (!opt) throw UsageError("config: unknown key '" + key + "' for " + sub->get_name());
    if (opt->count() > 0) continue;
    opt->add_result(value);
    opt->run_callback();
  }
}

std::vector<std::string> check_methods(const std::vector<std::string>& methods) {
  if (methods.empty()) throw UsageError("no method given");
  for (const auto& m : methods)
    if (m != "all" && !loggas::evaluate::is_method(m)) throw UsageError("unknown method '" + m + "'");
  return methods;
}

std::map<std::string, std::string> base_meta(const std::string& command, const Common& c) {
  using loggas::report::format_number;
  return {{"tool", std::string("loggas ") + kVersion},
          {"command", command},
          {"nodes", c.nodes > 0 ? std::to_string(c.nodes) : "max(60;ceil(10s))"},
          {"m_cutoff", format_number(c.tol)},
          {"chi", format_number(c.chi)},
          {"delta", format_number(c.delta)},
          {"eps", format_number(c.eps)},
          {"theta_truncation", "1e-18"},
          {"oracle_guard", "1e3 x eigenvalue accuracy"}};
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

unsigned thread_count(std::size_t work) {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("LOGGAS_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || cap < 1) throw UsageError("LOGGAS_THREADS must be a positive integer");
    n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(work, 1)));
}

// ---------------------------------------------------------------- eval

struct EvalArgs {
  Common common;
  double s = 0.0;
  std::optional<double> v, kappa;
  std::vector<std::string> methods{"all"};
  bool json = false;
};

int run_eval(CLI::App* sub, EvalArgs& a) {
  apply_config(sub, a.common.config);
  if (sub->get_option("--s")->count() == 0) throw UsageError("eval: --s is required");
  if (a.v.has_value() == a.kappa.has_value()) throw UsageError("eval: give exactly one of --v and --kappa");
  const double v = a.v ? *a.v : *a.kappa * a.s;
  if (!(a.s > 0.0) || !std::isfinite(a.s)) throw UsageError("eval: --s must be finite and > 0");
  if (!(v >= 0.0)) throw UsageError("eval: v must be >= 0");
  const auto methods = check_methods(a.methods);

  loggas::report::RunReport rep;
  rep.meta = base_meta("eval", a.common);
  rep.rows = loggas::evaluate::evaluate_point(a.s, v, methods, a.common.options());
  if (a.json) {
    auto j = loggas::report::to_json(rep);
    j["meta"]["generated_at"] = utc_now();
    std::cout << j.dump(2) << '\n';
  } else {
    loggas::report::write_table(std::cout, rep);
  }
  for (const auto& r : rep.rows)
    if (r.is_error()) return kErrorRows;
  return kOk;
}

// ---------------------------------------------------------------- scan

struct ScanArgs {
  Common common;
  std::string axis = "s";
  double start = 0.0, stop = 0.0;
  int steps = 0;
  std::optional<double> s, v, kappa;
  std::vector<std::string> methods{"oracle"};
  std::string format = "csv";
  std::string out;
  bool stokes = false;
  int q_max = 3;
};

struct Point {
  double s, v;
};

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = (i == n - 1) ? b : a + (b - a) * i / (n - 1);
  return x;
}

int run_scan(CLI::App* sub, ScanArgs& a) {
  apply_config(sub, a.common.config);
  if (!(a.start < a.stop)) throw UsageError("scan: need --start < --stop");
  if (a.steps < 2) throw UsageError("scan: need --steps >= 2");
  const auto grid = linspace(a.start, a.stop, a.steps);

  std::ofstream file;
  if (!a.out.empty()) {
    file.open(a.out);
    if (!file) throw UsageError("scan: cannot open '" + a.out + "' for writing");
  }
  std::ostream& os = a.out.empty() ? std::cout : file;

  if (a.stokes) {
    if (a.axis != "s") throw UsageError("scan --stokes runs over an s grid (--axis s)");
    if (a.q_max < 1) throw UsageError("scan: --q-max must be >= 1");
    if (!(a.start > 1.0)) throw UsageError("scan --stokes: s must exceed 1");
    os << "s,q,chi,v\n";
    for (double s : grid)
      for (const auto& l : loggas::asymptotics::stokes_lines(s, a.q_max))
        os << loggas::report::format_number(s) << ',' << l.q << ',' << loggas::report::format_number(l.chi) << ','
           << loggas::report::format_number(l.v) << '\n';
    return kOk;
  }

  const auto methods = check_methods(a.methods);
  std::vector<Point> pts;
  if (a.axis == "s") {
    if (a.v.has_value() == a.kappa.has_value()) throw UsageError("scan --axis s: give exactly one of --v and --kappa");
    for (double s : grid) pts.push_back({s, a.v ? *a.v : *a.kappa * s});
  } else if (a.axis == "v" || a.axis == "kappa") {
    if (!a.s) throw UsageError("scan --axis " + a.axis + ": --s is required");
    for (double x : grid) pts.push_back({*a.s, a.axis == "v" ? x : x * *a.s});
  } else {
    throw UsageError("scan: --axis must be s, v or kappa");
  }
  for (const auto& p : pts)
    if (!(p.s > 0.0) || !(p.v >= 0.0)) throw UsageError("scan: grid leaves the domain s > 0, v >= 0");

  // points evaluated concurrently, rows assembled in grid order
  std::vector<std::vector<loggas::report::Row>> rows(pts.size());
  const auto opts = a.common.options();
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < pts.size();)
      rows[i] = loggas::evaluate::evaluate_point(pts[i].s, pts[i].v, methods, opts);
  };
  const unsigned nt = thread_count(pts.size());
  std::vector<std::thread> threads;
  for (unsigned t = 1; t < nt; ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();

  loggas::report::RunReport rep;
  rep.meta = base_meta("scan", a.common);
  rep.meta["axis"] = a.axis;
  for (auto& r : rows) rep.rows.insert(rep.rows.end(), r.begin(), r.end());
  if (a.format == "json") {
    auto j = loggas::report::to_json(rep);
    j["meta"]["generated_at"] = utc_now();
    os << j.dump(2) << '\n';
  } else {
    loggas::report::write_csv(os, rep);
  }
  std::cerr << "scan: " << rep.rows.size() << " rows, " << rep.flagged_rows() << " flagged\n";
  return kOk;
}

// -------------------------------------------------------------- verify

struct VerifyArgs {
  std::string suite = "all";
  bool quick = false;
};

int run_verify(const VerifyArgs& a) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto checks = loggas::verify::run_suite(a.suite, a.quick);
  std::vector<std::string> failed;
  for (const auto& c : checks) {
    std::cout << (c.pass ? "PASS " : "FAIL ") << std::left << std::setw(12) << c.suite << ' ' << std::setw(56)
              << c.name << " measured=" << std::scientific << std::setprecision(3) << c.measured
              << " tol=" << c.tolerance << std::defaultfloat;
    if (!c.note.empty()) std::cout << "  (" << c.note << ")";
    std::cout << '\n';
    if (!c.pass) failed.push_back(c.suite + ": " + c.name);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << checks.size() - failed.size() << '/' << checks.size() << " invariants passed in " << std::fixed
            << std::setprecision(1) << secs << " s\n";
  if (failed.empty()) return kOk;
  for (const auto& f : failed) std::cerr << "failed invariant: " << f << '\n';
  return kVerifyFailed;
}

// ------------------------------------------------------------------ pn

struct PnArgs {
  double s = 0.0;
  int n_max = 20;
  int nodes = 0;
  bool json = false;
};

int run_pn(const PnArgs& a) {
  if (!(a.s > 0.0) || !std::isfinite(a.s)) throw UsageError("pn: --s must be finite and > 0");
  if (a.n_max < 0) throw UsageError("pn: --n-max must be >= 0");
  const auto sd = loggas::spectral::build_spectrum(a.s, a.nodes);
  const auto p = loggas::spectral::gap_probabilities(sd, a.n_max);
  double total = 0.0, mean = 0.0;
  for (int n = 0; n <= a.n_max; ++n) {
    total += p[n];
    mean += n * p[n];
  }
  const double expect = 2.0 * a.s / std::numbers::pi;
  if (a.json) {
    nlohmann::json j;
    j["meta"] = {{"tool", std::string("loggas ") + kVersion}, {"s", a.s}, {"nodes", sd.n_nodes}};
    j["p"] = p;
    j["sum_p"] = total;
    j["sum_np"] = mean;
    j["two_s_over_pi"] = expect;
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << "n  p_n\n";
    for (int n = 0; n <= a.n_max; ++n) std::cout << n << "  " << loggas::report::format_number(p[n]) << '\n';
    std::cout << "sum p_n     = " << loggas::report::format_number(total) << '\n'
              << "sum n p_n   = " << loggas::report::format_number(mean) << '\n'
              << "2s/pi       = " << loggas::report::format_number(expect) << '\n';
  }
  if (1.0 - total > 1e-10)
    std::cerr << "warning: normalization deficit 1 - sum p_n = " << 1.0 - total
              << "; raise --n-max to capture the remaining mass\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"loggas: sine-kernel determinant oracle, asymptotics and invariant checks"};
  app.set_version_flag("--version", std::string("loggas ") + kVersion);
  app.require_subcommand(1);

  EvalArgs ea;
  auto* ev = app.add_subcommand("eval", "evaluate methods at one (s, v) point");
  ev->add_option("--s", ea.s, "interval scale s");
  ev->add_option("--v", ea.v, "v >= 0 (gamma = 1 - e^{-2v}; inf for the hard gap)");
  ev->add_option("--kappa", ea.kappa, "kappa = v/s");
  ev->add_option("--method,--methods", ea.methods,
                 "oracle|fixedv|theorem1|theorem1-theta4|theorem2|gue|bounds|all, comma separated")
      ->delimiter(',');
  ev->add_flag("--json", ea.json, "emit JSON instead of a table");
  add_common(ev, ea.common);

  ScanArgs sa;
  auto* sc = app.add_subcommand("scan", "evaluate methods along a grid; CSV to stdout or --out");
  sc->add_option("--axis", sa.axis, "s|v|kappa");
  sc->add_option("--start", sa.start);
  sc->add_option("--stop", sa.stop);
  sc->add_option("--steps", sa.steps);
  sc->add_option("--s", sa.s, "fixed s for v or kappa scans");
  sc->add_option("--v", sa.v, "fixed v for s scans");
  sc->add_option("--kappa", sa.kappa, "fixed kappa for s scans");
  sc->add_option("--method,--methods", sa.methods, "comma separated method list")->delimiter(',');
  sc->add_option("--format", sa.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  sc->add_option("--out", sa.out, "output file");
  sc->add_flag("--stokes", sa.stokes, "emit Stokes lines v_q(s) instead of determinants");
  sc->add_option("--q-max", sa.q_max, "number of Stokes lines");
  add_common(sc, sa.common);

  VerifyArgs va;
  auto* vf = app.add_subcommand("verify", "run invariant suites; exit 3 on any failure");
  vf->add_option("--suite", va.suite)->check(CLI::IsMember({"theta", "elliptic", "spectral", "asymptotics", "all"}));
  vf->add_flag("--quick", va.quick, "smaller sample sets");

  PnArgs pa;
  auto* pn = app.add_subcommand("pn", "probabilities of n points in (-s/pi, s/pi)");
  pn->add_option("--s", pa.s)->required();
  pn->add_option("--n-max", pa.n_max);
  pn->add_option("--nodes", pa.nodes)->check(CLI::NonNegativeNumber);
  pn->add_flag("--json", pa.json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (ev->parsed()) return run_eval(ev, ea);
    if (sc->parsed()) return run_scan(sc, sa);
    if (vf->parsed()) return run_verify(va);
    if (pn->parsed()) return run_pn(pa);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const loggas::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kErrorRows;
  }
  return kUsage;
}
