// Acceptance run: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (0 when all pass).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "loggas/asymptotics.hpp"
#include "loggas/elliptic.hpp"
#include "loggas/spectral.hpp"
#include "loggas/verify.hpp"

using namespace loggas;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double x) {
  char b[64];
  std::snprintf(b, sizeof b, f, x);
  return b;
}

double oracle(double s, double v) { return spectral::oracle_logdet_v(spectral::build_spectrum(s), v).log_det; }

Outcome trace_identity() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (double s : {2.0, 5.0, 10.0, 20.0}) {
    const auto sd = spectral::build_spectrum(s);
    worst = std::max(worst, std::abs(sd.trace - 2.0 * s / pi) / (2.0 * s / pi));
  }
  const double dt = seconds_since(t0);
  return {worst < 1e-8 && dt < 10.0, "max rel err " + fmt("%.2e", worst) + ", " + fmt("%.1f", dt) + " s"};
}

Outcome eigenvalue_asymptotics() {
  // relative error of the leading-order formula for 1 - lambda_n
  auto rel = [](double s, int n) {
    const auto sd = spectral::build_spectrum(s);
    const double exact = 1.0 - sd.eigenvalues[n];
    return std::abs(asymptotics::one_minus_lambda_asymptotic(n, s) / exact - 1.0);
  };
  bool pass = true;
  std::ostringstream d;
  d << "rel err at s=8:";
  for (int n = 0; n <= 3; ++n) {
    const double e6 = rel(6.0, n), e8 = rel(8.0, n), e10 = rel(10.0, n);
    d << " n" << n << "=" << fmt("%.3f", e8);
    pass = pass && e8 < 0.15 && e10 < e8 && e8 < e6;
  }
  return {pass, d.str()};
}

Outcome gap_probabilities() {
  const auto sd = spectral::build_spectrum(5.0);
  const auto p = spectral::gap_probabilities(sd, 60);
  double total = 0.0, mean = 0.0;
  for (std::size_t n = 0; n < p.size(); ++n) {
    total += p[n];
    mean += n * p[n];
  }
  const double e_norm = std::abs(total - 1.0), e_mean = std::abs(mean / (10.0 / pi) - 1.0);
  double e_res = 0.0;
  for (double v : {1.0, 2.0, 3.0}) {
    double sum = 0.0;
    for (std::size_t n = 0; n < p.size(); ++n) sum += std::exp(-2.0 * n * v) * p[n];
    e_res = std::max(e_res, std::abs(std::log(sum) - spectral::oracle_logdet_v(sd, v).log_det));
  }
  return {e_norm < 1e-8 && e_mean < 1e-6 && e_res < 1e-8,
          "|sum p - 1| " + fmt("%.1e", e_norm) + ", mean rel " + fmt("%.1e", e_mean) + ", resummation " +
              fmt("%.1e", e_res)};
}

Outcome fixed_v() {
  std::vector<double> err;
  for (double s : {20.0, 40.0, 80.0})
    err.push_back(std::abs(asymptotics::fixedv_logdet(asymptotics::ScalePoint::make(s, 0.5)).log_det - oracle(s, 0.5)));
  const bool pass = err[0] < 0.1 && err[1] < 0.1 && err[2] < 0.1 && err[1] < err[0] && err[2] < err[1] &&
                    err[2] < 0.5 * err[0];
  return {pass, "errors " + fmt("%.2e", err[0]) + ", " + fmt("%.2e", err[1]) + ", " + fmt("%.2e", err[2]) +
                    " at s = 20, 40, 80"};
}

// filled by theorem1_envelope, read by m_correction
std::vector<double> g_m_integrals;

Outcome theorem1_envelope() {
  const auto t0 = std::chrono::steady_clock::now();
  bool pass = true;
  std::ostringstream d;
  double worst_ratio = 0.0;
  for (double kappa : {0.3, 0.4, 0.5}) {
    double gap15 = 0.0, gap25 = 0.0;
    for (double s : {15.0, 20.0, 25.0}) {
      const auto r = asymptotics::theorem1_logdet(asymptotics::ScalePoint::from_kappa(s, kappa));
      g_m_integrals.push_back(r.diagnostics.at("m_integral"));
      const double gap = std::abs(r.log_det - oracle(s, kappa * s));
      worst_ratio = std::max(worst_ratio, gap / *r.error_bound);
      pass = pass && gap <= *r.error_bound;
      if (s == 15.0) gap15 = gap;
      if (s == 25.0) gap25 = gap;
    }
    d << " k=" << kappa << ": s15 " << fmt("%.1e", gap15) << ", s25 " << fmt("%.1e", gap25) << ";";
    pass = pass && gap25 < gap15;
  }
  const double dt = seconds_since(t0);
  pass = pass && dt < 120.0;
  return {pass, "max gap/envelope " + fmt("%.1e", worst_ratio) + ";" + d.str() + " " + fmt("%.0f", dt) + " s"};
}

Outcome theta3_vs_theta4() {
  const double kappa = 0.5;
  const auto ed = elliptic::elliptic_data(kappa);
  const double period = 1.0 / std::abs(ed.V);
  double m3 = 0.0, m4 = 0.0;
  const int n = 8;
  for (int j = 0; j < n; ++j) {
    const double s = 20.0 + period * j / n;
    const auto p = asymptotics::ScalePoint::from_kappa(s, kappa);
    const double o = oracle(s, p.v);
    m3 += std::abs(asymptotics::theorem1_logdet(p, false).log_det - o) / n;
    m4 += std::abs(asymptotics::theorem1_logdet(p, true).log_det - o) / n;
  }
  return {m3 < m4, "mean |theta3 - oracle| " + fmt("%.2e", m3) + " vs theta4 " + fmt("%.2e", m4)};
}

Outcome theorem2_gue() {
  const double o_hard = spectral::oracle_logdet(spectral::build_spectrum(8.0, 160), 1.0).log_det;
  const double e_gue = std::abs(asymptotics::gue_gap_logdet(8.0).log_det - o_hard);
  const double o = oracle(8.0, 8.0);
  const double e2 = std::abs(asymptotics::theorem2_logdet(asymptotics::ScalePoint::make(8.0, 8.0), 0.1).log_det - o) /
                    std::abs(o);
  return {e_gue < 0.15 && e2 < 0.2, "|gue - oracle| " + fmt("%.2e", e_gue) + ", theorem2 rel " + fmt("%.2e", e2)};
}

Outcome elliptic_identities() {
  double bil = 0.0, uinf = 0.0;
  for (int i = 1; i <= 9; ++i) {
    const auto ed = elliptic::elliptic_data(0.1 * i);
    bil = std::max(bil, std::abs(elliptic::bilinear_residual(ed)));
    uinf = std::max(uinf, elliptic::u_infinity_check(ed));
  }
  // small-kappa expansions at 0.01, residuals scaled by the next-order term
  const double k = 0.01;
  const auto ed = elliptic::elliptic_data(k);
  const double ra = std::abs(ed.a - (1.0 - 2.0 * k / pi - k * k / (pi * pi))) / (k * k * k);
  const double V1 = -2.0 / pi * (1.0 + k / pi * std::log(k) - k / pi * (1.0 + std::log(4.0 * pi)));
  const double rV = std::abs(ed.V - V1) / (k * k * std::abs(std::log(k)));
  // t = (2/pi) ln(4 pi/kappa) + o(1): the remainder must shrink with kappa
  const double rt = std::abs(ed.t - 2.0 / pi * std::log(4.0 * pi / k));
  const double rt_small = std::abs(elliptic::elliptic_data(1e-4).t - 2.0 / pi * std::log(4.0 * pi / 1e-4));
  const bool pass = bil < 1e-10 && uinf < 1e-9 && ra < 2.0 && rV < 2.0 && rt < 0.05 && rt_small < rt;
  return {pass, "bilinear " + fmt("%.1e", bil) + ", u_inf " + fmt("%.1e", uinf) + ", a/k^3 " + fmt("%.2f", ra) +
                    ", V/(k^2|ln k|) " + fmt("%.2f", rV) + ", t rem " + fmt("%.1e", rt)};
}

Outcome theta_identities() {
  const auto checks = verify::theta_suite(false);
  double worst = 0.0;
  bool pass = !checks.empty();
  for (const auto& c : checks) {
    pass = pass && c.pass;
    worst = std::max(worst, c.measured);
  }
  return {pass && worst < 1e-12, std::to_string(checks.size()) + " identity families on 100 samples, max residual " +
                                     fmt("%.1e", worst)};
}

Outcome m_correction() {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-3.0, 3.0);
  double imag = 0.0, period = 0.0;
  for (double kappa : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const auto ed = elliptic::elliptic_data_fast(kappa);
    const auto p = theta::ThetaParams::make(ed.t);
    const double d = elliptic::dt_dkappa_closed(ed);
    for (int i = 0; i < 20; ++i) {
      const double x = U(rng);
      imag = std::max(imag, std::abs(asymptotics::detail::m_complex(x, ed, d, p).imag()));
      period = std::max(period, std::abs(asymptotics::m_density(x + 1.0, ed, d) - asymptotics::m_density(x, ed, d)));
    }
  }
  double grid_max = 0.0;
  for (double m : g_m_integrals) grid_max = std::max(grid_max, std::abs(m));
  if (g_m_integrals.empty())
    for (double kappa : {0.3, 0.4, 0.5})
      for (double s : {15.0, 20.0, 25.0}) grid_max = std::max(grid_max, std::abs(asymptotics::m_integral(s, kappa * s)));
  const double small = std::abs(asymptotics::m_integral(20.0, 1.0));
  return {imag < 1e-10 && period < 1e-10 && grid_max < 5.0 && small < 0.15,
          "imag " + fmt("%.1e", imag) + ", periodicity " + fmt("%.1e", period) + ", max |m_integral| " +
              fmt("%.1e", grid_max) + ", at kappa=0.05 " + fmt("%.1e", small)};
}

Outcome bounds_sandwich() {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  int bad = 0, n = 0;
  while (n < 20) {
    const double s = 0.5 + 19.5 * U(rng), v = 0.01 + 12.0 * U(rng);
    const auto sd = spectral::build_spectrum(s);
    if (v > spectral::max_trustworthy_v(sd)) continue;
    const auto b = asymptotics::bound_sandwich(asymptotics::ScalePoint::make(s, v));
    const double o = spectral::oracle_logdet_v(sd, v).log_det;
    bad += (b.lower <= o && o <= b.upper) ? 0 : 1;
    ++n;
  }
  return {bad == 0, std::to_string(n - bad) + "/" + std::to_string(n) + " points inside"};
}

Outcome bohigas_pato() {
  const double target = -6.0 / pi;
  std::vector<double> gaps;
  for (double g : {0.4, 0.2, 0.1}) gaps.push_back(std::abs(spectral::bohigas_pato(g, 3.0).log_det - target));
  return {gaps[1] < gaps[0] && gaps[2] < gaps[1] && gaps[2] < 0.1,
          "gaps to -6/pi " + fmt("%.4f", gaps[0]) + ", " + fmt("%.4f", gaps[1]) + ", " + fmt("%.4f", gaps[2])};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"trace identity", trace_identity},
      {"eigenvalue asymptotics", eigenvalue_asymptotics},
      {"gap probabilities", gap_probabilities},
      {"fixed-v regime", fixed_v},
      {"theorem 1 envelope", theorem1_envelope},
      {"theta3 vs theta4", theta3_vs_theta4},
      {"theorem 2 / GUE gap", theorem2_gue},
      {"elliptic identities", elliptic_identities},
      {"theta identities", theta_identities},
      {"M-correction properties", m_correction},
      {"bounds sandwich", bounds_sandwich},
      {"Bohigas-Pato", bohigas_pato},
  };
  int failed = 0, i = 0;
  for (const auto& [name, fn] : criteria) {
    ++i;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("%s  %2d  %-24s %s\n", o.pass ? "PASS" : "FAIL", i, name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed;
}
