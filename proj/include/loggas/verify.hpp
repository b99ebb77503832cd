#pragma once

// Invariant suites run by `loggas verify`. Each check reports the measured
// residual next to its tolerance.

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "loggas/asymptotics.hpp"
#include "loggas/elliptic.hpp"
#include "loggas/spectral.hpp"
#include "loggas/theta.hpp"

namespace loggas::verify {

struct Check {
  std::string suite;
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;  // exception text when the check could not run
};

namespace detail {

inline constexpr double pi = std::numbers::pi;

template <class F>
void run(std::vector<Check>& out, const std::string& suite, const std::string& name, double tol, F&& measure) {
  Check c{suite, name, 0.0, tol, false, {}};
  try {
    c.measured = measure();
    c.pass = c.measured < tol;
  } catch (const std::exception& e) {
    c.measured = std::numeric_limits<double>::quiet_NaN();
    c.note = e.what();
  }
  out.push_back(std::move(c));
}

}  // namespace detail

inline std::vector<Check> theta_suite(bool quick) {
  using namespace theta;
  std::vector<Check> out;
  const int samples = quick ? 20 : 100;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  struct Sample {
    double t;
    cplx z, w;
  };
  std::vector<Sample> pts;
  for (int i = 0; i < samples; ++i) {
    const double t = 0.3 + 2.7 * std::abs(U(rng));
    pts.push_back({t, cplx(U(rng), 0.25 * t * U(rng)), cplx(U(rng), 0.25 * t * U(rng))});
  }
  // addition, duplication, quasi-periodicity, connection
  std::vector<std::string> names;
  {
    const auto rep = verify_theta_identities(pts[0].z, pts[0].w, ThetaParams::make(pts[0].t));
    for (const auto& r : rep.residuals) names.push_back(r.name);
  }
  std::vector<double> worst(names.size(), 0.0);
  bool ran = true;
  std::string note;
  try {
    for (const auto& s : pts) {
      const auto rep = verify_theta_identities(s.z, s.w, ThetaParams::make(s.t));
      for (std::size_t i = 0; i < rep.residuals.size() && i < worst.size(); ++i)
        worst[i] = std::max(worst[i], rep.residuals[i].residual);
    }
  } catch (const std::exception& e) {
    ran = false;
    note = e.what();
  }
  for (std::size_t i = 0; i < names.size(); ++i)
    out.push_back({"theta", names[i], ran ? worst[i] : std::numeric_limits<double>::quiet_NaN(), 1e-12,
                   ran && worst[i] < 1e-12, note});

  detail::run(out, "theta", "parity", 1e-12, [&] {
    double m = 0.0;
    for (const auto& s : pts) {
      const auto p = ThetaParams::make(s.t);
      for (int k = 0; k < 4; ++k) {
        const cplx a = theta_k(k, s.z, p).value, b = theta_k(k, -s.z, p).value;
        m = std::max(m, std::abs(k == 1 ? a + b : a - b) / std::max(1.0, std::abs(a)));
      }
    }
    return m;
  });
  detail::run(out, "theta", "zero locations", 1e-12, [&] {
    double m = 0.0;
    for (const auto& s : pts) {
      const auto p = ThetaParams::make(s.t);
      const cplx tau(0.0, s.t);
      m = std::max({m, std::abs(theta_k(3, 0.5 + 0.5 * tau, p).value), std::abs(theta_k(0, 0.5 * tau, p).value),
                    std::abs(theta_k(2, 0.5, p).value), std::abs(theta_k(1, 0.0, p).value)});
    }
    return m;
  });
  detail::run(out, "theta", "heat equation", 1e-12, [&] {
    double m = 0.0;
    for (const auto& s : pts) {
      const auto p = ThetaParams::make(s.t);
      for (int k = 0; k < 4; ++k) {
        const cplx series = theta_tau_derivative_series(k, s.z, p);
        m = std::max(m, std::abs(theta_tau_derivative(k, s.z, p) - series) / std::max(1.0, std::abs(series)));
      }
    }
    return m;
  });
  detail::run(out, "theta", "truncation doubling", 1e-14, [&] {
    double m = 0.0;
    for (const auto& s : pts) {
      const auto p = ThetaParams::make(s.t);
      for (int k = 0; k < 4; ++k) {
        const cplx a = theta_k(k, s.z, p).value, b = theta_k(k, s.z, p.doubled()).value;
        m = std::max(m, std::abs(a - b) / std::max(1.0, std::abs(b)));
      }
    }
    return m;
  });
  return out;
}

inline std::vector<Check> elliptic_suite(bool quick) {
  using namespace elliptic;
  std::vector<Check> out;
  std::vector<double> grid;
  for (int i = 1; i <= 9; i += quick ? 2 : 1) grid.push_back(0.1 * i);
  std::vector<EllipticData> eds;
  detail::run(out, "elliptic", "bilinear pi V - t kappa + 2 pi gamma_c", 1e-10, [&] {
    double m = 0.0;
    for (double k : grid) {
      eds.push_back(elliptic_data(k));
      m = std::max(m, std::abs(bilinear_residual(eds.back())));
    }
    return m;
  });
  detail::run(out, "elliptic", "u_inf = t/4", 1e-9, [&] {
    double m = 0.0;
    for (const auto& ed : eds) m = std::max(m, u_infinity_check(ed));
    return m;
  });
  detail::run(out, "elliptic", "AGM route agrees with quadrature", 1e-11, [&] {
    double m = 0.0;
    for (const auto& ed : eds) {
      const auto f = elliptic_data_fast(ed.kappa);
      m = std::max({m, std::abs(f.a - ed.a), std::abs(f.t - ed.t), std::abs(f.V - ed.V)});
    }
    return m;
  });
  // small-kappa expansions at kappa = 0.01, each residual divided by the size
  // of the next-order term it should be consistent with
  const double k = 0.01;
  detail::run(out, "elliptic", "a(kappa) small-kappa expansion / k^3", 2.0, [&] {
    const double approx = 1.0 - 2.0 * k / detail::pi - k * k / (detail::pi * detail::pi);
    return std::abs(solve_a(k) - approx) / (k * k * k);
  });
  detail::run(out, "elliptic", "V(kappa) small-kappa expansion / k^2 |ln k|", 2.0, [&] {
    const double V1 = -2.0 / detail::pi *
                      (1.0 + k / detail::pi * std::log(k) - k / detail::pi * (1.0 + std::log(4.0 * detail::pi)));
    return std::abs(elliptic_data_fast(k).V - V1) / (k * k * std::abs(std::log(k)));
  });
  detail::run(out, "elliptic", "t(kappa) small-kappa leading term", 0.05, [&] {
    return std::abs(elliptic_data_fast(k).t - 2.0 / detail::pi * std::log(4.0 * detail::pi / k));
  });
  detail::run(out, "elliptic", "dt/dkappa closed form vs differences", 1e-6, [&] {
    const double kk = 0.5;
    return std::abs(dtau_dkappa(kk) - dt_dkappa_closed(elliptic_data(kk))) / std::abs(dtau_dkappa(kk));
  });
  return out;
}

inline std::vector<Check> spectral_suite(bool quick) {
  using namespace spectral;
  std::vector<Check> out;
  detail::run(out, "spectral", "trace = 2s/pi (relative)", 1e-8, [&] {
    double m = 0.0;
    for (double s : quick ? std::vector<double>{2.0, 5.0, 10.0} : std::vector<double>{2.0, 5.0, 10.0, 20.0}) {
      const auto sd = build_spectrum(s);
      m = std::max(m, std::abs(sd.trace - 2.0 * s / detail::pi) / (2.0 * s / detail::pi));
    }
    return m;
  });
  const auto sd5 = build_spectrum(5.0);
  std::vector<double> p;
  detail::run(out, "spectral", "sum p_n = 1 at s=5", 1e-8, [&] {
    p = gap_probabilities(sd5, 60);
    double t = 0.0;
    for (double x : p) t += x;
    return std::abs(t - 1.0);
  });
  detail::run(out, "spectral", "sum n p_n = 10/pi at s=5 (relative)", 1e-6, [&] {
    double m = 0.0;
    for (std::size_t n = 0; n < p.size(); ++n) m += n * p[n];
    return std::abs(m / (10.0 / detail::pi) - 1.0);
  });
  detail::run(out, "spectral", "resummation sum e^{-2nv} p_n", 1e-8, [&] {
    double m = 0.0;
    for (double v : {1.0, 2.0, 3.0}) {
      double sum = 0.0;
      for (std::size_t n = 0; n < p.size(); ++n) sum += std::exp(-2.0 * n * v) * p[n];
      m = std::max(m, std::abs(std::log(sum) - oracle_logdet_v(sd5, v).log_det));
    }
    return m;
  });
  detail::run(out, "spectral", "sandwich violations", 0.5, [&] {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    int bad = 0;
    for (int i = 0; i < (quick ? 6 : 20); ++i) {
      const double s = 1.0 + 14.0 * U(rng), v = 0.05 + 7.0 * U(rng);
      const auto b = asymptotics::bound_sandwich(asymptotics::ScalePoint::make(s, v));
      const double o = oracle_logdet_v(build_spectrum(s), v).log_det;
      bad += (b.lower <= o && o <= b.upper) ? 0 : 1;
    }
    return double(bad);
  });
  detail::run(out, "spectral", "node refinement at s=10", 1e-8, [&] {
    const double g = -std::expm1(-1.0);
    return std::abs(oracle_logdet(build_spectrum(10.0, 120), g).log_det -
                    oracle_logdet(build_spectrum(10.0, 240), g).log_det);
  });
  return out;
}

inline std::vector<Check> asymptotics_suite(bool quick) {
  using namespace asymptotics;
  std::vector<Check> out;
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  const std::vector<double> kgrid = quick ? std::vector<double>{0.2, 0.6} : std::vector<double>{0.1, 0.3, 0.5, 0.7, 0.9};
  const int nx = quick ? 5 : 20;
  detail::run(out, "asymptotics", "Xi1 = -Xi0, Xi2 = Xi3, Theta1 = Theta0", 1e-10, [&] {
    double m = 0.0;
    for (double k : kgrid) {
      const auto ed = elliptic::elliptic_data_fast(k);
      for (int i = 0; i < nx; ++i) {
        const double x = U(rng);
        m = std::max({m, std::abs(xi_k(1, x, ed) + xi_k(0, x, ed)), std::abs(xi_k(2, x, ed) - xi_k(3, x, ed)),
                      std::abs(big_theta1(x, ed) - big_theta0(x, ed))});
      }
    }
    return m;
  });
  detail::run(out, "asymptotics", "M imaginary residue", 1e-10, [&] {
    double m = 0.0;
    for (double k : kgrid) {
      const auto ed = elliptic::elliptic_data_fast(k);
      const auto p = theta::ThetaParams::make(ed.t);
      const double d = elliptic::dt_dkappa_closed(ed);
      for (int i = 0; i < nx; ++i) m = std::max(m, std::abs(asymptotics::detail::m_complex(U(rng), ed, d, p).imag()));
    }
    return m;
  });
  detail::run(out, "asymptotics", "M periodicity", 1e-10, [&] {
    double m = 0.0;
    for (double k : kgrid) {
      const auto ed = elliptic::elliptic_data_fast(k);
      const double d = elliptic::dt_dkappa_closed(ed);
      for (int i = 0; i < nx; ++i) {
        const double x = U(rng);
        m = std::max(m, std::abs(m_density(x + 1.0, ed, d) - m_density(x, ed, d)));
      }
    }
    return m;
  });
  detail::run(out, "asymptotics", "|m_integral| on the bulk grid", 5.0, [&] {
    double m = 0.0;
    const auto pts = quick ? std::vector<std::pair<double, double>>{{15.0, 0.3}}
                           : std::vector<std::pair<double, double>>{{15.0, 0.3}, {20.0, 0.4}, {25.0, 0.5}};
    for (auto [s, k] : pts) m = std::max(m, std::abs(m_integral(s, k * s)));
    return m;
  });
  detail::run(out, "asymptotics", "|m_integral| at kappa=0.05", 0.15, [&] { return std::abs(m_integral(20.0, 1.0)); });
  detail::run(out, "asymptotics", "|a0(0.05)|", 0.1, [&] { return std::abs(a0_average(0.05)); });
  detail::run(out, "asymptotics", "|theorem1 - fixedv| at s=100, v=1", 0.1, [&] {
    const auto p = ScalePoint::make(100.0, 1.0);
    return std::abs(theorem1_logdet(p).log_det - fixedv_logdet(p).log_det);
  });
  detail::run(out, "asymptotics", "theorem1 error / envelope at kappa=0.4", 1.0, [&] {
    const double s = quick ? 15.0 : 25.0;
    const auto r = theorem1_logdet(ScalePoint::from_kappa(s, 0.4));
    const double o = spectral::oracle_logdet_v(spectral::build_spectrum(s), 0.4 * s).log_det;
    return std::abs(r.log_det - o) / *r.error_bound;
  });
  detail::run(out, "asymptotics", "|theorem2 - oracle|/|oracle| at s=8, v=8", 0.2, [&] {
    const double o = spectral::oracle_logdet_v(spectral::build_spectrum(8.0), 8.0).log_det;
    return std::abs(theorem2_logdet(ScalePoint::make(8.0, 8.0), 0.1).log_det - o) / std::abs(o);
  });
  detail::run(out, "asymptotics", "|gue - oracle(gamma=1)| at s=8", 0.15, [&] {
    const double o = spectral::oracle_logdet(spectral::build_spectrum(8.0, 160), 1.0).log_det;
    return std::abs(gue_gap_logdet(8.0).log_det - o);
  });
  detail::run(out, "asymptotics", "positive log_det outputs", 0.5, [&] {
    int bad = 0;
    for (double s : {5.0, 20.0})
      for (double v : {0.5, 2.0}) {
        const auto p = ScalePoint::make(s, v);
        bad += fixedv_logdet(p).log_det > 0.0;
      }
    bad += theorem2_logdet(ScalePoint::make(8.0, 8.0), 0.1).log_det > 0.0;
    return double(bad);
  });
  return out;
}

inline std::vector<Check> run_suite(const std::string& suite, bool quick) {
  if (suite == "theta") return theta_suite(quick);
  if (suite == "elliptic") return elliptic_suite(quick);
  if (suite == "spectral") return spectral_suite(quick);
  if (suite == "asymptotics") return asymptotics_suite(quick);
  if (suite == "all") {
    std::vector<Check> out;
    for (const char* s : {"theta", "elliptic", "spectral", "asymptotics"}) {
      auto c = run_suite(s, quick);
      out.insert(out.end(), c.begin(), c.end());
    }
    return out;
  }
  throw InvalidArgument("unknown suite '" + suite + "'");
}

}  // namespace loggas::verify
