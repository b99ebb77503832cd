#pragma once

// Closed-form asymptotic evaluations of ln det(I - gamma K_s):
// fixed v, the bulk regime with its theta oscillation and M correction, the
// diagonal regime next to the hard gap, and the hard gap itself.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "loggas/constants.hpp"
#include "loggas/elliptic.hpp"
#include "loggas/errors.hpp"
#include "loggas/numerics.hpp"
#include "loggas/result.hpp"
#include "loggas/theta.hpp"

namespace loggas::asymptotics {

using theta::cplx;

struct ScalePoint {
  double s = 1.0;
  double v = 0.0;
  double kappa = 0.0;
  double gamma = 0.0;
  double one_minus_gamma = 1.0;  // e^{-2v}, exact; 0 for v = inf

  static ScalePoint make(double s, double v) {
    if (!(s > 0.0) || !std::isfinite(s)) throw InvalidArgument("ScalePoint: s must be finite and > 0");
    if (!(v >= 0.0)) throw InvalidArgument("ScalePoint: v must be >= 0");
    ScalePoint p;
    p.s = s;
    p.v = v;
    p.kappa = v / s;
    if (std::isinf(v)) {
      p.gamma = 1.0;
      p.one_minus_gamma = 0.0;
    } else {
      p.gamma = -std::expm1(-2.0 * v);
      p.one_minus_gamma = std::exp(-2.0 * v);
    }
    return p;
  }

  static ScalePoint from_kappa(double s, double kappa) {
    if (!(kappa >= 0.0)) throw InvalidArgument("ScalePoint: kappa must be >= 0");
    return make(s, kappa * s);
  }
};

// ---------------------------------------------------------------- fixed v

namespace detail {

// sum_{k >= N} k^{-p} by Euler-Maclaurin, N >= 64.
inline double hurwitz_tail(double p, double N) {
  const double np = std::pow(N, -p);
  return N * np / (p - 1.0) + 0.5 * np + p * np / (12.0 * N) -
         p * (p + 1.0) * (p + 2.0) * np / (720.0 * N * N * N) +
         p * (p + 1.0) * (p + 2.0) * (p + 3.0) * (p + 4.0) * np / (30240.0 * N * N * N * N * N);
}

}  // namespace detail

/// ln b(v), b(v) = e^{(1+gamma_E) v^2/pi^2} prod_k (1 + v^2/(pi^2 k^2))^k e^{-v^2/(pi^2 k)}.
/// Terms k <= K summed directly; the rest from the expansion of k log1p(x/k^2) - x/k
/// in powers of x/k^2 with Hurwitz tails.
inline double barnes_b(double v) {
  if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidArgument("barnes_b: v must be finite and >= 0");
  if (v == 0.0) return 0.0;
  const double x = v * v / (std::numbers::pi * std::numbers::pi);
  const int K = std::max(64, static_cast<int>(std::ceil(30.0 * std::sqrt(x))));
  double direct = 0.0;
  for (int k = K; k >= 1; --k) direct += k * std::log1p(x / (double(k) * k)) - x / k;
  // sum_{k>K} sum_{m>=2} (-1)^{m+1} x^m / (m k^{2m-1})
  double tail = 0.0, xm = x;
  for (int m = 2; m < 40; ++m) {
    xm *= x;
    const double term = (m % 2 ? 1.0 : -1.0) * xm / m * detail::hurwitz_tail(2.0 * m - 1.0, K + 1.0);
    tail += term;
    if (std::abs(term) < 1e-17 * std::max(std::abs(tail), 1e-300)) break;
  }
  return (1.0 + constants::euler_gamma) * x + direct + tail;
}

/// A(v) = 2 ln b(v) - (v^2/pi^2)(3 + 2 ln(pi/v)).
inline double a_of_v(double v) {
  if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument("a_of_v: v must be finite and > 0");
  const double x = v * v / (std::numbers::pi * std::numbers::pi);
  return 2.0 * barnes_b(v) - x * (3.0 + 2.0 * std::log(std::numbers::pi / v));
}

struct FixedVOptions {
  double c1 = 1.0;
  double c2 = 1.0;
};

/// F(s, v) = -4 v s/pi + (2 v^2/pi^2) ln(4 s) + 2 ln b(v).
inline LogDetResult fixedv_logdet(const ScalePoint& p, const FixedVOptions& o = {}) {
  if (std::isinf(p.v)) throw RegimeError("fixedv: v must be finite");
  LogDetResult r;
  r.regime = Regime::FixedV;
  const double s = p.s, v = p.v;
  if (v == 0.0) {
    r.log_det = 0.0;
    r.error_bound = 0.0;
    return r;
  }
  const double x = v * v / (std::numbers::pi * std::numbers::pi);
  r.log_det = -4.0 * v * s / std::numbers::pi + 2.0 * x * std::log(4.0 * s) + 2.0 * barnes_b(v);
  r.error_bound = o.c1 * v / s + o.c2 * v * v * v / s;
  r.diagnostics["ln_b"] = barnes_b(v);
  if (v >= std::cbrt(s)) r.flags.emplace_back("outside-fixedv-validity");
  return r;
}

/// Hard gap: -s^2/2 - (1/4) ln s + ln c0.
inline LogDetResult gue_gap_logdet(double s) {
  if (!(s > 0.0) || !std::isfinite(s)) throw InvalidArgument("gue_gap_logdet: s must be finite and > 0");
  LogDetResult r;
  r.regime = Regime::GUEGap;
  r.log_det = -0.5 * s * s - 0.25 * std::log(s) + constants::log_dyson_c0;
  r.error_bound = 1.0 / s;
  return r;
}

// ---------------------------------------------------------- bulk regime

namespace detail {

inline constexpr double kRealTol = 1e-10;
inline constexpr double kPoleTol = 1e-14;

inline double assert_real(cplx z, const char* who) {
  if (!(std::abs(z.imag()) <= kRealTol * std::max(1.0, std::abs(z.real())))) {
    std::ostringstream m;
    m << who << ": imaginary residue " << z.imag() << " exceeds " << kRealTol;
    throw ConsistencyError(m.str());
  }
  return z.real();
}

inline theta::ThetaValue th(int k, cplx z, const theta::ThetaParams& p, const char* who) {
  auto r = theta::theta_k(k, z, p);
  if (std::abs(r.value) < kPoleTol) {
    std::ostringstream m;
    m << who << ": theta" << k << " vanishes at z = " << z;
    throw PoleError(m.str(), z.real());
  }
  return r;
}

inline cplx xi_complex(int k, double x, const elliptic::EllipticData& ed, const theta::ThetaParams& p) {
  const cplx d(0.0, -ed.t / 4.0);
  const cplx t30 = th(3, 0.0, p, "xi_k").value, t3x = th(3, x, p, "xi_k").value;
  const cplx td = th(k, d, p, "xi_k").value;
  const cplx tp = theta::theta_k(k, x + d, p).value, tm = theta::theta_k(k, x - d, p).value;
  return 2.0 * (t30 * t30) / (t3x * t3x) * tp * tm / (td * td);
}

// Theta_0 (k = 0, sign -1) and Theta_1 (k = 1, sign +1) share one assembly:
//   5c^2 {S+ - 2Dd + S-} + 14c^2 L- L+ - 4c^2 {L- + Ld - L+} Ld -/+ 2c(1+a){L+ - 2Ld - L-} - 2(2+a)
inline cplx big_theta_complex(int k, double x, const elliptic::EllipticData& ed, const theta::ThetaParams& p) {
  const cplx d(0.0, -ed.t / 4.0);
  const cplx c(0.0, ed.gamma_c);
  const double a = ed.a, sign = (k == 0) ? -1.0 : 1.0;
  const auto fp = th(k, x + d, p, "big_theta"), fm = th(k, x - d, p, "big_theta"), fd = th(k, d, p, "big_theta");
  const cplx Lp = fp.d1 / fp.value, Lm = fm.d1 / fm.value;
  const cplx Sp = fp.d2 / fp.value, Sm = fm.d2 / fm.value;
  const cplx Ld = fd.d1 / fd.value;
  const cplx Dd = fd.d2 / fd.value - Ld * Ld;
  const cplx c2 = c * c;
  return 5.0 * c2 * (Sp - 2.0 * Dd + Sm) + 14.0 * c2 * Lm * Lp - 4.0 * c2 * (Lm + Ld - Lp) * Ld +
         sign * 2.0 * c * (1.0 + a) * (Lp - 2.0 * Ld - Lm) - 2.0 * (2.0 + a);
}

inline cplx m_complex(double x, const elliptic::EllipticData& ed, double dtdk, const theta::ThetaParams& p) {
  const double a = ed.a;
  const cplx xi0 = xi_complex(0, x, ed, p), xi2 = xi_complex(2, x, ed, p);
  const cplx T0 = big_theta_complex(0, x, ed, p);
  const auto t3 = th(3, x, p, "m_density");
  return (xi0 * T0 + 6.0 * a * xi2) / (48.0 * a * (1.0 + a)) -
         (1.0 / (4.0 * std::numbers::pi)) * ed.kappa * t3.d2 / t3.value * dtdk;
}

}  // namespace detail

/// Xi_k(x, kappa) = 2 theta3(0)^2/theta3(x)^2 * theta_k(x+d) theta_k(x-d)/theta_k(d)^2, d = -i t/4.
inline double xi_k(int k, double x, const elliptic::EllipticData& ed) {
  if (k < 0 || k > 3) throw InvalidArgument("xi_k: index must be 0..3");
  const auto p = theta::ThetaParams::make(ed.t);
  return detail::assert_real(detail::xi_complex(k, x, ed, p), "xi_k");
}

inline double big_theta0(double x, const elliptic::EllipticData& ed) {
  const auto p = theta::ThetaParams::make(ed.t);
  return detail::assert_real(detail::big_theta_complex(0, x, ed, p), "big_theta0");
}

inline double big_theta1(double x, const elliptic::EllipticData& ed) {
  const auto p = theta::ThetaParams::make(ed.t);
  return detail::assert_real(detail::big_theta_complex(1, x, ed, p), "big_theta1");
}

/// M(x, kappa) = [Xi0 Theta0 + 6a Xi2] / (48 a (1+a)) - (1/4pi) kappa theta3''(x)/theta3(x) dt/dkappa.
inline double m_density(double x, const elliptic::EllipticData& ed, double dtdk) {
  const auto p = theta::ThetaParams::make(ed.t);
  return detail::assert_real(detail::m_complex(x, ed, dtdk, p), "m_density");
}

inline double m_density(double x, double kappa) {
  if (!(kappa > 0.0 && kappa < 1.0)) throw InvalidArgument("m_density: kappa must lie in (0, 1)");
  const auto ed = elliptic::elliptic_data_fast(kappa);
  return m_density(x, ed, elliptic::dt_dkappa_closed(ed));
}

/// a0(u) = int_0^1 M(x, u) dx, periodic trapezoid on n points.
inline double a0_average(double u, int n = 64) {
  if (!(u > 0.0 && u < 1.0)) throw InvalidArgument("a0_average: u must lie in (0, 1)");
  if (n < 2) throw InvalidArgument("a0_average: need at least 2 points");
  const auto ed = elliptic::elliptic_data_fast(u);
  const double dtdk = elliptic::dt_dkappa_closed(ed);
  const auto p = theta::ThetaParams::make(ed.t);
  double sum = 0.0;
  for (int j = 0; j < n; ++j) sum += detail::assert_real(detail::m_complex(double(j) / n, ed, dtdk, p), "a0_average");
  return sum / n;
}

struct MIntegralOptions {
  double dx_max = 0.5;   // phase advance allowed per panel
  int nodes = 8;         // Gauss-Legendre nodes per panel
  double u_min = 1e-3;   // below this M = O(u) is bounded, not integrated
  long max_panels = 1000000;
  double max_da = 0.02;
};

struct MIntegral {
  double value = 0.0;
  double tail_bound = 0.0;  // bound on the dropped (0, u_min) part
  long panels = 0;
  double u_min = 0.0;
};

/// int_0^kappa M((v/u) V(u), u) du/u, kappa = v/s.
///
/// The integral is taken in the branch-point variable a, where u = I(a) and
/// du = -a P da, so every node costs two AGMs and no root solve. The phase
/// x(u) = v V(u)/u moves at |dx/da| = v a/u^2; panels are sized to keep the
/// advance below dx_max. M is 1-periodic, so x is reduced to [-1/2, 1/2].
inline MIntegral m_integral_ex(double s, double v, const MIntegralOptions& o = {}) {
  if (!(s > 0.0) || !(v > 0.0) || !std::isfinite(v)) throw InvalidArgument("m_integral: need s > 0 and finite v > 0");
  const double kappa = v / s;
  if (!(kappa < 1.0)) throw RegimeError("m_integral: kappa = v/s must be < 1");
  if (!(o.dx_max > 0.0) || o.nodes < 1 || !(o.u_min > 0.0)) throw InvalidArgument("m_integral: bad options");

  MIntegral res;
  res.u_min = std::min(o.u_min, 0.1 * kappa);
  const double a_lo = elliptic::elliptic_data_fast(kappa).a;
  const double a_hi = elliptic::elliptic_data_fast(res.u_min).a;
  const auto rule = numerics::gauss_legendre(o.nodes);

  auto integrand = [v](double a) {
    const auto ed = elliptic::elliptic_data_from_a(a);
    const double u = ed.kappa;
    double x = v * ed.V / u;
    x -= std::nearbyint(x);
    const auto p = theta::ThetaParams::make(ed.t);
    const double m = detail::assert_real(detail::m_complex(x, ed, elliptic::dt_dkappa_closed(ed), p), "m_integral");
    return m * a * ed.P / u;
  };

  double sum = 0.0, comp = 0.0;
  double cur = a_lo;
  while (cur < a_hi) {
    if (res.panels >= o.max_panels) {
      std::ostringstream m;
      m << "m_integral: panel budget " << o.max_panels << " exhausted at a = " << cur;
      throw AccuracyFailure(m.str(), sum, std::numeric_limits<double>::infinity());
    }
    const double u = elliptic::elliptic_data_from_a(cur).kappa;
    const double step = std::min({o.dx_max * u * u / (v * cur), o.max_da, a_hi - cur});
    const double hi = (a_hi - cur - step < 1e-15) ? a_hi : cur + step;
    const double mid = 0.5 * (cur + hi), half = 0.5 * (hi - cur);
    double panel = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) panel += rule.weights[i] * integrand(mid + half * rule.nodes[i]);
    // Kahan: tens of thousands of small panels
    const double y = half * panel - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    cur = hi;
    ++res.panels;
  }
  res.value = sum;

  // |M(x, u)| <= C u near 0; C sampled at u_min over one period
  const auto ed = elliptic::elliptic_data_fast(res.u_min);
  const double dtdk = elliptic::dt_dkappa_closed(ed);
  const auto p = theta::ThetaParams::make(ed.t);
  double cmax = 0.0;
  for (int j = 0; j < 16; ++j)
    cmax = std::max(cmax, std::abs(detail::m_complex(j / 16.0, ed, dtdk, p).real()) / res.u_min);
  res.tail_bound = cmax * res.u_min;
  return res;
}

inline double m_integral(double s, double v) { return m_integral_ex(s, v).value; }

struct Theorem1Options {
  double delta = 0.05;
  double c = 2.0;     // error constant in c s^{-1/4} ln s
  double eps = 0.2;   // region-i advisory: v >= s^{1-eps}
  MIntegralOptions m;
};

/// D(s, v) + A(v), D = -(s^2/2)(1 - a^2) + v s V + ln theta3(sV | i t) + m_integral(s, v).
/// use_theta4 replaces theta3(sV) by theta3(sV - 1/2) = theta4(sV).
inline LogDetResult theorem1_logdet(const ScalePoint& p, bool use_theta4 = false, const Theorem1Options& o = {}) {
  const double s = p.s, v = p.v, kappa = p.kappa;
  if (!(kappa > 0.0 && kappa <= 1.0 - o.delta) || std::isinf(v)) {
    std::ostringstream m;
    m << "theorem1: kappa = " << kappa << " outside (0, " << 1.0 - o.delta << "]";
    throw RegimeError(m.str());
  }
  const auto ed = elliptic::elliptic_data(kappa);
  const auto tp = theta::ThetaParams::make(ed.t);
  const double x = s * ed.V;
  const double th = theta::theta_k(3, use_theta4 ? x - 0.5 : x, tp).value.real();
  if (!(th > 0.0)) throw PoleError("theorem1: theta factor not positive", x);
  const auto mi = m_integral_ex(s, v, o.m);
  const double A = a_of_v(v);
  const double smooth = -0.5 * s * s * (1.0 - ed.a) * (1.0 + ed.a) + v * s * ed.V;

  LogDetResult r;
  r.regime = use_theta4 ? Regime::BulkDysonTheta4 : Regime::BulkTheorem1;
  r.log_det = smooth + std::log(th) + mi.value + A;
  r.error_bound = o.c * std::pow(s, -0.25) * std::log(s);
  r.diagnostics["a"] = ed.a;
  r.diagnostics["V"] = ed.V;
  r.diagnostics["t"] = ed.t;
  r.diagnostics["gamma_c"] = ed.gamma_c;
  r.diagnostics["sV_mod1"] = x - std::floor(x);
  r.diagnostics["ln_theta"] = std::log(th);
  r.diagnostics["m_integral"] = mi.value;
  r.diagnostics["m_tail_bound"] = mi.tail_bound;
  r.diagnostics["m_panels"] = double(mi.panels);
  r.diagnostics["A"] = A;
  if (v < std::pow(s, 1.0 - o.eps)) r.flags.emplace_back("outside-region-i");
  if (r.log_det > 0.0) r.flags.emplace_back("positive-log-det");
  return r;
}

// ------------------------------------------------------- diagonal regime

/// 1 - lambda_n ~ (sqrt(pi)/n!) 2^{3n+2} s^{n+1/2} e^{-2s}, unclamped.
inline double one_minus_lambda_asymptotic(int n, double s) {
  if (n < 0) throw InvalidArgument("lambda_n_asymptotic: n must be >= 0");
  if (!(s > 0.0) || !std::isfinite(s)) throw InvalidArgument("lambda_n_asymptotic: s must be finite and > 0");
  const double lr = 0.5 * std::log(std::numbers::pi) - std::lgamma(n + 1.0) + (3.0 * n + 2.0) * std::numbers::ln2 +
                    (n + 0.5) * std::log(s) - 2.0 * s;
  return std::exp(lr);
}

/// lambda_n from the leading-order formula, clamped to [0, 1).
inline double lambda_n_asymptotic(int n, double s) {
  const double r = one_minus_lambda_asymptotic(n, s);
  if (r >= 1.0) return 0.0;
  return std::min(1.0 - r, std::nextafter(1.0, 0.0));
}

inline int q_of_chi(double chi) {
  if (!std::isfinite(chi)) throw InvalidArgument("q_of_chi: chi must be finite");
  if (chi < 0.25) return 1;
  return static_cast<int>(std::floor(2.0 * chi + 0.5)) + 1;
}

/// gue(s) + sum_{j<q} ln(1 + e^{-2v} lambda_j/(1 - lambda_j)).
inline LogDetResult theorem2_logdet(const ScalePoint& p, double chi) {
  const double s = p.s;
  if (!(s >= 3.0)) throw RegimeError("theorem2: requires s >= 3");
  if (!(chi >= 0.0) || !std::isfinite(chi)) throw InvalidArgument("theorem2: chi must be finite and >= 0");
  const double edge = 1.0 - chi * std::log(s) / s;
  if (!(p.kappa >= edge)) {
    std::ostringstream m;
    m << "theorem2: kappa = " << p.kappa << " below the band edge " << edge;
    throw RegimeError(m.str());
  }
  const int q = q_of_chi(chi);
  LogDetResult r = gue_gap_logdet(s);
  r.regime = Regime::DiagonalTheorem2;
  double corr = 0.0;
  if (p.one_minus_gamma > 0.0) {
    for (int j = 0; j < q; ++j) {
      const double om = one_minus_lambda_asymptotic(j, s);
      if (om >= 1.0) continue;  // lambda_j clamped to 0
      corr += std::log1p(p.one_minus_gamma * (1.0 - om) / om);
    }
  }
  r.log_det += corr;
  const double order = std::max(std::pow(s, -(q - 2.0 * chi - 0.5)), 1.0 / s);
  r.error_bound.reset();
  r.diagnostics["q_used"] = q;
  r.diagnostics["chi"] = chi;
  r.diagnostics["correction"] = corr;
  r.diagnostics["error_order"] = order;
  return r;
}

struct StokesLine {
  int q;
  double chi;
  double v;
};

inline std::vector<StokesLine> stokes_lines(double s, int q_max) {
  if (!(s > 1.0) || !std::isfinite(s)) throw InvalidArgument("stokes_lines: s must be > 1");
  if (q_max < 1) throw InvalidArgument("stokes_lines: q_max must be >= 1");
  std::vector<StokesLine> out;
  for (int q = 1; q <= q_max; ++q) {
    const double chi = 0.5 * q - 0.25;
    out.push_back({q, chi, s - chi * std::log(s)});
  }
  return out;
}

// ------------------------------------------------------------ regimes

enum class Region { RegionI, RegionII, DiagonalBand, Gap };

inline std::string_view region_name(Region r) {
  switch (r) {
    case Region::RegionI: return "region_i";
    case Region::RegionII: return "region_ii";
    case Region::DiagonalBand: return "diagonal_band";
    case Region::Gap: return "gap";
  }
  return "unknown";
}

struct RegimeClassification {
  Region region = Region::Gap;
  double eps = 0.0, delta = 0.0, chi = 0.0;
};

inline RegimeClassification classify_regime(const ScalePoint& p, double eps, double delta, double chi) {
  if (!(eps > 0.0 && eps < 1.0) || !(delta > 0.0 && delta < 1.0) || !(chi >= 0.0))
    throw InvalidArgument("classify_regime: need eps, delta in (0, 1) and chi >= 0");
  RegimeClassification c{Region::Gap, eps, delta, chi};
  const double s = p.s, v = p.v;
  if (p.kappa >= 1.0 - chi * std::log(s) / s)
    c.region = Region::DiagonalBand;
  else if (std::pow(s, 1.0 - eps) <= v && v <= (1.0 - delta) * s)
    c.region = Region::RegionI;
  else if (v < std::cbrt(s))
    c.region = Region::RegionII;
  return c;
}

struct Sandwich {
  double lower;
  double upper;
};

/// -4 v s/pi <= ln det <= -2 s gamma/pi.
inline Sandwich bound_sandwich(const ScalePoint& p) {
  const double lower = (p.v == 0.0) ? 0.0 : -4.0 * p.v * p.s / std::numbers::pi;
  return {lower, -2.0 * p.s * p.gamma / std::numbers::pi};
}

}  // namespace loggas::asymptotics
