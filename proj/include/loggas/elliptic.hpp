#pragma once

// Genus-one data attached to the double-scaling parameter kappa in (0, 1).
//
// Sign convention: the purely imaginary quantities c, tau and d are stored
// through positive reals, c = i gamma_c, tau = i t, d = -tau/4 = -i t/4.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "loggas/errors.hpp"
#include "loggas/numerics.hpp"

namespace loggas::elliptic {

inline constexpr double kConsistencyTol = 1e-8;

struct EllipticData {
  double kappa = 0.0;
  double a = 0.0;          // branch point, bands (-1,-a) and (a,1)
  double gamma_c = 0.0;    // c = i gamma_c
  double t = 0.0;          // tau = i t
  double V = 0.0;          // frequency, in (-2/pi, 0)
  double ell = std::numeric_limits<double>::quiet_NaN();  // constant in g(z) = z + ell + O(1/z)
  double d_quarter = 0.0;  // t/4 = |Im d|
  double P = 0.0;          // int_a^1 dl / sqrt((1-l^2)(l^2-a^2)) = K(sqrt(1-a^2))
};

namespace detail {

inline void check_a(double a, const char* who) {
  if (!(a > 0.0 && a < 1.0)) {
    std::ostringstream msg;
    msg << who << ": branch point a must lie in (0, 1), got " << a;
    throw InvalidArgument(msg.str());
  }
}

inline numerics::IntegrationOptions opts(double tol) {
  numerics::IntegrationOptions o;
  o.tol = tol;
  return o;
}

// int_a^1 sqrt((mu^2-a^2)/(1-mu^2)) dmu for a in [0, 1]
inline double kappa_integral_raw(double a, double tol, numerics::Substitution sub = numerics::Substitution::Trig) {
  if (a >= 1.0) return 0.0;
  auto f = [a](double mu, double dlo, double dhi) { return std::sqrt(dlo * (mu + a) / (dhi * (1.0 + mu))); };
  auto o = opts(tol);
  o.substitution = sub;
  return numerics::integrate_singular_ex(f, a, 1.0, numerics::Singular::Both, o).value;
}

}  // namespace detail

/// I(a) = int_a^1 sqrt((mu^2 - a^2)/(1 - mu^2)) dmu.
inline double kappa_integral(double a, double tol = 1e-13) {
  detail::check_a(a, "kappa_integral");
  return detail::kappa_integral_raw(a, tol);
}

/// Same integral with the power substitution instead of the trigonometric one.
/// Independent route used for cross-checks.
inline double kappa_integral_power(double a, double tol = 1e-13) {
  detail::check_a(a, "kappa_integral_power");
  return detail::kappa_integral_raw(a, tol, numerics::Substitution::Power);
}

/// Branch point a(kappa): the root of kappa - I(a) on [0, 1].
inline double solve_a(double kappa, double tol = 1e-15) {
  if (!(kappa > 0.0 && kappa < 1.0)) throw InvalidArgument("solve_a: kappa must lie in (0, 1)");
  auto F = [kappa](double a) { return kappa - detail::kappa_integral_raw(a, 1e-14); };
  // F(0) = kappa - 1 < 0, F(1) = kappa > 0
  return numerics::find_root(F, numerics::Bracket{0.0, 1.0, kappa - 1.0, kappa}, tol);
}

struct PeriodData {
  double gamma_c;
  double t;
  double P;
  double Q;
};

/// P = int_a^1 dl/sqrt((1-l^2)(l^2-a^2)), Q = int_{-a}^a dm/sqrt((a^2-m^2)(1-m^2)),
/// gamma_c = 1/(2P), t = Q/P.
inline PeriodData period_data(double a, double tol = 1e-13) {
  detail::check_a(a, "period_data");
  auto fp = [a](double l, double dlo, double dhi) { return 1.0 / std::sqrt(dhi * (1.0 + l) * dlo * (l + a)); };
  auto fq = [](double m, double dlo, double dhi) { return 1.0 / std::sqrt(dhi * dlo * (1.0 - m) * (1.0 + m)); };
  const auto o = detail::opts(tol);
  const double P = numerics::integrate_singular_ex(fp, a, 1.0, numerics::Singular::Both, o).value;
  const double Q = numerics::integrate_singular_ex(fq, -a, a, numerics::Singular::Both, o).value;
  return {1.0 / (2.0 * P), Q / P, P, Q};
}

/// V = -(1/pi) int_{-a}^a sqrt((a^2 - mu^2)/(1 - mu^2)) dmu.
inline double frequency_V(double a, double tol = 1e-13) {
  detail::check_a(a, "frequency_V");
  auto f = [](double m, double dlo, double dhi) { return std::sqrt(dhi * dlo / ((1.0 - m) * (1.0 + m))); };
  return -numerics::integrate_singular_ex(f, -a, a, numerics::Singular::Both, detail::opts(tol)).value /
         std::numbers::pi;
}

/// ell = int_1^inf (sqrt((mu^2-a^2)/(mu^2-1)) - 1) dmu - 1, computed after
/// mu = 1/w, which maps the half line onto (0, 1) with no tail left over.
inline double ell_constant(double a, double tol = 1e-13) {
  detail::check_a(a, "ell_constant");
  const double b = (1.0 - a) * (1.0 + a);
  auto f = [a, b](double w, double, double dhi) {
    const double omw2 = dhi * (1.0 + w);
    const double X = (1.0 - a * a * w * w) / omw2;
    return b / (omw2 * (1.0 + std::sqrt(X)));
  };
  return numerics::integrate_singular_ex(f, 0.0, 1.0, numerics::Singular::Hi, detail::opts(tol)).value - 1.0;
}

/// Residual of the bilinear relation pi V - t kappa + 2 pi gamma_c = 0.
inline double bilinear_residual(const EllipticData& ed) {
  return std::numbers::pi * ed.V - ed.t * ed.kappa + 2.0 * std::numbers::pi * ed.gamma_c;
}

/// Full bundle for kappa in (0, 1), every entry by quadrature. Throws
/// ConsistencyError if the bilinear relation or kappa_integral(a) = kappa
/// fails by more than 1e-8.
inline EllipticData elliptic_data(double kappa) {
  if (!(kappa > 0.0 && kappa < 1.0)) throw InvalidArgument("elliptic_data: kappa must lie in (0, 1)");
  EllipticData ed;
  ed.kappa = kappa;
  ed.a = solve_a(kappa);
  const PeriodData pd = period_data(ed.a);
  ed.gamma_c = pd.gamma_c;
  ed.t = pd.t;
  ed.P = pd.P;
  ed.V = frequency_V(ed.a);
  ed.ell = ell_constant(ed.a);
  ed.d_quarter = ed.t / 4.0;

  const double r1 = std::abs(kappa_integral(ed.a) - kappa);
  if (r1 > kConsistencyTol) {
    std::ostringstream msg;
    msg << "elliptic_data: kappa_integral(a) = kappa violated by " << r1 << " at kappa = " << kappa;
    throw ConsistencyError(msg.str());
  }
  const double r2 = std::abs(bilinear_residual(ed));
  if (r2 > kConsistencyTol) {
    std::ostringstream msg;
    msg << "elliptic_data: pi V - t kappa + 2 pi gamma_c = 0 violated by " << r2 << " at kappa = " << kappa;
    throw ConsistencyError(msg.str());
  }
  return ed;
}

/// Bundle parametrised by the branch point, through complete elliptic
/// integrals evaluated by the AGM. kappa is whatever I(a) gives. ell is left
/// as NaN unless requested since nothing on the hot path reads it.
///   P = K(k'), Q = 2 K(a), I(a) = E(k') - a^2 K(k'), V = -(2/pi)(E(a) - (1-a^2) K(a)),
/// with k' = sqrt(1 - a^2).
inline EllipticData elliptic_data_from_a(double a, bool with_ell = false) {
  detail::check_a(a, "elliptic_data_from_a");
  const double kp = std::sqrt((1.0 - a) * (1.0 + a));
  const auto ca = numerics::complete_elliptic(a);
  const auto cp = numerics::complete_elliptic(kp);
  EllipticData ed;
  ed.a = a;
  ed.P = cp.K;
  ed.kappa = cp.E - a * a * cp.K;
  ed.gamma_c = 1.0 / (2.0 * cp.K);
  ed.t = 2.0 * ca.K / cp.K;
  ed.V = -(2.0 / std::numbers::pi) * (ca.E - kp * kp * ca.K);
  ed.d_quarter = ed.t / 4.0;
  if (with_ell) ed.ell = ell_constant(a);
  return ed;
}

/// AGM-route bundle at a given kappa: the root of I(a) = kappa is found with
/// the AGM expression for I.
inline EllipticData elliptic_data_fast(double kappa, double tol = 1e-15) {
  if (!(kappa > 0.0 && kappa < 1.0)) throw InvalidArgument("elliptic_data_fast: kappa must lie in (0, 1)");
  auto F = [kappa](double a) {
    if (a <= 0.0) return kappa - 1.0;
    if (a >= 1.0) return kappa;
    return kappa - elliptic_data_from_a(a).kappa;
  };
  const double a = numerics::find_root(F, numerics::Bracket{0.0, 1.0, kappa - 1.0, kappa}, tol);
  EllipticData ed = elliptic_data_from_a(a);
  ed.kappa = kappa;
  return ed;
}

struct BandValue {
  double value = 0.0;
  bool out_of_band = false;  // argument outside (-1, 1)
};

/// Pi(z): -2 int_{|z|}^1 sqrt((mu^2-a^2)/(1-mu^2)) dmu on the bands, -2 kappa on [-a, a].
inline BandValue pi_function(double z, const EllipticData& ed) {
  if (!(z > -1.0 && z < 1.0)) return {0.0, true};
  const double az = std::abs(z), a = ed.a;
  if (az <= a) return {-2.0 * ed.kappa, false};
  auto f = [a](double mu, double, double dhi) { return std::sqrt((mu - a) * (mu + a) / (dhi * (1.0 + mu))); };
  const double I = numerics::integrate_singular_ex(f, az, 1.0, numerics::Singular::Both, detail::opts(1e-13)).value;
  return {-2.0 * I, false};
}

/// Omega(z): 0 on (a, 1), 2 pi V on (-1, -a), -2 int_z^a sqrt((a^2-mu^2)/(1-mu^2)) dmu on (-a, a).
inline BandValue omega_function(double z, const EllipticData& ed) {
  if (!(z > -1.0 && z < 1.0)) return {0.0, true};
  const double a = ed.a;
  if (z >= a) return {0.0, false};
  if (z <= -a) return {2.0 * std::numbers::pi * ed.V, false};
  auto f = [a](double m, double, double dhi) { return std::sqrt(dhi * (a + m) / ((1.0 - m) * (1.0 + m))); };
  const double I = numerics::integrate_singular_ex(f, z, a, numerics::Singular::Both, detail::opts(1e-13)).value;
  return {-2.0 * I, false};
}

/// |gamma_c int_1^inf dl / sqrt((l^2-1)(l^2-a^2)) - t/4|. The integral is
/// taken after l = 1/w, over (0, 1).
inline double u_infinity_check(const EllipticData& ed) {
  const double a = ed.a;
  auto f = [a](double w, double, double dhi) { return 1.0 / std::sqrt(dhi * (1.0 + w) * (1.0 - a * w) * (1.0 + a * w)); };
  const double I = numerics::integrate_singular_ex(f, 0.0, 1.0, numerics::Singular::Hi, detail::opts(1e-14)).value;
  return std::abs(ed.gamma_c * I - ed.t / 4.0);
}

struct DerivativeEstimate {
  double value;
  double residual;  // |Richardson value - plain central difference at h/2|
  double step;
};

/// dt/dkappa by central differences at h and h/2 combined by one Richardson
/// step. t(kappa) comes from the quadrature route.
inline DerivativeEstimate dtau_dkappa_ex(double kappa, double step = 1e-3) {
  if (!(kappa > 0.0 && kappa < 1.0)) throw InvalidArgument("dtau_dkappa: kappa must lie in (0, 1)");
  const double h = std::min(step, 0.5 * std::min(kappa, 1.0 - kappa));
  if (!(h > 1e-9)) throw AccuracyFailure("dtau_dkappa: step collapsed near the boundary of (0, 1)", 0.0, h);
  auto t_of = [](double k) { return period_data(solve_a(k)).t; };
  const double d1 = (t_of(kappa + h) - t_of(kappa - h)) / (2.0 * h);
  const double d2 = (t_of(kappa + 0.5 * h) - t_of(kappa - 0.5 * h)) / h;
  const double r = (4.0 * d2 - d1) / 3.0;
  return {r, std::abs(r - d2), h};
}

inline double dtau_dkappa(double kappa, double step = 1e-3) { return dtau_dkappa_ex(kappa, step).value; }

/// Closed form dt/dkappa = -pi / (a^2 (1 - a^2) P^3), from Legendre's relation
/// applied to t = 2K(a)/K(k') and dkappa/da = -a K(k').
inline double dt_dkappa_closed(const EllipticData& ed) {
  const double a = ed.a, P = ed.P;
  return -std::numbers::pi / (a * a * (1.0 - a) * (1.0 + a) * P * P * P);
}

}  // namespace loggas::elliptic
