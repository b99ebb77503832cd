#pragma once

// Jacobi theta functions with purely imaginary module tau = i t, t > 0:
//
//   theta3(z) = 1 + 2 sum_{m>=1} q^{m^2} cos(2 pi m z)
//   theta0(z) = 1 + 2 sum_{m>=1} (-1)^m q^{m^2} cos(2 pi m z)        (= theta4)
//   theta2(z) = 2 sum_{m>=0} q^{(m+1/2)^2} cos((2m+1) pi z)
//   theta1(z) = 2 sum_{m>=0} (-1)^m q^{(m+1/2)^2} sin((2m+1) pi z)
//
// with nome q = exp(-pi t). First and second z-derivatives come from the
// term-wise differentiated series.

#include <algorithm>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "loggas/errors.hpp"

namespace loggas::theta {

using cplx = std::complex<double>;

inline constexpr double kTruncation = 1e-18;

struct ThetaParams {
  double t = 1.0;  // tau = i t
  double q = std::exp(-std::numbers::pi);
  int k_max = 1;   // minimum number of series terms; extended for complex z

  /// Builds parameters for tau = i t. With k_max <= 0 the truncation is chosen
  /// so that q^{k_max^2} < 1e-18.
  static ThetaParams make(double t, int k_max = 0) {
    if (!(t > 0.0) || !std::isfinite(t)) throw InvalidArgument("ThetaParams: t must be finite and > 0");
    ThetaParams p;
    p.t = t;
    p.q = std::exp(-std::numbers::pi * t);
    if (k_max <= 0) {
      const double need = -std::log(kTruncation) / (std::numbers::pi * t);
      k_max = std::max(1, static_cast<int>(std::ceil(std::sqrt(need))));
    }
    p.k_max = k_max;
    return p;
  }

  ThetaParams doubled() const { return make(t, 2 * k_max); }
};

struct ThetaValue {
  cplx value;
  cplx d1;  // d/dz
  cplx d2;  // d^2/dz^2
  bool out_of_window = false;  // |Im z| > t: accepted, but cancellation may cost digits
  int terms = 0;
};

namespace detail {

inline constexpr int kHardTermCap = 100000;

inline void check_index(int k) {
  if (k < 0 || k > 3) throw InvalidArgument("theta: index must be 0, 1, 2 or 3");
}

// Coefficient exponent n^2 and frequency f for series term m of theta_k.
inline std::pair<double, double> term_shape(int k, int m) {
  const double n = (k == 0 || k == 3) ? static_cast<double>(m) : m + 0.5;
  return {n * n, 2.0 * std::numbers::pi * n};
}

inline double term_sign(int k, int m) { return ((k == 0 || k == 1) && (m % 2 != 0)) ? -1.0 : 1.0; }

// Visits the nonconstant series terms of theta_k at z until the magnitude bound
// (1 + f + f^2) |c_m| e^{f |Im z|} falls below kTruncation times the largest
// bound seen, and at least p.k_max terms have been taken.
template <class Visit>
int for_each_term(int k, cplx z, const ThetaParams& p, Visit&& visit) {
  const double y = std::abs(z.imag());
  const int first = (k == 0 || k == 3) ? 1 : 0;
  double running = 0.0;
  int m = first;
  for (; m < kHardTermCap; ++m) {
    const auto [n2, f] = term_shape(k, m);
    const double log_bound = -std::numbers::pi * p.t * n2 + f * y + std::log1p(f + f * f);
    const double bound = std::exp(log_bound);
    running = std::max(running, bound);
    const bool past_peak = f * y <= 2.0 * std::numbers::pi * p.t * n2;
    if (m - first >= p.k_max && past_peak && bound < kTruncation * running) break;
    if (bound == 0.0 && past_peak) break;
    visit(m, 2.0 * term_sign(k, m) * std::exp(-std::numbers::pi * p.t * n2), f);
  }
  return m - first;
}

}  // namespace detail

/// theta_k(z | i t) with its first two z-derivatives.
inline ThetaValue theta_k(int k, cplx z, const ThetaParams& p) {
  detail::check_index(k);
  if (!(p.t > 0.0)) throw InvalidArgument("theta_k: t must be > 0");
  ThetaValue r;
  r.out_of_window = std::abs(z.imag()) > p.t;
  r.value = (k == 0 || k == 3) ? cplx(1.0) : cplx(0.0);
  r.d1 = r.d2 = cplx(0.0);
  const bool odd = (k == 1);
  r.terms = detail::for_each_term(k, z, p, [&](int, double c, double f) {
    const cplx fz = f * z;
    const cplx cs = std::cos(fz), sn = std::sin(fz);
    if (odd) {
      r.value += c * sn;
      r.d1 += c * f * cs;
      r.d2 -= c * f * f * sn;
    } else {
      r.value += c * cs;
      r.d1 -= c * f * sn;
      r.d2 -= c * f * f * cs;
    }
  });
  if (k == 1 && z == cplx(0.0)) r.value = 0.0;  // odd series: exact zero at the origin
  return r;
}

inline ThetaValue theta_k(int k, double x, const ThetaParams& p) { return theta_k(k, cplx(x, 0.0), p); }

/// d/dtau theta_k(z | tau) from the heat equation theta'' = 4 pi i d theta / d tau.
inline cplx theta_tau_derivative(int k, cplx z, const ThetaParams& p) {
  return theta_k(k, z, p).d2 / cplx(0.0, 4.0 * std::numbers::pi);
}

/// d/dtau theta_k by differentiating q^{n^2} = exp(i pi tau n^2) term by term.
/// Independent of the heat equation; used to check it.
inline cplx theta_tau_derivative_series(int k, cplx z, const ThetaParams& p) {
  detail::check_index(k);
  cplx sum = 0.0;
  const bool odd = (k == 1);
  detail::for_each_term(k, z, p, [&](int m, double c, double f) {
    const double n2 = detail::term_shape(k, m).first;
    const cplx fz = f * z;
    sum += cplx(0.0, std::numbers::pi * n2) * c * (odd ? std::sin(fz) : std::cos(fz));
  });
  return sum;
}

struct IdentityResidual {
  std::string name;
  double residual;  // |lhs - rhs| / max(1, magnitude of the largest term involved)
};

struct ThetaIdentityReport {
  std::vector<IdentityResidual> residuals;
  bool any_out_of_window = false;

  double max_residual() const {
    double m = 0.0;
    for (const auto& r : residuals) m = std::max(m, r.residual);
    return m;
  }
};

/// Residuals of the addition formulas, the duplication formula, the lattice
/// quasi-periodicity relations, the connection formulas and 1-periodicity of
/// theta3, evaluated at z and w.
inline ThetaIdentityReport verify_theta_identities(cplx z, cplx w, const ThetaParams& p) {
  ThetaIdentityReport rep;
  auto th = [&](int k, cplx arg) {
    const ThetaValue v = theta_k(k, arg, p);
    rep.any_out_of_window = rep.any_out_of_window || v.out_of_window;
    return v.value;
  };
  auto add = [&](std::string name, cplx lhs, cplx rhs, std::initializer_list<double> scales) {
    double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
    for (double s : scales) scale = std::max(scale, s);
    rep.residuals.push_back({std::move(name), std::abs(lhs - rhs) / scale});
  };
  const cplx tau(0.0, p.t);
  const cplx I(0.0, 1.0);
  const double pi = std::numbers::pi;

  const cplx t00 = th(0, 0.0);
  const cplx a0w = th(0, w), a1w = th(1, w);
  const cplx a0z = th(0, z), a1z = th(1, z), a2z = th(2, z), a3z = th(3, z);
  const cplx sq00 = t00 * t00;
  {
    const cplx x = a0w * a0w * a0z * a0z, y = a1w * a1w * a1z * a1z;
    add("addition theta0", sq00 * th(0, w + z) * th(0, w - z), x - y, {std::abs(x), std::abs(y)});
  }
  {
    const cplx x = a1w * a1w * a0z * a0z, y = a0w * a0w * a1z * a1z;
    add("addition theta1", sq00 * th(1, w + z) * th(1, w - z), x - y, {std::abs(x), std::abs(y)});
  }
  {
    const cplx x = a0w * a0w * a2z * a2z, y = a1w * a1w * a3z * a3z;
    add("addition theta2", sq00 * th(2, w + z) * th(2, w - z), x - y, {std::abs(x), std::abs(y)});
  }
  {
    const cplx x = a0w * a0w * a3z * a3z, y = a1w * a1w * a2z * a2z;
    add("addition theta3", sq00 * th(3, w + z) * th(3, w - z), x - y, {std::abs(x), std::abs(y)});
  }
  {
    const cplx lhs = th(0, 2.0 * z) * t00 * t00 * t00;
    const cplx x0 = std::pow(a0z, 4), x1 = std::pow(a1z, 4), x3 = std::pow(a3z, 4), x2 = std::pow(a2z, 4);
    add("duplication theta0/theta1", lhs, x0 - x1, {std::abs(x0), std::abs(x1)});
    add("duplication theta3/theta2", lhs, x3 - x2, {std::abs(x3), std::abs(x2)});
  }
  {
    // theta_k(z' + 1 + tau) = theta_k(z') * sign * exp(-i pi tau - 2 pi i z'), z' = z - tau/2
    const cplx zs = z - 0.5 * tau;
    const cplx factor = std::exp(-I * pi * tau - 2.0 * pi * I * zs);
    const double sign[4] = {-1.0, 1.0, -1.0, 1.0};
    for (int k = 0; k < 4; ++k) {
      const cplx base = th(k, zs);
      add("quasi-periodicity theta" + std::to_string(k), th(k, zs + 1.0 + tau), sign[k] * base * factor,
          {std::abs(base)});
    }
  }
  add("connection theta1(z-1/2) = -theta2(z)", th(1, z - 0.5), -a2z, {});
  add("connection theta0(z+1/2) = theta3(z)", th(0, z + 0.5), a3z, {});
  {
    const cplx zs = z - 0.25 * tau;  // keeps z + tau/2 inside the window
    add("connection theta0(z+tau/2)", th(0, zs + 0.5 * tau),
        I * std::exp(-I * pi * tau / 4.0 - I * pi * zs) * th(1, zs), {});
  }
  add("periodicity theta3(z+1)", th(3, z + 1.0), a3z, {});
  return rep;
}

}  // namespace loggas::theta
