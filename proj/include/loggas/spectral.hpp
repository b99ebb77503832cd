#pragma once

// Nystrom discretisation of the sine kernel K_s(x, y) = sin(s(x-y)) / (pi (x-y))
// on (-1, 1) and everything computed from its eigenvalues.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "loggas/errors.hpp"
#include "loggas/numerics.hpp"
#include "loggas/result.hpp"

namespace loggas::spectral {

inline constexpr double kExcursionTol = 1e-12;
inline constexpr double kGuardFactor = 1e3;
inline constexpr int kMaxNodes = 2000;

struct SpectralData {
  double s = 0.0;
  int n_nodes = 0;
  std::vector<double> eigenvalues;  // descending, clipped to [0, 1)
  double trace = 0.0;               // sum of the unclipped eigenvalues
  double eigen_accuracy = 0.0;      // absolute accuracy estimate for each eigenvalue
  bool under_resolved = false;      // n_nodes below the resolution rule
};

inline int resolution_rule(double s) { return std::max(60, static_cast<int>(std::ceil(10.0 * s))); }

inline double sine_kernel(double s, double x, double y) {
  const double d = x - y;
  if (d == 0.0) return s / std::numbers::pi;
  return std::sin(s * d) / (std::numbers::pi * d);
}

/// Symmetrised Nystrom matrix A_ij = sqrt(w_i) K_s(x_i, x_j) sqrt(w_j) on
/// Gauss-Legendre nodes.
inline numerics::SymmetricMatrix nystrom_matrix(double s, int n) {
  const numerics::QuadratureRule rule = numerics::gauss_legendre(n);
  numerics::SymmetricMatrix A(n);
  for (int i = 0; i < n; ++i) {
    const double wi = std::sqrt(rule.weights[i]);
    for (int j = 0; j <= i; ++j) {
      const double v = wi * sine_kernel(s, rule.nodes[i], rule.nodes[j]) * std::sqrt(rule.weights[j]);
      A(i, j) = v;
      A(j, i) = v;
    }
  }
  return A;
}

/// Eigenvalues of the Nystrom matrix. The node set is symmetric and the kernel
/// is invariant under (x, y) -> (-x, -y), so the matrix splits into an even
/// and an odd block of about half the size.
inline SpectralData build_spectrum(double s, int n_nodes = 0) {
  if (!(s > 0.0) || !std::isfinite(s)) throw InvalidArgument("build_spectrum: s must be finite and > 0");
  const int n = n_nodes > 0 ? n_nodes : resolution_rule(s);
  if (n < 2) throw InvalidArgument("build_spectrum: need at least 2 nodes");
  if (n > kMaxNodes) {
    std::ostringstream msg;
    msg << "build_spectrum: " << n << " nodes exceeds the budget of " << kMaxNodes;
    throw ResourceError(msg.str());
  }
  const numerics::SymmetricMatrix A = nystrom_matrix(s, n);
  const int m = n / 2;
  const bool odd_n = (n % 2) != 0;
  numerics::SymmetricMatrix even(m + (odd_n ? 1 : 0)), odd(m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      even(i, j) = A(i, j) + A(i, n - 1 - j);
      odd(i, j) = A(i, j) - A(i, n - 1 - j);
    }
  if (odd_n) {
    const int c = m;
    for (int i = 0; i < m; ++i) even(i, m) = even(m, i) = std::numbers::sqrt2 * A(i, c);
    even(m, m) = A(c, c);
  }
  std::vector<double> ev = numerics::sym_eigenvalues(even);
  const std::vector<double> ev_odd = numerics::sym_eigenvalues(odd);
  ev.insert(ev.end(), ev_odd.begin(), ev_odd.end());
  std::sort(ev.begin(), ev.end(), std::greater<>());

  SpectralData sd;
  sd.s = s;
  sd.n_nodes = n;
  sd.under_resolved = n < resolution_rule(s);
  double max_abs = 0.0;
  for (double l : ev) {
    sd.trace += l;
    max_abs = std::max(max_abs, std::abs(l));
  }
  sd.eigen_accuracy = 32.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, max_abs);
  const double top = std::nextafter(1.0, 0.0);
  for (double& l : ev) {
    if (l < -kExcursionTol || l > 1.0 + kExcursionTol) {
      std::ostringstream msg;
      msg << "build_spectrum: eigenvalue " << l << " outside [0, 1] beyond tolerance at s = " << s << ", n = " << n;
      throw DiscretizationError(msg.str());
    }
    l = std::clamp(l, 0.0, top);
  }
  sd.eigenvalues = std::move(ev);
  return sd;
}

/// Largest v whose 1 - gamma = e^{-2v} still clears the precision guard.
inline double max_trustworthy_v(const SpectralData& sd) {
  return -0.5 * std::log(kGuardFactor * sd.eigen_accuracy);
}

namespace detail {

// sum_j ln((1 - gamma) + gamma (1 - lambda_j)) with 1 - gamma given exactly.
inline LogDetResult logdet_sum(const SpectralData& sd, double gamma, double one_minus_gamma) {
  LogDetResult r;
  r.regime = Regime::Oracle;
  double sum = 0.0;
  for (double l : sd.eigenvalues) {
    const double gl = gamma * l;
    sum += gl < 0.5 ? std::log1p(-gl) : std::log(one_minus_gamma + gamma * (1.0 - l));
  }
  r.log_det = sum;
  r.diagnostics["n_nodes"] = sd.n_nodes;
  r.diagnostics["eigen_accuracy"] = sd.eigen_accuracy;
  r.diagnostics["max_trustworthy_v"] = max_trustworthy_v(sd);
  r.diagnostics["trace"] = sd.trace;
  if (sd.under_resolved) r.flags.emplace_back("under-resolved");
  if (one_minus_gamma == 0.0 && !sd.eigenvalues.empty() &&
      1.0 - sd.eigenvalues.front() < kGuardFactor * sd.eigen_accuracy)
    r.flags.emplace_back("hard-gap-precision-limited");
  return r;
}

inline void guard(const SpectralData& sd, double one_minus_gamma) {
  if (one_minus_gamma == 0.0) return;
  if (!(one_minus_gamma > kGuardFactor * sd.eigen_accuracy)) {
    std::ostringstream msg;
    msg << "oracle: 1 - gamma = " << one_minus_gamma << " is below " << kGuardFactor
        << " x eigenvalue accuracy; trustworthy only for v <= " << max_trustworthy_v(sd);
    throw PrecisionDomainError(msg.str(), max_trustworthy_v(sd));
  }
}

}  // namespace detail

/// ln det(I - gamma K_s) = sum_j ln(1 - gamma lambda_j).
inline LogDetResult oracle_logdet(const SpectralData& sd, double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw InvalidArgument("oracle_logdet: gamma must lie in [0, 1]");
  if (gamma == 0.0) {
    LogDetResult r = detail::logdet_sum(sd, 0.0, 1.0);
    r.log_det = 0.0;
    return r;
  }
  const double omg = 1.0 - gamma;
  detail::guard(sd, omg);
  return detail::logdet_sum(sd, gamma, omg);
}

/// Same determinant at gamma = 1 - e^{-2v}, with 1 - gamma = e^{-2v} kept exact.
/// v = +inf gives the hard gap gamma = 1.
inline LogDetResult oracle_logdet_v(const SpectralData& sd, double v) {
  if (!(v >= 0.0)) throw InvalidArgument("oracle_logdet_v: v must be >= 0");
  if (v == 0.0) return oracle_logdet(sd, 0.0);
  const double omg = std::isinf(v) ? 0.0 : std::exp(-2.0 * v);
  const double gamma = std::isinf(v) ? 1.0 : -std::expm1(-2.0 * v);
  detail::guard(sd, omg);
  LogDetResult r = detail::logdet_sum(sd, gamma, omg);
  r.diagnostics["v"] = v;
  return r;
}

/// p_0 .. p_nmax: probabilities of exactly n points of the sine process in
/// (-s/pi, s/pi). The counting variable is a sum of independent Bernoulli(lambda_j).
inline std::vector<double> gap_probabilities(const SpectralData& sd, int n_max) {
  if (n_max < 0) throw InvalidArgument("gap_probabilities: n_max must be >= 0");
  for (double l : sd.eigenvalues)
    if (1.0 - l < sd.eigen_accuracy) {
      std::ostringstream msg;
      msg << "gap_probabilities: an eigenvalue is within machine accuracy of 1 at s = " << sd.s;
      throw PrecisionDomainError(msg.str(), max_trustworthy_v(sd));
    }
  return numerics::bernoulli_count_distribution(sd.eigenvalues, n_max);
}

/// ln P(gamma, s) = ln det(I - gamma K_{s/gamma}).
inline LogDetResult bohigas_pato(double gamma, double s, int max_nodes = kMaxNodes) {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw InvalidArgument("bohigas_pato: gamma must lie in (0, 1]");
  if (!(s > 0.0)) throw InvalidArgument("bohigas_pato: s must be > 0");
  const double scaled = s / gamma;
  const int n = resolution_rule(scaled);
  if (n > max_nodes) {
    std::ostringstream msg;
    msg << "bohigas_pato: s/gamma = " << scaled << " needs " << n << " nodes, budget is " << max_nodes;
    throw ResourceError(msg.str());
  }
  LogDetResult r = oracle_logdet(build_spectrum(scaled, n), gamma);
  r.diagnostics["scaled_s"] = scaled;
  return r;
}

struct PeriodSample {
  double s;
  double Q;  // e^{4vs/pi} det(I - gamma K_s)
};

/// Q_v(s) = e^{4vs/pi} det(I - gamma K_s) on the given grid.
inline std::vector<PeriodSample> dyson_period_probe(double v, const std::vector<double>& s_grid) {
  if (!(v >= 0.0)) throw InvalidArgument("dyson_period_probe: v must be >= 0");
  std::vector<PeriodSample> out;
  out.reserve(s_grid.size());
  for (double s : s_grid) {
    const double ld = v == 0.0 ? 0.0 : oracle_logdet_v(build_spectrum(s), v).log_det;
    out.push_back({s, std::exp(4.0 * v * s / std::numbers::pi + ld)});
  }
  return out;
}

}  // namespace loggas::spectral
