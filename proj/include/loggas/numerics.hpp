#pragma once

// Numerical kernel shared by the rest of the library: Gauss-Legendre rules,
// endpoint-singular quadrature, bracketed root finding, a cyclic Jacobi
// eigensolver and elementary symmetric functions.
//
// Everything here is a pure function of its arguments. The only static state
// is a table of Gauss-Legendre rules of power-of-two order, built once on
// first use and never modified afterwards.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <type_traits>
#include <sstream>
#include <utility>
#include <vector>

#include "loggas/errors.hpp"

namespace loggas::numerics {

struct QuadratureRule {
  std::vector<double> nodes;    // increasing, symmetric about 0, inside (-1, 1)
  std::vector<double> weights;  // positive, summing to 2
  int order = 0;
};

/// Gauss-Legendre rule on (-1, 1), exact for polynomials of degree <= 2n-1.
/// Nodes are Newton-polished roots of P_n started from the Chebyshev-like
/// guesses cos(pi (i + 3/4) / (n + 1/2)).
inline QuadratureRule gauss_legendre(int n) {
  if (n < 2) throw InvalidArgument("gauss_legendre: order must be >= 2");
  QuadratureRule rule;
  rule.order = n;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute the derivative at the polished root
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

namespace detail {

inline constexpr int kMinCachedLog2 = 1;   // order 2
inline constexpr int kMaxCachedLog2 = 13;  // order 8192

// Rules of order 2^k, built once. Returns nullptr for other orders.
inline const QuadratureRule* cached_rule(int n) {
  static const std::vector<QuadratureRule> table = [] {
    std::vector<QuadratureRule> t;
    for (int k = kMinCachedLog2; k <= kMaxCachedLog2; ++k) t.push_back(gauss_legendre(1 << k));
    return t;
  }();
  for (int k = kMinCachedLog2; k <= kMaxCachedLog2; ++k)
    if (n == (1 << k)) return &table[k - kMinCachedLog2];
  return nullptr;
}

template <class F>
double apply_rule(const QuadratureRule& rule, F&& f, double lo, double hi) {
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return half * sum;
}

}  // namespace detail

/// Integrates f over (lo, hi) with an order-n Gauss-Legendre rule.
template <class F>
double integrate_fixed(F&& f, double lo, double hi, int n) {
  if (const auto* rule = detail::cached_rule(n)) return detail::apply_rule(*rule, f, lo, hi);
  return detail::apply_rule(gauss_legendre(n), f, lo, hi);
}

// Which endpoints carry an inverse-square-root singularity.
enum class Singular : unsigned { None = 0, Lo = 1, Hi = 2, Both = 3 };

constexpr Singular operator|(Singular a, Singular b) {
  return static_cast<Singular>(static_cast<unsigned>(a) | static_cast<unsigned>(b));
}
constexpr bool has(Singular set, Singular flag) {
  return (static_cast<unsigned>(set) & static_cast<unsigned>(flag)) != 0;
}

// Change of variables applied before quadrature.
//   Trig:  x = lo + (hi - lo) sin^2(theta), theta in (0, pi/2); smooths both ends at once.
//   Power: x = lo + (hi - lo) w^2 at a flagged lower end (mirrored at the upper end);
//          with both ends flagged the interval is split at its midpoint.
enum class Substitution { Trig, Power };

struct IntegrationOptions {
  double tol = 1e-13;
  int base_order = 32;
  int max_order = 4096;
  Substitution substitution = Substitution::Trig;
};

struct IntegrationResult {
  double value = 0.0;
  double residual = 0.0;  // |I(2n) - I(n)| at the accepted order
  int order = 0;
};

namespace detail {

// Integrands may take (x) or (x, x - lo, hi - x). The second form receives the
// endpoint distances computed without cancellation, which matters for factors
// like 1/sqrt(hi - x) evaluated next to hi.
template <class F>
double call(F& f, double x, double dlo, double dhi) {
  if constexpr (std::is_invocable_v<F&, double, double, double>)
    return f(x, dlo, dhi);
  else
    return f(x);
}

template <class F>
double substituted_estimate(F& f, double lo, double hi, Singular sing, Substitution sub, int n) {
  const double len = hi - lo;
  if (sing == Singular::None) {
    auto g = [&](double x) { return call(f, x, x - lo, hi - x); };
    return integrate_fixed(g, lo, hi, n);
  }
  if (sub == Substitution::Trig) {
    auto g = [&](double th) {
      const double s = std::sin(th), c = std::cos(th);
      return call(f, lo + len * s * s, len * s * s, len * c * c) * 2.0 * len * s * c;
    };
    return integrate_fixed(g, 0.0, std::numbers::pi / 2, n);
  }
  // x = a + L w^2 near a flagged lower end, x = b - L w^2 near a flagged upper end
  auto lower = [&](double L) {
    return [&f, lo, hi, L](double w) {
      const double d = L * w * w;
      return call(f, lo + d, d, (hi - lo) - d) * 2.0 * L * w;
    };
  };
  auto upper = [&](double L) {
    return [&f, lo, hi, L](double w) {
      const double d = L * w * w;
      return call(f, hi - d, (hi - lo) - d, d) * 2.0 * L * w;
    };
  };
  if (sing == Singular::Lo) return integrate_fixed(lower(len), 0.0, 1.0, n);
  if (sing == Singular::Hi) return integrate_fixed(upper(len), 0.0, 1.0, n);
  return integrate_fixed(lower(0.5 * len), 0.0, 1.0, n) + integrate_fixed(upper(0.5 * len), 0.0, 1.0, n);
}

}  // namespace detail

/// Integral of f over (lo, hi) where f may behave like (x-lo)^(-1/2) and/or
/// (hi-x)^(-1/2) at the flagged ends. f takes x, or (x, x - lo, hi - x). The rule order is doubled from
/// base_order until two successive estimates agree within tol (absolute, or
/// relative once |I| > 1). Throws AccuracyFailure at max_order.
template <class F>
IntegrationResult integrate_singular_ex(F&& f, double lo, double hi, Singular sing,
                                        const IntegrationOptions& opt = {}) {
  if (!(hi > lo)) {
    if (hi == lo) return {0.0, 0.0, 0};
    throw InvalidArgument("integrate_singular: require lo < hi");
  }
  int n = std::max(2, opt.base_order);
  double prev = detail::substituted_estimate(f, lo, hi, sing, opt.substitution, n);
  double diff = std::numeric_limits<double>::infinity();
  while (2 * n <= opt.max_order) {
    n *= 2;
    const double cur = detail::substituted_estimate(f, lo, hi, sing, opt.substitution, n);
    diff = std::abs(cur - prev);
    prev = cur;
    if (diff <= opt.tol * std::max(1.0, std::abs(cur))) return {cur, diff, n};
  }
  std::ostringstream msg;
  msg << "integrate_singular: no convergence on (" << lo << ", " << hi << ") up to order " << n
      << ", last change " << diff;
  throw AccuracyFailure(msg.str(), prev, diff);
}

template <class F>
double integrate_singular(F&& f, double lo, double hi, Singular sing, double tol = 1e-13) {
  IntegrationOptions opt;
  opt.tol = tol;
  return integrate_singular_ex(std::forward<F>(f), lo, hi, sing, opt).value;
}

struct Bracket {
  double lo = 0.0, hi = 0.0;
  double f_lo = 0.0, f_hi = 0.0;
};

template <class F>
Bracket make_bracket(F&& f, double lo, double hi) {
  return Bracket{lo, hi, f(lo), f(hi)};
}

/// Root of f inside the bracket. Illinois-modified regula falsi with a
/// bisection fallback whenever the secant step fails to halve the bracket,
/// so the bracket width shrinks at least geometrically. Terminates when the
/// width is <= tol or f vanishes exactly; the result always lies in
/// [bracket.lo, bracket.hi].
template <class F>
double find_root(F&& f, Bracket b, double tol = 1e-14, int max_iter = 400) {
  if (!(b.lo <= b.hi) || !std::isfinite(b.f_lo) || !std::isfinite(b.f_hi) || b.f_lo * b.f_hi > 0.0)
    throw InvalidArgument("find_root: invalid bracket (f_lo * f_hi must be <= 0)");
  if (b.f_lo == 0.0) return b.lo;
  if (b.f_hi == 0.0) return b.hi;
  double a = b.lo, fa = b.f_lo, c = b.hi, fc = b.f_hi;
  int side = 0;
  for (int it = 0; it < max_iter; ++it) {
    const double width = c - a;
    if (width <= tol) break;
    double x = (a * fc - c * fa) / (fc - fa);
    // keep the secant point away from the endpoints; fall back to bisection
    // when it would not cut at least a quarter off the bracket
    const double guard = 0.25 * width;
    if (!(x > a + 1e-3 * width && x < c - 1e-3 * width)) x = 0.5 * (a + c);
    double fx = f(x);
    if (fx == 0.0) return x;
    if ((fx < 0) == (fa < 0)) {
      a = x;
      fa = fx;
      if (side == -1) fc *= 0.5;
      side = -1;
    } else {
      c = x;
      fc = fx;
      if (side == 1) fa *= 0.5;
      side = 1;
    }
    if (c - a > width - guard) {  // insufficient progress: bisect once
      const double m = 0.5 * (a + c);
      const double fm = f(m);
      if (fm == 0.0) return m;
      if ((fm < 0) == (fa < 0)) {
        a = m;
        fa = fm;
      } else {
        c = m;
        fc = fm;
      }
      side = 0;
    }
  }
  return std::abs(fa) < std::abs(fc) ? a : c;
}

// Dense symmetric matrix, row-major.
class SymmetricMatrix {
 public:
  explicit SymmetricMatrix(std::size_t n = 0) : n_(n), data_(n * n, 0.0) {}

  std::size_t size() const noexcept { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  std::span<const double> data() const noexcept { return data_; }

  static SymmetricMatrix identity(std::size_t n) {
    SymmetricMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

 private:
  std::size_t n_;
  std::vector<double> data_;
};

/// All eigenvalues of a symmetric matrix, in descending order.
///
/// Cyclic Jacobi with the Demmel-Veselic skip rule: a rotation is skipped
/// once |a_pq| <= eps * sqrt(|a_pp a_qq|), which keeps small eigenvalues
/// accurate relative to their own size for positive definite input.
inline std::vector<double> sym_eigenvalues(const SymmetricMatrix& m, double symmetry_tol = 1e-12,
                                           int max_sweeps = 60) {
  const std::size_t n = m.size();
  double scale = 0.0;
  for (double v : m.data()) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(m(i, j) - m(j, i)) > symmetry_tol * std::max(1.0, scale))
        throw InvalidArgument("sym_eigenvalues: matrix is not symmetric within tolerance");

  SymmetricMatrix a = m;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  bool converged = n <= 1;
  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double app = a(p, p), aqq = a(q, q);
        if (std::abs(apq) <= eps * std::sqrt(std::abs(app * aqq)) || std::abs(apq) < 1e-300) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        rotated = true;
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        double* rp = &a(p, 0);
        double* rq = &a(q, 0);
        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double akp = rp[k], akq = rq[k];
          const double np = c * akp - s * akq, nq = s * akp + c * akq;
          rp[k] = np;
          rq[k] = nq;
          a(k, p) = np;
          a(k, q) = nq;
        }
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = a(q, p) = 0.0;
      }
    }
    converged = !rotated;
  }
  if (!converged) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    throw AccuracyFailure("sym_eigenvalues: Jacobi sweeps did not converge", 0.0, std::sqrt(off));
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a(i, i);
  std::sort(ev.begin(), ev.end(), std::greater<>());
  return ev;
}

/// e_0 .. e_kmax of the given values via e_k <- e_k + v_j e_{k-1}.
/// Throws std::overflow_error if any coefficient leaves the double range;
/// use log_elementary_symmetric in that case.
inline std::vector<double> elementary_symmetric(std::span<const double> values, int k_max) {
  if (k_max < 0) throw InvalidArgument("elementary_symmetric: k_max must be >= 0");
  std::vector<double> e(static_cast<std::size_t>(k_max) + 1, 0.0);
  e[0] = 1.0;
  for (double v : values) {
    if (!std::isfinite(v) || v < 0.0) throw InvalidArgument("elementary_symmetric: values must be finite and >= 0");
    for (int k = k_max; k >= 1; --k) e[k] += v * e[k - 1];
  }
  for (double x : e)
    if (!std::isfinite(x)) throw std::overflow_error("elementary_symmetric: overflow, use the log-space variant");
  return e;
}

/// ln e_0 .. ln e_kmax with every entry carried as a logarithm, so no ratio
/// between entries can underflow. Entries that are exactly zero come back as -inf.
inline std::vector<double> log_elementary_symmetric(std::span<const double> values, int k_max) {
  if (k_max < 0) throw InvalidArgument("log_elementary_symmetric: k_max must be >= 0");
  constexpr double ninf = -std::numeric_limits<double>::infinity();
  std::vector<double> L(static_cast<std::size_t>(k_max) + 1, ninf);
  L[0] = 0.0;
  for (double v : values) {
    if (!std::isfinite(v) || v < 0.0) throw InvalidArgument("log_elementary_symmetric: values must be finite and >= 0");
    if (v == 0.0) continue;
    const double lv = std::log(v);
    for (int k = k_max; k >= 1; --k) {
      const double add = lv + L[k - 1];
      if (add == ninf) continue;
      const double hi = std::max(L[k], add), lo = std::min(L[k], add);
      L[k] = lo == ninf ? hi : hi + std::log1p(std::exp(lo - hi));
    }
  }
  return L;
}

/// Distribution of the number of successes among independent Bernoulli
/// trials with the given probabilities, truncated to counts 0..k_max.
/// Equals prod(1 - p_j) * e_k(p_j / (1 - p_j)) but never forms the ratios.
inline std::vector<double> bernoulli_count_distribution(std::span<const double> probs, int k_max) {
  if (k_max < 0) throw InvalidArgument("bernoulli_count_distribution: k_max must be >= 0");
  std::vector<double> p(static_cast<std::size_t>(k_max) + 1, 0.0);
  p[0] = 1.0;
  for (double pj : probs) {
    if (!(pj >= 0.0 && pj <= 1.0)) throw InvalidArgument("bernoulli_count_distribution: probability outside [0, 1]");
    const double qj = 1.0 - pj;
    for (int k = k_max; k >= 1; --k) p[k] = qj * p[k] + pj * p[k - 1];
    p[0] *= qj;
  }
  return p;
}

/// Complete elliptic integrals K(k), E(k) of modulus k in [0, 1) by the
/// arithmetic-geometric mean.
struct CompleteElliptic {
  double K;
  double E;
};

inline CompleteElliptic complete_elliptic(double k) {
  if (!(k >= 0.0 && k < 1.0)) throw InvalidArgument("complete_elliptic: modulus must lie in [0, 1)");
  double a = 1.0, b = std::sqrt((1.0 - k) * (1.0 + k)), c = k;
  double sum = 0.5 * c * c, pow2 = 0.5;
  for (int i = 0; i < 64 && std::abs(c) > 1e-17 * a; ++i) {
    c = 0.5 * (a - b);
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
    pow2 *= 2.0;
    sum += pow2 * c * c;
  }
  const double K = std::numbers::pi / (2.0 * a);
  return {K, K * (1.0 - sum)};
}

}  // namespace loggas::numerics
