#pragma once

// Dispatch from method tags to the library operations, turning exceptions
// into flagged rows. Shared by the CLI and the tests.

#include <cmath>
#include <exception>
#include <string>
#include <string_view>
#include <vector>

#include "loggas/asymptotics.hpp"
#include "loggas/errors.hpp"
#include "loggas/report.hpp"
#include "loggas/spectral.hpp"

namespace loggas::evaluate {

inline const std::vector<std::string>& all_methods() {
  static const std::vector<std::string> m = {"oracle",   "fixedv", "theorem1", "theorem1-theta4",
                                             "theorem2", "gue",    "bounds"};
  return m;
}

inline bool is_method(std::string_view m) {
  for (const auto& x : all_methods())
    if (x == m) return true;
  return false;
}

struct Options {
  int nodes = 0;          // Nystrom nodes, 0 = resolution rule
  double chi = 0.1;       // band parameter for theorem2
  double delta = 0.05;    // theorem1 upper edge 1 - delta
  double eps = 0.2;       // region-i advisory
  double c = 2.0;         // theorem1 error constant
  double m_cutoff = 1e-3; // M-integral lower cutoff u_min
  bool lenient = false;   // regime errors become n/a rows (method "all")
};

namespace detail {

inline std::string error_kind(const std::exception_ptr& ep) {
  try {
    std::rethrow_exception(ep);
  } catch (const RegimeError&) {
    return "regime";
  } catch (const PrecisionDomainError&) {
    return "precision-domain";
  } catch (const AccuracyFailure&) {
    return "accuracy";
  } catch (const PoleError&) {
    return "pole";
  } catch (const ConsistencyError&) {
    return "consistency";
  } catch (const DiscretizationError&) {
    return "discretization";
  } catch (const ResourceError&) {
    return "resource";
  } catch (const InvalidArgument&) {
    return "invalid-argument";
  } catch (...) {
    return "internal";
  }
}

inline report::Row base_row(double s, double v, std::string method) {
  report::Row r;
  r.s = s;
  r.v = v;
  r.kappa = v / s;
  r.method = std::move(method);
  return r;
}

inline report::Row from_result(report::Row row, const LogDetResult& res) {
  row.log_det = res.log_det;
  row.error_bound = res.error_bound;
  row.regime = std::string(regime_name(res.regime));
  row.flags = res.flags;
  return row;
}

}  // namespace detail

/// Rows for one method at (s, v); "bounds" yields two rows.
inline std::vector<report::Row> evaluate_method(double s, double v, const std::string& method, const Options& o = {}) {
  std::vector<report::Row> out;
  try {
    const auto p = asymptotics::ScalePoint::make(s, v);
    if (method == "oracle") {
      const auto sd = spectral::build_spectrum(s, o.nodes);
      out.push_back(detail::from_result(detail::base_row(s, v, method), spectral::oracle_logdet_v(sd, v)));
    } else if (method == "fixedv") {
      out.push_back(detail::from_result(detail::base_row(s, v, method), asymptotics::fixedv_logdet(p)));
    } else if (method == "theorem1" || method == "theorem1-theta4") {
      asymptotics::Theorem1Options t;
      t.delta = o.delta;
      t.eps = o.eps;
      t.c = o.c;
      t.m.u_min = o.m_cutoff;
      out.push_back(detail::from_result(detail::base_row(s, v, method),
                                        asymptotics::theorem1_logdet(p, method == "theorem1-theta4", t)));
    } else if (method == "theorem2") {
      out.push_back(detail::from_result(detail::base_row(s, v, method), asymptotics::theorem2_logdet(p, o.chi)));
    } else if (method == "gue") {
      auto row = detail::from_result(detail::base_row(s, v, method), asymptotics::gue_gap_logdet(s));
      if (!std::isinf(v)) row.flags.emplace_back("hard-gap-reference");
      out.push_back(std::move(row));
    } else if (method == "bounds") {
      const auto b = asymptotics::bound_sandwich(p);
      auto lo = detail::base_row(s, v, "bounds-lower"), hi = detail::base_row(s, v, "bounds-upper");
      lo.log_det = b.lower;
      hi.log_det = b.upper;
      lo.regime = hi.regime = "bounds";
      out.push_back(std::move(lo));
      out.push_back(std::move(hi));
    } else {
      throw InvalidArgument("unknown method '" + method + "'");
    }
  } catch (...) {
    const auto ep = std::current_exception();
    const std::string kind = detail::error_kind(ep);
    auto row = detail::base_row(s, v, method);
    row.flags.push_back((o.lenient && kind == "regime" ? "n/a:" : "error:") + kind);
    try {
      std::rethrow_exception(ep);
    } catch (const PrecisionDomainError& e) {
      row.message = e.what();
      row.flags.push_back("max-trustworthy-v=" + report::format_number(e.max_trustworthy_v()));
    } catch (const std::exception& e) {
      row.message = e.what();
    }
    out.clear();
    out.push_back(std::move(row));
  }
  return out;
}

/// Expands "all" and evaluates every requested method at one point.
inline std::vector<report::Row> evaluate_point(double s, double v, const std::vector<std::string>& methods,
                                               const Options& o = {}) {
  std::vector<report::Row> out;
  for (const auto& m : methods) {
    if (m == "all") {
      Options lo = o;
      lo.lenient = true;
      for (const auto& x : all_methods()) {
        auto rows = evaluate_method(s, v, x, lo);
        out.insert(out.end(), rows.begin(), rows.end());
      }
    } else {
      auto rows = evaluate_method(s, v, m, o);
      out.insert(out.end(), rows.begin(), rows.end());
    }
  }
  return out;
}

}  // namespace loggas::evaluate
