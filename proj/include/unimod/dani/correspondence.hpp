#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "unimod/dani/functions.hpp"
#include "unimod/error.hpp"

namespace unimod {

struct Violation {
  std::string condition;
  double witness = 0.0;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  std::size_t points = 0;
  bool ok() const { return violations.empty(); }
  std::string summary() const {
    if (ok()) return "ok";
    std::string out;
    for (const auto& v : violations) {
      if (!out.empty()) out += "; ";
      out += v.condition + " violated near " + detail::format_number(v.witness) + " (" + v.detail + ")";
    }
    return out;
  }
};

struct ValidationOptions {
  std::size_t points = 10000;
  // Validated range: [t0, t0 * span] for psi, [s0, s0 + span] for rates,
  // truncated to the end of a table.
  double psi_span = 1e8;
  double rate_span = 1e3;
};

// Checks on a logarithmic grid that psi is positive and non-increasing, that
// t psi(t) is non-decreasing and that t psi(t) < 1. Only the first witness of
// each condition is reported.
inline ValidationReport validate_psi(const PsiFunction& psi, const ValidationOptions& options = {}) {
  ValidationReport report;
  const std::size_t n = std::max<std::size_t>(options.points, 2);
  report.points = n;
  const double lo = std::log(psi.t0());
  const double hi = std::log(std::min(psi.t_end(), psi.t0() * options.psi_span));
  bool seen[4] = {false, false, false, false};
  auto flag = [&](int i, const char* name, double t, std::string what) {
    if (seen[i]) return;
    seen[i] = true;
    report.violations.push_back({name, t, std::move(what)});
  };
  double prev_t = 0.0, prev_psi = 0.0, prev_tpsi = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = i + 1 == n ? std::exp(hi) : std::exp(lo + (hi - lo) * i / (n - 1));
    const double p = psi(t);
    const double gap = psi.gap(t);
    const double tpsi = 1.0 - gap;
    if (!(p > 0.0)) flag(0, "psi-positive", t, "psi = " + detail::format_number(p));
    if (!(gap > 0.0)) flag(1, "t-psi-below-one", t, "t psi(t) = " + detail::format_number(tpsi));
    if (i > 0) {
      if (p > prev_psi * (1.0 + 1e-12)) {
        flag(2, "psi-non-increasing", prev_t, "psi rises to " + detail::format_number(p));
      }
      if (tpsi < prev_tpsi - 1e-12 * std::abs(prev_tpsi)) {
        flag(3, "t-psi-non-decreasing", prev_t, "t psi falls to " + detail::format_number(tpsi));
      }
    }
    prev_t = t;
    prev_psi = p;
    prev_tpsi = tpsi;
  }
  return report;
}

// Checks that r is positive and non-increasing and that s + r(s) is
// non-decreasing, on a grid that is dense near s0.
inline ValidationReport validate_rate(const RateFunction& rate, const ValidationOptions& options = {}) {
  ValidationReport report;
  const std::size_t n = std::max<std::size_t>(options.points, 2);
  report.points = n;
  const double s0 = rate.s0();
  const double span = std::min(rate.s_end() - s0, options.rate_span);
  const double lambda = std::log(1e6);
  bool seen[3] = {false, false, false};
  auto flag = [&](int i, const char* name, double s, std::string what) {
    if (seen[i]) return;
    seen[i] = true;
    report.violations.push_back({name, s, std::move(what)});
  };
  double prev_s = 0.0, prev_r = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double frac = std::expm1(lambda * static_cast<double>(i) / (n - 1)) / std::expm1(lambda);
    const double s = i + 1 == n ? s0 + span : s0 + span * frac;
    const double r = rate(s);
    if (!(r > 0.0)) flag(0, "rate-positive", s, "r = " + detail::format_number(r));
    if (i > 0) {
      if (r > prev_r + 1e-12 * std::abs(prev_r)) {
        flag(1, "rate-non-increasing", prev_s, "r rises to " + detail::format_number(r));
      }
      if (s + r < prev_s + prev_r - 1e-12 * std::max(1.0, std::abs(prev_s))) {
        flag(2, "s-plus-rate-non-decreasing", prev_s,
             "s + r(s) falls from " + detail::format_number(prev_s + prev_r) + " to " +
                 detail::format_number(s + r));
      }
    }
    prev_s = s;
    prev_r = r;
  }
  return report;
}

namespace detail {

// (log(1 / psi(t)) - log t) / 2 at t = e^l, the rate paired with log t.
inline double rate_at_log(const PsiFunction& psi, double l) {
  return -0.5 * std::log1p(-psi.gap_at_log(l));
}

}  // namespace detail

// Start of the rate domain matching psi: s0 = (log t0 - log psi(t0)) / 2.
inline double rate_start(const PsiFunction& psi) {
  const double l0 = std::log(psi.t0());
  return l0 + detail::rate_at_log(psi, l0);
}

// r(s) for the rate matched to psi. With l = log t the pairing reads
// s = l + rho(l), rho(l) = -log(t psi(t)) / 2; l + rho(l) is increasing, the
// root is bracketed by [s - rho(l0), s] and r = rho(l). Working in l keeps
// tiny rates accurate and avoids overflow of t.
inline double psi_to_r(const PsiFunction& psi, double s) {
  const double s0 = rate_start(psi);
  if (!(s >= s0 - 1e-12 * std::max(1.0, std::abs(s0)))) {
    throw DomainError("psi_to_r: s = " + detail::format_number(s) + " below s0 = " +
                      detail::format_number(s0));
  }
  const double l0 = std::log(psi.t0());
  auto f = [&](double l) { return l + detail::rate_at_log(psi, l) - s; };
  double lo = std::max(l0, s - detail::rate_at_log(psi, l0));
  double hi = std::max(lo, s);
  if (std::isfinite(psi.t_end())) hi = std::min(hi, std::log(psi.t_end()));
  if (f(lo) > 0.0) lo = l0;
  if (f(hi) < 0.0) {
    throw DomainError("psi_to_r: s = " + detail::format_number(s) + " beyond the psi table");
  }
  for (int i = 0; i < 200 && hi - lo > 4e-16 * std::max(1.0, std::abs(hi)); ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return detail::rate_at_log(psi, 0.5 * (lo + hi));
}

// Rate matched to psi, evaluated on demand.
inline RateFunction rate_from_psi(const PsiFunction& psi) {
  return RateFunction::custom(RateFunction::Family::from_psi, rate_start(psi),
                              "rate:from:" + psi.describe(),
                              [psi](double s) { return psi_to_r(psi, s); });
}

// Start of the psi domain matching r: t0 = e^{s0 - r(s0)}.
inline double psi_start(const RateFunction& rate) {
  return std::exp(rate.s0() - rate(rate.s0()));
}

// psi(t) for the function matched to r: solve s - r(s) = log t and return
// e^{-s - r(s)}.
inline double r_to_psi(const RateFunction& rate, double t) {
  const double t0 = psi_start(rate);
  if (!(t >= t0 * (1.0 - 1e-12))) {
    throw DomainError("r_to_psi: t = " + detail::format_number(t) + " below t0 = " +
                      detail::format_number(t0));
  }
  const double lt = std::log(t);
  const double s0 = rate.s0();
  auto h = [&](double s) { return s - rate(s) - lt; };
  double lo = std::max(s0, lt);
  // h(lt + r(s0)) >= 0 in exact arithmetic; the slack absorbs rounding.
  double hi = std::max(lo, lt + rate(s0));
  hi += 1e-12 * std::max(1.0, std::abs(hi));
  if (std::isfinite(rate.s_end())) hi = std::min(hi, rate.s_end());
  if (h(lo) > 0.0) lo = s0;
  if (h(hi) < 0.0) {
    throw DomainError("r_to_psi: t = " + detail::format_number(t) + " beyond the rate table");
  }
  for (int i = 0; i < 200 && hi - lo > 4e-16 * std::max(1.0, std::abs(hi)); ++i) {
    const double mid = 0.5 * (lo + hi);
    (h(mid) < 0.0 ? lo : hi) = mid;
  }
  const double s = 0.5 * (lo + hi);
  return std::exp(-s - rate(s));
}

// Relative residual of psi(e^{s - r}) = e^{-s - r} at a computed r(s),
// formed in logarithms so that large s does not overflow.
inline double correspondence_residual(const PsiFunction& psi, double s, double r) {
  return std::abs(std::expm1(std::log1p(-psi.gap_at_log(s - r)) + 2.0 * r));
}

// Partial sums of sum -(1 - n psi(n)) log(1 - n psi(n)) / n over integers
// n in [ceil(t0), N].
inline double psi_series_partial(const PsiFunction& psi, double n_max) {
  const auto first = static_cast<long long>(std::ceil(psi.t0()));
  if (!(n_max >= psi.t0())) throw DomainError("psi_series_partial: N below t0");
  double sum = 0.0;
  for (long long n = first; n <= static_cast<long long>(n_max); ++n) {
    const double gap = psi.gap(static_cast<double>(n));
    sum += -gap * std::log(gap) / static_cast<double>(n);
  }
  return sum;
}

// Partial sums of sum r(n) log(1 / r(n)) over integers n in [ceil(s0), N].
inline double rate_series_partial(const RateFunction& rate, double n_max) {
  if (!(n_max >= rate.s0())) throw DomainError("rate_series_partial: N below s0");
  const auto first = static_cast<long long>(std::ceil(rate.s0()));
  double sum = 0.0;
  for (long long n = first; n <= static_cast<long long>(n_max); ++n) {
    const double r = rate(static_cast<double>(n));
    sum += -r * std::log(r);
  }
  return sum;
}

}  // namespace unimod
