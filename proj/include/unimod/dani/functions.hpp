#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "unimod/error.hpp"
#include "unimod/parse.hpp"

namespace unimod {

namespace detail {

// Two-column numeric CSV; blank lines and lines starting with '#' are skipped,
// as is a first line that does not parse (a header).
inline std::vector<std::pair<double, double>> read_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open table '" + path + "'");
  std::vector<std::pair<double, double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string_view t = parse::trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto cells = parse::split(t, ',');
    if (cells.size() != 2) {
      throw ArgumentError(path + ":" + std::to_string(line_no) + ": expected two columns");
    }
    try {
      rows.emplace_back(parse::number(cells[0]), parse::number(cells[1]));
    } catch (const ArgumentError&) {
      if (rows.empty() && line_no == 1) continue;
      throw ArgumentError(path + ":" + std::to_string(line_no) + ": malformed number");
    }
  }
  return rows;
}

inline void check_table(const std::vector<std::pair<double, double>>& rows, const char* what) {
  if (rows.size() < 2) throw ArgumentError(std::string(what) + ": table needs at least 2 rows");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!std::isfinite(rows[i].first) || !std::isfinite(rows[i].second)) {
      throw ArgumentError(std::string(what) + ": non-finite table entry");
    }
    if (i > 0 && !(rows[i].first > rows[i - 1].first)) {
      throw ArgumentError(std::string(what) + ": first column must be strictly increasing (row " +
                          std::to_string(i + 1) + ")");
    }
  }
}

inline double interpolate(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  if (it == xs.begin()) return ys.front();
  if (it == xs.end()) return ys.back();
  const std::size_t i = static_cast<std::size_t>(it - xs.begin());
  const double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
  return ys[i - 1] + w * (ys[i] - ys[i - 1]);
}

inline std::string format_number(double v) { return parse::format(v); }

}  // namespace detail

// An approximation function psi on [t0, infinity), or on [t0, t_end] for
// tables.
class PsiFunction {
 public:
  enum class Family { power, mod1, mod2, tabulated };

  // a / t.
  static PsiFunction power(double a, std::optional<double> t0 = {}) {
    if (!(a > 0.0) || !std::isfinite(a)) throw ArgumentError("psi pow: a must be > 0");
    PsiFunction f(Family::power, t0.value_or(1.0));
    f.a_ = a;
    f.describe_ = "psi:pow:a=" + detail::format_number(a);
    f.value_ = [a](double t) { return a / t; };
    f.gap_ = [a](double) { return 1.0 - a; };
    return f.finish();
  }

  // (1 - k / log t) / t; by default t0 is the first point from which it is
  // positive and non-increasing.
  static PsiFunction mod1(double k, std::optional<double> t0 = {}) {
    if (!(k > 0.0) || !std::isfinite(k)) throw ArgumentError("psi mod1: k must be > 0");
    const double l_star = 0.5 * (k + std::sqrt(k * k + 4.0 * k));
    PsiFunction f(Family::mod1, t0.value_or(std::exp(std::max(2.0 * k, l_star))));
    f.a_ = k;
    f.describe_ = "psi:mod1:k=" + detail::format_number(k);
    f.value_ = [k](double t) { return (1.0 - k / std::log(t)) / t; };
    f.gap_ = [k](double l) { return k / l; };
    return f.finish();
  }

  // (1 - k t^-gamma) / t.
  static PsiFunction mod2(double k, double gamma, std::optional<double> t0 = {}) {
    if (!(k > 0.0) || !(gamma > 0.0)) throw ArgumentError("psi mod2: k and gamma must be > 0");
    PsiFunction f(Family::mod2,
                  t0.value_or(std::max(1.0, std::pow(k * (1.0 + gamma), 1.0 / gamma))));
    f.a_ = k;
    f.b_ = gamma;
    f.describe_ =
        "psi:mod2:k=" + detail::format_number(k) + ",gamma=" + detail::format_number(gamma);
    f.value_ = [k, gamma](double t) { return (1.0 - k * std::pow(t, -gamma)) / t; };
    f.gap_ = [k, gamma](double l) { return k * std::exp(-gamma * l); };
    return f.finish();
  }

  // Piecewise linear in (log t, log psi) through the given (t, psi) rows.
  static PsiFunction tabulated(const std::vector<std::pair<double, double>>& rows,
                               std::string source = "table") {
    detail::check_table(rows, "psi table");
    auto lx = std::make_shared<std::vector<double>>();
    auto ly = std::make_shared<std::vector<double>>();
    for (const auto& [t, p] : rows) {
      if (!(t > 0.0) || !(p > 0.0)) throw ArgumentError("psi table: entries must be positive");
      lx->push_back(std::log(t));
      ly->push_back(std::log(p));
    }
    PsiFunction f(Family::tabulated, rows.front().first);
    f.t_end_ = rows.back().first;
    f.describe_ = "psi:tab:" + source;
    f.value_ = [lx, ly](double t) { return std::exp(detail::interpolate(*lx, *ly, std::log(t))); };
    f.gap_ = [lx, ly](double l) { return -std::expm1(l + detail::interpolate(*lx, *ly, l)); };
    return f.finish();
  }

  double operator()(double t) const {
    check_domain(t);
    return value_(t);
  }
  // 1 - t psi(t), evaluated without cancellation where the family allows.
  double gap(double t) const {
    check_domain(t);
    return gap_(std::log(t));
  }
  // 1 - t psi(t) at t = e^l, usable where e^l overflows.
  double gap_at_log(double l) const {
    if (!(l >= std::log(t0_) - 1e-14 * std::max(1.0, std::abs(l))) ||
        l > std::log(t_end_) + 1e-14 * std::max(1.0, std::abs(l)) || std::isnan(l)) {
      throw DomainError("psi evaluated at log t = " + detail::format_number(l) + " outside [" +
                        detail::format_number(std::log(t0_)) + ", " +
                        detail::format_number(std::log(t_end_)) + "]");
    }
    return gap_(l);
  }
  double t0() const { return t0_; }
  double t_end() const { return t_end_; }
  Family family() const { return family_; }
  const std::string& describe() const { return describe_; }

 private:
  PsiFunction(Family family, double t0) : family_(family), t0_(t0) {}

  PsiFunction finish() {
    if (!(t0_ >= 1.0) || !std::isfinite(t0_)) throw ArgumentError("psi: t0 must be >= 1");
    if (t0_ != 1.0 && family_ != Family::tabulated) {
      describe_ += ",t0=" + detail::format_number(t0_);
    }
    return *this;
  }

  void check_domain(double t) const {
    if (!(t >= t0_ * (1.0 - 1e-14)) || t > t_end_ * (1.0 + 1e-14) || std::isnan(t)) {
      throw DomainError("psi evaluated at t = " + detail::format_number(t) + " outside [" +
                        detail::format_number(t0_) + ", " + detail::format_number(t_end_) + "]");
    }
  }

  Family family_;
  double t0_ = 1.0;
  double t_end_ = std::numeric_limits<double>::infinity();
  double a_ = 0.0;
  double b_ = 0.0;
  std::string describe_;
  std::function<double(double)> value_;
  std::function<double(double)> gap_;  // of log t
};

// A flow rate r on [s0, infinity), or on [s0, s_end] for tables.
class RateFunction {
 public:
  enum class Family { constant, power, logpow, exponential, tabulated, from_psi };

  static RateFunction constant(double c, std::optional<double> s0 = {}) {
    if (!(c > 0.0) || !std::isfinite(c)) throw ArgumentError("rate const: c must be > 0");
    RateFunction f(Family::constant, s0.value_or(0.0));
    f.describe_ = "rate:const:c=" + detail::format_number(c);
    f.value_ = [c](double) { return c; };
    return f.finish(0.0);
  }

  // c s^-alpha; the default s0 is where s + r(s) stops decreasing (and >= 1).
  static RateFunction power(double alpha, double c = 1.0, std::optional<double> s0 = {}) {
    if (!(alpha > 0.0) || !(c > 0.0)) throw ArgumentError("rate pow: alpha and c must be > 0");
    RateFunction f(Family::power, s0.value_or(std::max(1.0, std::pow(c * alpha, 1.0 / (alpha + 1.0)))));
    f.describe_ = "rate:pow:alpha=" + detail::format_number(alpha);
    if (c != 1.0) f.describe_ += ",c=" + detail::format_number(c);
    f.value_ = [alpha, c](double s) { return c * std::pow(s, -alpha); };
    return f.finish(std::max(1.0, std::pow(c * alpha, 1.0 / (alpha + 1.0))));
  }

  // c (log s)^beta s^-alpha.
  static RateFunction logpow(double alpha, double beta, double c = 1.0,
                             std::optional<double> s0 = {}) {
    if (!(alpha > 0.0) || !(c > 0.0) || !(beta >= 0.0)) {
      throw ArgumentError("rate logpow: need alpha > 0, beta >= 0, c > 0");
    }
    const double start = std::max(std::exp(1.0), std::exp(beta / alpha));
    RateFunction f(Family::logpow, s0.value_or(start));
    f.describe_ = "rate:logpow:alpha=" + detail::format_number(alpha) +
                  ",beta=" + detail::format_number(beta);
    if (c != 1.0) f.describe_ += ",c=" + detail::format_number(c);
    f.value_ = [alpha, beta, c](double s) {
      return c * std::pow(std::log(s), beta) * std::pow(s, -alpha);
    };
    return f.finish(start);
  }

  // c e^{-lambda s}.
  static RateFunction exponential(double lambda, double c = 1.0, std::optional<double> s0 = {}) {
    if (!(lambda > 0.0) || !(c > 0.0)) throw ArgumentError("rate exp: lambda and c must be > 0");
    RateFunction f(Family::exponential, s0.value_or(0.0));
    f.describe_ = "rate:exp:lambda=" + detail::format_number(lambda);
    if (c != 1.0) f.describe_ += ",c=" + detail::format_number(c);
    f.value_ = [lambda, c](double s) { return c * std::exp(-lambda * s); };
    return f.finish(0.0);
  }

  // Piecewise linear through the given (s, r) rows.
  static RateFunction tabulated(const std::vector<std::pair<double, double>>& rows,
                                std::string source = "table") {
    detail::check_table(rows, "rate table");
    auto xs = std::make_shared<std::vector<double>>();
    auto ys = std::make_shared<std::vector<double>>();
    for (const auto& [s, r] : rows) {
      xs->push_back(s);
      ys->push_back(r);
    }
    RateFunction f(Family::tabulated, rows.front().first);
    f.s_end_ = rows.back().first;
    f.describe_ = "rate:tab:" + source;
    f.value_ = [xs, ys](double s) { return detail::interpolate(*xs, *ys, s); };
    return f.finish(rows.front().first);
  }

  // Wraps an arbitrary evaluator; used for rates derived from psi.
  static RateFunction custom(Family family, double s0, std::string description,
                             std::function<double(double)> value) {
    RateFunction f(family, s0);
    f.describe_ = std::move(description);
    f.value_ = std::move(value);
    return f;
  }

  double operator()(double s) const {
    if (!(s >= s0_ - 1e-12 * std::max(1.0, std::abs(s0_))) ||
        s > s_end_ * (1.0 + 1e-14) + 1e-14) {
      throw DomainError("rate evaluated at s = " + detail::format_number(s) + " outside [" +
                        detail::format_number(s0_) + ", " + detail::format_number(s_end_) + "]");
    }
    return value_(std::max(s, s0_));
  }
  double s0() const { return s0_; }
  double s_end() const { return s_end_; }
  Family family() const { return family_; }
  const std::string& describe() const { return describe_; }

 private:
  RateFunction(Family family, double s0) : family_(family), s0_(s0) {}

  RateFunction finish(double default_s0) {
    if (!std::isfinite(s0_)) throw ArgumentError("rate: s0 must be finite");
    if (family_ != Family::tabulated && s0_ != default_s0) {
      describe_ += ",s0=" + detail::format_number(s0_);
    }
    return *this;
  }

  Family family_;
  double s0_ = 0.0;
  double s_end_ = std::numeric_limits<double>::infinity();
  std::string describe_;
  std::function<double(double)> value_;
};

// "psi:pow:a=0.9", "psi:mod1:k=1", "psi:mod2:k=1,gamma=1", "psi:tab:<path>";
// the "psi:" prefix is optional and every closed form accepts t0=.
inline PsiFunction parse_psi(std::string_view spec) {
  std::string_view s = spec;
  if (s.substr(0, 4) == "psi:") s.remove_prefix(4);
  const std::size_t colon = s.find(':');
  if (colon == std::string_view::npos) {
    throw ArgumentError("psi '" + std::string(spec) + "': expected <family>:<parameters>");
  }
  const std::string_view family = s.substr(0, colon);
  const std::string_view body = s.substr(colon + 1);
  if (family == "tab") {
    const std::string path(body);
    return PsiFunction::tabulated(detail::read_table(path), path);
  }
  auto t0 = [](const std::map<std::string, double>& kv) -> std::optional<double> {
    const auto it = kv.find("t0");
    return it == kv.end() ? std::nullopt : std::optional<double>(it->second);
  };
  if (family == "pow") {
    const auto kv = parse::key_values(body, {"a", "t0"});
    return PsiFunction::power(parse::require(kv, "a", spec), t0(kv));
  }
  if (family == "mod1") {
    const auto kv = parse::key_values(body, {"k", "t0"});
    return PsiFunction::mod1(parse::value_or(kv, "k", 1.0), t0(kv));
  }
  if (family == "mod2") {
    const auto kv = parse::key_values(body, {"k", "gamma", "t0"});
    return PsiFunction::mod2(parse::value_or(kv, "k", 1.0), parse::value_or(kv, "gamma", 1.0),
                             t0(kv));
  }
  throw ArgumentError("unknown psi family '" + std::string(family) + "'");
}

// "rate:const:c=0.2", "rate:pow:alpha=1[,c=..]", "rate:logpow:alpha=1,beta=1",
// "rate:exp:lambda=3", "rate:tab:<path>"; the "rate:" prefix is optional and
// every closed form accepts s0=.
inline RateFunction parse_rate(std::string_view spec) {
  std::string_view s = spec;
  if (s.substr(0, 5) == "rate:") s.remove_prefix(5);
  const std::size_t colon = s.find(':');
  if (colon == std::string_view::npos) {
    throw ArgumentError("rate '" + std::string(spec) + "': expected <family>:<parameters>");
  }
  const std::string_view family = s.substr(0, colon);
  const std::string_view body = s.substr(colon + 1);
  if (family == "tab") {
    const std::string path(body);
    return RateFunction::tabulated(detail::read_table(path), path);
  }
  auto s0 = [](const std::map<std::string, double>& kv) -> std::optional<double> {
    const auto it = kv.find("s0");
    return it == kv.end() ? std::nullopt : std::optional<double>(it->second);
  };
  if (family == "const") {
    const auto kv = parse::key_values(body, {"c", "s0"});
    return RateFunction::constant(parse::require(kv, "c", spec), s0(kv));
  }
  if (family == "pow") {
    const auto kv = parse::key_values(body, {"alpha", "c", "s0"});
    return RateFunction::power(parse::require(kv, "alpha", spec), parse::value_or(kv, "c", 1.0),
                               s0(kv));
  }
  if (family == "logpow") {
    const auto kv = parse::key_values(body, {"alpha", "beta", "c", "s0"});
    return RateFunction::logpow(parse::require(kv, "alpha", spec),
                                parse::value_or(kv, "beta", 1.0), parse::value_or(kv, "c", 1.0),
                                s0(kv));
  }
  if (family == "exp") {
    const auto kv = parse::key_values(body, {"lambda", "c", "s0"});
    return RateFunction::exponential(parse::require(kv, "lambda", spec),
                                     parse::value_or(kv, "c", 1.0), s0(kv));
  }
  throw ArgumentError("unknown rate family '" + std::string(family) + "'");
}

}  // namespace unimod
