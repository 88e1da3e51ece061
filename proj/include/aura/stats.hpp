#pragma once

// Descriptive statistics, Student's pooled t-test, Cohen's d and kappa.

#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <vector>

#include "aura/error.hpp"

namespace aura::stats {

inline double mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

/// Sample variance (n - 1 denominator); zero below two values.
inline double variance(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return ss / static_cast<double>(v.size() - 1);
}

inline double sd(const std::vector<double>& v) { return std::sqrt(variance(v)); }

namespace detail {

/// Continued fraction for the incomplete beta function (modified Lentz).
inline double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 500;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace detail

/// Regularized incomplete beta I_x(a, b) for a, b > 0 and x in [0, 1].
inline double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0 && b > 0.0)) throw ContractViolation("beta parameters must be > 0");
  if (!(x >= 0.0 && x <= 1.0)) throw ContractViolation("beta argument outside [0,1]");
  if (x == 0.0 || x == 1.0) return x;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * detail::beta_cf(a, b, x) / a;
  return 1.0 - front * detail::beta_cf(b, a, 1.0 - x) / b;
}

/// CDF of Student's t distribution with `df` degrees of freedom.
inline double t_cdf(double t, double df) {
  if (!(df > 0.0)) throw ContractViolation("degrees of freedom must be > 0");
  if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
  const double tail = 0.5 * incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
  return t > 0 ? 1.0 - tail : tail;
}

/// Two-tailed p-value for a t statistic.
inline double t_two_tailed_p(double t, double df) {
  if (!(df > 0.0)) throw ContractViolation("degrees of freedom must be > 0");
  if (std::isinf(t)) return 0.0;
  return incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
}

struct TTestResult {
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;
};

inline double pooled_sd(const std::vector<double>& a,
                        const std::vector<double>& b) {
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  return std::sqrt(((na - 1.0) * variance(a) + (nb - 1.0) * variance(b)) /
                   (na + nb - 2.0));
}

/// Independent-samples t-test with pooled variance, df = n_a + n_b - 2.
/// Positive t means mean(a) > mean(b).
inline TTestResult student_t_test(const std::vector<double>& a,
                                  const std::vector<double>& b) {
  if (a.size() < 2 || b.size() < 2)
    throw ContractViolation("t-test needs at least two values per sample");
  const double sp = pooled_sd(a, b);
  if (!(sp > 0.0))
    throw ContractViolation("t-test undefined: both samples have zero variance");
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  TTestResult r;
  r.df = na + nb - 2.0;
  r.t = (mean(a) - mean(b)) / (sp * std::sqrt(1.0 / na + 1.0 / nb));
  r.p = t_two_tailed_p(r.t, r.df);
  return r;
}

/// (mean(a) - mean(b)) / pooled sd.
inline double cohens_d(const std::vector<double>& a,
                       const std::vector<double>& b) {
  if (a.size() < 2 || b.size() < 2)
    throw ContractViolation("Cohen's d needs at least two values per sample");
  const double sp = pooled_sd(a, b);
  if (!(sp > 0.0)) throw ContractViolation("Cohen's d undefined: pooled sd is 0");
  return (mean(a) - mean(b)) / sp;
}

/// Cohen's kappa for two raters over the same items.
template <typename Label>
double cohen_kappa(const std::vector<Label>& rater_a,
                   const std::vector<Label>& rater_b) {
  if (rater_a.size() != rater_b.size() || rater_a.empty())
    throw ContractViolation("kappa needs two equal-length, non-empty ratings");
  const double n = static_cast<double>(rater_a.size());
  std::map<Label, double> pa;
  std::map<Label, double> pb;
  double agree = 0.0;
  for (std::size_t i = 0; i < rater_a.size(); ++i) {
    pa[rater_a[i]] += 1.0;
    pb[rater_b[i]] += 1.0;
    if (rater_a[i] == rater_b[i]) agree += 1.0;
  }
  const double po = agree / n;
  double pe = 0.0;
  for (const auto& [label, count] : pa) {
    const auto it = pb.find(label);
    if (it != pb.end()) pe += (count / n) * (it->second / n);
  }
  if (pe == 1.0) return 1.0;
  return (po - pe) / (1.0 - pe);
}

}  // namespace aura::stats
