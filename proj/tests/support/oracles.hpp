#pragma once

// Independent reference computations used only by tests. Nothing here calls
// into the code paths it is used to check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>

namespace kschan::oracle {

// Adaptive double-exponential quadrature, tolerant of endpoint singularities.
inline double integrate(const std::function<double(double)>& f, double a, double b) {
  boost::math::quadrature::tanh_sinh<double> rule;
  return rule.integrate(f, a, b, 1e-14);
}

// Output law of greedy rejection sampling by the literal round recursion
//   s'(a) = s(a) + min((1 - S) p(a), t(a) - s(a)),  P(out = a) = sum_i ds_i(a),
// run until S > 1 - residual. Also exposes the per-round mass of acceptance.
struct GreedyDp {
  std::vector<double> output;           // P(out = a), truncated
  std::vector<double> round_mass;       // P(index = i), i = 1, 2, ...
  std::vector<std::vector<double>> ledgers;  // s_i before round i (first few)
  double residual = 1.0;
};

inline GreedyDp greedy_dp(const std::vector<double>& target,
                          const std::vector<double>& proposal,
                          double residual = 1e-9, std::size_t max_rounds = 10'000'000,
                          std::size_t keep_ledgers = 0) {
  const std::size_t n = target.size();
  GreedyDp out;
  out.output.assign(n, 0.0);
  std::vector<double> s(n, 0.0);
  double S = 0.0;
  for (std::size_t round = 0; round < max_rounds && S <= 1.0 - residual; ++round) {
    if (round < keep_ledgers) out.ledgers.push_back(s);
    double added = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
      const double ds = std::min((1.0 - S) * proposal[a], target[a] - s[a]);
      s[a] += ds;
      out.output[a] += ds;
      added += ds;
    }
    out.round_mass.push_back(added);
    S = 0.0;
    for (double v : s) S += v;
  }
  out.residual = 1.0 - S;
  return out;
}

inline double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) d += std::abs(p[i] - q[i]);
  return 0.5 * d;
}

// One-sample Kolmogorov-Smirnov statistic against a continuous CDF.
inline double ks_statistic(std::vector<double> samples,
                           const std::function<double(double)>& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

// Asymptotic 1% critical value of the KS statistic.
inline double ks_critical_1pct(std::size_t n) { return 1.6276 / std::sqrt(static_cast<double>(n)); }

// Kuiper statistic V = D+ + D- of samples in [0, 1) against the uniform law;
// invariant under cyclic shifts, so suited to angles.
inline double kuiper_statistic(std::vector<double> samples) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double dplus = 0.0;
  double dminus = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    dplus = std::max(dplus, (static_cast<double>(i) + 1.0) / n - samples[i]);
    dminus = std::max(dminus, samples[i] - static_cast<double>(i) / n);
  }
  return dplus + dminus;
}

// Asymptotic 1% critical value of the Kuiper statistic (Stephens).
inline double kuiper_critical_1pct(std::size_t n) {
  const double rn = std::sqrt(static_cast<double>(n));
  return 2.001 / (rn + 0.155 + 0.24 / rn);
}

}  // namespace kschan::oracle
