#pragma once

// Reference implementations used to cross-check the library. They share no
// code with it beyond plain containers.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace oracle {

inline double logistic_loglik(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                              const std::vector<double>& beta) {
  double ll = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    double z = beta[0];
    for (std::size_t j = 0; j < x[i].size(); ++j) z += beta[j + 1] * x[i][j];
    // ln p = -ln(1+e^{-z}), ln(1-p) = -ln(1+e^{z})
    const double lp = -(z > 0 ? std::log1p(std::exp(-z)) : -z + std::log1p(std::exp(z)));
    const double lq = -(z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)));
    ll += y[i] ? lp : lq;
  }
  return ll;
}

struct GridResult {
  std::vector<double> beta;
  double loglik = -std::numeric_limits<double>::infinity();
};

// Coarse-to-fine box search over intercept and every slope. Each round scans
// `points` values per axis and re-centres a box of four grid steps on the best
// cell, so the box shrinks by (points - 1) / 4 per round.
inline GridResult loglik_grid_search(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                                     double half_width = 12.0, int points = 25, int rounds = 40) {
  const std::size_t dims = x.empty() ? 1 : x[0].size() + 1;
  std::vector<double> centre(dims, 0.0);
  double half = half_width;
  GridResult best;
  std::vector<double> beta(dims);
  for (int r = 0; r < rounds; ++r) {
    const double step = 2.0 * half / (points - 1);
    std::vector<int> idx(dims, 0);
    std::vector<double> round_best = centre;
    double round_ll = -std::numeric_limits<double>::infinity();
    while (true) {
      for (std::size_t d = 0; d < dims; ++d) beta[d] = centre[d] - half + step * idx[d];
      const double ll = logistic_loglik(x, y, beta);
      if (ll > round_ll) {
        round_ll = ll;
        round_best = beta;
      }
      std::size_t d = 0;
      while (d < dims && ++idx[d] == points) idx[d++] = 0;
      if (d == dims) break;
    }
    if (round_ll > best.loglik) best = {round_best, round_ll};
    centre = best.beta;
    half = 2.0 * step;
    if (half < 1e-10) break;
  }
  return best;
}

struct PairCounts {
  std::uint64_t concordant = 0, discordant = 0, tied = 0;
};

inline PairCounts concordance_pairs(const std::vector<double>& s, const std::vector<int>& y) {
  PairCounts c;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!y[i]) continue;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (y[j]) continue;
      if (s[i] > s[j])
        ++c.concordant;
      else if (s[i] < s[j])
        ++c.discordant;
      else
        ++c.tied;
    }
  }
  return c;
}

// Maximum gap between the empirical event and non-event CDFs, evaluated at
// every observed score used as a threshold.
inline double ks_thresholds(const std::vector<double>& s, const std::vector<int>& y) {
  double ne = 0, nn = 0;
  for (int v : y) (v ? ne : nn) += 1;
  double best = 0.0;
  for (double t : s) {
    double fe = 0, fn = 0;
    for (std::size_t i = 0; i < s.size(); ++i)
      if (s[i] >= t) (y[i] ? fe : fn) += 1;
    best = std::max(best, std::fabs(fe / ne - fn / nn));
  }
  return best;
}

inline double sse(const std::vector<std::vector<double>>& p, const std::vector<double>& y,
                  const std::vector<double>& lambda) {
  double total = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    double fit = 0.0;
    for (std::size_t j = 0; j < lambda.size(); ++j) fit += lambda[j] * p[j][i];
    total += (y[i] - fit) * (y[i] - fit);
  }
  return total;
}

struct SimplexGridResult {
  std::vector<double> lambda;
  double objective = std::numeric_limits<double>::infinity();
};

// Exhaustive scan of the simplex for k <= 3 columns; `p` holds one vector per column.
inline SimplexGridResult simplex_grid_search(const std::vector<std::vector<double>>& p, const std::vector<double>& y,
                                             double step = 1e-3) {
  const std::size_t k = p.size();
  const long n = std::lround(1.0 / step);
  // Quadratic form assembled directly from the columns.
  std::vector<std::vector<double>> g(k, std::vector<double>(k, 0.0));
  std::vector<double> c(k, 0.0);
  double yy = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    yy += y[i] * y[i];
    for (std::size_t a = 0; a < k; ++a) {
      c[a] += p[a][i] * y[i];
      for (std::size_t b = 0; b < k; ++b) g[a][b] += p[a][i] * p[b][i];
    }
  }
  auto f = [&](const std::vector<double>& l) {
    double v = yy;
    for (std::size_t a = 0; a < k; ++a) {
      v -= 2.0 * c[a] * l[a];
      for (std::size_t b = 0; b < k; ++b) v += l[a] * g[a][b] * l[b];
    }
    return v;
  };
  SimplexGridResult best;
  std::vector<double> l(k);
  if (k == 1) return {{1.0}, f({1.0})};
  for (long i = 0; i <= n; ++i) {
    if (k == 2) {
      l = {i * step, 1.0 - i * step};
      if (const double v = f(l); v < best.objective) best = {l, v};
      continue;
    }
    for (long j = 0; i + j <= n; ++j) {
      l = {i * step, j * step, 1.0 - (i + j) * step};
      if (const double v = f(l); v < best.objective) best = {l, v};
    }
  }
  return best;
}

}  // namespace oracle
