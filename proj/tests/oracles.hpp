#pragma once

// Reference computations for tests. Deliberately independent of the library's
// Cholesky/kernel path: Gauss-Jordan with partial pivoting in long double.

#include <cmath>
#include <cstddef>
#include <random>
#include <utility>
#include <vector>

#include "optalloc/design_model.hpp"

namespace oracle {

using Dense = std::vector<std::vector<long double>>;

inline Dense dense(const optalloc::SquareMatrix& m) {
  Dense d(m.size(), std::vector<long double>(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) d[i][j] = m(i, j);
  return d;
}

/// Returns (inverse, log|det|).
inline std::pair<Dense, long double> gauss_jordan(Dense a) {
  const std::size_t n = a.size();
  Dense inv(n, std::vector<long double>(n, 0.0L));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0L;
  long double logdet = 0.0L;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::fabs(a[r][c]) > std::fabs(a[piv][c])) piv = r;
    std::swap(a[c], a[piv]);
    std::swap(inv[c], inv[piv]);
    const long double d = a[c][c];
    logdet += std::log(std::fabs(d));
    for (std::size_t j = 0; j < n; ++j) {
      a[c][j] /= d;
      inv[c][j] /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const long double f = a[r][c];
      for (std::size_t j = 0; j < n; ++j) {
        a[r][j] -= f * a[c][j];
        inv[r][j] -= f * inv[c][j];
      }
    }
  }
  return {inv, logdet};
}

/// Sigma(w) summed directly from components.
inline Dense sigma(const optalloc::DesignProblem& problem, const std::vector<double>& w) {
  const std::size_t p = problem.p();
  Dense s(p, std::vector<long double>(p, 0.0L));
  for (std::size_t l = 0; l < problem.k(); ++l)
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j < p; ++j) s[i][j] += static_cast<long double>(w[l]) * problem.component(l).matrix()(i, j);
  return s;
}

/// trace(A_l S^{-1}) for every l.
inline std::vector<double> d_sensitivities(const optalloc::DesignProblem& problem, const std::vector<double>& w) {
  const auto [inv, logdet] = gauss_jordan(sigma(problem, w));
  (void)logdet;
  std::vector<double> out;
  for (std::size_t l = 0; l < problem.k(); ++l) {
    long double t = 0.0L;
    for (std::size_t i = 0; i < problem.p(); ++i)
      for (std::size_t j = 0; j < problem.p(); ++j) t += problem.component(l).matrix()(i, j) * inv[j][i];
    out.push_back(static_cast<double>(t));
  }
  return out;
}

/// trace(S^{-1} A_l S^{-1}) / trace(S^{-1}) for every l.
inline std::vector<double> a_sensitivities(const optalloc::DesignProblem& problem, const std::vector<double>& w) {
  const std::size_t p = problem.p();
  const auto [inv, logdet] = gauss_jordan(sigma(problem, w));
  (void)logdet;
  Dense inv2(p, std::vector<long double>(p, 0.0L));
  long double tr = 0.0L;
  for (std::size_t i = 0; i < p; ++i) {
    tr += inv[i][i];
    for (std::size_t j = 0; j < p; ++j)
      for (std::size_t m = 0; m < p; ++m) inv2[i][j] += inv[i][m] * inv[m][j];
  }
  std::vector<double> out;
  for (std::size_t l = 0; l < problem.k(); ++l) {
    long double t = 0.0L;
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j < p; ++j) t += problem.component(l).matrix()(i, j) * inv2[j][i];
    out.push_back(static_cast<double>(t / tr));
  }
  return out;
}

inline double log_det(const optalloc::DesignProblem& problem, const std::vector<double>& w) {
  return static_cast<double>(gauss_jordan(sigma(problem, w)).second);
}

inline double trace_inverse(const optalloc::DesignProblem& problem, const std::vector<double>& w) {
  const auto inv = gauss_jordan(sigma(problem, w)).first;
  long double tr = 0.0L;
  for (std::size_t i = 0; i < inv.size(); ++i) tr += inv[i][i];
  return static_cast<double>(tr);
}

// Fixtures ------------------------------------------------------------------

inline optalloc::DesignProblem two_point() {
  const std::vector<optalloc::DesignPoint> pts{{{1.0, -1.0}}, {{1.0, 1.0}}};
  return optalloc::DesignProblem::from_points(pts);
}

inline optalloc::DesignProblem three_point() {
  const std::vector<optalloc::DesignPoint> pts{{{1.0, -1.0}}, {{1.0, 0.0}}, {{1.0, 1.0}}};
  return optalloc::DesignProblem::from_points(pts);
}

inline optalloc::DesignProblem scalar_pair() {
  std::vector<optalloc::InformationComponent> comps;
  comps.push_back(optalloc::InformationComponent::from_matrix(optalloc::SquareMatrix{{1.0}}));
  comps.push_back(optalloc::InformationComponent::from_matrix(optalloc::SquareMatrix{{4.0}}));
  return optalloc::DesignProblem::from_components(std::move(comps));
}

/// Random U(-1,1) points; uses std distributions, unlike the benchmark generator.
inline optalloc::DesignProblem random_points(std::size_t k, std::size_t p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<optalloc::DesignPoint> pts(k);
  for (auto& pt : pts) {
    pt.coordinates.resize(p);
    for (double& c : pt.coordinates) c = u(rng);
  }
  return optalloc::DesignProblem::from_points(pts);
}

/// Random full-rank-ish PSD components B B' with B p x r.
inline optalloc::DesignProblem random_components(std::size_t k, std::size_t p, std::size_t r, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<optalloc::InformationComponent> comps;
  for (std::size_t l = 0; l < k; ++l) {
    std::vector<double> b(p * r);
    for (double& x : b) x = u(rng);
    optalloc::SquareMatrix m(p);
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j < p; ++j)
        for (std::size_t c = 0; c < r; ++c) m(i, j) += b[i * r + c] * b[j * r + c];
    comps.push_back(optalloc::InformationComponent::from_matrix(std::move(m)));
  }
  return optalloc::DesignProblem::from_components(std::move(comps));
}

inline std::vector<double> random_simplex(std::size_t k, std::mt19937_64& rng) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> w(k);
  double s = 0.0;
  for (double& x : w) s += (x = e(rng));
  for (double& x : w) x /= s;
  return w;
}

}  // namespace oracle
