#pragma once

#include "rlg/error.hpp"
#include "rlg/multigraph.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace rlg {

using Complex = std::complex<double>;

struct AdjacencySpectrum {
  std::vector<double> eigenvalues;  // descending
  double residual = 0.0;            // max ||A v - lambda v|| over unit eigenvectors
};

struct NbSpectrum {
  std::vector<Complex> eigenvalues;
  double residual = 0.0;  // max ||B v - mu v|| over unit eigenvectors
};

struct GapBound {
  double epsilon = 0.0;
  double f_value = 0.0;
  double bound = 0.0;
  double delta = 0.0;
};

struct SpectralReport {
  std::vector<double> adjacency_eigenvalues;
  double lambda_gap = 0.0;
  std::vector<Complex> nb_eigenvalues;
  double mu_second = 0.0;
  double residual_bound = 0.0;
};

constexpr std::size_t default_direct_budget = 2000;

inline Eigen::MatrixXd adjacency_matrix_dense(const Multigraph& g) {
  const int n = g.vertex_count();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (HalfEdge h = 0; h < g.half_edge_count(); ++h) a(g.vertex(h), g.vertex(g.partner(h))) += 1.0;
  return a;
}

/// Dense non-backtracking matrix on the n*d directed edges: B(e, e') = 1 iff
/// e' leaves head(e) and is not the reversal of e.
inline Eigen::MatrixXd nb_matrix_dense(const Multigraph& g) {
  const auto m = static_cast<Eigen::Index>(g.half_edge_count());
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(m, m);
  const auto d = static_cast<HalfEdge>(g.degree());
  for (HalfEdge e = 0; e < g.half_edge_count(); ++e) {
    const HalfEdge arrival = g.partner(e);
    const HalfEdge base = g.first_half_edge(g.vertex(arrival));
    for (HalfEdge s = base; s < base + d; ++s) {
      if (s != arrival) b(e, s) = 1.0;
    }
  }
  return b;
}

inline AdjacencySpectrum adjacency_spectrum(const Multigraph& g) {
  const Eigen::MatrixXd a = adjacency_matrix_dense(g);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
  if (solver.info() != Eigen::Success) fail(ErrorCode::ConvergenceFailure, "symmetric eigensolver did not converge");
  const Eigen::VectorXd& values = solver.eigenvalues();  // ascending
  const Eigen::MatrixXd& vectors = solver.eigenvectors();
  AdjacencySpectrum out;
  out.residual = ((a * vectors) - vectors * values.asDiagonal()).colwise().norm().maxCoeff();
  out.eigenvalues.assign(values.data(), values.data() + values.size());
  std::reverse(out.eigenvalues.begin(), out.eigenvalues.end());
  const double tolerance = 1e-9 * g.degree();
  if (!(out.residual <= tolerance)) {
    fail(ErrorCode::ConvergenceFailure, "adjacency residual " + std::to_string(out.residual) + " exceeds tolerance");
  }
  return out;
}

inline double lambda_gap(std::span<const double> descending) {
  if (descending.size() < 2) fail(ErrorCode::TooFewEigenvalues, "lambda gap needs at least two eigenvalues");
  return std::max(std::abs(descending[1]), std::abs(descending.back()));
}

/// Non-backtracking spectrum from the adjacency spectrum:
///   mu+- = (lambda +- sqrt(lambda^2 - 4(d-1))) / 2 for every lambda,
/// plus +1 and -1 each with multiplicity m - n, m = n*d/2 undirected edges.
inline std::vector<Complex> gk_map(std::span<const double> adjacency_eigenvalues, int d, int n) {
  if (adjacency_eigenvalues.size() != static_cast<std::size_t>(n)) {
    fail(ErrorCode::SizeMismatch, "expected " + std::to_string(n) + " adjacency eigenvalues");
  }
  const long long m = static_cast<long long>(n) * d / 2;
  if (m < n) fail(ErrorCode::DomainError, "the mapping needs d >= 2");
  std::vector<Complex> out;
  out.reserve(static_cast<std::size_t>(2 * m));
  const double q = d - 1.0;
  for (double lambda : adjacency_eigenvalues) {
    const Complex root = std::sqrt(Complex(lambda * lambda - 4.0 * q, 0.0));
    out.push_back((lambda + root) / 2.0);
    out.push_back((lambda - root) / 2.0);
  }
  for (long long i = 0; i < m - n; ++i) {
    out.emplace_back(1.0, 0.0);
    out.emplace_back(-1.0, 0.0);
  }
  return out;
}

inline NbSpectrum nb_spectrum_direct(const Multigraph& g, std::size_t budget = default_direct_budget) {
  if (g.half_edge_count() > budget) {
    fail(ErrorCode::BudgetExceeded,
         "n*d = " + std::to_string(g.half_edge_count()) + " exceeds direct budget " + std::to_string(budget));
  }
  const Eigen::MatrixXd b = nb_matrix_dense(g);
  Eigen::EigenSolver<Eigen::MatrixXd> solver(b, true);
  if (solver.info() != Eigen::Success) fail(ErrorCode::ConvergenceFailure, "general eigensolver did not converge");
  const Eigen::VectorXcd values = solver.eigenvalues();
  const Eigen::MatrixXcd vectors = solver.eigenvectors();
  NbSpectrum out;
  const Eigen::MatrixXcd bc = b.cast<Complex>();
  double residual = 0.0;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const Eigen::VectorXcd v = vectors.col(i).normalized();
    residual = std::max(residual, (bc * v - values[i] * v).norm());
  }
  out.residual = residual;
  out.eigenvalues.assign(values.data(), values.data() + values.size());
  return out;
}

inline double f_map(double x, int d) {
  const double threshold = 2.0 * std::sqrt(d - 1.0);
  if (x < threshold) fail(ErrorCode::DomainError, "f(x) is not real for x < 2 sqrt(d-1)");
  return (x + std::sqrt(std::max(0.0, x * x - 4.0 * (d - 1.0)))) / 2.0;
}

/// Bound on mu for any d-regular graph with lambda <= d - epsilon.
inline GapBound gap_bound(double epsilon, int d) {
  if (!(epsilon > 0.0)) fail(ErrorCode::DomainError, "epsilon must be positive");
  GapBound out;
  out.epsilon = epsilon;
  out.f_value = f_map(d - epsilon, d);
  out.bound = std::max(std::sqrt(d - 1.0), out.f_value);
  out.delta = (d - 1.0) - out.bound;
  return out;
}

/// Largest magnitude after removing the one eigenvalue closest to d - 1.
inline double mu_second(std::span<const Complex> nb_eigenvalues, int d, double tolerance = 1e-6) {
  const Complex perron(d - 1.0, 0.0);
  std::size_t closest = nb_eigenvalues.size();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < nb_eigenvalues.size(); ++i) {
    const double dist = std::abs(nb_eigenvalues[i] - perron);
    if (dist < best) {
      best = dist;
      closest = i;
    }
  }
  if (closest == nb_eigenvalues.size() || best > tolerance) {
    fail(ErrorCode::MissingPerron, "no eigenvalue within tolerance of d-1");
  }
  double mu = 0.0;
  for (std::size_t i = 0; i < nb_eigenvalues.size(); ++i) {
    if (i != closest) mu = std::max(mu, std::abs(nb_eigenvalues[i]));
  }
  return mu;
}

/// Sort by real part, then imaginary part, after snapping both to a grid of
/// width `tolerance` so that values equal up to rounding sort together.
inline std::vector<Complex> canonical_sort(std::vector<Complex> values, double tolerance = 1e-9) {
  auto key = [tolerance](const Complex& z) {
    return std::pair{std::llround(z.real() / tolerance), std::llround(z.imag() / tolerance)};
  };
  std::stable_sort(values.begin(), values.end(), [&](const Complex& a, const Complex& b) { return key(a) < key(b); });
  return values;
}

/// Multiset distance: each value of `a`, in canonical order, is matched to the
/// nearest unmatched value of `b`; returns the largest matched distance.
/// Sizes must agree.
inline double multiset_distance(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  const std::vector<Complex> sa = canonical_sort(std::vector<Complex>(a.begin(), a.end()));
  std::vector<Complex> sb(b.begin(), b.end());
  std::vector<bool> used(sb.size(), false);
  double worst = 0.0;
  for (const Complex& z : sa) {
    std::size_t pick = sb.size();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < sb.size(); ++j) {
      if (used[j]) continue;
      const double dist = std::abs(z - sb[j]);
      if (dist < best) {
        best = dist;
        pick = j;
      }
    }
    used[pick] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

enum class SpectralPath { automatic, mapped, direct };

/// Full spectral summary. The automatic path maps the adjacency spectrum for
/// graphs without self-loops and also for graphs with self-loops, since the
/// mapping with the +-1 multiplicities above was checked against direct
/// diagonalization on configuration-model multigraphs (see the spectra tests).
inline SpectralReport spectral_report(const Multigraph& g, SpectralPath path = SpectralPath::automatic,
                                      std::size_t direct_budget = default_direct_budget) {
  SpectralReport report;
  const AdjacencySpectrum adj = adjacency_spectrum(g);
  report.adjacency_eigenvalues = adj.eigenvalues;
  report.residual_bound = adj.residual;
  if (adj.eigenvalues.size() >= 2) report.lambda_gap = lambda_gap(adj.eigenvalues);
  if (path == SpectralPath::direct) {
    NbSpectrum direct = nb_spectrum_direct(g, direct_budget);
    report.nb_eigenvalues = std::move(direct.eigenvalues);
    report.residual_bound = std::max(report.residual_bound, direct.residual);
  } else {
    report.nb_eigenvalues = gk_map(adj.eigenvalues, g.degree(), g.vertex_count());
  }
  report.nb_eigenvalues = canonical_sort(std::move(report.nb_eigenvalues));
  report.mu_second = mu_second(report.nb_eigenvalues, g.degree());
  return report;
}

}  // namespace rlg
