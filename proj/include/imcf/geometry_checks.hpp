#pragma once

// Property suites for the base and graph geometry. Every reference value is
// rebuilt from the embedding y -> x(y) (or X = u x) by finite differences
// and the Minkowski product alone, never from the closed forms under test.

#include "imcf/base_geometry.hpp"
#include "imcf/graph_geometry.hpp"
#include "imcf/monitors.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace imcf::checks {

// Finite-difference references.
Matrix fd_sigma(const ChartPoint& p, double h = 1e-5);
/// 1/2 sigma^kl (d_i sigma_jl + d_j sigma_il - d_l sigma_ij) with FD
/// derivatives of metric_sigma.
Christoffel fd_christoffel(const ChartPoint& p, double h = 1e-5);
/// R_ijml = sigma_mp R^p_ijl with R(d_i, d_j) d_l = R^p_ijl d_p, built from
/// FD derivatives of fd_christoffel.
std::vector<Matrix> fd_riemann(const ChartPoint& p, double h = 1e-4);  // [i*n+j](m,l)

/// A smooth test graph u(y) = a + b.y + y^T C y / 2 with exact partials.
struct QuadraticGraph {
  double a = 1.0;
  Vector b;
  Matrix C;

  double value(const Vector& y) const;
  GraphPointData at(const ChartPoint& p) const;  // covariant derivatives
  Vector embed(const Vector& y) const;           // X = u(y) x(y)
};

/// Uniform random chart point with |y| <= radius.
ChartPoint random_point(std::mt19937_64& rng, int n, double radius);
/// Random quadratic graph with |Dphi|_sigma <= max_grad at p.
QuadraticGraph random_graph(std::mt19937_64& rng, const ChartPoint& p, double max_grad);

// Suites; names match the geometry-check report lines.
CheckResult sigma_pullback(int samples = 200, int n = 2, std::uint64_t seed = 1);
CheckResult christoffel_oracle(int samples = 200, int n = 2, std::uint64_t seed = 2);
CheckResult metric_compatibility(int samples = 200, int n = 2, std::uint64_t seed = 3);
CheckResult curvature_identity(int samples = 20, int n = 2, std::uint64_t seed = 4);
CheckResult embedding_unit(int samples = 200, int n = 2, std::uint64_t seed = 5);
CheckResult metric_embedding(int samples = 200, int n = 2, std::uint64_t seed = 6);
CheckResult metric_inverse(int samples = 200, int n = 2, std::uint64_t seed = 7);
CheckResult normal_embedding(int samples = 200, int n = 2, std::uint64_t seed = 8);
CheckResult second_fundamental_embedding(int samples = 200, int n = 2, std::uint64_t seed = 9);
CheckResult support_embedding(int samples = 200, int n = 2, std::uint64_t seed = 10);
CheckResult route_consistency(int samples = 200, int n = 2, std::uint64_t seed = 11);
CheckResult cauchy_schwarz(int samples = 200, int n = 2, std::uint64_t seed = 12);
CheckResult neumann_equivalence(int samples = 50, double rho_max = 1.0, std::uint64_t seed = 13);
/// H of u = 1.2 + 0.1|y|^2 at y = (0.3, 0.2) from central-difference
/// derivatives; violation is max(0, 1.9 - observed order).
CheckResult stencil_order(double* observed_order = nullptr);

/// Everything above, for dimensions 2 and 3 where it applies.
InvariantReport run_all();

}  // namespace imcf::checks
