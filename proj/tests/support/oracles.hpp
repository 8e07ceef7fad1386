#pragma once

#include <functional>
#include <random>

#include "ddoco/behavioral.hpp"
#include "ddoco/plant.hpp"
#include "ddoco/types.hpp"

// Independent reference computations for tests. Nothing here calls the
// library's SVD helpers, so agreement is a real cross-check.
namespace ddoco::oracle {

/// Hankel matrix assembled entry by entry: block (i, j) = signal column i + j.
Matrix hankel_by_loops(const Matrix& signal, Index depth);

/// Rank via JacobiSVD with the same relative cutoff.
Index jacobi_rank(const Matrix& a);

/// Plain simulation loop, no noise.
Trajectory simulate(const PlantModel& model, const Vector& x0, const Matrix& inputs);

/// argmin ||Q beta|| subject to H beta = g via LU kernel + least squares.
Vector min_weighted_norm(const Matrix& Q, const Matrix& H, const Vector& g);

/// Feasible alternative beta' = beta + (random kernel element of H).
Vector perturb_in_kernel(const Matrix& H, const Vector& beta, std::mt19937_64& rng, double scale);

/// Steady state y = (C (I - A)^{-1} B + D) u from an LU solve of (I - A) x = B u.
Vector model_steady_output(const PlantModel& model, const Vector& u);

/// min ||A x - b||^2 + lambda ||x||^2 s.t. E x = f, from the KKT system.
Vector constrained_ls(const Matrix& A, const Vector& b, double lambda, const Matrix& E, const Vector& f);

/// Central difference gradient.
Vector fd_gradient(const std::function<double(const Vector&)>& f, const Vector& z, double h);

/// Symmetric matrix with eigenvalues drawn uniformly in [lo, hi].
Matrix random_spd(Index dim, double lo, double hi, std::mt19937_64& rng);

Vector random_vector(Index dim, double lo, double hi, std::mt19937_64& rng);

/// Minimizer of 0.5 (z - r)' H (z - r) over span(basis), via normal equations
/// with the basis orthonormalized by Householder QR.
Vector constrained_quadratic_min(const Matrix& H, const Vector& r, const Matrix& span);

/// Exponential decay rate of a series by fitting log values on [first, last).
double fitted_rate(const std::vector<double>& values, std::size_t first, std::size_t last);

}  // namespace ddoco::oracle
