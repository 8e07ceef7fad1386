#pragma once

#include "ddoco/behavioral.hpp"
#include "ddoco/costs.hpp"
#include "ddoco/types.hpp"

namespace ddoco {

/// Data-driven description of the steady-state manifold {z = (u, y) : S z = 0}.
///
///   S = (H H^+ - I) blockdiag(1_{n+1} (x) I_m, 1_{n+1} (x) I_p),
///   H = [H_{n+1}(u^d); H_{n+1}(y^d)],
///
/// together with the orthogonal projector P = I - S^+ S onto null(S) and an
/// orthonormal basis of null(S). S^+, P and the basis share one SVD of S.
struct SteadyStateProjector {
    Index m = 0;
    Index p = 0;
    Index n = 0;
    Matrix S;
    Matrix P;
    Matrix basis;

    Index dim() const { return m + p; }
    Index manifold_dim() const { return basis.cols(); }
};

/// Throws kPersistencyViolation if u^d is not persistently exciting of order
/// 2n + 1 and kDegenerateData if the depth-(n+1) Hankel matrix is empty.
SteadyStateProjector build_projector(const Trajectory& data, Index n);

Vector project(const SteadyStateProjector& proj, const Vector& z);

/// Iteration cap of the projected-gradient fallback.
inline constexpr long kMaxProjectedGradientIterations = 1'000'000;

/// argmin of the stage cost over null(S). Quadratic stages are solved in basis
/// coordinates; other costs by projected gradient to ||P grad|| <= 1e-10.
Vector optimal_steady_state(const SteadyStateProjector& proj, const StageCost& cost);

}  // namespace ddoco
