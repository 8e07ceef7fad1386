#include "ddoco/steady_state.hpp"

#include <algorithm>

#include "ddoco/linalg.hpp"

namespace ddoco {

SteadyStateProjector build_projector(const Trajectory& data, Index n) {
    if (n < 1) throw Error(ErrorCode::kInvalidArgument, "order bound n must be positive");
    if (data.size() < n + 1) {
        throw Error(ErrorCode::kDegenerateData, "data too short for a depth n+1 hankel matrix");
    }
    if (!persistency_check(data.inputs(), 2 * n + 1)) {
        throw Error(ErrorCode::kPersistencyViolation,
                    "data input is not persistently exciting of order 2n + 1");
    }
    const Index m = data.input_dim();
    const Index p = data.output_dim();
    const Index depth = n + 1;
    const HankelMatrix hu = build_hankel(data.inputs(), depth);
    const HankelMatrix hy = build_hankel(data.outputs(), depth);
    Matrix h(hu.rows() + hy.rows(), hu.cols());
    h << hu.entries(), hy.entries();

    // H H^+ is the orthogonal projector onto range(H).
    const Matrix range = linalg::Svd(h).range_basis();
    const Index rows = h.rows();
    Matrix lift = Matrix::Zero(rows, m + p);
    lift.topLeftCorner(m * depth, m) = linalg::repeat_identity(m, depth);
    lift.bottomRightCorner(p * depth, p) = linalg::repeat_identity(p, depth);

    SteadyStateProjector proj;
    proj.m = m;
    proj.p = p;
    proj.n = n;
    proj.S = range * (range.transpose() * lift) - lift;

    const linalg::Svd svd(proj.S);
    proj.basis = svd.null_basis();
    proj.P = proj.basis * proj.basis.transpose();
    return proj;
}

Vector project(const SteadyStateProjector& proj, const Vector& z) {
    if (z.size() != proj.dim()) {
        throw Error(ErrorCode::kDimensionMismatch, "point dimension differs from m + p");
    }
    return proj.P * z;
}

Vector optimal_steady_state(const SteadyStateProjector& proj, const StageCost& cost) {
    const CostFunction& f = cost.function();
    if (f.dim() != proj.dim()) {
        throw Error(ErrorCode::kDimensionMismatch, "cost dimension differs from m + p");
    }
    if (!(f.strong_convexity() > 0.0)) {
        throw Error(ErrorCode::kInvalidArgument, "optimal steady state needs a strongly convex cost");
    }
    const Matrix& basis = proj.basis;
    if (basis.cols() == 0) return Vector::Zero(proj.dim());

    if (const auto q = cost.quadratic_form()) {
        const Matrix reduced = basis.transpose() * q->hessian * basis;
        const Vector rhs = -(basis.transpose() * q->linear);
        return basis * reduced.ldlt().solve(rhs);
    }

    const double step = 2.0 / (f.strong_convexity() + f.smoothness());
    Vector z = Vector::Zero(proj.dim());
    for (long k = 0; k < kMaxProjectedGradientIterations; ++k) {
        const Vector g = proj.P * cost.gradient(z);
        if (g.norm() <= 1e-10) return z;
        z = proj.P * (z - step * g);
    }
    throw Error(ErrorCode::kNonConvergence, "projected gradient did not converge");
}

}  // namespace ddoco
