#pragma once

#include <iosfwd>
#include <optional>

#include "ddoco/types.hpp"

namespace ddoco {

/// Finite input-output sequence. Column k of `inputs()` is u_k, column k of
/// `outputs()` is y_k (time is 0-indexed).
class Trajectory {
public:
    Trajectory() = default;
    /// inputs: m x N, outputs: p x N.
    Trajectory(Matrix inputs, Matrix outputs);

    Index size() const { return inputs_.cols(); }
    Index input_dim() const { return inputs_.rows(); }
    Index output_dim() const { return outputs_.rows(); }

    const Matrix& inputs() const { return inputs_; }
    const Matrix& outputs() const { return outputs_; }
    Vector input(Index k) const { return inputs_.col(k); }
    Vector output(Index k) const { return outputs_.col(k); }

    /// z_k = (u_k, y_k)
    Vector stacked(Index k) const;

    /// Time steps [first, first + length).
    Trajectory window(Index first, Index length) const;

    /// Column-stacked (u_0, ..., u_{N-1}) and (y_0, ..., y_{N-1}).
    Vector stacked_inputs() const;
    Vector stacked_outputs() const;

    bool operator==(const Trajectory& other) const {
        return inputs_ == other.inputs_ && outputs_ == other.outputs_;
    }

private:
    Matrix inputs_;
    Matrix outputs_;
};

/// Dense block-Hankel matrix of depth L over a signal with block size q.
///
/// Block rows are 1-indexed to match H_L^{a:b} notation; the column index and
/// the signal time index are 0-indexed, so block (i, j) (1-indexed i) holds
/// z_{i - 1 + j}.
class HankelMatrix {
public:
    HankelMatrix() = default;
    HankelMatrix(Matrix entries, Index depth, Index block_size);

    const Matrix& entries() const { return entries_; }
    Index depth() const { return depth_; }
    Index block_size() const { return block_size_; }
    Index rows() const { return entries_.rows(); }
    Index cols() const { return entries_.cols(); }

    /// Block rows a..b inclusive, 1-indexed.
    Matrix block_rows(Index a, Index b) const;
    Matrix block_row(Index a) const { return block_rows(a, a); }

private:
    Matrix entries_;
    Index depth_ = 0;
    Index block_size_ = 0;
};

/// signal: q x N, column k = z_k. Throws kDepthOutOfRange unless 1 <= depth <= N.
HankelMatrix build_hankel(const Matrix& signal, Index depth);

Matrix block_rows(const HankelMatrix& h, Index a, Index b);

/// rank(H_L(u)) == m L, using the shared SVD cutoff. Sequences shorter than L
/// are never persistently exciting.
bool persistency_check(const Matrix& inputs, Index order);

/// Least-squares residual || [H_L(u^d); H_L(y^d)] alpha - [u; y] || with
/// alpha from the pseudoinverse. When `order_bound` is given the data input is
/// checked for persistency of excitation of order L + n first.
double membership_residual(const Trajectory& data, const Trajectory& candidate,
                           std::optional<Index> order_bound = std::nullopt);

/// Matrices derived from the offline data for a given (n, mu):
/// U, Y of depth 2n + mu + 1 and the stacked H_alpha, H_beta.
struct HankelSet {
    Trajectory data;
    Index n = 0;
    Index mu = 0;
    HankelMatrix U;
    HankelMatrix Y;
    Matrix H_alpha;  ///< [U^{1:n}; U^{n+1:2n+mu+1}; Y^{1:n}]
    Matrix H_beta;   ///< [U^{1:n}; U^{n+mu+1:2n+mu+1}; Y^{1:n}; Y^{n+mu+1:2n+mu}]

    Index depth() const { return 2 * n + mu + 1; }
    Index columns() const { return U.cols(); }
    Index input_dim() const { return data.input_dim(); }
    Index output_dim() const { return data.output_dim(); }
};

HankelSet build_hankel_set(const Trajectory& data, Index n, Index mu);

/// CSV with header u_1..u_m,y_1..y_p and one row per time step.
void write_trajectory_csv(const Trajectory& trajectory, std::ostream& out);
Trajectory read_trajectory_csv(std::istream& in);

}  // namespace ddoco
