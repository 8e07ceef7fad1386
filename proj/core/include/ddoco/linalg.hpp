#pragma once

#include "ddoco/types.hpp"

namespace ddoco::linalg {

/// Relative factor of the singular-value cutoff. A singular value counts
/// toward the rank iff sigma_i > max(rows, cols) * sigma_max * kRankTolerance.
inline constexpr double kRankTolerance = 1e-12;

double rank_threshold(Index rows, Index cols, double sigma_max);

/// Rank, pseudoinverse and subspace bases all come from one SVD and one cutoff.
class Svd {
public:
    explicit Svd(const Matrix& a);

    Index rank() const { return rank_; }
    const Vector& singular_values() const { return sigma_; }

    Matrix pseudoinverse() const;
    /// Orthonormal basis of the column space (first `rank` left singular vectors).
    Matrix range_basis() const;
    /// Orthonormal basis of the null space (trailing right singular vectors).
    Matrix null_basis() const;

private:
    Index rows_ = 0;
    Index cols_ = 0;
    Index rank_ = 0;
    Vector sigma_;
    Matrix u_;
    Matrix v_;
};

Index numerical_rank(const Matrix& a);
Matrix pseudoinverse(const Matrix& a);

/// 1_copies (x) v
Vector repeat(const Vector& v, Index copies);

/// 1_copies (x) I_dim
Matrix repeat_identity(Index dim, Index copies);

}  // namespace ddoco::linalg
