#include "ddoco/linalg.hpp"

#include <algorithm>

namespace ddoco {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::kInvalidArgument: return "invalid-argument";
        case ErrorCode::kDimensionMismatch: return "dimension-mismatch";
        case ErrorCode::kDepthOutOfRange: return "depth-out-of-range";
        case ErrorCode::kIndexOutOfRange: return "index-out-of-range";
        case ErrorCode::kPersistencyViolation: return "pe-violation";
        case ErrorCode::kDataTooShort: return "data-too-short";
        case ErrorCode::kDegenerateData: return "degenerate-data";
        case ErrorCode::kInfeasible: return "infeasible";
        case ErrorCode::kNonConvergence: return "non-convergence";
        case ErrorCode::kHorizonExceeded: return "horizon-exceeded";
        case ErrorCode::kParse: return "parse-error";
        case ErrorCode::kConfig: return "config-error";
    }
    return "unknown";
}

namespace linalg {

double rank_threshold(Index rows, Index cols, double sigma_max) {
    return static_cast<double>(std::max(rows, cols)) * sigma_max * kRankTolerance;
}

Svd::Svd(const Matrix& a) : rows_(a.rows()), cols_(a.cols()) {
    if (a.size() == 0) {
        sigma_.resize(0);
        u_ = Matrix::Identity(rows_, rows_);
        v_ = Matrix::Identity(cols_, cols_);
        return;
    }
    // JacobiSVD rather than BDCSVD: the divide-and-conquer path in Eigen 3.4.0
    // loses accuracy on matrices with clustered singular values such as
    // Q (I - H^+ H), where most singular values are exactly one.
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    sigma_ = svd.singularValues();
    u_ = svd.matrixU();
    v_ = svd.matrixV();
    const double sigma_max = sigma_.size() > 0 ? sigma_(0) : 0.0;
    const double cutoff = rank_threshold(rows_, cols_, sigma_max);
    rank_ = 0;
    for (Index i = 0; i < sigma_.size(); ++i) {
        if (sigma_(i) > cutoff) ++rank_;
    }
}

Matrix Svd::pseudoinverse() const {
    if (rank_ == 0) return Matrix::Zero(cols_, rows_);
    const Vector inv_sigma = sigma_.head(rank_).cwiseInverse();
    return v_.leftCols(rank_) * inv_sigma.asDiagonal() * u_.leftCols(rank_).transpose();
}

Matrix Svd::range_basis() const { return u_.leftCols(rank_); }

Matrix Svd::null_basis() const { return v_.rightCols(cols_ - rank_); }

Index numerical_rank(const Matrix& a) { return Svd(a).rank(); }

Matrix pseudoinverse(const Matrix& a) { return Svd(a).pseudoinverse(); }

Vector repeat(const Vector& v, Index copies) {
    Vector out(v.size() * copies);
    for (Index k = 0; k < copies; ++k) out.segment(k * v.size(), v.size()) = v;
    return out;
}

Matrix repeat_identity(Index dim, Index copies) {
    Matrix out(dim * copies, dim);
    for (Index k = 0; k < copies; ++k) out.middleRows(k * dim, dim).setIdentity();
    return out;
}

}  // namespace linalg
}  // namespace ddoco
