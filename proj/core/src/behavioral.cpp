#include "ddoco/behavioral.hpp"

#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ddoco/linalg.hpp"

namespace ddoco {

Trajectory::Trajectory(Matrix inputs, Matrix outputs)
    : inputs_(std::move(inputs)), outputs_(std::move(outputs)) {
    if (inputs_.cols() != outputs_.cols()) {
        throw Error(ErrorCode::kDimensionMismatch,
                    "trajectory inputs and outputs must have equal length");
    }
    if (inputs_.cols() < 1) {
        throw Error(ErrorCode::kInvalidArgument, "trajectory must have at least one step");
    }
    if (inputs_.rows() < 1 || outputs_.rows() < 1) {
        throw Error(ErrorCode::kInvalidArgument, "trajectory channel dimensions must be positive");
    }
}

Vector Trajectory::stacked(Index k) const {
    Vector z(input_dim() + output_dim());
    z << inputs_.col(k), outputs_.col(k);
    return z;
}

Trajectory Trajectory::window(Index first, Index length) const {
    if (first < 0 || length < 1 || first + length > size()) {
        throw Error(ErrorCode::kIndexOutOfRange, "trajectory window out of range");
    }
    return Trajectory(inputs_.middleCols(first, length), outputs_.middleCols(first, length));
}

Vector Trajectory::stacked_inputs() const {
    return Eigen::Map<const Vector>(inputs_.data(), inputs_.size());
}

Vector Trajectory::stacked_outputs() const {
    return Eigen::Map<const Vector>(outputs_.data(), outputs_.size());
}

HankelMatrix::HankelMatrix(Matrix entries, Index depth, Index block_size)
    : entries_(std::move(entries)), depth_(depth), block_size_(block_size) {
    if (entries_.rows() != depth_ * block_size_) {
        throw Error(ErrorCode::kDimensionMismatch, "hankel entries do not match depth * block size");
    }
}

Matrix HankelMatrix::block_rows(Index a, Index b) const {
    if (a < 1 || b > depth_ || a > b) {
        std::ostringstream msg;
        msg << "block rows " << a << ":" << b << " outside 1:" << depth_;
        throw Error(ErrorCode::kIndexOutOfRange, msg.str());
    }
    return entries_.middleRows((a - 1) * block_size_, (b - a + 1) * block_size_);
}

HankelMatrix build_hankel(const Matrix& signal, Index depth) {
    const Index q = signal.rows();
    const Index n_samples = signal.cols();
    if (depth < 1 || depth > n_samples) {
        std::ostringstream msg;
        msg << "hankel depth " << depth << " outside 1:" << n_samples;
        throw Error(ErrorCode::kDepthOutOfRange, msg.str());
    }
    const Index cols = n_samples - depth + 1;
    Matrix h(q * depth, cols);
    for (Index i = 0; i < depth; ++i) {
        h.middleRows(i * q, q) = signal.middleCols(i, cols);
    }
    return HankelMatrix(std::move(h), depth, q);
}

Matrix block_rows(const HankelMatrix& h, Index a, Index b) { return h.block_rows(a, b); }

bool persistency_check(const Matrix& inputs, Index order) {
    if (order < 1 || inputs.cols() < order || inputs.rows() < 1) return false;
    const HankelMatrix h = build_hankel(inputs, order);
    if (h.cols() < h.rows()) return false;
    return linalg::numerical_rank(h.entries()) == h.rows();
}

double membership_residual(const Trajectory& data, const Trajectory& candidate,
                           std::optional<Index> order_bound) {
    if (data.input_dim() != candidate.input_dim() || data.output_dim() != candidate.output_dim()) {
        throw Error(ErrorCode::kDimensionMismatch, "candidate channels differ from data channels");
    }
    const Index depth = candidate.size();
    if (order_bound && !persistency_check(data.inputs(), depth + *order_bound)) {
        throw Error(ErrorCode::kPersistencyViolation,
                    "data input is not persistently exciting of order L + n");
    }
    const HankelMatrix hu = build_hankel(data.inputs(), depth);
    const HankelMatrix hy = build_hankel(data.outputs(), depth);
    Matrix h(hu.rows() + hy.rows(), hu.cols());
    h << hu.entries(), hy.entries();
    Vector w(h.rows());
    w << candidate.stacked_inputs(), candidate.stacked_outputs();
    const Vector alpha = linalg::pseudoinverse(h) * w;
    return (h * alpha - w).norm();
}

HankelSet build_hankel_set(const Trajectory& data, Index n, Index mu) {
    if (n < 1 || mu < 1) {
        throw Error(ErrorCode::kInvalidArgument, "order bound n and horizon mu must be positive");
    }
    HankelSet set;
    set.data = data;
    set.n = n;
    set.mu = mu;
    const Index depth = set.depth();
    if (data.size() < depth + 1) {
        throw Error(ErrorCode::kDataTooShort, "offline data shorter than 2n + mu + 2");
    }
    set.U = build_hankel(data.inputs(), depth);
    set.Y = build_hankel(data.outputs(), depth);
    const Index m = data.input_dim();
    const Index p = data.output_dim();
    const Index cols = set.U.cols();

    set.H_alpha.resize(m * depth + p * n, cols);
    set.H_alpha << set.U.block_rows(1, n), set.U.block_rows(n + 1, depth), set.Y.block_rows(1, n);

    set.H_beta.resize(m * (2 * n + 1) + p * 2 * n, cols);
    set.H_beta << set.U.block_rows(1, n), set.U.block_rows(n + mu + 1, depth),
        set.Y.block_rows(1, n), set.Y.block_rows(n + mu + 1, 2 * n + mu);
    return set;
}

void write_trajectory_csv(const Trajectory& trajectory, std::ostream& out) {
    const Index m = trajectory.input_dim();
    const Index p = trajectory.output_dim();
    for (Index i = 0; i < m; ++i) out << (i ? "," : "") << "u_" << i + 1;
    for (Index i = 0; i < p; ++i) out << ",y_" << i + 1;
    out << '\n';
    out << std::setprecision(17);
    for (Index k = 0; k < trajectory.size(); ++k) {
        for (Index i = 0; i < m; ++i) out << (i ? "," : "") << trajectory.inputs()(i, k);
        for (Index i = 0; i < p; ++i) out << ',' << trajectory.outputs()(i, k);
        out << '\n';
    }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream stream(line);
    while (std::getline(stream, field, ',')) {
        while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
        while (!field.empty() && field.front() == ' ') field.erase(field.begin());
        fields.push_back(field);
    }
    return fields;
}

}  // namespace

Trajectory read_trajectory_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorCode::kParse, "trajectory csv: missing header");
    const auto header = split_csv_line(line);
    Index m = 0;
    Index p = 0;
    for (const auto& name : header) {
        const std::string expected_u = "u_" + std::to_string(m + 1);
        const std::string expected_y = "y_" + std::to_string(p + 1);
        if (p == 0 && name == expected_u) {
            ++m;
        } else if (name == expected_y) {
            ++p;
        } else {
            throw Error(ErrorCode::kParse, "trajectory csv: unexpected column '" + name + "'");
        }
    }
    if (m == 0 || p == 0) throw Error(ErrorCode::kParse, "trajectory csv: need u_ and y_ columns");

    std::vector<std::vector<double>> rows;
    Index line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        if (static_cast<Index>(fields.size()) != m + p) {
            throw Error(ErrorCode::kParse,
                        "trajectory csv: wrong field count on line " + std::to_string(line_no));
        }
        std::vector<double> row;
        row.reserve(fields.size());
        for (const auto& f : fields) {
            try {
                std::size_t used = 0;
                row.push_back(std::stod(f, &used));
                if (used != f.size()) throw std::invalid_argument(f);
            } catch (const std::exception&) {
                throw Error(ErrorCode::kParse, "trajectory csv: bad number '" + f + "' on line " +
                                                   std::to_string(line_no));
            }
        }
        rows.push_back(std::move(row));
    }
    const Index n_samples = static_cast<Index>(rows.size());
    if (n_samples == 0) throw Error(ErrorCode::kParse, "trajectory csv: no data rows");
    Matrix u(m, n_samples);
    Matrix y(p, n_samples);
    for (Index k = 0; k < n_samples; ++k) {
        for (Index i = 0; i < m; ++i) u(i, k) = rows[k][i];
        for (Index i = 0; i < p; ++i) y(i, k) = rows[k][m + i];
    }
    return Trajectory(std::move(u), std::move(y));
}

}  // namespace ddoco
