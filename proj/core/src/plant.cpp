#include "ddoco/plant.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "ddoco/linalg.hpp"

namespace ddoco {

double spectral_radius(const Matrix& a) {
    if (a.size() == 0) return 0.0;
    Eigen::EigenSolver<Matrix> eig(a, false);
    return eig.eigenvalues().cwiseAbs().maxCoeff();
}

Matrix controllability_matrix(const Matrix& a, const Matrix& b, Index steps) {
    Matrix out(a.rows(), b.cols() * steps);
    Matrix block = b;
    for (Index k = 0; k < steps; ++k) {
        out.middleCols(k * b.cols(), b.cols()) = block;
        block = a * block;
    }
    return out;
}

Matrix observability_matrix(const Matrix& a, const Matrix& c, Index steps) {
    Matrix out(c.rows() * steps, a.cols());
    Matrix block = c;
    for (Index k = 0; k < steps; ++k) {
        out.middleRows(k * c.rows(), c.rows()) = block;
        block = block * a;
    }
    return out;
}

std::optional<Index> controllability_index(const Matrix& a, const Matrix& b) {
    const Index n = a.rows();
    for (Index k = 1; k <= n; ++k) {
        if (linalg::numerical_rank(controllability_matrix(a, b, k)) == n) return k;
    }
    return std::nullopt;
}

PlantModel make_plant(Matrix A, Matrix B, Matrix C, Matrix D, Matrix G, PlantChecks checks) {
    const Index n = A.rows();
    if (n < 1 || A.cols() != n) throw Error(ErrorCode::kDimensionMismatch, "A must be square and nonempty");
    if (B.rows() != n || B.cols() < 1) throw Error(ErrorCode::kDimensionMismatch, "B must have n rows");
    if (C.cols() != n || C.rows() < 1) throw Error(ErrorCode::kDimensionMismatch, "C must have n columns");
    if (D.size() == 0) D = Matrix::Zero(C.rows(), B.cols());
    if (D.rows() != C.rows() || D.cols() != B.cols()) {
        throw Error(ErrorCode::kDimensionMismatch, "D must be p x m");
    }
    if (G.size() == 0) G = Matrix::Identity(n, n);
    if (G.rows() != n) throw Error(ErrorCode::kDimensionMismatch, "G must have n rows");

    if (checks.require_stable && !(spectral_radius(A) < 1.0)) {
        throw Error(ErrorCode::kInvalidArgument, "A is not Schur stable");
    }
    if (checks.require_controllable && linalg::numerical_rank(controllability_matrix(A, B, n)) != n) {
        throw Error(ErrorCode::kInvalidArgument, "(A, B) is not controllable");
    }
    if (checks.require_observable && linalg::numerical_rank(observability_matrix(A, C, n)) != n) {
        throw Error(ErrorCode::kInvalidArgument, "(A, C) is not observable");
    }
    return PlantModel{std::move(A), std::move(B), std::move(C), std::move(D), std::move(G)};
}

Matrix dc_gain(const PlantModel& model) {
    const Index nx = model.states();
    const Matrix i_minus_a = Matrix::Identity(nx, nx) - model.A;
    return model.C * i_minus_a.partialPivLu().solve(model.B) + model.D;
}

SteadyStateProjector model_projector(const PlantModel& model, Index n) {
    const Index m = model.inputs();
    const Index p = model.outputs();
    const Matrix gain = dc_gain(model);
    Matrix graph(m + p, m);
    graph << Matrix::Identity(m, m), gain;
    SteadyStateProjector proj;
    proj.m = m;
    proj.p = p;
    proj.n = n;
    proj.S.resize(p, m + p);
    proj.S << gain, -Matrix::Identity(p, p);
    proj.basis = linalg::Svd(graph).range_basis();
    proj.P = proj.basis * proj.basis.transpose();
    return proj;
}

StepResult step(const PlantModel& model, const Vector& x, const Vector& u,
                const Vector& measurement_noise, const Vector& process_noise) {
    if (x.size() != model.states() || u.size() != model.inputs() ||
        measurement_noise.size() != model.outputs() || process_noise.size() != model.disturbances()) {
        throw Error(ErrorCode::kDimensionMismatch, "plant step: inconsistent vector dimensions");
    }
    StepResult r;
    r.output = model.C * x + model.D * u;
    r.measured_output = r.output + measurement_noise;
    r.next_state = model.A * x + model.B * u + model.G * process_noise;
    return r;
}

// ---------------------------------------------------------------------------

NoiseModel::NoiseModel(Vector measurement_bound, Vector process_bound, std::uint64_t seed,
                       std::vector<SensorFault> faults)
    : measurement_bound_(std::move(measurement_bound)),
      process_bound_(std::move(process_bound)),
      seed_(seed),
      faults_(std::move(faults)) {
    if ((measurement_bound_.array() < 0.0).any() || (process_bound_.array() < 0.0).any()) {
        throw Error(ErrorCode::kInvalidArgument, "noise bounds must be nonnegative");
    }
    for (const auto& f : faults_) {
        if (f.channel < 0 || f.channel >= measurement_bound_.size() || f.scale < 0.0 || f.end < f.start) {
            throw Error(ErrorCode::kInvalidArgument, "invalid sensor fault window");
        }
    }
    std::seed_seq seq_e{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32), 0x6d65u};
    std::seed_seq seq_q{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32), 0x7072u};
    measurement_engine_.seed(seq_e);
    process_engine_.seed(seq_q);
}

NoiseModel NoiseModel::none(Index outputs, Index disturbances) {
    return NoiseModel(Vector::Zero(outputs), Vector::Zero(disturbances), 0);
}

Vector NoiseModel::measurement_bound(Index t) const {
    Vector bound = measurement_bound_;
    for (const auto& f : faults_) {
        if (t >= f.start && t < f.end) bound(f.channel) *= f.scale;
    }
    return bound;
}

namespace {
Vector draw_box(const Vector& bound, std::mt19937_64& engine) {
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    Vector out(bound.size());
    for (Index i = 0; i < bound.size(); ++i) {
        const double r = unit(engine);  // always drawn, keeps streams aligned
        out(i) = bound(i) * r;
    }
    return out;
}
}  // namespace

Vector NoiseModel::sample_measurement(Index t) { return draw_box(measurement_bound(t), measurement_engine_); }

Vector NoiseModel::sample_process() { return draw_box(process_bound_, process_engine_); }

// ---------------------------------------------------------------------------

Index minimum_data_length(Index inputs, Index n, Index mu) { return (inputs + 1) * (3 * n + mu + 1) - 1; }

Trajectory collect_offline_data(const PlantModel& model, const OfflineDataSpec& spec) {
    const Index m = model.inputs();
    const Index required = minimum_data_length(m, spec.n, spec.mu);
    if (spec.length < required) {
        std::ostringstream msg;
        msg << "offline data length " << spec.length << " below (m+1)(3n+mu+1)-1 = " << required;
        throw Error(ErrorCode::kDataTooShort, msg.str());
    }
    if (!(spec.input_high >= spec.input_low)) {
        throw Error(ErrorCode::kInvalidArgument, "input box must satisfy low <= high");
    }
    const Index order = 3 * spec.n + spec.mu + 1;
    std::mt19937_64 rng(spec.seed);
    for (int attempt = 0; attempt < std::max(1, spec.max_attempts); ++attempt) {
        std::uniform_real_distribution<double> box(spec.input_low, spec.input_high);
        Matrix u(m, spec.length);
        for (Index k = 0; k < spec.length; ++k) {
            for (Index i = 0; i < m; ++i) u(i, k) = box(rng);
        }
        if (!persistency_check(u, order)) continue;
        Matrix y(model.outputs(), spec.length);
        Vector x = Vector::Zero(model.states());
        for (Index k = 0; k < spec.length; ++k) {
            y.col(k) = model.C * x + model.D * u.col(k);
            x = model.A * x + model.B * u.col(k);
        }
        return Trajectory(std::move(u), std::move(y));
    }
    throw Error(ErrorCode::kPersistencyViolation,
                "offline input not persistently exciting after retries (degenerate input box?)");
}

std::pair<Matrix, Matrix> discretize_zoh(const Matrix& a_c, const Matrix& b_c, double sample_time) {
    if (!(sample_time > 0.0)) throw Error(ErrorCode::kInvalidArgument, "sample time must be positive");
    const Index n = a_c.rows();
    const Index m = b_c.cols();
    if (a_c.cols() != n || b_c.rows() != n) {
        throw Error(ErrorCode::kDimensionMismatch, "discretize: A_c must be n x n and B_c n x m");
    }
    Matrix block = Matrix::Zero(n + m, n + m);
    block.topLeftCorner(n, n) = a_c * sample_time;
    block.topRightCorner(n, m) = b_c * sample_time;
    const Matrix e = block.exp();
    return {e.topLeftCorner(n, n), e.topRightCorner(n, m)};
}

HvacContinuous hvac_continuous(const HvacParams& params) {
    const Index zones = static_cast<Index>(params.capacitance.size());
    if (zones < 1) throw Error(ErrorCode::kInvalidArgument, "hvac model needs at least one zone");
    if (static_cast<Index>(params.outdoor_resistance.size()) != zones) {
        throw Error(ErrorCode::kDimensionMismatch, "one outdoor resistance per zone required");
    }
    bool any_outdoor = false;
    for (Index i = 0; i < zones; ++i) {
        if (!(params.capacitance[i] > 0.0)) throw Error(ErrorCode::kInvalidArgument, "capacitance must be positive");
        const double r = params.outdoor_resistance[i];
        if (!(r > 0.0)) throw Error(ErrorCode::kInvalidArgument, "outdoor resistance must be positive");
        if (std::isfinite(r)) any_outdoor = true;
    }
    if (!any_outdoor) {
        throw Error(ErrorCode::kInvalidArgument, "at least one zone must couple to the outdoor temperature");
    }

    Matrix conductance = Matrix::Zero(zones, zones);
    for (const auto& c : params.couplings) {
        if (c.a < 1 || c.b < 1 || c.a > zones || c.b > zones || c.a == c.b) {
            throw Error(ErrorCode::kInvalidArgument, "invalid zone adjacency entry");
        }
        if (!(c.resistance > 0.0) || !std::isfinite(c.resistance)) {
            throw Error(ErrorCode::kInvalidArgument, "coupling resistance must be positive and finite");
        }
        if (conductance(c.a - 1, c.b - 1) != 0.0) {
            throw Error(ErrorCode::kInvalidArgument, "duplicate zone adjacency entry");
        }
        conductance(c.a - 1, c.b - 1) = conductance(c.b - 1, c.a - 1) = 1.0 / c.resistance;
    }
    // connectivity of the adjacency graph
    std::vector<bool> seen(static_cast<std::size_t>(zones), false);
    std::vector<Index> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
        const Index i = stack.back();
        stack.pop_back();
        for (Index j = 0; j < zones; ++j) {
            if (conductance(i, j) > 0.0 && !seen[static_cast<std::size_t>(j)]) {
                seen[static_cast<std::size_t>(j)] = true;
                stack.push_back(j);
            }
        }
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
        throw Error(ErrorCode::kInvalidArgument, "zone adjacency graph is disconnected");
    }

    HvacContinuous out;
    out.A = Matrix::Zero(zones, zones);
    out.B = Matrix::Zero(zones, zones);
    for (Index i = 0; i < zones; ++i) {
        const double inv_c = 1.0 / params.capacitance[i];
        const double r = params.outdoor_resistance[i];
        const double outdoor = std::isfinite(r) ? 1.0 / r : 0.0;
        out.A(i, i) = -inv_c * (outdoor + conductance.row(i).sum());
        for (Index j = 0; j < zones; ++j) {
            if (j != i) out.A(i, j) = inv_c * conductance(i, j);
        }
        out.B(i, i) = inv_c;
    }
    return out;
}

PlantModel build_hvac(const HvacParams& params) {
    const HvacContinuous ct = hvac_continuous(params);
    const Index zones = ct.A.rows();
    if (params.sensors.empty()) throw Error(ErrorCode::kInvalidArgument, "hvac model needs a sensor");
    Matrix C = Matrix::Zero(static_cast<Index>(params.sensors.size()), zones);
    for (std::size_t k = 0; k < params.sensors.size(); ++k) {
        const Index zone = params.sensors[k];
        if (zone < 1 || zone > zones) throw Error(ErrorCode::kInvalidArgument, "sensor zone out of range");
        C(static_cast<Index>(k), zone - 1) = 1.0;
    }
    auto [A, B] = discretize_zoh(ct.A, ct.B, params.sample_time);
    Matrix D = Matrix::Zero(C.rows(), zones);
    Matrix G = B;
    return make_plant(std::move(A), std::move(B), std::move(C), std::move(D), std::move(G));
}

PlantModel random_stable_system(Index n, Index m, Index p, std::mt19937_64& rng, double max_radius,
                                bool feedthrough) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> radius(0.1, max_radius);
    std::bernoulli_distribution sign(0.5);
    const auto gaussian = [&](Index rows, Index cols) {
        Matrix out(rows, cols);
        for (Index i = 0; i < rows; ++i)
            for (Index j = 0; j < cols; ++j) out(i, j) = gauss(rng);
        return out;
    };
    for (int attempt = 0; attempt < 1000; ++attempt) {
        Vector poles(n);
        bool separated = true;
        for (Index i = 0; i < n; ++i) {
            poles(i) = (sign(rng) ? 1.0 : -1.0) * radius(rng);
            for (Index j = 0; j < i; ++j) separated = separated && std::abs(poles(i) - poles(j)) >= 0.1;
        }
        if (!separated) continue;
        const Matrix q = Eigen::HouseholderQR<Matrix>(gaussian(n, n)).householderQ();
        Matrix A = q * poles.asDiagonal() * q.transpose();
        Matrix B = gaussian(n, m);
        Matrix C = gaussian(p, n);
        Matrix D = feedthrough ? gaussian(p, m) : Matrix::Zero(p, m);
        try {
            return make_plant(std::move(A), std::move(B), std::move(C), std::move(D));
        } catch (const Error&) {
            continue;
        }
    }
    throw Error(ErrorCode::kNonConvergence, "could not sample a stable minimal system");
}

}  // namespace ddoco
