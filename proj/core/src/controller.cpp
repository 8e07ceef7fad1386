#include "ddoco/controller.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ddoco/linalg.hpp"
#include "ddoco/plant.hpp"

namespace ddoco {

namespace {

// sigma u_hat: drop the first block of the predicted input sequence.
Vector shift_prediction(const Vector& u_pred, Index m) {
    return u_pred.tail(u_pred.size() - m);
}

void shift_in(Vector& hist, const Vector& value) {
    const Index k = value.size();
    if (hist.size() == 0) return;
    hist.head(hist.size() - k) = hist.tail(hist.size() - k).eval();
    hist.tail(k) = value;
}

Vector stack_vectors(const std::vector<Vector>& parts, Index block) {
    Vector out(block * static_cast<Index>(parts.size()));
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (parts[i].size() != block) {
            throw Error(ErrorCode::kDimensionMismatch, "history entry has the wrong dimension");
        }
        out.segment(static_cast<Index>(i) * block, block) = parts[i];
    }
    return out;
}

Vector u_steady(const Vector& z_s, Index m) { return z_s.head(m); }
Vector y_steady(const Vector& z_s, Index m) { return z_s.tail(z_s.size() - m); }

void check_initial_data(const InitialData& init, Index n, Index m, Index p, Index mu) {
    if (static_cast<Index>(init.u.size()) != n || static_cast<Index>(init.y_meas.size()) != n) {
        throw Error(ErrorCode::kDimensionMismatch, "initialization needs exactly n inputs and outputs");
    }
    if (init.u_pred && init.u_pred->size() != m * (mu + 1)) {
        throw Error(ErrorCode::kDimensionMismatch, "u_hat_{-1} must have length m (mu + 1)");
    }
    if (init.z_s && init.z_s->size() != m + p) {
        throw Error(ErrorCode::kDimensionMismatch, "z^s_{-1} must have length m + p");
    }
}

}  // namespace

const char* to_string(WeightMode mode) {
    switch (mode) {
        case WeightMode::kIdentity: return "identity";
        case WeightMode::kInputs: return "inputs";
        case WeightMode::kOutputs: return "outputs";
        case WeightMode::kIdentityInputs: return "identity_inputs";
        case WeightMode::kIdentityInputsOutputs: return "identity_inputs_outputs";
    }
    return "unknown";
}

WeightMode weight_mode_from_string(const std::string& name) {
    for (auto mode : {WeightMode::kIdentity, WeightMode::kInputs, WeightMode::kOutputs,
                      WeightMode::kIdentityInputs, WeightMode::kIdentityInputsOutputs}) {
        if (name == to_string(mode)) return mode;
    }
    throw Error(ErrorCode::kConfig, "unknown weight mode '" + name + "'");
}

const char* to_string(InitMode mode) {
    switch (mode) {
        case InitMode::kZeroTrajectory: return "zero";
        case InitMode::kRegularized: return "regularized";
    }
    return "unknown";
}

InitMode init_mode_from_string(const std::string& name) {
    if (name == "zero") return InitMode::kZeroTrajectory;
    if (name == "regularized") return InitMode::kRegularized;
    throw Error(ErrorCode::kConfig, "unknown initialization mode '" + name + "'");
}

Matrix build_weight_matrix(const HankelSet& hankels, WeightMode mode) {
    const Index cols = hankels.columns();
    const Matrix& u = hankels.U.entries();
    const Matrix& y = hankels.Y.entries();
    const bool with_identity = mode == WeightMode::kIdentity || mode == WeightMode::kIdentityInputs ||
                               mode == WeightMode::kIdentityInputsOutputs;
    const bool with_inputs = mode == WeightMode::kInputs || mode == WeightMode::kIdentityInputs ||
                             mode == WeightMode::kIdentityInputsOutputs;
    const bool with_outputs = mode == WeightMode::kOutputs || mode == WeightMode::kIdentityInputsOutputs;
    const Index rows = (with_identity ? cols : 0) + (with_inputs ? u.rows() : 0) +
                       (with_outputs ? y.rows() : 0);
    Matrix q(rows, cols);
    Index r = 0;
    if (with_identity) {
        q.middleRows(r, cols).setIdentity();
        r += cols;
    }
    if (with_inputs) {
        q.middleRows(r, u.rows()) = u;
        r += u.rows();
    }
    if (with_outputs) q.middleRows(r, y.rows()) = y;
    return q;
}

double max_step_size(double alpha_z, double l_z) {
    if (!(alpha_z + l_z > 0.0)) {
        throw Error(ErrorCode::kInvalidArgument, "cost moduli must have a positive sum");
    }
    return 2.0 / (alpha_z + l_z);
}

std::optional<std::string> step_size_warning(double gamma, double alpha_z, double l_z) {
    const double bound = max_step_size(alpha_z, l_z);
    if (gamma <= bound) return std::nullopt;
    std::ostringstream msg;
    msg << "step size " << gamma << " exceeds 2/(alpha_z + l_z) = " << bound
        << "; the regret bound does not apply";
    return msg.str();
}

Precomputed precompute(const HankelSet& hankels, const Matrix& Q) {
    const Index m = hankels.input_dim();
    const Index p = hankels.output_dim();
    const Index n = hankels.n;
    const Index mu = hankels.mu;
    const Index order = 3 * n + mu + 1;
    if (hankels.data.size() < minimum_data_length(m, n, mu)) {
        throw Error(ErrorCode::kDataTooShort, "offline data shorter than (m+1)(3n+mu+1)-1");
    }
    if (!persistency_check(hankels.data.inputs(), order)) {
        throw Error(ErrorCode::kPersistencyViolation,
                    "offline input is not persistently exciting of order 3n + mu + 1");
    }
    if (Q.cols() != hankels.columns()) {
        throw Error(ErrorCode::kDimensionMismatch, "weight matrix must have N - 2n - mu columns");
    }

    Precomputed pre;
    pre.m = m;
    pre.p = p;
    pre.n = n;
    pre.mu = mu;
    pre.columns = hankels.columns();
    pre.H_alpha = hankels.H_alpha;
    pre.H_beta = hankels.H_beta;
    pre.Q = Q;
    pre.H_alpha_pinv = linalg::pseudoinverse(hankels.H_alpha);

    const linalg::Svd beta_svd(hankels.H_beta);
    const Matrix h_beta_pinv = beta_svd.pseudoinverse();
    // I - H_beta^+ H_beta is the projector onto null(H_beta).
    const Matrix kernel = beta_svd.null_basis();
    const Matrix null_projector = kernel * kernel.transpose();
    const Matrix weighted = linalg::pseudoinverse(Q * null_projector);
    pre.Q_tilde = h_beta_pinv - weighted * (Q * h_beta_pinv);

    const Index depth = hankels.depth();
    pre.Y_next = hankels.Y.block_row(n + 1);
    pre.Y_horizon = hankels.Y.block_row(n + mu + 1);
    pre.Y_terminal = hankels.Y.block_rows(n + mu + 1, 2 * n + mu);
    pre.U_next = hankels.U.block_row(n + 1);
    pre.U_predicted = hankels.U.block_rows(n + 1, n + mu + 1);
    pre.U_terminal = hankels.U.block_rows(n + mu + 1, depth);
    return pre;
}

RegularizedInit solve_regularized_init(const HankelSet& hankels, const InitialData& init,
                                       double lambda) {
    if (!(lambda >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "lambda_init must be nonnegative");
    const Index m = hankels.input_dim();
    const Index p = hankels.output_dim();
    const Index n = hankels.n;
    const Index mu = hankels.mu;
    check_initial_data(init, n, m, p, mu);

    const Vector u_pred = init.u_pred.value_or(Vector::Zero(m * (mu + 1)));
    const Vector z_s = init.z_s.value_or(Vector::Zero(m + p));
    Vector b(hankels.U.rows());
    b << stack_vectors(init.u, m), shift_prediction(u_pred, m), linalg::repeat(u_steady(z_s, m), n + 1);
    const Vector y_meas = stack_vectors(init.y_meas, p);

    // Nullspace method on x = (alpha, e_hat): x = x_p + Z w with U x_p = b,
    // x_p orthogonal to range(Z), so ||x||^2 = ||x_p||^2 + ||w||^2.
    const Matrix& u = hankels.U.entries();
    const linalg::Svd u_svd(u);
    const Vector alpha_p = u_svd.pseudoinverse() * b;
    if ((u * alpha_p - b).norm() > kFeasibilityTolerance * (1.0 + b.norm())) {
        throw Error(ErrorCode::kInfeasible, "input constraints of the initialization are infeasible");
    }
    const Matrix kernel = u_svd.null_basis();
    const Matrix y_init = hankels.Y.block_rows(1, n);
    const Index k = kernel.cols();
    const Index pn = p * n;

    // Residual Y^{1:n} alpha + e_hat - y_meas in terms of w = (w_alpha, e_hat).
    Matrix a(pn, k + pn);
    a << y_init * kernel, Matrix::Identity(pn, pn);
    const Vector r = y_meas - y_init * alpha_p;

    Matrix stacked(pn + k + pn, k + pn);
    stacked << a, std::sqrt(lambda) * Matrix::Identity(k + pn, k + pn);
    Vector rhs = Vector::Zero(pn + k + pn);
    rhs.head(pn) = r;
    const Vector w = Eigen::CompleteOrthogonalDecomposition<Matrix>(stacked).solve(rhs);

    RegularizedInit out;
    out.alpha = alpha_p + kernel * w.head(k);
    out.e_hat = w.tail(pn);
    return out;
}

ControllerState initialize(const ControllerConfig& config, const HankelSet& hankels,
                           const InitialData& init) {
    const Index m = hankels.input_dim();
    const Index p = hankels.output_dim();
    const Index n = config.n;
    const Index mu = config.mu;
    if (n != hankels.n || mu != hankels.mu) {
        throw Error(ErrorCode::kInvalidArgument, "controller (n, mu) differ from the hankel set");
    }
    check_initial_data(init, n, m, p, mu);

    ControllerState state;
    state.t = 0;
    state.u_hist = stack_vectors(init.u, m);
    state.u_pred = init.u_pred.value_or(Vector::Zero(m * (mu + 1)));
    state.z_s_prev = init.z_s.value_or(Vector::Zero(m + p));

    if (config.init == InitMode::kZeroTrajectory) {
        if (!state.u_hist.isZero(0.0)) {
            throw Error(ErrorCode::kInvalidArgument, "zero-trajectory initialization needs u = 0");
        }
        state.y_denoised_hist = Vector::Zero(p * n);
        state.e_hat_hist = init.y_meas;
        return state;
    }

    const RegularizedInit reg = solve_regularized_init(hankels, init, config.lambda_init);
    // Keep the stored history an exact trajectory: the denoised outputs are
    // those of alpha_0 and e_hat absorbs the remainder.
    state.y_denoised_hist = hankels.Y.block_rows(1, n) * reg.alpha;
    for (Index k = 0; k < n; ++k) {
        state.e_hat_hist.push_back(init.y_meas[k] - state.y_denoised_hist.segment(k * p, p));
    }
    state.alpha_override = reg.alpha;
    return state;
}

Vector estimate_noise(const ControllerState& state, const Vector& y_meas, const Precomputed& pre) {
    if (!state.coeff_prev) {
        throw Error(ErrorCode::kInvalidArgument,
                    "noise estimate needs alpha_{t-1} + beta_{t-1}; use the initialization at t = 0");
    }
    if (y_meas.size() != pre.p) {
        throw Error(ErrorCode::kDimensionMismatch, "measurement has the wrong dimension");
    }
    return y_meas - pre.Y_next * *state.coeff_prev;
}

void record_measurement(ControllerState& state, const Vector& y_meas, const Precomputed& pre) {
    const Vector e_hat = estimate_noise(state, y_meas, pre);
    shift_in(state.y_denoised_hist, y_meas - e_hat);
    state.e_hat_hist.push_back(e_hat);
}

Vector alpha_rhs(const ControllerState& state, const Precomputed& pre) {
    const Index m = pre.m;
    Vector rhs(pre.H_alpha.rows());
    rhs << state.u_hist, shift_prediction(state.u_pred, m),
        linalg::repeat(u_steady(state.z_s_prev, m), pre.n + 1), state.y_denoised_hist;
    return rhs;
}

AlphaSolution solve_alpha(const ControllerState& state, const Precomputed& pre) {
    AlphaSolution out;
    out.rhs = alpha_rhs(state, pre);
    out.alpha = pre.H_alpha_pinv * out.rhs;
    out.residual = (pre.H_alpha * out.alpha - out.rhs).norm();
    if (out.residual > kFeasibilityTolerance * (1.0 + out.rhs.norm())) {
        std::ostringstream msg;
        msg << "trajectory coefficient problem infeasible (residual " << out.residual << ")";
        throw Error(ErrorCode::kInfeasible, msg.str());
    }
    return out;
}

DescentResult predict_and_descend(const ControllerState& state, const Vector& alpha,
                                  const StageCost* previous_cost, const SteadyStateProjector& proj,
                                  double gamma, const Precomputed& pre) {
    if (!(gamma > 0.0)) throw Error(ErrorCode::kInvalidArgument, "gamma must be positive");
    if (alpha.size() != pre.columns) {
        throw Error(ErrorCode::kDimensionMismatch, "alpha has the wrong dimension");
    }
    DescentResult out;
    out.z_hat.resize(pre.m + pre.p);
    out.z_hat << u_steady(state.z_s_prev, pre.m), pre.Y_horizon * alpha;
    Vector target = out.z_hat;
    if (previous_cost != nullptr) target -= gamma * previous_cost->gradient(out.z_hat);
    out.z_s = project(proj, target);
    return out;
}

Vector beta_rhs(const Vector& alpha, const Vector& z_s, const Precomputed& pre) {
    const Index m = pre.m;
    const Index p = pre.p;
    const Index n = pre.n;
    Vector g(pre.H_beta.rows());
    g << Vector::Zero(m * n), linalg::repeat(u_steady(z_s, m), n + 1) - pre.U_terminal * alpha,
        Vector::Zero(p * n), linalg::repeat(y_steady(z_s, m), n) - pre.Y_terminal * alpha;
    return g;
}

BetaSolution solve_beta(const Vector& alpha, const Vector& z_s, const Precomputed& pre) {
    if (z_s.size() != pre.m + pre.p) {
        throw Error(ErrorCode::kDimensionMismatch, "z^s has the wrong dimension");
    }
    BetaSolution out;
    out.g = beta_rhs(alpha, z_s, pre);
    out.beta = pre.Q_tilde * out.g;
    out.residual = (pre.H_beta * out.beta - out.g).norm();
    if (out.residual > kFeasibilityTolerance * (1.0 + out.g.norm())) {
        std::ostringstream msg;
        msg << "input correction infeasible (residual " << out.residual
            << "); mu may be below the controllability index";
        throw Error(ErrorCode::kInfeasible, msg.str());
    }
    return out;
}

Vector advance(ControllerState& state, const Vector& alpha, const Vector& beta, const Vector& z_s,
               const Precomputed& pre) {
    const Vector coeff = alpha + beta;
    const Vector u = pre.U_next * coeff;
    state.u_pred = pre.U_predicted * coeff;
    shift_in(state.u_hist, u);
    state.coeff_prev = coeff;
    state.z_s_prev = z_s;
    state.alpha_override.reset();
    ++state.t;
    return u;
}

double IdentityViolations::max() const {
    return std::max({same_initialization, same_input, prediction_recursion, terminal_equilibrium});
}

IdentityViolations check_identities(const HankelSet& hankels, const Vector& alpha,
                                    const std::optional<Vector>& coeff_prev, const Vector& coeff,
                                    const Vector& z_s) {
    const Index n = hankels.n;
    const Index mu = hankels.mu;
    const Index m = hankels.input_dim();
    const Index depth = hankels.depth();
    const auto& U = hankels.U;
    const auto& Y = hankels.Y;
    IdentityViolations v;
    if (coeff_prev) {
        const Vector& c = *coeff_prev;
        v.same_initialization = std::max((U.block_rows(1, n) * alpha - U.block_rows(2, n + 1) * c).norm(),
                                         (Y.block_rows(1, n) * alpha - Y.block_rows(2, n + 1) * c).norm());
        v.same_input = (U.block_rows(n + 1, 2 * n + mu) * alpha - U.block_rows(n + 2, depth) * c).norm();
        v.prediction_recursion =
            (Y.block_rows(n + 1, 2 * n + mu) * alpha - Y.block_rows(n + 2, depth) * c).norm();
    }
    v.terminal_equilibrium =
        (Y.block_rows(n + mu + 1, depth) * coeff - linalg::repeat(y_steady(z_s, m), n + 1)).norm();
    return v;
}

DataDrivenController::DataDrivenController(std::shared_ptr<const HankelSet> hankels,
                                           SteadyStateProjector projector, ControllerConfig config)
    : hankels_(std::move(hankels)), projector_(std::move(projector)), config_(config) {
    if (!hankels_) throw Error(ErrorCode::kInvalidArgument, "hankel set is null");
    if (!(config_.gamma > 0.0)) throw Error(ErrorCode::kInvalidArgument, "gamma must be positive");
    if (config_.n != hankels_->n || config_.mu != hankels_->mu) {
        throw Error(ErrorCode::kInvalidArgument, "controller (n, mu) differ from the hankel set");
    }
    if (projector_.dim() != hankels_->input_dim() + hankels_->output_dim()) {
        throw Error(ErrorCode::kDimensionMismatch, "projector dimension differs from m + p");
    }
    pre_ = std::make_shared<const Precomputed>(
        precompute(*hankels_, build_weight_matrix(*hankels_, config_.weight)));
}

void DataDrivenController::start(const InitialData& init) {
    state_ = initialize(config_, *hankels_, init);
    previous_cost_.reset();
    log_.clear();
    started_ = true;
    awaiting_observation_ = false;
}

Vector DataDrivenController::compute_input() {
    if (!started_) throw Error(ErrorCode::kInvalidArgument, "controller not started");
    if (awaiting_observation_) {
        throw Error(ErrorCode::kInvalidArgument, "measurement of the previous step missing");
    }
    const Precomputed& pre = *pre_;
    StepLog entry;
    entry.t = state_.t;

    Vector alpha;
    if (state_.alpha_override) {
        alpha = *state_.alpha_override;
        entry.alpha_residual = (pre.H_alpha * alpha - alpha_rhs(state_, pre)).norm();
    } else {
        AlphaSolution a = solve_alpha(state_, pre);
        alpha = std::move(a.alpha);
        entry.alpha_residual = a.residual;
    }
    const DescentResult d = predict_and_descend(
        state_, alpha, previous_cost_ ? &*previous_cost_ : nullptr, projector_, config_.gamma, pre);
    const BetaSolution b = solve_beta(alpha, d.z_s, pre);
    const std::optional<Vector> coeff_prev = state_.coeff_prev;
    entry.u = advance(state_, alpha, b.beta, d.z_s, pre);
    entry.z_hat = d.z_hat;
    entry.z_s = d.z_s;
    entry.g_norm = b.g.norm();
    entry.beta_residual = b.residual;
    if (config_.check_identities) {
        entry.identities = check_identities(*hankels_, alpha, coeff_prev, *state_.coeff_prev, d.z_s);
    }
    awaiting_observation_ = true;
    Vector u = entry.u;
    log_.push_back(std::move(entry));
    return u;
}

void DataDrivenController::observe(const Vector& y_meas, const StageCost& cost) {
    if (!awaiting_observation_) {
        throw Error(ErrorCode::kInvalidArgument, "observe() called before compute_input()");
    }
    record_measurement(state_, y_meas, *pre_);
    previous_cost_.emplace(cost);
    awaiting_observation_ = false;
}

Vector DataDrivenController::noise_estimate() const {
    if (state_.e_hat_hist.empty()) return Vector::Zero(hankels_->output_dim());
    return state_.e_hat_hist.back();
}

}  // namespace ddoco
