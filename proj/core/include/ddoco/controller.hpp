#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ddoco/behavioral.hpp"
#include "ddoco/costs.hpp"
#include "ddoco/steady_state.hpp"
#include "ddoco/types.hpp"

namespace ddoco {

/// Weighting used in the minimum-||Q beta|| input correction. Stacked modes
/// concatenate I_{N-2n-mu}, U and/or Y row-wise.
enum class WeightMode { kIdentity, kInputs, kOutputs, kIdentityInputs, kIdentityInputsOutputs };

const char* to_string(WeightMode mode);
WeightMode weight_mode_from_string(const std::string& name);

Matrix build_weight_matrix(const HankelSet& hankels, WeightMode mode);

enum class InitMode {
    kZeroTrajectory,  ///< u_{[-n:-1]} = 0 and e_hat_{[-n:-1]} = y_meas_{[-n:-1]}
    kRegularized,     ///< regularized least squares for (alpha_0, e_hat_{[-n:-1]})
};

const char* to_string(InitMode mode);
InitMode init_mode_from_string(const std::string& name);

struct ControllerConfig {
    double gamma = 0.1;
    Index mu = 1;
    Index n = 1;
    WeightMode weight = WeightMode::kIdentityInputs;
    InitMode init = InitMode::kZeroTrajectory;
    double lambda_init = 0.0;
    /// Evaluate the per-step trajectory identities and store them in the log.
    bool check_identities = false;
};

/// Step size bound 2 / (alpha_z + l_z) of the descent step.
double max_step_size(double alpha_z, double l_z);

/// Returns a warning message if gamma exceeds 2 / (alpha_z + l_z).
std::optional<std::string> step_size_warning(double gamma, double alpha_z, double l_z);

/// Everything the online loop needs from the data. Built once; afterwards a
/// step costs one gradient evaluation plus matrix-vector products.
struct Precomputed {
    Index m = 0;
    Index p = 0;
    Index n = 0;
    Index mu = 0;
    Index columns = 0;

    Matrix H_alpha;
    Matrix H_beta;
    Matrix H_alpha_pinv;
    Matrix Q;
    Matrix Q_tilde;  ///< (I - (Q (I - H_beta^+ H_beta))^+ Q) H_beta^+

    Matrix Y_next;           ///< Y^{n+1}
    Matrix Y_horizon;        ///< Y^{n+mu+1}
    Matrix Y_terminal;       ///< Y^{n+mu+1:2n+mu}
    Matrix U_next;           ///< U^{n+1}
    Matrix U_predicted;      ///< U^{n+1:n+mu+1}
    Matrix U_terminal;       ///< U^{n+mu+1:2n+mu+1}
};

/// Requires persistency of excitation of order 3n + mu + 1, N >= (m+1)(3n+mu+1)-1
/// and Q with N - 2n - mu columns.
Precomputed precompute(const HankelSet& hankels, const Matrix& Q);

/// Per-step memory of the controller. Histories are stacked oldest first.
struct ControllerState {
    Index t = 0;
    Vector u_hist;           ///< u_{[t-n:t-1]}, length m n
    Vector y_denoised_hist;  ///< y_meas - e_hat over [t-n:t-1], length p n
    Vector u_pred;           ///< u_hat_{t-1}, length m (mu + 1)
    Vector z_s_prev;         ///< z^s_{t-1}
    std::optional<Vector> coeff_prev;  ///< alpha_{t-1} + beta_{t-1}
    std::optional<Vector> alpha_override;  ///< alpha_0 from the regularized initialization
    std::vector<Vector> e_hat_hist;        ///< e_hat_{-n}, e_hat_{-n+1}, ...
};

struct InitialData {
    std::vector<Vector> u;       ///< u_{-n} .. u_{-1}
    std::vector<Vector> y_meas;  ///< y_meas_{-n} .. y_meas_{-1}
    std::optional<Vector> u_pred;  ///< u_hat_{-1}; zero if absent
    std::optional<Vector> z_s;     ///< z^s_{-1}; zero if absent
};

struct RegularizedInit {
    Vector alpha;
    Vector e_hat;  ///< stacked e_hat_{[-n:-1]} as returned by the least-squares solve
};

/// min ||Y^{1:n} alpha - (y_meas - e_hat)||^2 + lambda ||(alpha, e_hat)||^2
/// s.t. U alpha = [u_{[-n:-1]}; sigma u_hat_{-1}; 1_{n+1} (x) u^s_{-1}].
RegularizedInit solve_regularized_init(const HankelSet& hankels, const InitialData& init, double lambda);

ControllerState initialize(const ControllerConfig& config, const HankelSet& hankels,
                           const InitialData& init);

/// e_hat_{t-1} = y_meas_{t-1} - Y^{n+1} (alpha_{t-1} + beta_{t-1}).
Vector estimate_noise(const ControllerState& state, const Vector& y_meas, const Precomputed& pre);

/// Appends y_meas_{t-1} and its noise estimate to the state.
void record_measurement(ControllerState& state, const Vector& y_meas, const Precomputed& pre);

struct AlphaSolution {
    Vector alpha;
    Vector rhs;
    double residual = 0.0;
};

/// Relative feasibility tolerance: residual <= kFeasibilityTolerance (1 + ||rhs||).
inline constexpr double kFeasibilityTolerance = 1e-7;

Vector alpha_rhs(const ControllerState& state, const Precomputed& pre);
AlphaSolution solve_alpha(const ControllerState& state, const Precomputed& pre);

struct DescentResult {
    Vector z_hat;  ///< (u^s_{t-1}, Y^{n+mu+1} alpha_t)
    Vector z_s;
};

/// Without a previous stage cost (t = 0) the step reduces to the projection.
DescentResult predict_and_descend(const ControllerState& state, const Vector& alpha,
                                  const StageCost* previous_cost, const SteadyStateProjector& proj,
                                  double gamma, const Precomputed& pre);

struct BetaSolution {
    Vector beta;
    Vector g;
    double residual = 0.0;
};

Vector beta_rhs(const Vector& alpha, const Vector& z_s, const Precomputed& pre);
BetaSolution solve_beta(const Vector& alpha, const Vector& z_s, const Precomputed& pre);

/// Applies u_t = U^{n+1}(alpha + beta), u_hat_t = U^{n+1:n+mu+1}(alpha + beta)
/// and shifts the histories. Returns u_t.
Vector advance(ControllerState& state, const Vector& alpha, const Vector& beta, const Vector& z_s,
               const Precomputed& pre);

/// Violations of the closed-loop identities between consecutive coefficient
/// vectors (alpha_t vs. alpha_{t-1} + beta_{t-1}) and the terminal equilibrium.
struct IdentityViolations {
    double same_initialization = 0.0;
    double same_input = 0.0;
    double prediction_recursion = 0.0;
    double terminal_equilibrium = 0.0;

    double max() const;
};

IdentityViolations check_identities(const HankelSet& hankels, const Vector& alpha,
                                    const std::optional<Vector>& coeff_prev, const Vector& coeff,
                                    const Vector& z_s);

struct StepLog {
    Index t = 0;
    Vector u;
    Vector z_hat;
    Vector z_s;
    double g_norm = 0.0;
    double alpha_residual = 0.0;
    double beta_residual = 0.0;
    std::optional<IdentityViolations> identities;
};

/// Closed-loop policy interface. The loop calls start() once with the
/// warm-up data, then alternates compute_input() and observe(); the stage cost
/// L_t is handed over in observe() only after u_t has been committed.
class ControlPolicy {
public:
    virtual ~ControlPolicy() = default;
    virtual Index warmup_steps() const = 0;
    virtual void start(const InitialData& init) = 0;
    virtual Vector compute_input() = 0;
    virtual void observe(const Vector& y_meas, const StageCost& cost) = 0;
    virtual Vector steady_state_estimate() const = 0;
    virtual Vector noise_estimate() const = 0;
};

/// Data-driven online gradient descent controller.
class DataDrivenController : public ControlPolicy {
public:
    DataDrivenController(std::shared_ptr<const HankelSet> hankels, SteadyStateProjector projector,
                         ControllerConfig config);

    Index warmup_steps() const override { return config_.n; }
    void start(const InitialData& init) override;
    Vector compute_input() override;
    void observe(const Vector& y_meas, const StageCost& cost) override;
    Vector steady_state_estimate() const override { return state_.z_s_prev; }
    Vector noise_estimate() const override;

    const ControllerState& state() const { return state_; }
    const Precomputed& precomputed() const { return *pre_; }
    const SteadyStateProjector& projector() const { return projector_; }
    const ControllerConfig& config() const { return config_; }
    const std::vector<StepLog>& log() const { return log_; }

private:
    std::shared_ptr<const HankelSet> hankels_;
    std::shared_ptr<const Precomputed> pre_;
    SteadyStateProjector projector_;
    ControllerConfig config_;
    ControllerState state_;
    std::optional<StageCost> previous_cost_;
    std::vector<StepLog> log_;
    bool started_ = false;
    bool awaiting_observation_ = false;
};

}  // namespace ddoco
