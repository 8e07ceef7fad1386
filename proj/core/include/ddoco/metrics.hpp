#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

#include "ddoco/costs.hpp"
#include "ddoco/steady_state.hpp"
#include "ddoco/types.hpp"

namespace ddoco {

/// Per-step record of a closed-loop run over t = 0..T. Every series has T + 1
/// entries; e_true is empty when the noise is unknown.
struct RunRecord {
    std::vector<Vector> u;
    std::vector<Vector> y;       ///< true outputs
    std::vector<Vector> y_meas;  ///< measured outputs
    std::vector<Vector> e_hat;
    std::vector<Vector> e_true;
    std::vector<Vector> z_s;     ///< controller steady-state estimates
    std::vector<Vector> zeta;    ///< optimal steady states (oracle)
    std::vector<double> stage_cost;    ///< L_t(u_t, y_t)
    std::vector<double> optimal_cost;  ///< L_t(eta_t, theta_t)
    Vector z_s_init;                   ///< z^s_{-1}

    Index horizon() const { return static_cast<Index>(u.size()) - 1; }
    Vector z(Index t) const;
};

struct RegretResult {
    double total = 0.0;
    std::vector<double> running;  ///< R_tau = sum_{t <= tau}
};

RegretResult regret(const RunRecord& record);

/// sum_t ||zeta_t - zeta_{t-1}|| with zeta_{-1} = z^s_{-1}.
double path_length(const std::vector<Vector>& zeta, const Vector& zeta_init);

std::vector<double> distance_to_optimum(const RunRecord& record);

/// First t after which ||z_k - zeta_k|| <= tolerance for every k >= t.
std::optional<Index> steps_to_converge(const RunRecord& record, double tolerance);

struct DecayFit {
    double rate = 0.0;       ///< exp(slope) of log-error against t
    double intercept = 0.0;  ///< log-error at t = 0
    Index points = 0;
};

/// Least-squares fit of log(error) over the tail after discarding the first
/// `discard_fraction` of steps. Points at or below `floor` are ignored so that
/// rounding noise does not bend the fit; nullopt if fewer than two remain.
std::optional<DecayFit> fit_decay_rate(const std::vector<double>& errors, double discard_fraction = 0.1,
                                       double floor = 0.0);

struct NoiseErrorSeries {
    std::vector<double> errors;  ///< ||e_hat_t - e_t||
    std::optional<DecayFit> fit;
};

NoiseErrorSeries noise_error_series(const std::vector<Vector>& e_hat, const std::vector<Vector>& e_true);

/// zeta_t for a stream of stages. Stages sharing a stage key reuse the cached
/// optimum, so piecewise-constant schedules solve once per segment.
class OptimalSteadyStateCache {
public:
    OptimalSteadyStateCache(std::shared_ptr<const SteadyStateProjector> projector,
                            std::shared_ptr<const CostFunction> cost);

    const Vector& at(Index t);
    Index solves() const { return solves_; }

private:
    std::shared_ptr<const SteadyStateProjector> projector_;
    std::shared_ptr<const CostFunction> cost_;
    std::optional<Index> key_;
    Vector value_;
    Index solves_ = 0;
};

struct SummaryRow {
    std::uint64_t seed = 0;
    double gamma = 0.0;
    Index mu = 0;
    double regret = 0.0;
    double regret_per_step = 0.0;
    double path_length = 0.0;
    double accumulated_cost = 0.0;
    std::optional<double> final_noise_error;
    std::optional<Index> steps_to_converge;
};

/// Convergence tolerance used for the summary's steps_to_converge column.
inline constexpr double kSummaryConvergenceTolerance = 1e-6;

SummaryRow summarize(const RunRecord& record, std::uint64_t seed, double gamma, Index mu);

void write_summary_header(std::ostream& out);
void write_summary_row(const SummaryRow& row, std::ostream& out);

}  // namespace ddoco
