#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "ddoco/config.hpp"
#include "ddoco/controller.hpp"
#include "ddoco/costs.hpp"
#include "ddoco/metrics.hpp"
#include "ddoco/plant.hpp"
#include "ddoco/steady_state.hpp"

namespace ddoco {

/// Everything the closed loop needs besides the policy. `oracle` defines the
/// optimal steady states zeta_t used for regret; it never reaches the policy.
/// run_experiment uses the data-driven projector here, so the pipeline stays
/// model-free.
struct ClosedLoopSetup {
    PlantModel plant;
    Vector x0;
    NoiseModel noise;
    std::shared_ptr<const CostFunction> cost;
    std::shared_ptr<const SteadyStateProjector> oracle;
    Index horizon = 0;
};

/// Warm-up of policy.warmup_steps() steps with u = 0 (controller time -n..-1),
/// then for t = 0..T:
///   1. u_t = policy.compute_input()  (L_t not yet revealed)
///   2. the plant steps and y_meas_t is drawn
///   3. policy.observe(y_meas_t, L_t)
/// Module errors are rethrown with the time step prepended.
RunRecord run_closed_loop(ClosedLoopSetup& setup, ControlPolicy& policy);

struct ExperimentResult {
    ExperimentConfig config;
    RunRecord record;
    SummaryRow summary;
    std::vector<std::string> warnings;
    std::vector<StepLog> controller_log;
};

/// Builds plant, offline data, controller and cost from the config and runs
/// the closed loop. Writes trace.csv, summary.csv and optionally
/// controller_log.csv when config.output_dir is set.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// t, u_1..u_m, y_1..y_p, ytilde_1..ytilde_p, ehat_1..ehat_p, us_1..us_m,
/// ys_1..ys_p, cost, opt_cost
std::string trace_header(Index m, Index p);
void write_trace_csv(const RunRecord& record, std::ostream& out);
void write_controller_log_csv(const RunRecord& record, const std::vector<StepLog>& log, std::ostream& out);
void write_outputs(const ExperimentResult& result, const std::string& directory);

}  // namespace ddoco
