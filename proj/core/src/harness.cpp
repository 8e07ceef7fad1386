#include "ddoco/harness.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace ddoco {

namespace {

Error at_step(const Error& e, Index t) {
    std::ostringstream msg;
    msg << "t = " << t << ": " << e.what();
    return Error(e.code(), msg.str());
}

void write_vector(std::ostream& out, const Vector& v) {
    for (Index i = 0; i < v.size(); ++i) out << ',' << v(i);
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::kInvalidArgument, "cannot write '" + path.string() + "'");
    return out;
}

}  // namespace

RunRecord run_closed_loop(ClosedLoopSetup& setup, ControlPolicy& policy) {
    const PlantModel& plant = setup.plant;
    if (!setup.cost || !setup.oracle) throw Error(ErrorCode::kInvalidArgument, "cost and oracle are required");
    if (setup.horizon < 0) throw Error(ErrorCode::kInvalidArgument, "horizon must be nonnegative");
    if (setup.x0.size() != plant.states()) {
        throw Error(ErrorCode::kDimensionMismatch, "initial state has the wrong dimension");
    }
    const Index m = plant.inputs();
    const Index warmup = policy.warmup_steps();

    Vector x = setup.x0;
    InitialData init;
    for (Index k = -warmup; k < 0; ++k) {
        const Vector u = Vector::Zero(m);
        const StepResult s = step(plant, x, u, setup.noise.sample_measurement(k), setup.noise.sample_process());
        init.u.push_back(u);
        init.y_meas.push_back(s.measured_output);
        x = s.next_state;
    }
    policy.start(init);

    RunRecord record;
    record.z_s_init = policy.steady_state_estimate();
    OptimalSteadyStateCache zeta(setup.oracle, setup.cost);
    const auto steps = static_cast<std::size_t>(setup.horizon + 1);
    record.u.reserve(steps);
    record.y.reserve(steps);
    record.y_meas.reserve(steps);
    record.e_hat.reserve(steps);
    record.e_true.reserve(steps);
    record.z_s.reserve(steps);
    record.zeta.reserve(steps);

    for (Index t = 0; t <= setup.horizon; ++t) {
        try {
            const Vector u = policy.compute_input();
            const Vector e = setup.noise.sample_measurement(t);
            const StepResult s = step(plant, x, u, e, setup.noise.sample_process());
            x = s.next_state;

            const StageCost stage(setup.cost, t);
            Vector z(u.size() + s.output.size());
            z << u, s.output;
            const Vector& opt = zeta.at(t);
            record.stage_cost.push_back(stage.value(z));
            record.optimal_cost.push_back(stage.value(opt));
            record.zeta.push_back(opt);
            record.z_s.push_back(policy.steady_state_estimate());

            policy.observe(s.measured_output, stage);

            record.u.push_back(u);
            record.y.push_back(s.output);
            record.y_meas.push_back(s.measured_output);
            record.e_true.push_back(e);
            record.e_hat.push_back(policy.noise_estimate());
        } catch (const Error& e) {
            throw at_step(e, t);
        }
    }
    return record;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    validate(config);
    ExperimentResult result;
    result.config = config;

    const PlantModel plant = build_plant(config.plant);
    const ControllerConfig& cc = config.controller;
    OfflineDataSpec offline;
    offline.length = config.offline.length;
    offline.input_low = config.offline.input_low;
    offline.input_high = config.offline.input_high;
    offline.seed = config.offline.seed;
    offline.n = cc.n;
    offline.mu = cc.mu;
    const Trajectory data = collect_offline_data(plant, offline);

    auto hankels = std::make_shared<const HankelSet>(build_hankel_set(data, cc.n, cc.mu));
    auto projector = std::make_shared<const SteadyStateProjector>(build_projector(data, cc.n));
    DataDrivenController controller(hankels, *projector, cc);

    auto cost = build_cost(config, plant);
    if (auto w = step_size_warning(cc.gamma, cost->strong_convexity(), cost->smoothness())) {
        result.warnings.push_back(*w);
    }

    ClosedLoopSetup setup{plant,
                          initial_state(config.plant, plant),
                          build_noise(config.noise, plant),
                          cost,
                          projector,
                          config.horizon};
    result.record = run_closed_loop(setup, controller);
    result.controller_log = controller.log();
    result.summary = summarize(result.record, config.noise.seed, cc.gamma, cc.mu);
    if (!config.output_dir.empty()) write_outputs(result, config.output_dir);
    return result;
}

std::string trace_header(Index m, Index p) {
    std::ostringstream out;
    out << 't';
    const auto names = [&](const char* prefix, Index count) {
        for (Index i = 1; i <= count; ++i) out << ',' << prefix << '_' << i;
    };
    names("u", m);
    names("y", p);
    names("ytilde", p);
    names("ehat", p);
    names("us", m);
    names("ys", p);
    out << ",cost,opt_cost";
    return out.str();
}

void write_trace_csv(const RunRecord& record, std::ostream& out) {
    if (record.u.empty()) return;
    const Index m = record.u.front().size();
    const Index p = record.y.front().size();
    out << trace_header(m, p) << '\n';
    const auto old = out.precision(17);
    for (std::size_t t = 0; t < record.u.size(); ++t) {
        out << t;
        write_vector(out, record.u[t]);
        write_vector(out, record.y[t]);
        write_vector(out, record.y_meas[t]);
        write_vector(out, record.e_hat[t]);
        write_vector(out, record.z_s[t]);
        out << ',' << record.stage_cost[t] << ',' << record.optimal_cost[t] << '\n';
    }
    out.precision(old);
}

void write_controller_log_csv(const RunRecord& record, const std::vector<StepLog>& log, std::ostream& out) {
    if (log.empty()) return;
    const Index m = log.front().u.size();
    const Index p = log.front().z_s.size() - m;
    out << 't';
    for (Index i = 1; i <= m; ++i) out << ",u_" << i;
    for (Index i = 1; i <= p; ++i) out << ",ytilde_" << i;
    for (Index i = 1; i <= p; ++i) out << ",ehat_" << i;
    for (Index i = 1; i <= m; ++i) out << ",us_" << i;
    for (Index i = 1; i <= p; ++i) out << ",ys_" << i;
    out << ",g_norm,alpha_residual,beta_residual\n";
    const auto old = out.precision(17);
    for (std::size_t k = 0; k < log.size() && k < record.y_meas.size(); ++k) {
        const StepLog& s = log[k];
        out << s.t;
        write_vector(out, s.u);
        write_vector(out, record.y_meas[k]);
        write_vector(out, record.e_hat[k]);
        write_vector(out, s.z_s);
        out << ',' << s.g_norm << ',' << s.alpha_residual << ',' << s.beta_residual << '\n';
    }
    out.precision(old);
}

void write_outputs(const ExperimentResult& result, const std::string& directory) {
    const std::filesystem::path dir(directory);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::kInvalidArgument, "cannot create '" + directory + "': " + ec.message());
    {
        auto out = open_output(dir / "trace.csv");
        write_trace_csv(result.record, out);
    }
    {
        auto out = open_output(dir / "summary.csv");
        write_summary_header(out);
        write_summary_row(result.summary, out);
    }
    if (result.config.write_controller_log) {
        auto out = open_output(dir / "controller_log.csv");
        write_controller_log_csv(result.record, result.controller_log, out);
    }
}

}  // namespace ddoco
