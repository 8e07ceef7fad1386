#include "ddoco/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

namespace ddoco {

Vector RunRecord::z(Index t) const {
    const auto k = static_cast<std::size_t>(t);
    Vector out(u.at(k).size() + y.at(k).size());
    out << u[k], y[k];
    return out;
}

RegretResult regret(const RunRecord& record) {
    if (record.stage_cost.size() != record.optimal_cost.size()) {
        throw Error(ErrorCode::kDimensionMismatch, "cost series differ in length");
    }
    RegretResult out;
    out.running.reserve(record.stage_cost.size());
    for (std::size_t t = 0; t < record.stage_cost.size(); ++t) {
        out.total += record.stage_cost[t] - record.optimal_cost[t];
        out.running.push_back(out.total);
    }
    return out;
}

double path_length(const std::vector<Vector>& zeta, const Vector& zeta_init) {
    double total = 0.0;
    const Vector* prev = &zeta_init;
    for (const Vector& z : zeta) {
        total += (z - *prev).norm();
        prev = &z;
    }
    return total;
}

std::vector<double> distance_to_optimum(const RunRecord& record) {
    if (record.zeta.size() != record.u.size()) {
        throw Error(ErrorCode::kDimensionMismatch, "zeta series differs in length from the run");
    }
    std::vector<double> out;
    out.reserve(record.u.size());
    for (std::size_t t = 0; t < record.u.size(); ++t) {
        out.push_back((record.z(static_cast<Index>(t)) - record.zeta[t]).norm());
    }
    return out;
}

std::optional<Index> steps_to_converge(const RunRecord& record, double tolerance) {
    const std::vector<double> dist = distance_to_optimum(record);
    std::optional<Index> first;
    for (std::size_t t = dist.size(); t-- > 0;) {
        if (!(dist[t] <= tolerance)) break;
        first = static_cast<Index>(t);
    }
    return first;
}

std::optional<DecayFit> fit_decay_rate(const std::vector<double>& errors, double discard_fraction,
                                       double floor) {
    const auto skip = static_cast<std::size_t>(
        std::ceil(std::clamp(discard_fraction, 0.0, 1.0) * static_cast<double>(errors.size())));
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    Index count = 0;
    for (std::size_t t = skip; t < errors.size(); ++t) {
        if (!(errors[t] > floor) || !std::isfinite(errors[t])) continue;
        const double x = static_cast<double>(t);
        const double y = std::log(errors[t]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++count;
    }
    if (count < 2) return std::nullopt;
    const double c = static_cast<double>(count);
    const double denom = c * sxx - sx * sx;
    if (!(denom > 0.0)) return std::nullopt;
    const double slope = (c * sxy - sx * sy) / denom;
    return DecayFit{std::exp(slope), (sy - slope * sx) / c, count};
}

NoiseErrorSeries noise_error_series(const std::vector<Vector>& e_hat, const std::vector<Vector>& e_true) {
    if (e_hat.size() != e_true.size()) {
        throw Error(ErrorCode::kDimensionMismatch, "noise series differ in length");
    }
    NoiseErrorSeries out;
    out.errors.reserve(e_hat.size());
    double peak = 0.0;
    for (std::size_t t = 0; t < e_hat.size(); ++t) {
        out.errors.push_back((e_hat[t] - e_true[t]).norm());
        peak = std::max(peak, out.errors.back());
    }
    out.fit = fit_decay_rate(out.errors, 0.1, std::max(1e-12, 1e-9 * peak));
    return out;
}

OptimalSteadyStateCache::OptimalSteadyStateCache(std::shared_ptr<const SteadyStateProjector> projector,
                                                 std::shared_ptr<const CostFunction> cost)
    : projector_(std::move(projector)), cost_(std::move(cost)) {
    if (!projector_ || !cost_) throw Error(ErrorCode::kInvalidArgument, "projector and cost are required");
}

const Vector& OptimalSteadyStateCache::at(Index t) {
    const std::optional<Index> key = cost_->stage_key(t);
    if (key && key_ && *key == *key_) return value_;
    value_ = optimal_steady_state(*projector_, StageCost(cost_, t));
    key_ = key;
    ++solves_;
    return value_;
}

SummaryRow summarize(const RunRecord& record, std::uint64_t seed, double gamma, Index mu) {
    SummaryRow row;
    row.seed = seed;
    row.gamma = gamma;
    row.mu = mu;
    row.regret = regret(record).total;
    const Index steps = static_cast<Index>(record.stage_cost.size());
    row.regret_per_step = steps > 0 ? row.regret / static_cast<double>(steps) : 0.0;
    row.path_length = path_length(record.zeta, record.z_s_init);
    for (double c : record.stage_cost) row.accumulated_cost += c;
    if (!record.e_true.empty() && record.e_true.size() == record.e_hat.size()) {
        row.final_noise_error = (record.e_hat.back() - record.e_true.back()).norm();
    }
    row.steps_to_converge = steps_to_converge(record, kSummaryConvergenceTolerance);
    return row;
}

void write_summary_header(std::ostream& out) {
    out << "seed,gamma,mu,regret,regret_per_step,path_length,accumulated_cost,final_noise_error,"
           "steps_to_converge\n";
}

void write_summary_row(const SummaryRow& row, std::ostream& out) {
    const auto old = out.precision(17);
    out << row.seed << ',' << row.gamma << ',' << row.mu << ',' << row.regret << ','
        << row.regret_per_step << ',' << row.path_length << ',' << row.accumulated_cost << ',';
    if (row.final_noise_error) out << *row.final_noise_error;
    out << ',';
    if (row.steps_to_converge) out << *row.steps_to_converge;
    out << '\n';
    out.precision(old);
}

}  // namespace ddoco
