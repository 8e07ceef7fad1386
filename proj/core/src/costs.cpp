#include "ddoco/costs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace ddoco {

void CostFunction::check_stage(Index t, const Vector& z) const {
    if (z.size() != dim()) {
        throw Error(ErrorCode::kDimensionMismatch, "cost argument has wrong dimension");
    }
    const auto h = horizon();
    if (t < 0 || (h && t >= *h)) {
        std::ostringstream msg;
        msg << "cost stage " << t << " outside configured horizon";
        throw Error(ErrorCode::kHorizonExceeded, msg.str());
    }
}

namespace {

std::pair<double, double> eigen_range(const Matrix& symmetric) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetric, Eigen::EigenvaluesOnly);
    return {eig.eigenvalues().minCoeff(), eig.eigenvalues().maxCoeff()};
}

template <typename SegmentT>
const SegmentT& find_segment(const std::vector<SegmentT>& segments, Index t) {
    auto it = std::upper_bound(segments.begin(), segments.end(), t,
                               [](Index value, const SegmentT& s) { return value < s.start; });
    return *std::prev(it);
}

template <typename SegmentT>
void check_breakpoints(const std::vector<SegmentT>& segments) {
    if (segments.empty() || segments.front().start != 0) {
        throw Error(ErrorCode::kInvalidArgument, "schedule must start with a segment at stage 0");
    }
    for (std::size_t k = 1; k < segments.size(); ++k) {
        if (segments[k].start <= segments[k - 1].start) {
            throw Error(ErrorCode::kInvalidArgument, "schedule breakpoints must strictly increase");
        }
    }
}

}  // namespace

// ---------------------------------------------------------------------------

QuadraticScheduledCost::QuadraticScheduledCost(Index input_dim, std::vector<Segment> segments,
                                               std::vector<double> price)
    : m_(input_dim), segments_(std::move(segments)), price_(std::move(price)) {
    check_breakpoints(segments_);
    if (m_ < 1) throw Error(ErrorCode::kInvalidArgument, "input dimension must be positive");
    if (price_.empty()) throw Error(ErrorCode::kInvalidArgument, "price series is empty");
    for (double p : price_) {
        if (!(p > 0.0)) throw Error(ErrorCode::kInvalidArgument, "prices must be positive");
    }
    p_ = segments_.front().setpoint.size();

    alpha_ = std::numeric_limits<double>::infinity();
    l_ = 0.0;
    for (std::size_t k = 0; k < segments_.size(); ++k) {
        const auto& s = segments_[k];
        if (s.output_weight.rows() != p_ || s.output_weight.cols() != p_ || s.setpoint.size() != p_) {
            throw Error(ErrorCode::kDimensionMismatch, "segment weight/setpoint dimensions differ");
        }
        if ((s.output_weight - s.output_weight.transpose()).norm() > 1e-12 * (1.0 + s.output_weight.norm())) {
            throw Error(ErrorCode::kInvalidArgument, "output weight must be symmetric");
        }
        if (!(s.input_weight > 0.0)) {
            throw Error(ErrorCode::kInvalidArgument, "input weight must be positive");
        }
        const auto first = static_cast<std::size_t>(std::min<Index>(s.start, price_.size()));
        const auto last = k + 1 < segments_.size()
                              ? static_cast<std::size_t>(std::min<Index>(segments_[k + 1].start, price_.size()))
                              : price_.size();
        if (first >= last) continue;
        const auto [pmin, pmax] = std::minmax_element(price_.begin() + first, price_.begin() + last);
        const auto [emin, emax] = eigen_range(s.output_weight);
        alpha_ = std::min({alpha_, s.input_weight * *pmin, emin});
        l_ = std::max({l_, s.input_weight * *pmax, emax});
    }
    if (!(alpha_ > 0.0)) {
        throw Error(ErrorCode::kInvalidArgument, "scheduled cost is not strongly convex");
    }
}

const QuadraticScheduledCost::Segment& QuadraticScheduledCost::segment_at(Index t) const {
    return find_segment(segments_, t);
}

double QuadraticScheduledCost::value(Index t, const Vector& z) const {
    check_stage(t, z);
    const auto& s = segment_at(t);
    const Vector dy = z.tail(p_) - s.setpoint;
    return 0.5 * dy.dot(s.output_weight * dy) + 0.5 * s.input_weight * price(t) * z.head(m_).squaredNorm();
}

Vector QuadraticScheduledCost::gradient(Index t, const Vector& z) const {
    check_stage(t, z);
    const auto& s = segment_at(t);
    Vector g(m_ + p_);
    g.head(m_) = s.input_weight * price(t) * z.head(m_);
    g.tail(p_) = s.output_weight * (z.tail(p_) - s.setpoint);
    return g;
}

std::optional<QuadraticForm> QuadraticScheduledCost::quadratic_form(Index t) const {
    check_stage(t, Vector::Zero(m_ + p_));
    const auto& s = segment_at(t);
    QuadraticForm q;
    q.hessian = Matrix::Zero(m_ + p_, m_ + p_);
    q.hessian.topLeftCorner(m_, m_).diagonal().setConstant(s.input_weight * price(t));
    q.hessian.bottomRightCorner(p_, p_) = s.output_weight;
    q.linear = Vector::Zero(m_ + p_);
    q.linear.tail(p_) = -(s.output_weight * s.setpoint);
    q.constant = 0.5 * s.setpoint.dot(s.output_weight * s.setpoint);
    return q;
}

// ---------------------------------------------------------------------------

PiecewiseQuadraticCost::PiecewiseQuadraticCost(Index input_dim, Index output_dim,
                                               std::vector<Segment> segments)
    : m_(input_dim), p_(output_dim), segments_(std::move(segments)) {
    check_breakpoints(segments_);
    alpha_ = std::numeric_limits<double>::infinity();
    l_ = 0.0;
    const Index d = m_ + p_;
    for (const auto& s : segments_) {
        if (s.hessian.rows() != d || s.hessian.cols() != d || s.target.size() != d) {
            throw Error(ErrorCode::kDimensionMismatch, "segment hessian/target dimensions differ");
        }
        if ((s.hessian - s.hessian.transpose()).norm() > 1e-12 * (1.0 + s.hessian.norm())) {
            throw Error(ErrorCode::kInvalidArgument, "hessian must be symmetric");
        }
        const auto [emin, emax] = eigen_range(s.hessian);
        alpha_ = std::min(alpha_, emin);
        l_ = std::max(l_, emax);
    }
    if (!(alpha_ > 0.0)) {
        throw Error(ErrorCode::kInvalidArgument, "piecewise quadratic cost is not strongly convex");
    }
}

const PiecewiseQuadraticCost::Segment& PiecewiseQuadraticCost::segment_at(Index t) const {
    return find_segment(segments_, t);
}

double PiecewiseQuadraticCost::value(Index t, const Vector& z) const {
    check_stage(t, z);
    const auto& s = segment_at(t);
    const Vector dz = z - s.target;
    return 0.5 * dz.dot(s.hessian * dz);
}

Vector PiecewiseQuadraticCost::gradient(Index t, const Vector& z) const {
    check_stage(t, z);
    const auto& s = segment_at(t);
    return s.hessian * (z - s.target);
}

std::optional<QuadraticForm> PiecewiseQuadraticCost::quadratic_form(Index t) const {
    check_stage(t, Vector::Zero(m_ + p_));
    const auto& s = segment_at(t);
    return QuadraticForm{s.hessian, -(s.hessian * s.target), 0.5 * s.target.dot(s.hessian * s.target)};
}

std::optional<Index> PiecewiseQuadraticCost::stage_key(Index t) const {
    return static_cast<Index>(&segment_at(t) - segments_.data());
}

// ---------------------------------------------------------------------------

LogCoshCost::LogCoshCost(Index input_dim, Index output_dim, double rho, Vector anchor,
                         Vector weights, Vector centers)
    : m_(input_dim),
      p_(output_dim),
      rho_(rho),
      anchor_(std::move(anchor)),
      weights_(std::move(weights)),
      centers_(std::move(centers)) {
    const Index d = m_ + p_;
    if (anchor_.size() != d || weights_.size() != d || centers_.size() != d) {
        throw Error(ErrorCode::kDimensionMismatch, "log-cosh cost parameter dimensions differ");
    }
    if (!(rho_ > 0.0) || weights_.minCoeff() < 0.0) {
        throw Error(ErrorCode::kInvalidArgument, "log-cosh cost needs rho > 0 and w >= 0");
    }
}

namespace {
// log cosh(x) without overflow for large |x|.
double log_cosh(double x) {
    const double a = std::abs(x);
    return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}
}  // namespace

double LogCoshCost::value(Index t, const Vector& z) const {
    check_stage(t, z);
    double sum = 0.5 * rho_ * (z - anchor_).squaredNorm();
    for (Index i = 0; i < z.size(); ++i) sum += weights_(i) * log_cosh(z(i) - centers_(i));
    return sum;
}

Vector LogCoshCost::gradient(Index t, const Vector& z) const {
    check_stage(t, z);
    Vector g = rho_ * (z - anchor_);
    for (Index i = 0; i < z.size(); ++i) g(i) += weights_(i) * std::tanh(z(i) - centers_(i));
    return g;
}

// ---------------------------------------------------------------------------

std::vector<ProfileKnot> default_price_profile() {
    // Normalized day-ahead style shape: cheap night, morning ramp, midday dip,
    // evening peak. Not taken from any published series.
    return {{0.0, 0.75},  {5.0, 0.75}, {7.5, 1.15}, {10.0, 1.05}, {13.0, 0.9},
            {16.0, 0.95}, {18.5, 1.2}, {21.0, 1.0}, {24.0, 0.75}};
}

double profile_value(const std::vector<ProfileKnot>& knots, double hour) {
    if (knots.empty()) throw Error(ErrorCode::kInvalidArgument, "empty price profile");
    double h = std::fmod(hour, 24.0);
    if (h < 0.0) h += 24.0;
    if (h <= knots.front().first) return knots.front().second;
    for (std::size_t k = 1; k < knots.size(); ++k) {
        if (h <= knots[k].first) {
            const auto [h0, v0] = knots[k - 1];
            const auto [h1, v1] = knots[k];
            if (h1 == h0) return v1;
            return v0 + (v1 - v0) * (h - h0) / (h1 - h0);
        }
    }
    return knots.back().second;
}

double hour_of_day(Index t, double sample_time) {
    double h = std::fmod(static_cast<double>(t) * sample_time / 3600.0, 24.0);
    if (h < 0.0) h += 24.0;
    return h;
}

std::vector<double> price_series(const HvacCostParams& params) {
    if (!(params.sample_time > 0.0) || params.stages < 1) {
        throw Error(ErrorCode::kInvalidArgument, "invalid sample time or schedule length");
    }
    const auto knots = params.price_profile.empty() ? default_price_profile() : params.price_profile;
    for (std::size_t k = 1; k < knots.size(); ++k) {
        if (knots[k].first < knots[k - 1].first) {
            throw Error(ErrorCode::kInvalidArgument, "price profile hours must be nondecreasing");
        }
    }
    for (const auto& [hour, value] : knots) {
        if (!(value > 0.0)) throw Error(ErrorCode::kInvalidArgument, "nonpositive price in profile");
    }
    double scale = 1.0;
    if (params.normalize_price) {
        const auto per_day = static_cast<Index>(std::llround(86400.0 / params.sample_time));
        double mean = 0.0;
        for (Index t = 0; t < per_day; ++t) mean += profile_value(knots, hour_of_day(t, params.sample_time));
        mean /= static_cast<double>(per_day);
        scale = 1.0 / mean;
    }
    std::vector<double> out(static_cast<std::size_t>(params.stages));
    for (Index t = 0; t < params.stages; ++t) {
        out[static_cast<std::size_t>(t)] = scale * profile_value(knots, hour_of_day(t, params.sample_time));
    }
    return out;
}

std::shared_ptr<QuadraticScheduledCost> hvac_cost_schedule(const HvacCostParams& params) {
    if (params.outputs < 1 || params.inputs < 1) {
        throw Error(ErrorCode::kInvalidArgument, "hvac schedule needs positive dimensions");
    }
    if (!(params.night_end_hour >= 0.0 && params.night_end_hour <= params.switch_hour &&
          params.switch_hour <= 24.0)) {
        throw Error(ErrorCode::kInvalidArgument, "hvac schedule hours must satisfy 0 <= night_end <= switch <= 24");
    }
    auto prices = price_series(params);

    const Index p = params.outputs;
    const Matrix eye = Matrix::Identity(p, p);
    const Vector before = Vector::Constant(p, params.setpoint_before - params.outdoor_temperature);
    const Vector after = Vector::Constant(p, params.setpoint_after - params.outdoor_temperature);
    const auto per_day = static_cast<Index>(std::llround(86400.0 / params.sample_time));
    const auto first_stage_at = [&](double hour) {
        return static_cast<Index>(std::ceil(hour * 3600.0 / params.sample_time - 1e-9));
    };

    std::vector<QuadraticScheduledCost::Segment> segments;
    const auto push = [&](Index start, double weight, const Vector& setpoint) {
        if (start >= params.stages) return;
        if (!segments.empty() && segments.back().start == start) segments.pop_back();
        segments.push_back({start, weight * eye, params.input_weight, setpoint});
    };
    for (Index day_start = 0; day_start < params.stages; day_start += per_day) {
        push(day_start, params.night_output_weight, before);
        push(day_start + first_stage_at(params.night_end_hour), params.day_output_weight, before);
        push(day_start + first_stage_at(params.switch_hour), params.day_output_weight, after);
    }
    return std::make_shared<QuadraticScheduledCost>(params.inputs, std::move(segments), std::move(prices));
}

}  // namespace ddoco
