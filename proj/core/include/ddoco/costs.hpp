#pragma once

#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "ddoco/types.hpp"

namespace ddoco {

/// L(z) = 0.5 z' H z + linear' z + constant
struct QuadraticForm {
    Matrix hessian;
    Vector linear;
    double constant = 0.0;
};

/// Time-varying cost L_t(z) over z = (u, y), strongly convex with modulus
/// alpha_z and smooth with modulus l_z uniformly in t.
class CostFunction {
public:
    virtual ~CostFunction() = default;

    virtual Index input_dim() const = 0;
    virtual Index output_dim() const = 0;
    Index dim() const { return input_dim() + output_dim(); }

    /// Number of defined stages, if bounded. Evaluating at t >= horizon throws.
    virtual std::optional<Index> horizon() const { return std::nullopt; }

    virtual double value(Index t, const Vector& z) const = 0;
    virtual Vector gradient(Index t, const Vector& z) const = 0;

    virtual double strong_convexity() const = 0;  ///< alpha_z
    virtual double smoothness() const = 0;        ///< l_z

    /// Exact quadratic representation of stage t, when the family has one.
    virtual std::optional<QuadraticForm> quadratic_form(Index /*t*/) const { return std::nullopt; }

    /// Stages with equal keys are identical functions; nullopt means unknown.
    virtual std::optional<Index> stage_key(Index /*t*/) const { return std::nullopt; }

protected:
    void check_stage(Index t, const Vector& z) const;
};

/// One revealed stage L_t. Only the bound stage can be evaluated, which is how
/// the closed loop hands a controller L_{t-1} without exposing later stages.
class StageCost {
public:
    StageCost(std::shared_ptr<const CostFunction> cost, Index t) : cost_(std::move(cost)), t_(t) {}

    Index time() const { return t_; }
    const CostFunction& function() const { return *cost_; }

    double value(const Vector& z) const { return cost_->value(t_, z); }
    Vector gradient(const Vector& z) const { return cost_->gradient(t_, z); }
    std::optional<QuadraticForm> quadratic_form() const { return cost_->quadratic_form(t_); }

private:
    std::shared_ptr<const CostFunction> cost_;
    Index t_;
};

inline double eval_cost(const CostFunction& c, Index t, const Vector& z) { return c.value(t, z); }
inline Vector grad_cost(const CostFunction& c, Index t, const Vector& z) { return c.gradient(t, z); }

/// Piecewise-constant output-tracking cost with a per-step price on the input:
///   L_t(u, y) = 0.5 (y - r_t)' Lambda_t (y - r_t) + 0.5 lambda_t p_t ||u||^2
class QuadraticScheduledCost : public CostFunction {
public:
    struct Segment {
        Index start = 0;        ///< first stage of the segment
        Matrix output_weight;   ///< Lambda (p x p, positive semidefinite)
        double input_weight;    ///< lambda
        Vector setpoint;        ///< r = Delta T^set
    };

    /// `price` has one entry per stage and fixes the horizon.
    QuadraticScheduledCost(Index input_dim, std::vector<Segment> segments, std::vector<double> price);

    Index input_dim() const override { return m_; }
    Index output_dim() const override { return p_; }
    std::optional<Index> horizon() const override { return static_cast<Index>(price_.size()); }

    double value(Index t, const Vector& z) const override;
    Vector gradient(Index t, const Vector& z) const override;
    double strong_convexity() const override { return alpha_; }
    double smoothness() const override { return l_; }
    std::optional<QuadraticForm> quadratic_form(Index t) const override;

    const Segment& segment_at(Index t) const;
    const std::vector<Segment>& segments() const { return segments_; }
    double price(Index t) const { return price_.at(static_cast<std::size_t>(t)); }

private:
    Index m_;
    Index p_;
    std::vector<Segment> segments_;
    std::vector<double> price_;
    double alpha_ = 0.0;
    double l_ = 0.0;
};

/// Piecewise-constant general quadratic L_t(z) = 0.5 (z - r_k)' H_k (z - r_k)
/// on stages [start_k, start_{k+1}). The last segment extends indefinitely.
class PiecewiseQuadraticCost : public CostFunction {
public:
    struct Segment {
        Index start = 0;
        Matrix hessian;
        Vector target;
    };

    PiecewiseQuadraticCost(Index input_dim, Index output_dim, std::vector<Segment> segments);

    Index input_dim() const override { return m_; }
    Index output_dim() const override { return p_; }

    double value(Index t, const Vector& z) const override;
    Vector gradient(Index t, const Vector& z) const override;
    double strong_convexity() const override { return alpha_; }
    double smoothness() const override { return l_; }
    std::optional<QuadraticForm> quadratic_form(Index t) const override;
    std::optional<Index> stage_key(Index t) const override;

    const Segment& segment_at(Index t) const;
    const std::vector<Segment>& segments() const { return segments_; }

private:
    Index m_;
    Index p_;
    std::vector<Segment> segments_;
    double alpha_ = 0.0;
    double l_ = 0.0;
};

/// Non-quadratic smooth cost
///   L(z) = 0.5 rho ||z - a||^2 + sum_i w_i log cosh(z_i - b_i),
/// with Hessian between rho I and (rho + max w) I.
class LogCoshCost : public CostFunction {
public:
    LogCoshCost(Index input_dim, Index output_dim, double rho, Vector anchor, Vector weights,
                Vector centers);

    Index input_dim() const override { return m_; }
    Index output_dim() const override { return p_; }

    double value(Index t, const Vector& z) const override;
    Vector gradient(Index t, const Vector& z) const override;
    double strong_convexity() const override { return rho_; }
    double smoothness() const override { return rho_ + weights_.maxCoeff(); }
    std::optional<Index> stage_key(Index /*t*/) const override { return 0; }

private:
    Index m_;
    Index p_;
    double rho_;
    Vector anchor_;
    Vector weights_;
    Vector centers_;
};

/// Knot of a piecewise-linear 24 h profile: (hour of day, value).
using ProfileKnot = std::pair<double, double>;

/// Parameters of the thermal-comfort schedule. Defaults are the experiment's
/// stated weights, setpoints and switch times; the price profile is not
/// published and is an artifact choice (see default_price_profile()).
struct HvacCostParams {
    Index outputs = 3;
    Index inputs = 5;
    double sample_time = 60.0;       ///< seconds per stage
    Index stages = 1440;             ///< schedule horizon
    double outdoor_temperature = 15.0;
    double input_weight = 10.0;      ///< lambda_t
    double day_output_weight = 1.0;  ///< Lambda_t = w I_p
    double night_output_weight = 0.1;
    double night_end_hour = 6.0;     ///< night weight on [00:00, night_end)
    double setpoint_before = 18.0;   ///< T^set until switch_hour
    double setpoint_after = 21.0;
    double switch_hour = 9.0;
    std::vector<ProfileKnot> price_profile;  ///< empty -> default_price_profile()
    bool normalize_price = true;             ///< rescale so the daily mean is 1
};

std::vector<ProfileKnot> default_price_profile();

/// Piecewise-linear interpolation of a 24 h profile at `hour` (wraps modulo 24).
double profile_value(const std::vector<ProfileKnot>& knots, double hour);

double hour_of_day(Index t, double sample_time);

/// Price series p_0 .. p_{stages-1}; throws if any price is nonpositive.
std::vector<double> price_series(const HvacCostParams& params);

std::shared_ptr<QuadraticScheduledCost> hvac_cost_schedule(const HvacCostParams& params);

}  // namespace ddoco
