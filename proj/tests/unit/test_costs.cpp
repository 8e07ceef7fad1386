#include <random>

#include <gtest/gtest.h>

#include "ddoco/costs.hpp"
#include "oracles.hpp"

using namespace ddoco;

namespace {

QuadraticScheduledCost scalar_cost(double input_weight, double setpoint, std::size_t stages = 5) {
    return QuadraticScheduledCost(
        1, {{0, Matrix::Identity(1, 1), input_weight, Vector::Constant(1, setpoint)}},
        std::vector<double>(stages, 1.0));
}

Vector z2(double u, double y) {
    Vector z(2);
    z << u, y;
    return z;
}

double relative_error(const Vector& a, const Vector& b) {
    return (a - b).norm() / std::max(1.0, b.norm());
}

void check_fd(const CostFunction& c, Index t, std::mt19937_64& rng) {
    for (int k = 0; k < 100; ++k) {
        const Vector z = oracle::random_vector(c.dim(), -3, 3, rng);
        const Vector fd = oracle::fd_gradient([&](const Vector& x) { return c.value(t, x); }, z, 1e-6);
        EXPECT_LE(relative_error(c.gradient(t, z), fd), 1e-5);
    }
}

void check_sandwich(const CostFunction& c, Index t, std::mt19937_64& rng) {
    const double a = c.strong_convexity();
    const double l = c.smoothness();
    ASSERT_GT(a, 0.0);
    ASSERT_LE(a, l);
    for (int k = 0; k < 50; ++k) {
        const Vector x = oracle::random_vector(c.dim(), -3, 3, rng);
        const Vector y = oracle::random_vector(c.dim(), -3, 3, rng);
        const double lin = c.value(t, x) + c.gradient(t, x).dot(y - x);
        const double d2 = (y - x).squaredNorm();
        EXPECT_GE(c.value(t, y), lin + 0.5 * a * d2 - 1e-9);
        EXPECT_LE(c.value(t, y), lin + 0.5 * l * d2 + 1e-9);
    }
}

}  // namespace

TEST(QuadraticScheduled, ValueExamples) {
    const auto c = scalar_cost(10.0, 3.0);
    EXPECT_DOUBLE_EQ(c.value(0, z2(0.0, 3.0)), 0.0);
    EXPECT_DOUBLE_EQ(eval_cost(c, 0, z2(1.0, 0.0)), 9.5);
    const auto doubled = scalar_cost(20.0, 3.0);
    EXPECT_DOUBLE_EQ(doubled.value(0, z2(1.0, 3.0)), 2.0 * c.value(0, z2(1.0, 3.0)));
}

TEST(QuadraticScheduled, GradientExamples) {
    const auto c = scalar_cost(10.0, 3.0);
    EXPECT_EQ(c.gradient(0, z2(0.0, 3.0)), Vector::Zero(2));
    EXPECT_EQ(grad_cost(c, 0, z2(1.0, 0.0)), z2(10.0, -3.0));
}

TEST(QuadraticScheduled, HorizonAndDimension) {
    const auto c = scalar_cost(10.0, 3.0, 5);
    try {
        c.value(5, z2(0, 0));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::kHorizonExceeded);
    }
    EXPECT_THROW(c.gradient(0, Vector::Zero(3)), Error);
    EXPECT_THROW(c.value(-1, z2(0, 0)), Error);
}

TEST(QuadraticScheduled, RejectsBadSchedules) {
    const Vector r = Vector::Constant(1, 1.0);
    const Matrix w = Matrix::Identity(1, 1);
    EXPECT_THROW(QuadraticScheduledCost(1, {{1, w, 1.0, r}}, {1.0}), Error);
    EXPECT_THROW(QuadraticScheduledCost(1, {{0, w, 1.0, r}, {0, w, 1.0, r}}, {1.0, 1.0}), Error);
    EXPECT_THROW(QuadraticScheduledCost(1, {{0, w, 1.0, r}}, {1.0, -2.0}), Error);
    EXPECT_THROW(QuadraticScheduledCost(1, {{0, Matrix::Zero(1, 1), 1.0, r}}, {1.0}), Error);
}

TEST(QuadraticScheduled, ModuliCoverEveryStage) {
    std::vector<double> price{0.5, 1.0, 2.0, 1.5};
    QuadraticScheduledCost c(2, {{0, 3.0 * Matrix::Identity(1, 1), 1.0, Vector::Zero(1)},
                                 {2, 0.2 * Matrix::Identity(1, 1), 4.0, Vector::Ones(1)}},
                             price);
    EXPECT_DOUBLE_EQ(c.strong_convexity(), 0.2);
    EXPECT_DOUBLE_EQ(c.smoothness(), 8.0);
    std::mt19937_64 rng(1);
    for (Index t = 0; t < 4; ++t) {
        check_sandwich(c, t, rng);
        const auto q = c.quadratic_form(t);
        ASSERT_TRUE(q);
        Eigen::SelfAdjointEigenSolver<Matrix> eig(q->hessian);
        EXPECT_GE(eig.eigenvalues().minCoeff(), c.strong_convexity() - 1e-12);
        EXPECT_LE(eig.eigenvalues().maxCoeff(), c.smoothness() + 1e-12);
    }
}

TEST(QuadraticScheduled, QuadraticFormMatchesValue) {
    HvacCostParams p;
    const auto c = hvac_cost_schedule(p);
    std::mt19937_64 rng(2);
    for (Index t : {0, 400, 700, 1439}) {
        const auto q = c->quadratic_form(t);
        ASSERT_TRUE(q);
        for (int k = 0; k < 5; ++k) {
            const Vector z = oracle::random_vector(8, -5, 5, rng);
            EXPECT_NEAR(0.5 * z.dot(q->hessian * z) + q->linear.dot(z) + q->constant, c->value(t, z), 1e-9);
        }
    }
}

TEST(QuadraticScheduled, FiniteDifferences) {
    HvacCostParams p;
    const auto c = hvac_cost_schedule(p);
    std::mt19937_64 rng(3);
    for (Index t : {10, 500, 1000}) check_fd(*c, t, rng);
}

TEST(PiecewiseQuadratic, FiniteDifferencesAndSandwich) {
    std::mt19937_64 rng(4);
    PiecewiseQuadraticCost c(2, 1, {{0, oracle::random_spd(3, 0.5, 2.0, rng), oracle::random_vector(3, -1, 1, rng)},
                                    {10, oracle::random_spd(3, 1.0, 4.0, rng), oracle::random_vector(3, -1, 1, rng)}});
    EXPECT_DOUBLE_EQ(c.strong_convexity(), 0.5);
    EXPECT_DOUBLE_EQ(c.smoothness(), 4.0);
    check_fd(c, 3, rng);
    check_fd(c, 1000, rng);
    check_sandwich(c, 3, rng);
    check_sandwich(c, 12, rng);
    EXPECT_EQ(c.stage_key(0), c.stage_key(9));
    EXPECT_NE(c.stage_key(9), c.stage_key(10));
    EXPECT_FALSE(c.horizon());
}

TEST(LogCosh, FiniteDifferencesAndSandwich) {
    std::mt19937_64 rng(5);
    LogCoshCost c(1, 2, 0.7, oracle::random_vector(3, -1, 1, rng), oracle::random_vector(3, 0, 2, rng),
                  oracle::random_vector(3, -1, 1, rng));
    EXPECT_FALSE(c.quadratic_form(0));
    check_fd(c, 0, rng);
    check_sandwich(c, 0, rng);
}

TEST(StageCost, BindsOneStage) {
    auto c = std::make_shared<QuadraticScheduledCost>(scalar_cost(10.0, 3.0, 3));
    const StageCost s(c, 2);
    EXPECT_EQ(s.time(), 2);
    EXPECT_DOUBLE_EQ(s.value(z2(1.0, 0.0)), 9.5);
    EXPECT_THROW(StageCost(c, 3).value(z2(0, 0)), Error);
}

TEST(HvacSchedule, ClockExamples) {
    HvacCostParams p;
    const auto c = hvac_cost_schedule(p);
    const Index three_am = 3 * 60, seven_am = 7 * 60, ten_am = 10 * 60;
    EXPECT_EQ(c->segment_at(three_am).output_weight, 0.1 * Matrix::Identity(3, 3));
    EXPECT_EQ(c->segment_at(seven_am).output_weight, Matrix::Identity(3, 3));
    EXPECT_EQ(c->segment_at(ten_am).setpoint, Vector::Constant(3, 6.0));
    EXPECT_EQ(c->segment_at(seven_am).setpoint, Vector::Constant(3, 3.0));
    EXPECT_EQ(c->segment_at(0).setpoint, Vector::Constant(3, 3.0));
    EXPECT_DOUBLE_EQ(c->segment_at(ten_am).input_weight, 10.0);
    // Half-open night window and switch instant.
    EXPECT_EQ(c->segment_at(6 * 60 - 1).output_weight, 0.1 * Matrix::Identity(3, 3));
    EXPECT_EQ(c->segment_at(6 * 60).output_weight, Matrix::Identity(3, 3));
    EXPECT_EQ(c->segment_at(9 * 60 - 1).setpoint, Vector::Constant(3, 3.0));
    EXPECT_EQ(c->segment_at(9 * 60).setpoint, Vector::Constant(3, 6.0));
    EXPECT_EQ(c->horizon(), 1440);
}

TEST(HvacSchedule, PriceNormalizationAndStepBound) {
    HvacCostParams p;
    const auto prices = price_series(p);
    ASSERT_EQ(prices.size(), 1440u);
    double mean = 0.0;
    for (double x : prices) mean += x;
    EXPECT_NEAR(mean / 1440.0, 1.0, 1e-12);
    const auto c = hvac_cost_schedule(p);
    // The shipped profile keeps gamma = 0.15 within 2 / (alpha_z + l_z).
    EXPECT_LE(0.15, 2.0 / (c->strong_convexity() + c->smoothness()));
}

TEST(HvacSchedule, RepeatsDaily) {
    HvacCostParams p;
    p.stages = 2 * 1440;
    const auto c = hvac_cost_schedule(p);
    EXPECT_EQ(c->segment_at(1440 + 3 * 60).output_weight, 0.1 * Matrix::Identity(3, 3));
    EXPECT_EQ(c->segment_at(1440 + 8 * 60).setpoint, Vector::Constant(3, 3.0));
    EXPECT_DOUBLE_EQ(c->price(100), c->price(1540));
}

TEST(HvacSchedule, NonpositivePriceRejected) {
    HvacCostParams p;
    p.price_profile = {{0.0, 1.0}, {12.0, 0.0}, {24.0, 1.0}};
    EXPECT_THROW(hvac_cost_schedule(p), Error);
}

TEST(Profile, InterpolatesAndWraps) {
    const std::vector<ProfileKnot> knots{{0.0, 1.0}, {12.0, 3.0}, {24.0, 1.0}};
    EXPECT_DOUBLE_EQ(profile_value(knots, 6.0), 2.0);
    EXPECT_DOUBLE_EQ(profile_value(knots, 30.0), 2.0);
    EXPECT_DOUBLE_EQ(hour_of_day(90, 60.0), 1.5);
    EXPECT_DOUBLE_EQ(hour_of_day(1440 + 60, 60.0), 1.0);
}
