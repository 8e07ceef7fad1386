#include <random>

#include <gtest/gtest.h>

#include "ddoco/linalg.hpp"
#include "ddoco/steady_state.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace ddoco;

namespace {

SteadyStateProjector siso_projector() {
    return *fixture::make_bundle(fixture::siso_plant(), 1, 1, 40, 1).projector;
}

StageCost stage(std::shared_ptr<const CostFunction> f) { return StageCost(std::move(f), 0); }

}  // namespace

TEST(Projector, SisoReferencePlant) {
    const SteadyStateProjector proj = siso_projector();
    Matrix expected(2, 2);
    expected << 0.2, 0.4, 0.4, 0.8;
    EXPECT_LE((proj.P - expected).cwiseAbs().maxCoeff(), 1e-8);
    ASSERT_EQ(proj.manifold_dim(), 1);
    Vector dir(2);
    dir << 1.0, 2.0;
    EXPECT_NEAR(std::abs(proj.basis.col(0).dot(dir.normalized())), 1.0, 1e-10);
    EXPECT_EQ(proj.S.rows(), 2 * 2);
    EXPECT_EQ(proj.S.cols(), 2);
}

TEST(Projector, Invariants) {
    std::mt19937_64 rng(5);
    for (int k = 0; k < 5; ++k) {
        const PlantModel plant = random_stable_system(3, 2, 2, rng);
        const auto b = fixture::make_bundle(plant, 3, 1, 150, 10 + k);
        const SteadyStateProjector& proj = *b.projector;
        EXPECT_LE((proj.P - proj.P.transpose()).norm(), 1e-10);
        EXPECT_LE((proj.P * proj.P - proj.P).norm(), 1e-10);
        EXPECT_LE((proj.S * proj.basis).cwiseAbs().maxCoeff(), 1e-9);
        EXPECT_LE((proj.P * proj.basis - proj.basis).norm(), 1e-10);
        EXPECT_EQ(proj.manifold_dim(), 2);
    }
}

TEST(Projector, OriginIsSteadyState) {
    const SteadyStateProjector proj = siso_projector();
    EXPECT_EQ((proj.S * Vector::Zero(2)).norm(), 0.0);
}

TEST(Projector, NullityAgainstSvdOracle) {
    std::mt19937_64 rng(6);
    for (int k = 0; k < 5; ++k) {
        const PlantModel plant = random_stable_system(1 + k % 4, 1, 1, rng);
        const auto b = fixture::make_bundle(plant, plant.states(), 1, 80, 30 + k);
        EXPECT_EQ(b.projector->manifold_dim(), 1);
        EXPECT_EQ(2 - oracle::jacobi_rank(b.projector->S), 1);
    }
}

TEST(Projector, ModelSteadyStatesLieOnManifold) {
    std::mt19937_64 rng(7);
    const PlantModel plant = random_stable_system(4, 2, 2, rng);
    const auto b = fixture::make_bundle(plant, 4, 1, 200, 3);
    for (int k = 0; k < 10; ++k) {
        const Vector u = oracle::random_vector(2, -2, 2, rng);
        Vector z(4);
        z << u, oracle::model_steady_output(plant, u);
        EXPECT_LE((b.projector->S * z).norm(), 1e-7);
        EXPECT_LE((project(*b.projector, z) - z).norm(), 1e-8);
    }
}

TEST(Projector, PersistencyViolation) {
    const Trajectory flat(Matrix::Constant(1, 30, 1.0), Matrix::Constant(1, 30, 2.0));
    try {
        build_projector(flat, 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::kPersistencyViolation);
    }
}

TEST(Projector, DegenerateData) {
    const Trajectory one(Matrix::Constant(1, 1, 1.0), Matrix::Constant(1, 1, 2.0));
    try {
        build_projector(one, 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::kDegenerateData);
    }
}

TEST(Project, Examples) {
    const SteadyStateProjector proj = siso_projector();
    Vector on(2);
    on << 0.3, 0.6;
    EXPECT_LE((project(proj, on) - on).norm(), 1e-10);
    EXPECT_LE(project(proj, Vector::Zero(2)).norm(), 1e-15);
    Vector z(2);
    z << 1.0, 0.0;
    Vector expected(2);
    expected << 0.2, 0.4;
    EXPECT_LE((project(proj, z) - expected).norm(), 1e-8);
    EXPECT_THROW(project(proj, Vector::Zero(3)), Error);
}

TEST(Project, NearestPointAndNonExpansive) {
    std::mt19937_64 rng(8);
    const PlantModel plant = random_stable_system(3, 2, 1, rng);
    const auto b = fixture::make_bundle(plant, 3, 1, 150, 4);
    const SteadyStateProjector& proj = *b.projector;
    for (int k = 0; k < 20; ++k) {
        const Vector z1 = oracle::random_vector(3, -3, 3, rng);
        const Vector z2 = oracle::random_vector(3, -3, 3, rng);
        const Vector p1 = project(proj, z1);
        EXPECT_LE((proj.S * p1).norm(), 1e-8 * z1.norm());
        EXPECT_LE((p1 - project(proj, z2)).norm(), (z1 - z2).norm() + 1e-12);
        // Any other manifold point is at least as far.
        const Vector other = proj.basis * oracle::random_vector(proj.manifold_dim(), -3, 3, rng);
        EXPECT_LE((p1 - z1).norm(), (other - z1).norm() + 1e-12);
    }
}

TEST(OptimalSteadyState, SisoCalculus) {
    const SteadyStateProjector proj = siso_projector();
    for (double r : {1.0, -0.5, 3.0}) {
        for (double lambda : {10.0, 0.5}) {
            Matrix h(2, 2);
            h << lambda, 0.0, 0.0, 1.0;
            Vector target(2);
            target << 0.0, r;
            const Vector zeta = optimal_steady_state(proj, stage(fixture::constant_cost(h, target, 1, 1)));
            const double eta = 2.0 * r / (4.0 + lambda);
            EXPECT_NEAR(zeta(0), eta, 1e-10);
            EXPECT_NEAR(zeta(1), 2.0 * eta, 1e-10);
        }
    }
    Matrix h(2, 2);
    h << 10.0, 0.0, 0.0, 1.0;
    const Vector zeta = optimal_steady_state(proj, stage(fixture::constant_cost(h, Vector::Unit(2, 1), 1, 1)));
    EXPECT_NEAR(zeta(0), 1.0 / 7.0, 1e-12);
    EXPECT_NEAR(zeta(1), 2.0 / 7.0, 1e-12);
}

TEST(OptimalSteadyState, TrivialCases) {
    const SteadyStateProjector proj = siso_projector();
    const Matrix eye = Matrix::Identity(2, 2);
    EXPECT_LE(optimal_steady_state(proj, stage(fixture::constant_cost(eye, Vector::Zero(2), 1, 1))).norm(), 1e-14);
    Vector z0(2);
    z0 << -0.7, -1.4;
    EXPECT_LE((optimal_steady_state(proj, stage(fixture::constant_cost(eye, z0, 1, 1))) - z0).norm(), 1e-12);
}

TEST(OptimalSteadyState, FirstOrderOptimalityAndOracle) {
    std::mt19937_64 rng(9);
    const PlantModel plant = random_stable_system(3, 2, 2, rng);
    const auto b = fixture::make_bundle(plant, 3, 1, 150, 6);
    for (int k = 0; k < 10; ++k) {
        const Matrix h = oracle::random_spd(4, 0.5, 3.0, rng);
        const Vector r = oracle::random_vector(4, -2, 2, rng);
        auto cost = fixture::constant_cost(h, r, 2, 2);
        const Vector zeta = optimal_steady_state(*b.projector, stage(cost));
        EXPECT_LE((b.projector->P * cost->gradient(0, zeta)).norm(), 1e-8);

        Matrix graph(4, 2);
        graph << Matrix::Identity(2, 2), oracle::model_steady_output(plant, Vector::Unit(2, 0)),
            oracle::model_steady_output(plant, Vector::Unit(2, 1));
        EXPECT_LE((zeta - oracle::constrained_quadratic_min(h, r, graph)).norm(), 1e-7);
    }
}

TEST(OptimalSteadyState, IterativeFallbackForNonQuadratic) {
    const SteadyStateProjector proj = siso_projector();
    Vector anchor(2), weights(2), centers(2);
    anchor << 0.5, 1.0;
    weights << 1.0, 2.0;
    centers << -0.3, 0.7;
    auto cost = std::make_shared<LogCoshCost>(1, 1, 0.5, anchor, weights, centers);
    const Vector zeta = optimal_steady_state(proj, stage(cost));
    EXPECT_LE((proj.S * zeta).norm(), 1e-9);
    EXPECT_LE((proj.P * cost->gradient(0, zeta)).norm(), 1e-9);
}
