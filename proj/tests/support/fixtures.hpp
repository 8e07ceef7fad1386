#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "ddoco/behavioral.hpp"
#include "ddoco/controller.hpp"
#include "ddoco/costs.hpp"
#include "ddoco/harness.hpp"
#include "ddoco/metrics.hpp"
#include "ddoco/plant.hpp"
#include "ddoco/steady_state.hpp"

namespace ddoco::fixture {

/// x+ = 0.5 x + u, y = x.
PlantModel siso_plant();

struct Bundle {
    PlantModel plant;
    Trajectory data;
    std::shared_ptr<const HankelSet> hankels;
    std::shared_ptr<const SteadyStateProjector> projector;
};

Bundle make_bundle(const PlantModel& plant, Index n, Index mu, Index length, std::uint64_t seed);

struct LoopResult {
    RunRecord record;
    std::vector<StepLog> log;
};

LoopResult run_loop(const Bundle& bundle, const ControllerConfig& config,
                    std::shared_ptr<const CostFunction> cost, const Vector& x0, NoiseModel noise,
                    Index horizon);

ControllerConfig controller_config(Index n, Index mu, double gamma);

/// 0.5 (z - r)' H (z - r) with one segment.
std::shared_ptr<PiecewiseQuadraticCost> constant_cost(const Matrix& hessian, const Vector& target, Index m,
                                                      Index p);

}  // namespace ddoco::fixture
