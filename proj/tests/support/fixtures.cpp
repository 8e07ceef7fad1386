#include "fixtures.hpp"

namespace ddoco::fixture {

PlantModel siso_plant() {
    return make_plant(Matrix::Constant(1, 1, 0.5), Matrix::Constant(1, 1, 1.0), Matrix::Constant(1, 1, 1.0),
                      Matrix::Zero(1, 1));
}

Bundle make_bundle(const PlantModel& plant, Index n, Index mu, Index length, std::uint64_t seed) {
    OfflineDataSpec spec;
    spec.length = length;
    spec.seed = seed;
    spec.n = n;
    spec.mu = mu;
    Bundle b{plant, collect_offline_data(plant, spec), nullptr, nullptr};
    b.hankels = std::make_shared<const HankelSet>(build_hankel_set(b.data, n, mu));
    b.projector = std::make_shared<const SteadyStateProjector>(build_projector(b.data, n));
    return b;
}

LoopResult run_loop(const Bundle& bundle, const ControllerConfig& config,
                    std::shared_ptr<const CostFunction> cost, const Vector& x0, NoiseModel noise,
                    Index horizon) {
    DataDrivenController controller(bundle.hankels, *bundle.projector, config);
    ClosedLoopSetup setup{bundle.plant, x0, std::move(noise), std::move(cost), bundle.projector, horizon};
    LoopResult out;
    out.record = run_closed_loop(setup, controller);
    out.log = controller.log();
    return out;
}

ControllerConfig controller_config(Index n, Index mu, double gamma) {
    ControllerConfig c;
    c.n = n;
    c.mu = mu;
    c.gamma = gamma;
    c.check_identities = true;
    return c;
}

std::shared_ptr<PiecewiseQuadraticCost> constant_cost(const Matrix& hessian, const Vector& target, Index m,
                                                      Index p) {
    return std::make_shared<PiecewiseQuadraticCost>(
        m, p, std::vector<PiecewiseQuadraticCost::Segment>{{0, hessian, target}});
}

}  // namespace ddoco::fixture
