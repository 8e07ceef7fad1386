#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ddoco/controller.hpp"
#include "ddoco/costs.hpp"
#include "ddoco/plant.hpp"
#include "ddoco/types.hpp"

namespace ddoco {

enum class PlantKind { kExplicit, kHvac };
enum class CostKind { kHvac, kPiecewiseQuadratic, kLogCosh };

struct PlantSpec {
    PlantKind kind = PlantKind::kExplicit;
    // explicit
    Matrix A;
    Matrix B;
    Matrix C;
    Matrix D;  ///< empty -> zero
    Matrix G;  ///< empty -> identity
    Vector x0;  ///< empty -> zero
    // hvac
    HvacParams hvac;
    double initial_temperature = 17.0;  ///< every zone, degrees C
    double outdoor_temperature = 15.0;
};

struct FaultSpec {
    Index channel = 1;  ///< 1-indexed output channel
    Index start_step = 0;
    Index end_step = 0;  ///< exclusive
    double scale = 1.0;
};

struct NoiseSpec {
    Vector measurement_bound;  ///< one entry, or one per output
    Vector process_bound;      ///< one entry, or one per disturbance channel
    std::uint64_t seed = 1;
    std::optional<FaultSpec> fault;
};

struct CostSpec {
    CostKind kind = CostKind::kPiecewiseQuadratic;
    HvacCostParams hvac;  ///< inputs, outputs and stages are filled in from plant and horizon
    std::vector<PiecewiseQuadraticCost::Segment> segments;
    double rho = 1.0;
    Vector anchor;
    Vector weights;
    Vector centers;
};

struct OfflineSpec {
    Index length = 0;
    double input_low = -1.0;
    double input_high = 1.0;
    std::uint64_t seed = 1;
};

struct ExperimentConfig {
    std::string name = "experiment";
    Index horizon = 0;  ///< T; the run covers t = 0..T
    PlantSpec plant;
    NoiseSpec noise;
    ControllerConfig controller;
    CostSpec cost;
    OfflineSpec offline;
    std::string output_dir;
    bool write_controller_log = false;
};

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);
inline bool operator!=(const ExperimentConfig& a, const ExperimentConfig& b) { return !(a == b); }

/// Throws kParse for malformed JSON and kConfig for schema violations.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);
std::string serialize_config(const ExperimentConfig& config);

/// Consistency checks (dimensions, positivity, data length). Throws kConfig.
void validate(const ExperimentConfig& config);

/// Plant, cost and noise objects described by a config.
PlantModel build_plant(const PlantSpec& spec);
Vector initial_state(const PlantSpec& spec, const PlantModel& model);
std::shared_ptr<const CostFunction> build_cost(const ExperimentConfig& config, const PlantModel& model);
NoiseModel build_noise(const NoiseSpec& spec, const PlantModel& model);

/// Scalar plant x+ = 0.5 x + u, y = x with a two-segment tracking cost.
ExperimentConfig siso_demo_config();

/// Five-zone thermal benchmark over one day with mu = 10 and gamma = 0.15.
ExperimentConfig hvac_default_config();

}  // namespace ddoco
