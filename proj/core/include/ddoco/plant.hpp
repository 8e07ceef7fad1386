#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "ddoco/behavioral.hpp"
#include "ddoco/steady_state.hpp"
#include "ddoco/types.hpp"

namespace ddoco {

/// x+ = A x + B u + G q,  y = C x + D u.
/// G defaults to the identity (process noise acts directly on the state).
struct PlantModel {
    Matrix A;
    Matrix B;
    Matrix C;
    Matrix D;
    Matrix G;

    Index states() const { return A.rows(); }
    Index inputs() const { return B.cols(); }
    Index outputs() const { return C.rows(); }
    Index disturbances() const { return G.cols(); }
};

struct PlantChecks {
    bool require_stable = true;
    bool require_controllable = true;
    bool require_observable = true;
};

/// Validates dimensions and, unless disabled, Schur stability, controllability
/// and observability. An empty G becomes I_n.
PlantModel make_plant(Matrix A, Matrix B, Matrix C, Matrix D, Matrix G = Matrix(),
                      PlantChecks checks = {});

double spectral_radius(const Matrix& a);
Matrix controllability_matrix(const Matrix& a, const Matrix& b, Index steps);
Matrix observability_matrix(const Matrix& a, const Matrix& c, Index steps);
/// Smallest k with rank [B, AB, ..., A^{k-1}B] = n, or nullopt if uncontrollable.
std::optional<Index> controllability_index(const Matrix& a, const Matrix& b);

/// Static gain C (I - A)^{-1} B + D.
Matrix dc_gain(const PlantModel& model);

/// Steady-state manifold {(u, G u)} from the model, as S = [G, -I] with its
/// projector and orthonormal basis. Used as ground truth against the data.
SteadyStateProjector model_projector(const PlantModel& model, Index n);

struct StepResult {
    Vector next_state;
    Vector output;           ///< y = C x + D u
    Vector measured_output;  ///< y + e
};

StepResult step(const PlantModel& model, const Vector& x, const Vector& u,
                const Vector& measurement_noise, const Vector& process_noise);

/// Interval [start, end) of steps during which the bound of one measurement
/// channel is multiplied by `scale`.
struct SensorFault {
    Index channel = 0;  ///< 0-indexed output channel
    Index start = 0;
    Index end = 0;
    double scale = 1.0;
};

/// Uniform noise on symmetric boxes [-bound, bound], one bound per channel
/// (zero bound means no noise on that channel). Measurement and process
/// noise are drawn from separate engines so one stream never shifts the other.
class NoiseModel {
public:
    NoiseModel(Vector measurement_bound, Vector process_bound, std::uint64_t seed,
               std::vector<SensorFault> faults = {});

    static NoiseModel none(Index outputs, Index disturbances);

    Vector measurement_bound(Index t) const;
    const Vector& process_bound() const { return process_bound_; }
    std::uint64_t seed() const { return seed_; }

    /// Draws e_t. Call once per step, in time order.
    Vector sample_measurement(Index t);
    Vector sample_process();

private:
    Vector measurement_bound_;
    Vector process_bound_;
    std::uint64_t seed_;
    std::vector<SensorFault> faults_;
    std::mt19937_64 measurement_engine_;
    std::mt19937_64 process_engine_;
};

struct OfflineDataSpec {
    Index length = 0;
    double input_low = -1.0;
    double input_high = 1.0;
    std::uint64_t seed = 1;
    Index n = 1;   ///< order bound the data is collected for
    Index mu = 1;  ///< prediction horizon the data is collected for
    int max_attempts = 5;
};

/// Minimum data length for persistency of excitation of order 3n + mu + 1.
Index minimum_data_length(Index inputs, Index n, Index mu);

/// Noise-free rollout from x = 0 with i.i.d. uniform inputs. Retries with a
/// fresh seed until the input is persistently exciting of order 3n + mu + 1.
Trajectory collect_offline_data(const PlantModel& model, const OfflineDataSpec& spec);

/// Exact zero-order-hold discretization via the block matrix exponential.
std::pair<Matrix, Matrix> discretize_zoh(const Matrix& a_c, const Matrix& b_c, double sample_time);

struct ZoneCoupling {
    Index a = 0;  ///< 1-indexed zone
    Index b = 0;  ///< 1-indexed zone
    double resistance = 0.0;
};

/// Multi-zone RC thermal model C_i dT_i = (T^o - T_i)/R_i + sum_j (T_j - T_i)/R_ij + u_i + q_i
/// in deviation coordinates x_i = T_i - T^o. Parameter defaults are artifact
/// choices (time constants of tens of minutes); only the structure, the
/// sensor placement, R_3 = inf and t_s = 60 s are fixed by the benchmark.
struct HvacParams {
    std::vector<double> capacitance{200.0, 150.0, 120.0, 180.0, 160.0};  ///< kJ/K
    std::vector<double> outdoor_resistance{10.0, 12.0, std::numeric_limits<double>::infinity(),
                                           11.0, 9.0};  ///< K/kW, inf = no outdoor coupling
    std::vector<ZoneCoupling> couplings{{1, 2, 6.0}, {1, 3, 7.0}, {1, 4, 6.5},
                                        {2, 3, 5.5}, {3, 5, 6.0}, {4, 5, 7.5}};
    std::vector<Index> sensors{1, 4, 5};  ///< 1-indexed measured zones
    double sample_time = 60.0;           ///< seconds
};

struct HvacContinuous {
    Matrix A;
    Matrix B;
};

HvacContinuous hvac_continuous(const HvacParams& params);

/// Discretized thermal model; the process noise enters through B like the input.
PlantModel build_hvac(const HvacParams& params);

/// Random stable system with well-separated real poles of magnitude in
/// [0.1, max_radius], in a random orthonormal basis; B, C, D Gaussian.
PlantModel random_stable_system(Index n, Index m, Index p, std::mt19937_64& rng,
                                double max_radius = 0.8, bool feedthrough = true);

}  // namespace ddoco
