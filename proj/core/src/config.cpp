#include "ddoco/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

namespace ddoco {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorCode::kConfig, msg); }

void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) fail(where + " must be an object");
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (const char* a : allowed) known = known || key == a;
        if (!known) fail("unknown key '" + key + "' in " + where);
    }
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key) || j.at(key).is_null()) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        fail(std::string("field '") + key + "' has the wrong type");
    }
}

const json& require(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) fail("missing field '" + std::string(key) + "' in " + where);
    return j.at(key);
}

Vector vector_from_json(const json& j, const std::string& what) {
    if (j.is_number()) return Vector::Constant(1, j.get<double>());
    if (!j.is_array()) fail(what + " must be a number or an array");
    Vector v(static_cast<Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) fail(what + " must contain numbers");
        v(static_cast<Index>(i)) = j[i].get<double>();
    }
    return v;
}

Matrix matrix_from_json(const json& j, const std::string& what) {
    if (!j.is_array()) fail(what + " must be an array of rows");
    const auto rows = static_cast<Index>(j.size());
    if (rows == 0) return Matrix();
    if (!j[0].is_array()) fail(what + " must be an array of rows");
    const auto cols = static_cast<Index>(j[0].size());
    Matrix m(rows, cols);
    for (Index r = 0; r < rows; ++r) {
        const json& row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Index>(row.size()) != cols) fail(what + " rows differ in length");
        for (Index c = 0; c < cols; ++c) {
            const json& x = row[static_cast<std::size_t>(c)];
            if (!x.is_number()) fail(what + " must contain numbers");
            m(r, c) = x.get<double>();
        }
    }
    return m;
}

json to_json_vector(const Vector& v) {
    json out = json::array();
    for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

json to_json_matrix(const Matrix& m) {
    json out = json::array();
    for (Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        out.push_back(row);
    }
    return out;
}

bool same(const Matrix& a, const Matrix& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() && (a.size() == 0 || a == b);
}

// ----- plant ---------------------------------------------------------------

PlantSpec plant_from_json(const json& j) {
    PlantSpec spec;
    const std::string type = get_or<std::string>(j, "type", "explicit");
    if (type == "explicit") {
        check_keys(j, "plant", {"type", "A", "B", "C", "D", "G", "x0"});
        spec.kind = PlantKind::kExplicit;
        spec.A = matrix_from_json(require(j, "A", "plant"), "plant.A");
        spec.B = matrix_from_json(require(j, "B", "plant"), "plant.B");
        spec.C = matrix_from_json(require(j, "C", "plant"), "plant.C");
        if (j.contains("D")) spec.D = matrix_from_json(j.at("D"), "plant.D");
        if (j.contains("G")) spec.G = matrix_from_json(j.at("G"), "plant.G");
        if (j.contains("x0")) spec.x0 = vector_from_json(j.at("x0"), "plant.x0");
    } else if (type == "hvac") {
        check_keys(j, "plant", {"type", "capacitance", "outdoor_resistance", "couplings", "sensors",
                                "sample_time", "initial_temperature", "outdoor_temperature"});
        spec.kind = PlantKind::kHvac;
        HvacParams& h = spec.hvac;
        h.capacitance = get_or(j, "capacitance", h.capacitance);
        if (j.contains("outdoor_resistance")) {
            const json& r = j.at("outdoor_resistance");
            if (!r.is_array()) fail("plant.outdoor_resistance must be an array");
            h.outdoor_resistance.clear();
            for (const json& x : r) {
                if (x.is_null()) {
                    h.outdoor_resistance.push_back(std::numeric_limits<double>::infinity());
                } else if (x.is_number()) {
                    h.outdoor_resistance.push_back(x.get<double>());
                } else {
                    fail("plant.outdoor_resistance entries must be numbers or null");
                }
            }
        }
        if (j.contains("couplings")) {
            const json& c = j.at("couplings");
            if (!c.is_array()) fail("plant.couplings must be an array");
            h.couplings.clear();
            for (const json& e : c) {
                if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() ||
                    !e[1].is_number_integer() || !e[2].is_number()) {
                    fail("plant.couplings entries must be [zone, zone, resistance]");
                }
                h.couplings.push_back({e[0].get<Index>(), e[1].get<Index>(), e[2].get<double>()});
            }
        }
        h.sensors = get_or(j, "sensors", h.sensors);
        h.sample_time = get_or(j, "sample_time", h.sample_time);
        spec.initial_temperature = get_or(j, "initial_temperature", spec.initial_temperature);
        spec.outdoor_temperature = get_or(j, "outdoor_temperature", spec.outdoor_temperature);
    } else {
        fail("unknown plant type '" + type + "'");
    }
    return spec;
}

json plant_to_json(const PlantSpec& spec) {
    json j;
    if (spec.kind == PlantKind::kExplicit) {
        j["type"] = "explicit";
        j["A"] = to_json_matrix(spec.A);
        j["B"] = to_json_matrix(spec.B);
        j["C"] = to_json_matrix(spec.C);
        if (spec.D.size() > 0) j["D"] = to_json_matrix(spec.D);
        if (spec.G.size() > 0) j["G"] = to_json_matrix(spec.G);
        if (spec.x0.size() > 0) j["x0"] = to_json_vector(spec.x0);
        return j;
    }
    const HvacParams& h = spec.hvac;
    j["type"] = "hvac";
    j["capacitance"] = h.capacitance;
    json r = json::array();
    for (double x : h.outdoor_resistance) r.push_back(std::isinf(x) ? json(nullptr) : json(x));
    j["outdoor_resistance"] = r;
    json c = json::array();
    for (const auto& e : h.couplings) c.push_back(json::array({e.a, e.b, e.resistance}));
    j["couplings"] = c;
    j["sensors"] = h.sensors;
    j["sample_time"] = h.sample_time;
    j["initial_temperature"] = spec.initial_temperature;
    j["outdoor_temperature"] = spec.outdoor_temperature;
    return j;
}

// ----- noise ---------------------------------------------------------------

NoiseSpec noise_from_json(const json& j) {
    check_keys(j, "noise", {"measurement_bound", "process_bound", "seed", "sensor_fault"});
    NoiseSpec spec;
    if (j.contains("measurement_bound")) {
        spec.measurement_bound = vector_from_json(j.at("measurement_bound"), "noise.measurement_bound");
    }
    if (j.contains("process_bound")) {
        spec.process_bound = vector_from_json(j.at("process_bound"), "noise.process_bound");
    }
    spec.seed = get_or<std::uint64_t>(j, "seed", spec.seed);
    if (j.contains("sensor_fault") && !j.at("sensor_fault").is_null()) {
        const json& f = j.at("sensor_fault");
        check_keys(f, "noise.sensor_fault", {"channel", "start_step", "end_step", "scale"});
        FaultSpec fault;
        fault.channel = get_or(f, "channel", fault.channel);
        fault.start_step = get_or(f, "start_step", fault.start_step);
        fault.end_step = get_or(f, "end_step", fault.end_step);
        fault.scale = get_or(f, "scale", fault.scale);
        spec.fault = fault;
    }
    return spec;
}

json noise_to_json(const NoiseSpec& spec) {
    json j;
    j["measurement_bound"] = to_json_vector(spec.measurement_bound);
    j["process_bound"] = to_json_vector(spec.process_bound);
    j["seed"] = spec.seed;
    if (spec.fault) {
        j["sensor_fault"] = {{"channel", spec.fault->channel},
                             {"start_step", spec.fault->start_step},
                             {"end_step", spec.fault->end_step},
                             {"scale", spec.fault->scale}};
    } else {
        j["sensor_fault"] = nullptr;
    }
    return j;
}

// ----- controller ----------------------------------------------------------

ControllerConfig controller_from_json(const json& j) {
    check_keys(j, "controller", {"gamma", "mu", "n", "weight", "init", "lambda_init", "check_identities"});
    ControllerConfig c;
    c.gamma = get_or(j, "gamma", c.gamma);
    c.mu = get_or(j, "mu", c.mu);
    c.n = get_or(j, "n", c.n);
    c.weight = weight_mode_from_string(get_or<std::string>(j, "weight", to_string(c.weight)));
    c.init = init_mode_from_string(get_or<std::string>(j, "init", to_string(c.init)));
    c.lambda_init = get_or(j, "lambda_init", c.lambda_init);
    c.check_identities = get_or(j, "check_identities", c.check_identities);
    return c;
}

json controller_to_json(const ControllerConfig& c) {
    return {{"gamma", c.gamma},       {"mu", c.mu},
            {"n", c.n},               {"weight", to_string(c.weight)},
            {"init", to_string(c.init)}, {"lambda_init", c.lambda_init},
            {"check_identities", c.check_identities}};
}

// ----- cost ----------------------------------------------------------------

CostSpec cost_from_json(const json& j) {
    CostSpec spec;
    const std::string type = get_or<std::string>(j, "type", "piecewise_quadratic");
    if (type == "hvac") {
        check_keys(j, "cost", {"type", "outdoor_temperature", "input_weight", "day_output_weight",
                               "night_output_weight", "night_end_hour", "setpoint_before",
                               "setpoint_after", "switch_hour", "price_profile", "normalize_price"});
        spec.kind = CostKind::kHvac;
        HvacCostParams& h = spec.hvac;
        h.outdoor_temperature = get_or(j, "outdoor_temperature", h.outdoor_temperature);
        h.input_weight = get_or(j, "input_weight", h.input_weight);
        h.day_output_weight = get_or(j, "day_output_weight", h.day_output_weight);
        h.night_output_weight = get_or(j, "night_output_weight", h.night_output_weight);
        h.night_end_hour = get_or(j, "night_end_hour", h.night_end_hour);
        h.setpoint_before = get_or(j, "setpoint_before", h.setpoint_before);
        h.setpoint_after = get_or(j, "setpoint_after", h.setpoint_after);
        h.switch_hour = get_or(j, "switch_hour", h.switch_hour);
        h.normalize_price = get_or(j, "normalize_price", h.normalize_price);
        if (j.contains("price_profile")) {
            const json& k = j.at("price_profile");
            if (!k.is_array()) fail("cost.price_profile must be an array of [hour, value]");
            for (const json& e : k) {
                if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
                    fail("cost.price_profile entries must be [hour, value]");
                }
                h.price_profile.emplace_back(e[0].get<double>(), e[1].get<double>());
            }
        }
    } else if (type == "piecewise_quadratic") {
        check_keys(j, "cost", {"type", "segments"});
        spec.kind = CostKind::kPiecewiseQuadratic;
        const json& segs = require(j, "segments", "cost");
        if (!segs.is_array()) fail("cost.segments must be an array");
        for (const json& s : segs) {
            check_keys(s, "cost segment", {"start", "hessian", "target"});
            PiecewiseQuadraticCost::Segment seg;
            seg.start = get_or<Index>(s, "start", 0);
            seg.hessian = matrix_from_json(require(s, "hessian", "cost segment"), "cost.hessian");
            seg.target = vector_from_json(require(s, "target", "cost segment"), "cost.target");
            spec.segments.push_back(std::move(seg));
        }
    } else if (type == "log_cosh") {
        check_keys(j, "cost", {"type", "rho", "anchor", "weights", "centers"});
        spec.kind = CostKind::kLogCosh;
        spec.rho = get_or(j, "rho", spec.rho);
        spec.anchor = vector_from_json(require(j, "anchor", "cost"), "cost.anchor");
        spec.weights = vector_from_json(require(j, "weights", "cost"), "cost.weights");
        spec.centers = vector_from_json(require(j, "centers", "cost"), "cost.centers");
    } else {
        fail("unknown cost type '" + type + "'");
    }
    return spec;
}

json cost_to_json(const CostSpec& spec) {
    json j;
    switch (spec.kind) {
        case CostKind::kHvac: {
            const HvacCostParams& h = spec.hvac;
            j["type"] = "hvac";
            j["outdoor_temperature"] = h.outdoor_temperature;
            j["input_weight"] = h.input_weight;
            j["day_output_weight"] = h.day_output_weight;
            j["night_output_weight"] = h.night_output_weight;
            j["night_end_hour"] = h.night_end_hour;
            j["setpoint_before"] = h.setpoint_before;
            j["setpoint_after"] = h.setpoint_after;
            j["switch_hour"] = h.switch_hour;
            j["normalize_price"] = h.normalize_price;
            json k = json::array();
            for (const auto& [hour, value] : h.price_profile) k.push_back(json::array({hour, value}));
            j["price_profile"] = k;
            break;
        }
        case CostKind::kPiecewiseQuadratic: {
            j["type"] = "piecewise_quadratic";
            json segs = json::array();
            for (const auto& s : spec.segments) {
                segs.push_back({{"start", s.start},
                                {"hessian", to_json_matrix(s.hessian)},
                                {"target", to_json_vector(s.target)}});
            }
            j["segments"] = segs;
            break;
        }
        case CostKind::kLogCosh:
            j["type"] = "log_cosh";
            j["rho"] = spec.rho;
            j["anchor"] = to_json_vector(spec.anchor);
            j["weights"] = to_json_vector(spec.weights);
            j["centers"] = to_json_vector(spec.centers);
            break;
    }
    return j;
}

bool same_cost(const CostSpec& a, const CostSpec& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case CostKind::kHvac: {
            const HvacCostParams& x = a.hvac;
            const HvacCostParams& y = b.hvac;
            return x.outdoor_temperature == y.outdoor_temperature && x.input_weight == y.input_weight &&
                   x.day_output_weight == y.day_output_weight &&
                   x.night_output_weight == y.night_output_weight &&
                   x.night_end_hour == y.night_end_hour && x.setpoint_before == y.setpoint_before &&
                   x.setpoint_after == y.setpoint_after && x.switch_hour == y.switch_hour &&
                   x.price_profile == y.price_profile && x.normalize_price == y.normalize_price;
        }
        case CostKind::kPiecewiseQuadratic:
            if (a.segments.size() != b.segments.size()) return false;
            for (std::size_t i = 0; i < a.segments.size(); ++i) {
                if (a.segments[i].start != b.segments[i].start ||
                    !same(a.segments[i].hessian, b.segments[i].hessian) ||
                    !same(a.segments[i].target, b.segments[i].target)) {
                    return false;
                }
            }
            return true;
        case CostKind::kLogCosh:
            return a.rho == b.rho && same(a.anchor, b.anchor) && same(a.weights, b.weights) &&
                   same(a.centers, b.centers);
    }
    return false;
}

bool same_plant(const PlantSpec& a, const PlantSpec& b) {
    if (a.kind != b.kind) return false;
    if (a.kind == PlantKind::kExplicit) {
        return same(a.A, b.A) && same(a.B, b.B) && same(a.C, b.C) && same(a.D, b.D) && same(a.G, b.G) &&
               same(a.x0, b.x0);
    }
    const HvacParams& x = a.hvac;
    const HvacParams& y = b.hvac;
    if (x.couplings.size() != y.couplings.size()) return false;
    for (std::size_t i = 0; i < x.couplings.size(); ++i) {
        if (x.couplings[i].a != y.couplings[i].a || x.couplings[i].b != y.couplings[i].b ||
            x.couplings[i].resistance != y.couplings[i].resistance) {
            return false;
        }
    }
    return x.capacitance == y.capacitance && x.outdoor_resistance == y.outdoor_resistance &&
           x.sensors == y.sensors && x.sample_time == y.sample_time &&
           a.initial_temperature == b.initial_temperature && a.outdoor_temperature == b.outdoor_temperature;
}

bool same_fault(const std::optional<FaultSpec>& a, const std::optional<FaultSpec>& b) {
    if (a.has_value() != b.has_value()) return false;
    if (!a) return true;
    return a->channel == b->channel && a->start_step == b->start_step && a->end_step == b->end_step &&
           a->scale == b->scale;
}

Vector broadcast(const Vector& v, Index size, const std::string& what) {
    if (v.size() == 0) return Vector::Zero(size);
    if (v.size() == 1) return Vector::Constant(size, v(0));
    if (v.size() != size) fail(what + " must have one entry or one per channel");
    return v;
}

Index sample_count_per_day(double sample_time) {
    return static_cast<Index>(std::llround(86400.0 / sample_time));
}

}  // namespace

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
    const ControllerConfig& x = a.controller;
    const ControllerConfig& y = b.controller;
    return a.name == b.name && a.horizon == b.horizon && same_plant(a.plant, b.plant) &&
           same(a.noise.measurement_bound, b.noise.measurement_bound) &&
           same(a.noise.process_bound, b.noise.process_bound) && a.noise.seed == b.noise.seed &&
           same_fault(a.noise.fault, b.noise.fault) && x.gamma == y.gamma && x.mu == y.mu && x.n == y.n &&
           x.weight == y.weight && x.init == y.init && x.lambda_init == y.lambda_init &&
           x.check_identities == y.check_identities && same_cost(a.cost, b.cost) &&
           a.offline.length == b.offline.length && a.offline.input_low == b.offline.input_low &&
           a.offline.input_high == b.offline.input_high && a.offline.seed == b.offline.seed &&
           a.output_dir == b.output_dir && a.write_controller_log == b.write_controller_log;
}

ExperimentConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::kParse, std::string("malformed JSON: ") + e.what());
    }
    check_keys(j, "config", {"name", "horizon", "plant", "noise", "controller", "cost", "offline_data",
                             "output_dir", "write_controller_log"});
    ExperimentConfig c;
    c.name = get_or<std::string>(j, "name", c.name);
    c.horizon = get_or<Index>(j, "horizon", c.horizon);
    c.plant = plant_from_json(require(j, "plant", "config"));
    c.noise = j.contains("noise") ? noise_from_json(j.at("noise")) : NoiseSpec{};
    c.controller = controller_from_json(require(j, "controller", "config"));
    c.cost = cost_from_json(require(j, "cost", "config"));
    const json& off = require(j, "offline_data", "config");
    check_keys(off, "offline_data", {"length", "input_low", "input_high", "seed"});
    c.offline.length = get_or<Index>(off, "length", 0);
    c.offline.input_low = get_or(off, "input_low", c.offline.input_low);
    c.offline.input_high = get_or(off, "input_high", c.offline.input_high);
    c.offline.seed = get_or<std::uint64_t>(off, "seed", c.offline.seed);
    c.output_dir = get_or<std::string>(j, "output_dir", "");
    c.write_controller_log = get_or(j, "write_controller_log", false);
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::kParse, "cannot open config file '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

std::string serialize_config(const ExperimentConfig& config) {
    json j;
    j["name"] = config.name;
    j["horizon"] = config.horizon;
    j["plant"] = plant_to_json(config.plant);
    j["noise"] = noise_to_json(config.noise);
    j["controller"] = controller_to_json(config.controller);
    j["cost"] = cost_to_json(config.cost);
    j["offline_data"] = {{"length", config.offline.length},
                         {"input_low", config.offline.input_low},
                         {"input_high", config.offline.input_high},
                         {"seed", config.offline.seed}};
    j["output_dir"] = config.output_dir;
    j["write_controller_log"] = config.write_controller_log;
    return j.dump(2) + "\n";
}

PlantModel build_plant(const PlantSpec& spec) {
    if (spec.kind == PlantKind::kHvac) return build_hvac(spec.hvac);
    return make_plant(spec.A, spec.B, spec.C, spec.D, spec.G);
}

Vector initial_state(const PlantSpec& spec, const PlantModel& model) {
    if (spec.kind == PlantKind::kHvac) {
        return Vector::Constant(model.states(), spec.initial_temperature - spec.outdoor_temperature);
    }
    if (spec.x0.size() == 0) return Vector::Zero(model.states());
    if (spec.x0.size() != model.states()) fail("plant.x0 must have one entry per state");
    return spec.x0;
}

std::shared_ptr<const CostFunction> build_cost(const ExperimentConfig& config, const PlantModel& model) {
    const CostSpec& spec = config.cost;
    const Index m = model.inputs();
    const Index p = model.outputs();
    switch (spec.kind) {
        case CostKind::kHvac: {
            HvacCostParams h = spec.hvac;
            h.inputs = m;
            h.outputs = p;
            h.stages = config.horizon + 1;
            h.sample_time = config.plant.kind == PlantKind::kHvac ? config.plant.hvac.sample_time : h.sample_time;
            return hvac_cost_schedule(h);
        }
        case CostKind::kPiecewiseQuadratic:
            return std::make_shared<PiecewiseQuadraticCost>(m, p, spec.segments);
        case CostKind::kLogCosh:
            return std::make_shared<LogCoshCost>(m, p, spec.rho, spec.anchor, spec.weights, spec.centers);
    }
    fail("unknown cost type");
}

NoiseModel build_noise(const NoiseSpec& spec, const PlantModel& model) {
    const Vector meas = broadcast(spec.measurement_bound, model.outputs(), "noise.measurement_bound");
    const Vector proc = broadcast(spec.process_bound, model.disturbances(), "noise.process_bound");
    std::vector<SensorFault> faults;
    if (spec.fault) {
        faults.push_back({spec.fault->channel - 1, spec.fault->start_step, spec.fault->end_step,
                          spec.fault->scale});
    }
    return NoiseModel(meas, proc, spec.seed, std::move(faults));
}

void validate(const ExperimentConfig& config) {
    const ControllerConfig& c = config.controller;
    if (!(c.gamma > 0.0) || !std::isfinite(c.gamma)) fail("gamma must be positive");
    if (c.mu < 1) fail("mu must be at least 1");
    if (c.n < 1) fail("n must be at least 1");
    if (!(c.lambda_init >= 0.0)) fail("lambda_init must be nonnegative");
    if (config.horizon < 0) fail("horizon must be nonnegative");
    if (!(config.offline.input_low < config.offline.input_high)) {
        fail("offline_data.input_low must be below input_high");
    }

    PlantModel model;
    try {
        model = build_plant(config.plant);
    } catch (const Error& e) {
        fail(std::string("invalid plant: ") + e.what());
    }
    try {
        initial_state(config.plant, model);
    } catch (const Error& e) {
        fail(std::string("invalid initial state: ") + e.what());
    }
    const Index m = model.inputs();
    const Index p = model.outputs();

    const Index needed = minimum_data_length(m, c.n, c.mu);
    if (config.offline.length < needed) {
        fail("offline_data.length must be at least (m+1)(3n+mu+1)-1 = " + std::to_string(needed));
    }

    for (Index i = 0; i < config.noise.measurement_bound.size(); ++i) {
        if (!(config.noise.measurement_bound(i) >= 0.0)) fail("noise bounds must be nonnegative");
    }
    for (Index i = 0; i < config.noise.process_bound.size(); ++i) {
        if (!(config.noise.process_bound(i) >= 0.0)) fail("noise bounds must be nonnegative");
    }
    if (const auto& f = config.noise.fault) {
        if (f->channel < 1 || f->channel > p) fail("noise.sensor_fault.channel must be an output channel");
        if (f->end_step < f->start_step) fail("noise.sensor_fault window is reversed");
        if (!(f->scale >= 0.0)) fail("noise.sensor_fault.scale must be nonnegative");
    }
    try {
        build_noise(config.noise, model);
    } catch (const Error& e) {
        fail(std::string("invalid noise: ") + e.what());
    }

    if (config.cost.kind == CostKind::kHvac) {
        if (config.plant.kind == PlantKind::kHvac &&
            config.cost.hvac.outdoor_temperature != config.plant.outdoor_temperature) {
            fail("cost and plant outdoor temperatures differ");
        }
        const double ts = config.plant.kind == PlantKind::kHvac ? config.plant.hvac.sample_time
                                                                 : config.cost.hvac.sample_time;
        if (sample_count_per_day(ts) < 1) fail("sample time longer than a day");
    }
    std::shared_ptr<const CostFunction> cost;
    try {
        cost = build_cost(config, model);
    } catch (const Error& e) {
        fail(std::string("invalid cost: ") + e.what());
    }
    if (cost->input_dim() != m || cost->output_dim() != p) fail("cost dimensions differ from the plant");
    if (config.cost.kind == CostKind::kPiecewiseQuadratic) {
        for (const auto& s : config.cost.segments) {
            if (s.hessian.rows() != m + p || s.hessian.cols() != m + p || s.target.size() != m + p) {
                fail("cost segment dimensions differ from m + p");
            }
        }
    }
    if (config.cost.kind == CostKind::kLogCosh) {
        if (config.cost.anchor.size() != m + p || config.cost.weights.size() != m + p ||
            config.cost.centers.size() != m + p) {
            fail("log_cosh vectors must have m + p entries");
        }
    }
    if (const auto h = cost->horizon(); h && *h < config.horizon + 1) {
        fail("cost schedule shorter than the horizon");
    }
}

ExperimentConfig siso_demo_config() {
    ExperimentConfig c;
    c.name = "siso-demo";
    c.horizon = 200;
    c.plant.kind = PlantKind::kExplicit;
    c.plant.A = Matrix::Constant(1, 1, 0.5);
    c.plant.B = Matrix::Constant(1, 1, 1.0);
    c.plant.C = Matrix::Constant(1, 1, 1.0);
    c.plant.D = Matrix::Zero(1, 1);
    c.plant.x0 = Vector::Constant(1, 1.0);
    c.noise.measurement_bound = Vector::Constant(1, 0.1);
    c.noise.process_bound = Vector::Zero(1);
    c.noise.seed = 1;
    c.controller.gamma = 0.5;
    c.controller.mu = 2;
    c.controller.n = 1;
    c.cost.kind = CostKind::kPiecewiseQuadratic;
    Matrix h(2, 2);
    h << 0.2, 0.0, 0.0, 1.0;
    Vector r1(2), r2(2);
    r1 << 0.0, 1.0;
    r2 << 0.0, -1.0;
    c.cost.segments = {{0, h, r1}, {100, h, r2}};
    c.offline.length = 60;
    c.offline.seed = 1;
    return c;
}

ExperimentConfig hvac_default_config() {
    ExperimentConfig c;
    c.name = "hvac";
    c.horizon = 1439;
    c.plant.kind = PlantKind::kHvac;
    c.plant.initial_temperature = 17.0;
    c.plant.outdoor_temperature = 15.0;
    c.noise.measurement_bound = Vector::Constant(1, 1.0);
    c.noise.process_bound = Vector::Constant(1, 0.1);
    c.noise.seed = 1;
    c.noise.fault = FaultSpec{3, 600, 840, 5.0};
    c.controller.gamma = 0.15;
    c.controller.mu = 10;
    c.controller.n = 5;
    c.controller.weight = WeightMode::kIdentityInputs;
    c.controller.init = InitMode::kZeroTrajectory;
    c.cost.kind = CostKind::kHvac;
    c.cost.hvac.outdoor_temperature = 15.0;
    c.offline.length = 400;
    c.offline.input_low = -1.0;
    c.offline.input_high = 1.0;
    c.offline.seed = 1;
    return c;
}

}  // namespace ddoco
