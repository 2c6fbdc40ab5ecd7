#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace drmsim {

// 1 kW of thermal power expressed in BTU/hr.
inline constexpr double kBtuPerHourPerKw = 3412.14;
inline constexpr double kBtuPerHourPerTon = 12000.0;
inline constexpr double kMinEer = 8.0;

/// Discrete 24-hour horizon: T slots of slot_hours each.
struct SimClock {
    int slot_count = 288;
    double slot_hours = 24.0 / 288.0;

    void validate() const {
        if (slot_count < 1) throw std::invalid_argument("SimClock: slot_count must be >= 1");
        if (std::abs(slot_count * slot_hours - 24.0) > 1e-9)
            throw std::invalid_argument("SimClock: slot_count * slot_hours must equal 24 h");
    }

    static SimClock five_minute() { return SimClock{288, 24.0 / 288.0}; }
};

/// The contract triple offered to a customer: thermostat setpoint,
/// maximum temperature excess, maximum denied-operation time.
struct DrmPlan {
    double setpoint_f = 65.0;
    double max_deviation_f = 0.0;
    double max_denied_hours = 0.0;
};

struct AcUnit {
    double rated_power_kw = 5.0;
    double eer = 10.0;          // BTU per watt-hour
    int num_states = 2;         // K, state 1 = OFF, state K = rated
    int demand_start = 0;       // alpha, inclusive
    int demand_end = 0;         // beta, inclusive

    int window_slots() const { return demand_end - demand_start + 1; }
    bool demanded(int slot) const { return slot >= demand_start && slot <= demand_end; }

    void validate(const SimClock& clock) const {
        if (rated_power_kw <= 0.0) throw std::invalid_argument("AcUnit: rated_power_kw must be > 0");
        if (eer < kMinEer) throw std::invalid_argument("AcUnit: eer must be >= 8.0");
        if (num_states < 2) throw std::invalid_argument("AcUnit: num_states must be >= 2");
        if (demand_start < 0 || demand_start > demand_end || demand_end >= clock.slot_count)
            throw std::invalid_argument("AcUnit: demand window must satisfy 0 <= start <= end < T");
    }
};

struct Home {
    std::string id;
    Eigen::ArrayXd essential_load_kw;   // length T
    AcUnit ac;
    Eigen::ArrayXd heat_gain_btu_hr;    // length T
    double thermal_capacity_btu_f = 0.0;
    double initial_temp_f = 65.0;       // room temperature at demand_start

    void validate(const SimClock& clock) const {
        ac.validate(clock);
        if (essential_load_kw.size() != clock.slot_count)
            throw std::invalid_argument("Home: essential_load_kw length must equal slot_count");
        if (heat_gain_btu_hr.size() != clock.slot_count)
            throw std::invalid_argument("Home: heat_gain_btu_hr length must equal slot_count");
        if ((essential_load_kw < 0.0).any())
            throw std::invalid_argument("Home: essential load must be pointwise >= 0");
        if ((heat_gain_btu_hr < 0.0).any())
            throw std::invalid_argument("Home: heat gain must be pointwise >= 0");
        if (thermal_capacity_btu_f <= 0.0)
            throw std::invalid_argument("Home: thermal_capacity_btu_f must be > 0");
    }
};

/// Per-slot chosen state for one AC. Slots outside the demand window are
/// stored as K so the one-state-per-slot rule holds everywhere.
struct StateSchedule {
    Eigen::ArrayXi state;

    static StateSchedule all_rated(int slot_count, int num_states) {
        StateSchedule s;
        s.state = Eigen::ArrayXi::Constant(slot_count, num_states);
        return s;
    }
};

struct LoadProfile {
    Eigen::ArrayXd kw;
};

/// Eq-style K-state power model: state 1 is OFF, state K is rated power,
/// intermediate states are evenly spaced fractions of rated.
inline double throttle_power(int k, int num_states, double rated_power_kw) {
    if (num_states < 2) throw std::domain_error("throttle_power: num_states must be >= 2");
    if (k < 1 || k > num_states) throw std::domain_error("throttle_power: state out of [1, K]");
    if (rated_power_kw <= 0.0) throw std::domain_error("throttle_power: rated power must be > 0");
    return static_cast<double>(k - 1) / static_cast<double>(num_states - 1) * rated_power_kw;
}

/// Cooling output in BTU/hr for a given electrical draw. EER is BTU per
/// watt-hour, so kW * 1000 W/kW * EER = BTU/hr.
inline double cooling_capacity_btu_hr(double eer, double electrical_power_kw) {
    if (electrical_power_kw < 0.0) throw std::domain_error("cooling_capacity: power must be >= 0");
    if (eer < kMinEer) throw std::domain_error("cooling_capacity: eer must be >= 8.0");
    return eer * electrical_power_kw * 1000.0;
}

/// Same quantity expressed as thermal kW.
inline double cooling_capacity_kw(double eer, double electrical_power_kw) {
    return cooling_capacity_btu_hr(eer, electrical_power_kw) / kBtuPerHourPerKw;
}

struct PlanValidation {
    std::vector<std::string> errors;
    int denied_slot_budget = 0;  // t_dur, number of slots

    bool ok() const { return errors.empty(); }
};

/// Checks a plan against the clock and derives the denied-slot budget
/// t_dur = max_denied_hours / slot_hours (must be a non-negative integer).
inline PlanValidation validate_plan(const DrmPlan& plan, const SimClock& clock) {
    PlanValidation v;
    if (!std::isfinite(plan.setpoint_f) || !std::isfinite(plan.max_deviation_f) ||
        !std::isfinite(plan.max_denied_hours))
        v.errors.push_back("plan fields must be finite");
    if (plan.max_deviation_f < 0.0)
        v.errors.push_back("max_deviation_f must be >= 0");
    if (plan.max_denied_hours < 0.0)
        v.errors.push_back("max_denied_hours must be >= 0");
    if (v.errors.empty()) {
        const double ratio = plan.max_denied_hours / clock.slot_hours;
        const double rounded = std::round(ratio);
        if (std::abs(ratio - rounded) > 1e-9)
            v.errors.push_back("max_denied_hours is not an integer multiple of slot length");
        else
            v.denied_slot_budget = static_cast<int>(rounded);
    }
    return v;
}

}  // namespace drmsim
