#pragma once

#include "drmsim/core_model.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace drmsim {

/// Room temperature over the demand window: temps_f[i] is the temperature at
/// slot demand_start + i, with one extra entry past demand_end.
struct TemperatureTrajectory {
    Eigen::ArrayXd temps_f;
};

/// One discrete-time step of the room thermal balance. Heat gain always
/// applies; cooling is subtracted only while the AC is demanded.
inline double step_temperature(double theta_f, double heat_gain_btu_hr, double cooling_btu_hr,
                               bool demanded, double dt_hours, double capacity_btu_f) {
    if (capacity_btu_f <= 0.0) throw std::domain_error("step_temperature: capacity must be > 0");
    if (dt_hours <= 0.0) throw std::domain_error("step_temperature: dt must be > 0");
    if (heat_gain_btu_hr < 0.0 || cooling_btu_hr < 0.0)
        throw std::domain_error("step_temperature: heat gain and cooling must be >= 0");
    if (!std::isfinite(theta_f) || !std::isfinite(heat_gain_btu_hr) || !std::isfinite(cooling_btu_hr))
        throw std::domain_error("step_temperature: non-finite input");
    const double flux = heat_gain_btu_hr - (demanded ? cooling_btu_hr : 0.0);
    return theta_f + dt_hours * flux / capacity_btu_f;
}

/// Iterates step_temperature over the home's demand window [alpha, beta],
/// returning window_slots + 1 temperatures starting at initial_temp_f.
inline TemperatureTrajectory simulate_trajectory(const Home& home, const StateSchedule& schedule,
                                                 const SimClock& clock) {
    if (schedule.state.size() != clock.slot_count)
        throw std::invalid_argument("simulate_trajectory: schedule length must equal slot_count");
    const AcUnit& ac = home.ac;
    const int n = ac.window_slots();
    TemperatureTrajectory traj;
    traj.temps_f.resize(n + 1);
    traj.temps_f[0] = home.initial_temp_f;
    for (int i = 0; i < n; ++i) {
        const int t = ac.demand_start + i;
        const double power = throttle_power(schedule.state[t], ac.num_states, ac.rated_power_kw);
        const double cooling = cooling_capacity_btu_hr(ac.eer, power);
        traj.temps_f[i + 1] = step_temperature(traj.temps_f[i], home.heat_gain_btu_hr[t], cooling,
                                               /*demanded=*/true, clock.slot_hours,
                                               home.thermal_capacity_btu_f);
    }
    return traj;
}

/// Largest excess of room temperature above the setpoint anywhere along the
/// trajectory. Negative when the room never reaches the setpoint.
inline double max_deviation(const TemperatureTrajectory& traj, double setpoint_f) {
    if (traj.temps_f.size() == 0)
        throw std::invalid_argument("max_deviation: empty trajectory");
    return traj.temps_f.maxCoeff() - setpoint_f;
}

}  // namespace drmsim
