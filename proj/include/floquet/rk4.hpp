#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace floquet {

// Classical fixed-step RK4 for dy/dt = rhs(y, t); returns the n_steps + 1 states including the start.
template <typename State, typename Rhs>
std::vector<State> rk4_evolve(Rhs&& rhs, State state, double t0, double dt, int n_steps) {
  if (!(dt > 0.0)) throw std::invalid_argument("rk4_evolve: dt must be positive");
  std::vector<State> trajectory;
  trajectory.reserve(std::size_t(n_steps) + 1);
  trajectory.push_back(state);
  for (int k = 0; k < n_steps; ++k) {
    const double t = t0 + k * dt;
    const State k1 = rhs(state, t);
    const State k2 = rhs(State(state + (0.5 * dt) * k1), t + 0.5 * dt);
    const State k3 = rhs(State(state + (0.5 * dt) * k2), t + 0.5 * dt);
    const State k4 = rhs(State(state + dt * k3), t + dt);
    state = state + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!state.allFinite()) throw std::runtime_error("rk4_evolve: non-finite state at step " + std::to_string(k + 1));
    trajectory.push_back(state);
  }
  return trajectory;
}

}  // namespace floquet
