#pragma once

#include "pfno/nn/models.hpp"
#include "pfno/trajectory.hpp"

namespace pfno {

struct RolloutOptions {
  int steps = 50;
  int stride = 1;  // store every stride-th state; step 0 is always stored
  bool tips = false;
};

// Iterates the learned operator. For the dendrite model the network advances
// phi and U follows by the implicit heat step.
TrajectoryRecord rollout(const nn::Network& net, const nn::ModelWeights& w, const State& ic, const Physics& phys,
                         const RolloutOptions& opt);

// The classical scheme: convex-concave splitting for Allen-Cahn, SAV for the dendrite model.
TrajectoryRecord reference_rollout(const State& ic, const Physics& phys, const RolloutOptions& opt);

}  // namespace pfno
