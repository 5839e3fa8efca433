#include "pfno/train/rollout.hpp"

#include <functional>

#include <spdlog/spdlog.h>

#include "pfno/error.hpp"
#include "pfno/metrics/report.hpp"

namespace pfno {

namespace {

using Stepper = std::function<void(State&)>;

TrajectoryRecord run(State s, const Physics& phys, const RolloutOptions& opt, const Stepper& step) {
  if (opt.steps < 0 || opt.stride < 1) throw InvalidArgument("rollout: steps must be >= 0 and stride >= 1");
  if (phys.model == PhysModel::dendrite && !s.has_U()) throw InvalidArgument("rollout: dendrite state needs U");
  TrajectoryRecord t;
  t.model = phys.model;
  auto store = [&] {
    t.rows.push_back(state_metrics(s, phys));
    t.states.push_back(s);
  };
  store();
  for (int k = 1; k <= opt.steps; ++k) {
    try {
      step(s);
    } catch (const NumericalError& e) {
      spdlog::warn("rollout stopped at step {}: {}", k, e.what());
      t.blowup_step = k;
      break;
    }
    s.step = k;
    s.time = k * phys.dt();
    if (!all_finite(s.phi) || (s.has_U() && !all_finite(s.U))) {
      t.blowup_step = k;
      break;
    }
    if (k % opt.stride == 0) store();
  }
  if (opt.tips && phys.model == PhysModel::dendrite) fill_tip_columns(t, phys);
  return t;
}

}  // namespace

TrajectoryRecord rollout(const nn::Network& net, const nn::ModelWeights& w, const State& ic, const Physics& phys,
                         const RolloutOptions& opt) {
  const bool two = net.spec().input_channels() == 2;
  if (two && phys.model != PhysModel::dendrite) throw InvalidArgument("rollout: a (phi, U) model needs the dendrite physics");
  return run(ic, phys, opt, [&](State& s) {
    const nn::Tensor4 x = two ? nn::from_fields({s.phi, s.U}) : nn::from_fields({s.phi});
    Field2D next = nn::to_field(net.forward(w, x), 0, 0, s.phi.grid);
    if (phys.model == PhysModel::dendrite) s.U = heat_step_implicit(s.U, next, s.phi, phys.dendrite);
    s.phi = std::move(next);
  });
}

TrajectoryRecord reference_rollout(const State& ic, const Physics& phys, const RolloutOptions& opt) {
  if (phys.model == PhysModel::ac)
    return run(ic, phys, opt, [&](State& s) { s.phi = ac_split_step(s.phi, phys.ac); });
  SavState sav = sav_init(ic.phi, ic.U, phys.dendrite);
  return run(ic, phys, opt, [&](State& s) {
    sav = sav_step(sav, phys.dendrite);
    s.phi = sav.phi;
    s.U = sav.U;
  });
}

}  // namespace pfno
