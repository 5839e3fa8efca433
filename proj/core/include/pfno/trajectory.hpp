#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "pfno/allen_cahn.hpp"
#include "pfno/dendrite.hpp"

namespace pfno {

enum class PhysModel { ac, dendrite };

struct Physics {
  PhysModel model = PhysModel::ac;
  AcParams ac;
  DendriteParams dendrite = dendrite_params(0.05);

  double dt() const { return model == PhysModel::ac ? ac.dt : dendrite.dt; }
  double eps() const { return model == PhysModel::ac ? ac.eps : dendrite.eps; }
};

struct State {
  int step = 0;
  double time = 0.0;
  Field2D phi;
  Field2D U;  // empty for Allen-Cahn
  bool has_U() const { return !U.v.empty(); }
};

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct MetricsRow {
  int step = 0;
  double time = 0.0;
  double energy = kNaN;
  double perimeter = kNaN;
  double solid_fraction = kNaN;
  double u_min = kNaN;
  double u_max = kNaN;
  double tip_x = kNaN;
  double tip_v = kNaN;
  double tip_rho = kNaN;
  double peclet = kNaN;
};

struct TrajectoryRecord {
  PhysModel model = PhysModel::ac;
  std::vector<State> states;
  std::vector<MetricsRow> rows;  // one per stored state
  int blowup_step = -1;
};

}  // namespace pfno
