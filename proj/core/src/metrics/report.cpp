#include "pfno/metrics/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <fmt/format.h>
#include <fmt/os.h>

#include "pfno/error.hpp"

namespace pfno {

MetricsRow state_metrics(const State& s, const Physics& phys) {
  MetricsRow r;
  r.step = s.step;
  r.time = s.time;
  if (phys.model == PhysModel::ac) {
    r.energy = ac_energy(s.phi, phys.ac.eps);
  } else {
    r.energy = s.has_U() ? dendrite_energy(s.phi, s.U, phys.dendrite) : kNaN;
  }
  r.perimeter = perimeter_epsilon(s.phi, phys.eps());
  r.solid_fraction = solid_fraction(s.phi);
  r.u_min = min_value(s.phi);
  r.u_max = max_value(s.phi);
  return r;
}

void fill_tip_columns(TrajectoryRecord& traj, const Physics& phys) {
  if (traj.states.size() != traj.rows.size()) throw InvalidArgument("fill_tip_columns: rows and states differ");
  std::vector<Field2D> phis;
  std::vector<double> times;
  for (const auto& s : traj.states) {
    phis.push_back(s.phi);
    times.push_back(s.time);
  }
  TipOptions opt;
  opt.diffusivity = phys.dendrite.D;
  const auto tips = tip_track(phis, times, TipDirection::plus_x, opt);
  for (std::size_t k = 0; k < tips.size(); ++k) {
    traj.rows[k].tip_x = tips[k].position.x;
    traj.rows[k].tip_v = tips[k].velocity;
    traj.rows[k].tip_rho = tips[k].rho;
    traj.rows[k].peclet = tips[k].peclet;
  }
}

namespace {

double rel_err(double pred, double ref) {
  if (pred == ref) return 0.0;
  return (pred - ref) / std::abs(ref);
}

std::string num(double x) { return fmt::format("{:.17g}", x); }

}  // namespace

MetricsReport error_metrics(const TrajectoryRecord& pred, const TrajectoryRecord& ref, PhysModel kind,
                            bool keep_fields) {
  if (pred.rows.size() != ref.rows.size() || pred.states.size() != ref.states.size() ||
      pred.rows.size() != pred.states.size())
    throw InvalidArgument("error_metrics: trajectories have different lengths");
  MetricsReport out;
  for (std::size_t k = 0; k < pred.rows.size(); ++k) {
    const auto& a = pred.rows[k];
    const auto& b = ref.rows[k];
    if (std::abs(a.time - b.time) > 1e-9 * std::max(1.0, std::abs(b.time)))
      throw InvalidArgument(fmt::format("error_metrics: time mismatch at record {} ({} vs {})", k, a.time, b.time));
    const Field2D& pa = pred.states[k].phi;
    const Field2D& pb = ref.states[k].phi;
    require_same_grid(pa, pb);
    ReportRow r;
    r.time = b.time;
    r.rel_err_perimeter = rel_err(a.perimeter, b.perimeter);
    r.rel_err_energy = rel_err(a.energy, b.energy);
    r.rel_err_solid_fraction = rel_err(a.solid_fraction, b.solid_fraction);
    Field2D err(pa.grid);
    for (std::size_t i = 0; i < err.v.size(); ++i) err.v[i] = std::abs(pa.v[i] - pb.v[i]);
    r.max_abs_err_field = max_value(err);
    if (kind == PhysModel::dendrite && pred.states[k].has_U()) r.max_U = max_value(pred.states[k].U);
    if (keep_fields) out.abs_err_fields.push_back(std::move(err));
    out.rows.push_back(r);
  }
  const double m = out.rows.empty() ? 1.0 : static_cast<double>(out.rows.size());
  for (const auto& r : out.rows) {
    out.mean_rel_err_perimeter += std::abs(r.rel_err_perimeter) / m;
    out.mean_rel_err_energy += std::abs(r.rel_err_energy) / m;
    out.mean_rel_err_solid_fraction += std::abs(r.rel_err_solid_fraction) / m;
    out.max_abs_err_field = std::max(out.max_abs_err_field, r.max_abs_err_field);
  }
  return out;
}

void write_metrics_csv(const std::filesystem::path& path, const std::vector<MetricsRow>& rows) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto f = fmt::output_file(path.string());
  f.print("step,time,energy,perimeter,solid_fraction,u_min,u_max,tip_x,tip_v,tip_rho,peclet\n");
  for (const auto& r : rows)
    f.print("{},{},{},{},{},{},{},{},{},{},{}\n", r.step, num(r.time), num(r.energy), num(r.perimeter),
            num(r.solid_fraction), num(r.u_min), num(r.u_max), num(r.tip_x), num(r.tip_v), num(r.tip_rho),
            num(r.peclet));
}

void write_report_csv(const std::filesystem::path& path, const MetricsReport& report) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto f = fmt::output_file(path.string());
  f.print("time,rel_err_perimeter,rel_err_energy,rel_err_solid_fraction,max_abs_err_field,max_U\n");
  for (const auto& r : report.rows)
    f.print("{},{},{},{},{},{}\n", num(r.time), num(r.rel_err_perimeter), num(r.rel_err_energy),
            num(r.rel_err_solid_fraction), num(r.max_abs_err_field), num(r.max_U));
}

}  // namespace pfno
