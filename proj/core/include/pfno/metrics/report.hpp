#pragma once

#include <filesystem>
#include <vector>

#include "pfno/metrics/tip.hpp"
#include "pfno/trajectory.hpp"

namespace pfno {

// Energy, perimeter, solid fraction and range; tip columns stay NaN.
MetricsRow state_metrics(const State& s, const Physics& phys);

// Fills tip columns by tracking the +x tip from the domain center.
void fill_tip_columns(TrajectoryRecord& traj, const Physics& phys);

struct ReportRow {
  double time = 0.0;
  double rel_err_perimeter = 0.0;
  double rel_err_energy = 0.0;
  double rel_err_solid_fraction = 0.0;
  double max_abs_err_field = 0.0;
  double max_U = kNaN;
};

struct MetricsReport {
  std::vector<ReportRow> rows;
  // Means of absolute relative errors over all rows.
  double mean_rel_err_perimeter = 0.0;
  double mean_rel_err_energy = 0.0;
  double mean_rel_err_solid_fraction = 0.0;
  double max_abs_err_field = 0.0;
  std::vector<Field2D> abs_err_fields;
};

MetricsReport error_metrics(const TrajectoryRecord& pred, const TrajectoryRecord& ref, PhysModel kind,
                            bool keep_fields = false);

void write_metrics_csv(const std::filesystem::path& path, const std::vector<MetricsRow>& rows);
void write_report_csv(const std::filesystem::path& path, const MetricsReport& report);

}  // namespace pfno
