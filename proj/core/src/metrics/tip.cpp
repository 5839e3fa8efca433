#include "pfno/metrics/tip.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pfno/error.hpp"

namespace pfno {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

double min_image(double d, double L) { return d - L * std::round(d / L); }

Point resolve_center(const Field2D& f, Point c) {
  if (c.x < 0.0 || c.y < 0.0) return {0.5 * f.grid.length, 0.5 * f.grid.length};
  return c;
}

// Unit axis (ax, ay) for a direction; the transverse axis is (-ay, ax).
void axis_of(TipDirection d, double& ax, double& ay) {
  switch (d) {
    case TipDirection::plus_x: ax = 1; ay = 0; break;
    case TipDirection::minus_x: ax = -1; ay = 0; break;
    case TipDirection::plus_y: ax = 0; ay = 1; break;
    case TipDirection::minus_y: ax = 0; ay = -1; break;
  }
}

struct Fit {
  double s0;
  double b;
  int count;
};

// Least squares for s = s0 + b t^2.
std::optional<Fit> fit_parabola(const std::vector<std::pair<double, double>>& st) {
  if (st.size() < 7) return std::nullopt;
  double n = 0, sx = 0, sxx = 0, sy = 0, sxy = 0;
  for (auto [s, t] : st) {
    const double x = t * t;
    n += 1; sx += x; sxx += x * x; sy += s; sxy += x * s;
  }
  const double det = n * sxx - sx * sx;
  if (!(std::abs(det) > 0)) return std::nullopt;
  return Fit{(sxx * sy - sx * sxy) / det, (n * sxy - sx * sy) / det, static_cast<int>(st.size())};
}

}  // namespace

std::optional<double> tip_distance(const Field2D& phi, TipDirection dir, Point center, bool* boundary) {
  const int n = phi.n();
  const double h = phi.grid.spacing();
  center = resolve_center(phi, center);
  double ax = 1.0, ay = 0.0;
  axis_of(dir, ax, ay);
  const int ci = static_cast<int>(std::lround(center.y / h)) % n;
  const int cj = static_cast<int>(std::lround(center.x / h)) % n;
  auto at = [&](int k) {
    const int i = ((ci + k * static_cast<int>(ay)) % n + n) % n;
    const int j = ((cj + k * static_cast<int>(ax)) % n + n) % n;
    return phi(i, j);
  };
  if (boundary) *boundary = false;
  if (!(at(0) > 0.0)) return std::nullopt;
  const int half = n / 2;
  std::optional<double> best;
  for (int k = 0; k < half; ++k) {
    const double a = at(k), b = at(k + 1);
    if (a > 0.0 && b <= 0.0) best = (k + a / (a - b)) * h;
  }
  if (boundary && at(half) > 0.0) *boundary = true;
  if (!best) best = half * h;
  return best;
}

std::optional<double> tip_radius(const LevelSetContour& contour, Point tip, TipDirection dir, double window) {
  if (contour.empty() || !(window > 0.0)) return std::nullopt;
  const double L = contour.domain;
  double ax = 1.0, ay = 0.0;
  axis_of(dir, ax, ay);
  auto local = [&](const ContourPoint& p) {
    const double dx = min_image(p.x - tip.x, L), dy = min_image(p.y - tip.y, L);
    return std::pair<double, double>{dx * ax + dy * ay, -dx * ay + dy * ax};
  };
  std::size_t best_line = 0, best_k = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t l = 0; l < contour.lines.size(); ++l)
    for (std::size_t k = 0; k < contour.lines[l].size(); ++k) {
      auto [s, t] = local(contour.lines[l][k]);
      const double d = s * s + t * t;
      if (d < best_d) { best_d = d; best_line = l; best_k = k; }
    }
  const auto& line = contour.lines[best_line];
  const bool closed = contour.closed[best_line];
  const std::size_t m = line.size();

  auto gather = [&](double w) {
    std::vector<std::pair<double, double>> st;
    auto inside = [&](const std::pair<double, double>& q) { return std::abs(q.second) <= 0.5 * w && q.first >= -w; };
    if (!inside(local(line[best_k]))) return st;
    st.push_back(local(line[best_k]));
    std::size_t taken = 1;
    for (int sgn : {1, -1}) {
      long k = static_cast<long>(best_k);
      while (taken < m) {
        k += sgn;
        if (closed) k = (k % static_cast<long>(m) + static_cast<long>(m)) % static_cast<long>(m);
        else if (k < 0 || k >= static_cast<long>(m)) break;
        const auto q = local(line[static_cast<std::size_t>(k)]);
        if (!inside(q)) break;
        st.push_back(q);
        ++taken;
      }
    }
    return st;
  };

  // A vertex far from the tracked tip means the window spans more than the
  // tip region (e.g. a whole small grain); no radius is reported then.
  auto usable = [](const std::optional<Fit>& f, double w) { return f && f->b < 0.0 && std::abs(f->s0) <= 0.25 * w; };
  auto first = fit_parabola(gather(window));
  if (!usable(first, window)) return std::nullopt;
  const double rho1 = -0.5 / first->b;
  const double w2 = std::min(window, 6.0 * rho1);
  auto second = fit_parabola(gather(w2));
  if (!usable(second, w2)) return std::nullopt;
  return -0.5 / second->b;
}

std::vector<TipRecord> tip_track(const std::vector<Field2D>& phis, const std::vector<double>& times,
                                 TipDirection dir, const TipOptions& opt) {
  if (phis.size() != times.size()) throw InvalidArgument("tip_track: snapshot and time counts differ");
  std::vector<TipRecord> out;
  out.reserve(phis.size());
  double ax = 1.0, ay = 0.0;
  axis_of(dir, ax, ay);
  for (std::size_t k = 0; k < phis.size(); ++k) {
    const Field2D& phi = phis[k];
    const Point c = resolve_center(phi, opt.center);
    TipRecord r;
    r.time = times[k];
    r.velocity = kNan;
    r.rho = kNan;
    r.peclet = kNan;
    bool boundary = false;
    const auto d = tip_distance(phi, dir, c, &boundary);
    r.boundary = boundary;
    r.distance = d ? *d : kNan;
    r.position = {c.x + ax * r.distance, c.y + ay * r.distance};
    if (d && opt.fit_radius) {
      const double w = opt.window > 0.0 ? opt.window : 12.0 * phi.grid.spacing();
      if (auto rho = tip_radius(zero_level_set(phi), r.position, dir, w)) r.rho = *rho;
    }
    out.push_back(r);
  }
  for (std::size_t k = 2; k + 2 < out.size(); ++k) {
    double tm = 0, dm = 0;
    for (std::size_t j = k - 2; j <= k + 2; ++j) { tm += out[j].time; dm += out[j].distance; }
    tm /= 5; dm /= 5;
    double num = 0, den = 0;
    for (std::size_t j = k - 2; j <= k + 2; ++j) {
      num += (out[j].time - tm) * (out[j].distance - dm);
      den += (out[j].time - tm) * (out[j].time - tm);
    }
    out[k].velocity = den > 0 ? num / den : kNan;
  }
  for (auto& r : out)
    if (std::isfinite(r.rho) && std::isfinite(r.velocity)) r.peclet = r.rho * r.velocity / (2.0 * opt.diffusivity);
  return out;
}

SteadyTip steady_state(const std::vector<TipRecord>& records, double time, int count) {
  SteadyTip s;
  if (records.empty() || count < 1) return s;
  std::size_t c = 0;
  for (std::size_t k = 1; k < records.size(); ++k)
    if (std::abs(records[k].time - time) < std::abs(records[c].time - time)) c = k;
  const long half = count / 2;
  long lo = static_cast<long>(c) - half;
  lo = std::clamp(lo, 0L, std::max(0L, static_cast<long>(records.size()) - count));
  const long hi = std::min<long>(lo + count, static_cast<long>(records.size()));
  int nv = 0, nr = 0, np = 0;
  for (long k = lo; k < hi; ++k) {
    const auto& r = records[static_cast<std::size_t>(k)];
    if (std::isfinite(r.velocity)) { s.velocity += r.velocity; ++nv; }
    if (std::isfinite(r.rho)) { s.rho += r.rho; ++nr; }
    if (std::isfinite(r.peclet)) { s.peclet += r.peclet; ++np; }
  }
  s.velocity = nv ? s.velocity / nv : kNan;
  s.rho = nr ? s.rho / nr : kNan;
  s.peclet = np ? s.peclet / np : kNan;
  s.samples = static_cast<int>(hi - lo);
  return s;
}

}  // namespace pfno
