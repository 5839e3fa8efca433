#include "pfno/metrics/level_set.hpp"

#include <cmath>
#include <unordered_map>

namespace pfno {

double LevelSetContour::length() const {
  double s = 0.0;
  for (std::size_t l = 0; l < lines.size(); ++l) {
    const auto& p = lines[l];
    for (std::size_t k = 1; k < p.size(); ++k) s += std::hypot(p[k].x - p[k - 1].x, p[k].y - p[k - 1].y);
    if (closed[l] && p.size() > 1) {
      const double dx = p.front().x - p.back().x, dy = p.front().y - p.back().y;
      s += std::hypot(dx - domain * std::round(dx / domain), dy - domain * std::round(dy / domain));
    }
  }
  return s;
}

std::size_t LevelSetContour::point_count() const {
  std::size_t n = 0;
  for (const auto& l : lines) n += l.size();
  return n;
}

double polyline_area(const std::vector<ContourPoint>& p) {
  double a = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const auto& u = p[k];
    const auto& v = p[(k + 1) % p.size()];
    a += u.x * v.y - v.x * u.y;
  }
  return 0.5 * std::abs(a);
}

namespace {

double min_image(double d, double L) { return d - L * std::round(d / L); }

}  // namespace

LevelSetContour zero_level_set(const Field2D& f) {
  const int n = f.n();
  const double h = f.grid.spacing(), L = f.grid.length;
  auto wrap = [n](int i) { return (i % n + n) % n; };
  // Edge ids: horizontal edge (i,j)-(i,j+1) is 2*(i*n+j), vertical (i,j)-(i+1,j) is 2*(i*n+j)+1.
  std::unordered_map<long, ContourPoint> crossing;
  auto edge_point = [&](int i, int j, int dir) -> long {
    const int i2 = dir == 0 ? i : wrap(i + 1), j2 = dir == 0 ? wrap(j + 1) : j;
    const long id = 2L * (static_cast<long>(i) * n + j) + dir;
    if (!crossing.count(id)) {
      const double a = f(i, j), b = f(i2, j2);
      const double t = a / (a - b);
      ContourPoint p{j * h, i * h};
      if (dir == 0) p.x += t * h; else p.y += t * h;
      crossing[id] = p;
    }
    return id;
  };

  std::vector<std::pair<long, long>> segs;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const int ip = wrap(i + 1), jp = wrap(j + 1);
      const double v00 = f(i, j), v01 = f(i, jp), v10 = f(ip, j), v11 = f(ip, jp);
      const bool s00 = v00 > 0, s01 = v01 > 0, s10 = v10 > 0, s11 = v11 > 0;
      std::vector<long> e;
      long bottom = -1, top = -1, left = -1, right = -1;
      if (s00 != s01) bottom = edge_point(i, j, 0);
      if (s10 != s11) top = edge_point(ip, j, 0);
      if (s00 != s10) left = edge_point(i, j, 1);
      if (s01 != s11) right = edge_point(i, jp, 1);
      const int count = (bottom >= 0) + (top >= 0) + (left >= 0) + (right >= 0);
      if (count == 2) {
        for (long id : {bottom, top, left, right})
          if (id >= 0) e.push_back(id);
        segs.emplace_back(e[0], e[1]);
      } else if (count == 4) {
        const bool center = 0.25 * (v00 + v01 + v10 + v11) > 0;
        // Corners sharing the center sign are joined through the cell.
        if (center == s00) {
          segs.emplace_back(bottom, right);
          segs.emplace_back(top, left);
        } else {
          segs.emplace_back(bottom, left);
          segs.emplace_back(top, right);
        }
      }
    }

  std::unordered_map<long, std::vector<std::size_t>> at;
  for (std::size_t s = 0; s < segs.size(); ++s) {
    at[segs[s].first].push_back(s);
    at[segs[s].second].push_back(s);
  }
  std::vector<bool> used(segs.size(), false);
  LevelSetContour out;
  out.domain = L;

  auto walk = [&](std::size_t s0, long from, std::vector<long>& ids) {
    std::size_t s = s0;
    long cur = from;
    for (;;) {
      used[s] = true;
      const long next = segs[s].first == cur ? segs[s].second : segs[s].first;
      ids.push_back(next);
      std::size_t nxt = segs.size();
      for (std::size_t t : at[next])
        if (!used[t]) nxt = t;
      if (nxt == segs.size()) return;
      s = nxt;
      cur = next;
    }
  };

  // Open chains first (start at an endpoint with a single segment), then loops.
  for (int pass = 0; pass < 2; ++pass)
    for (std::size_t s = 0; s < segs.size(); ++s) {
      if (used[s]) continue;
      long start = segs[s].first;
      if (pass == 0) {
        if (at[segs[s].first].size() == 1) start = segs[s].first;
        else if (at[segs[s].second].size() == 1) start = segs[s].second;
        else continue;
      }
      std::vector<long> ids{start};
      walk(s, start, ids);
      const bool closed = ids.size() > 2 && ids.front() == ids.back();
      if (closed) ids.pop_back();
      std::vector<ContourPoint> pts;
      for (long id : ids) {
        ContourPoint p = crossing.at(id);
        if (!pts.empty()) {
          p.x = pts.back().x + min_image(p.x - pts.back().x, L);
          p.y = pts.back().y + min_image(p.y - pts.back().y, L);
          // Crossings at an exact zero node coincide; keep one.
          if (std::abs(p.x - pts.back().x) + std::abs(p.y - pts.back().y) < 1e-12 * L) continue;
        }
        pts.push_back(p);
      }
      if (closed && pts.size() > 1 &&
          std::abs(min_image(pts.back().x - pts.front().x, L)) + std::abs(min_image(pts.back().y - pts.front().y, L)) <
              1e-12 * L)
        pts.pop_back();
      out.lines.push_back(std::move(pts));
      out.closed.push_back(closed);
    }
  return out;
}

}  // namespace pfno
