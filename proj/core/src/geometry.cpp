#include "magobs/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "magobs/errors.hpp"
#include "magobs/parallel.hpp"

namespace magobs {

namespace {

constexpr double kSeamTol = 1e-12;

double reduce(double v, double period) {
  double r = std::fmod(v, period);
  if (r < 0.0) r += period;
  if (r >= period) r -= period;
  return r;
}

// Splits [a, a + len) mod 2pi into at most two intervals inside [0, 2pi].
std::vector<std::pair<double, double>> split_interval(double a, double b) {
  const double len = b - a;
  if (len >= kTwoPi - kSeamTol) return {{0.0, kTwoPi}};
  const double s = reduce(a, kTwoPi);
  const double e = s + len;
  if (e <= kTwoPi) return {{s, e}};
  return {{s, kTwoPi}, {0.0, e - kTwoPi}};
}

std::vector<Rect> normalize_pieces(const std::vector<Rect>& raw) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& r : raw) {
    xs.insert(xs.end(), {r.x0, r.x1});
    ys.insert(ys.end(), {r.y0, r.y1});
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());

  // Per x-slab, covered y-intervals; consecutive slabs with identical cover
  // are merged.
  std::vector<Rect> out;
  std::vector<std::pair<double, double>> prev_cover;
  std::vector<std::size_t> open;  // indices in out of the previous slab's pieces
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const double xa = xs[i];
    const double xb = xs[i + 1];
    std::vector<std::pair<double, double>> cover;
    for (std::size_t j = 0; j + 1 < ys.size(); ++j) {
      const double ya = ys[j];
      const double yb = ys[j + 1];
      const bool hit = std::any_of(raw.begin(), raw.end(), [&](const Rect& r) {
        return r.x0 <= xa && xb <= r.x1 && r.y0 <= ya && yb <= r.y1;
      });
      if (!hit) continue;
      if (!cover.empty() && cover.back().second == ya) {
        cover.back().second = yb;
      } else {
        cover.emplace_back(ya, yb);
      }
    }
    if (!cover.empty() && cover == prev_cover && !open.empty() && out[open.front()].x1 == xa) {
      for (std::size_t idx : open) out[idx].x1 = xb;
      continue;
    }
    open.clear();
    for (const auto& [ya, yb] : cover) {
      open.push_back(out.size());
      out.push_back({xa, xb, ya, yb});
    }
    prev_cover = std::move(cover);
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------- Region

Region Region::from_rects(const std::vector<Rect>& rects) {
  if (rects.empty()) throw InvalidInput("Region: no rectangles");
  Region region;
  std::vector<Rect> raw;
  for (const auto& r : rects) {
    if (!(r.x1 > r.x0) || !(r.y1 > r.y0))
      throw InvalidInput("Region: rectangle with empty interior");
    if (!std::isfinite(r.x0) || !std::isfinite(r.x1) || !std::isfinite(r.y0) ||
        !std::isfinite(r.y1))
      throw InvalidInput("Region: non-finite rectangle");
    const double w = std::min(r.width(), kTwoPi);
    const double h = std::min(r.height(), kTwoPi);
    const double sx = w >= kTwoPi - kSeamTol ? 0.0 : reduce(r.x0, kTwoPi);
    const double sy = h >= kTwoPi - kSeamTol ? 0.0 : reduce(r.y0, kTwoPi);
    region.sources_.push_back({sx, sx + w, sy, sy + h});
    for (const auto& [xa, xb] : split_interval(r.x0, r.x0 + w))
      for (const auto& [ya, yb] : split_interval(r.y0, r.y0 + h)) raw.push_back({xa, xb, ya, yb});
  }
  region.pieces_ = normalize_pieces(raw);
  return region;
}

Region Region::full_torus() { return from_rects({{0.0, kTwoPi, 0.0, kTwoPi}}); }

Region Region::horizontal_strip(double y0, double y1) {
  return from_rects({{0.0, kTwoPi, y0, y1}});
}

double Region::area() const {
  double a = 0.0;
  for (const auto& r : pieces_) a += r.area();
  return a;
}

bool Region::contains(double x, double y) const {
  const double u = reduce(x, kTwoPi);
  const double v = reduce(y, kTwoPi);
  return std::any_of(pieces_.begin(), pieces_.end(), [&](const Rect& r) {
    return r.x0 <= u && u <= r.x1 && r.y0 <= v && v <= r.y1;
  });
}

bool Region::is_full() const { return area() >= kTwoPi * kTwoPi * (1.0 - 1e-12); }

// ---------------------------------------------------------------- ArcSet

ArcSet ArcSet::full(double ell) {
  ArcSet s(ell);
  s.full_ = true;
  return s;
}

void ArcSet::add(double a, double b) {
  if (full_) return;
  if (b - a >= ell_ - kSeamTol * ell_) {
    full_ = true;
    arcs_.clear();
    return;
  }
  if (!(b > a)) return;
  const double s = reduce(a, ell_);
  const double e = s + (b - a);
  if (e <= ell_) {
    arcs_.emplace_back(s, e);
  } else {
    arcs_.emplace_back(s, ell_);
    arcs_.emplace_back(0.0, e - ell_);
  }
  normalize();
}

void ArcSet::normalize() {
  std::sort(arcs_.begin(), arcs_.end());
  std::vector<std::pair<double, double>> merged;
  for (const auto& arc : arcs_) {
    if (!merged.empty() && arc.first <= merged.back().second) {
      merged.back().second = std::max(merged.back().second, arc.second);
    } else {
      merged.push_back(arc);
    }
  }
  arcs_ = std::move(merged);
  if (total_length() >= ell_ * (1.0 - kSeamTol)) {
    full_ = true;
    arcs_.clear();
  }
}

double ArcSet::total_length() const {
  if (full_) return ell_;
  double len = 0.0;
  for (const auto& [a, b] : arcs_) len += b - a;
  return len;
}

double ArcSet::signed_distance(double s) const {
  if (full_) return std::numeric_limits<double>::infinity();
  if (arcs_.empty()) return -std::numeric_limits<double>::infinity();
  const double x = reduce(s, ell_);
  const bool wraps = arcs_.front().first <= 0.0 && arcs_.back().second >= ell_;
  std::vector<double> ends;
  bool inside = false;
  for (std::size_t i = 0; i < arcs_.size(); ++i) {
    const auto& [a, b] = arcs_[i];
    if (a <= x && x < b) inside = true;
    if (!(wraps && i == 0)) ends.push_back(a);
    if (!(wraps && i + 1 == arcs_.size())) ends.push_back(b);
  }
  double d = std::numeric_limits<double>::infinity();
  for (double e : ends) {
    double diff = std::abs(x - e);
    diff = std::min(diff, ell_ - diff);
    d = std::min(d, diff);
  }
  return inside ? d : -d;
}

std::vector<std::pair<double, double>> ArcSet::gaps() const {
  if (full_) return {};
  if (arcs_.empty()) return {{0.0, ell_}};
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i + 1 < arcs_.size(); ++i)
    out.emplace_back(arcs_[i].second, arcs_[i + 1].first - arcs_[i].second);
  const double tail_start = arcs_.back().second;
  const double tail_len = (ell_ - tail_start) + arcs_.front().first;
  if (tail_len > 0.0) out.emplace_back(reduce(tail_start, ell_), tail_len);
  return out;
}

// ---------------------------------------------------------------- directions

InscribedSquare inscribed_square(const Region& region) {
  if (region.sources().empty()) throw InvalidInput("inscribed_square: empty region");
  InscribedSquare best;
  for (const auto& r : region.sources()) {
    const double d = 0.5 * std::min(r.width(), r.height());
    if (d > best.delta) best = {0.5 * (r.x0 + r.x1), 0.5 * (r.y0 + r.y1), d};
  }
  return best;
}

int direction_cutoff(const Region& region) {
  const double delta = inscribed_square(region).delta;
  return static_cast<int>(std::ceil(kTwoPi / delta - 1e-12)) + 1;
}

std::vector<Direction> enumerate_directions(int lo, int hi) {
  if (lo < 1) lo = 1;
  std::vector<Direction> out;
  for (int h = lo; h < hi; ++h) {
    std::vector<Direction> level;
    for (int p = 0; p <= h; ++p)
      for (int q = -h; q <= h; ++q) {
        if (std::max(p, std::abs(q)) != h) continue;
        if (p == 0 && q != 1) continue;
        if (std::gcd(p, std::abs(q)) != 1) continue;
        level.push_back(Direction::make(p, q));
      }
    std::sort(level.begin(), level.end(), [](const Direction& a, const Direction& b) {
      const int sa = a.p() + std::abs(a.q());
      const int sb = b.p() + std::abs(b.q());
      if (sa != sb) return sa < sb;
      if (a.p() != b.p()) return a.p() > b.p();
      return a.q() > b.q();
    });
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

std::vector<Direction> enumerate_directions(int p0) {
  if (p0 < 1) throw InvalidInput("enumerate_directions: p0 must be positive");
  return enumerate_directions(1, p0);
}

ArcSet project_region(const Region& region, const Direction& dir) {
  ArcSet arcs(dir.circumference());
  for (const auto& r : region.pieces()) {
    const double c[4] = {dir.transversal(r.x0, r.y0), dir.transversal(r.x1, r.y0),
                         dir.transversal(r.x0, r.y1), dir.transversal(r.x1, r.y1)};
    arcs.add(*std::min_element(c, c + 4), *std::max_element(c, c + 4));
    if (arcs.is_full()) break;
  }
  return arcs;
}

namespace {

double uncovered_offset(const ArcSet& arcs) {
  if (arcs.signed_distance(0.0) < 0.0) return 0.0;
  const auto gaps = arcs.gaps();
  const auto widest = std::max_element(
      gaps.begin(), gaps.end(), [](const auto& a, const auto& b) { return a.second < b.second; });
  return std::fmod(widest->first + 0.5 * widest->second, arcs.circumference());
}

}  // namespace

GccReport gcc_check(const Region& region) {
  GccReport report;
  report.cutoff = direction_cutoff(region);
  for (const auto& dir : enumerate_directions(report.cutoff)) {
    const ArcSet arcs = project_region(region, dir);
    if (arcs.is_full()) continue;
    report.holds = false;
    report.offenders.push_back({dir, uncovered_offset(arcs)});
  }
  return report;
}

std::string to_string(MgccVerdict v) {
  switch (v) {
    case MgccVerdict::satisfied:
      return "satisfied";
    case MgccVerdict::violated:
      return "violated";
    case MgccVerdict::boundary_case:
      return "boundary-case";
    case MgccVerdict::auto_satisfied_beyond_cutoff:
      return "auto-satisfied-beyond-cutoff";
  }
  return "unknown";
}

namespace {

MgccDirectionRecord check_direction(const VectorPotential& a, const Region& region,
                                    const Direction& dir, double tol) {
  MgccDirectionRecord rec{dir, a_gamma(a, dir), {}, project_region(region, dir),
                          MgccVerdict::satisfied, false};
  if (rec.a_gamma.is_constant(1e-12)) {
    rec.critical.all_critical = true;
    rec.covered = rec.projection.is_full();
    rec.verdict = rec.covered ? MgccVerdict::satisfied : MgccVerdict::violated;
    return rec;
  }
  rec.critical = critical_points(rec.a_gamma);
  bool violated = false;
  bool boundary = false;
  for (const auto& cp : rec.critical.points) {
    const double d = rec.projection.signed_distance(cp.position);
    if (d >= tol) continue;
    if (d > -tol) {
      boundary = true;
    } else {
      violated = true;
    }
  }
  rec.covered = !violated && !boundary;
  rec.verdict = violated   ? MgccVerdict::violated
                : boundary ? MgccVerdict::boundary_case
                           : MgccVerdict::satisfied;
  return rec;
}

}  // namespace

MgccReport mgcc_check(const VectorPotential& a, const Region& region,
                      const MgccOptions& options) {
  MgccReport report;
  report.cutoff = direction_cutoff(region);
  const auto dirs = enumerate_directions(report.cutoff);
  std::vector<std::optional<MgccDirectionRecord>> slots(dirs.size());
  parallel_for(dirs.size(), [&](std::size_t i) {
    slots[i] = check_direction(a, region, dirs[i], options.tol);
  });
  for (auto& s : slots) report.directions.push_back(std::move(*s));

  if (options.audit_span > 0) {
    const auto beyond = enumerate_directions(report.cutoff, report.cutoff + options.audit_span);
    std::vector<std::optional<MgccDirectionRecord>> extra(beyond.size());
    parallel_for(beyond.size(), [&](std::size_t i) {
      auto rec = check_direction(a, region, beyond[i], options.tol);
      // The cutoff guarantee is what is being audited: a full projection
      // confirms it, anything else is reported with its computed verdict.
      if (rec.projection.is_full()) rec.verdict = MgccVerdict::auto_satisfied_beyond_cutoff;
      extra[i] = std::move(rec);
    });
    for (auto& s : extra) report.directions.push_back(std::move(*s));
  }

  bool boundary = false;
  for (const auto& rec : report.directions) {
    if (rec.verdict == MgccVerdict::violated) {
      report.overall = MgccVerdict::violated;
      return report;
    }
    boundary = boundary || rec.verdict == MgccVerdict::boundary_case;
  }
  report.overall = boundary ? MgccVerdict::boundary_case : MgccVerdict::satisfied;
  return report;
}

WitnessResult optimality_witness(const VectorPotential& a, const Region& region, double tol) {
  WitnessResult result;
  bool degenerate_only = false;
  for (const auto& dir : enumerate_directions(direction_cutoff(region))) {
    const CircleFunction ag = a_gamma(a, dir);
    if (ag.is_constant(1e-12)) continue;
    const ArcSet arcs = project_region(region, dir);
    if (arcs.is_full()) continue;
    for (const auto& cp : critical_points(ag).points) {
      if (arcs.signed_distance(cp.position) > -tol) continue;
      if (cp.degenerate) {
        degenerate_only = true;
        continue;
      }
      result.witness = Witness{dir, cp, cp.position};
      return result;
    }
  }
  result.note = degenerate_only ? "degenerate-only: every uncovered critical point is degenerate"
                                : "no uncovered critical point below the direction cutoff";
  return result;
}

}  // namespace magobs
