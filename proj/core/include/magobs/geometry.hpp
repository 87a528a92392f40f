#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "magobs/direction.hpp"
#include "magobs/fields.hpp"

namespace magobs {

/// Axis-aligned rectangle [x0,x1] x [y0,y1].
struct Rect {
  double x0 = 0.0;
  double x1 = 0.0;
  double y0 = 0.0;
  double y1 = 0.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double area() const { return width() * height(); }
};

/// Finite union of rectangles on T^2, interpreted mod 2 pi.
///
/// Input rectangles may straddle the fundamental domain (x0 < 0, say); they
/// are reduced and split, then normalized into non-overlapping pieces inside
/// [0, 2pi]^2. The reduced but unsplit rectangles are kept as `sources` for
/// the inscribed-square computation.
class Region {
 public:
  static Region from_rects(const std::vector<Rect>& rects);
  static Region full_torus();
  /// T_x x (y0, y1).
  static Region horizontal_strip(double y0, double y1);

  const std::vector<Rect>& pieces() const { return pieces_; }
  const std::vector<Rect>& sources() const { return sources_; }
  double area() const;
  bool contains(double x, double y) const;
  bool is_full() const;

 private:
  std::vector<Rect> pieces_;
  std::vector<Rect> sources_;
};

/// Union of arcs on a circle of circumference ell. Arcs are stored as sorted,
/// disjoint intervals [a, b) with 0 <= a < b <= ell; an arc ending at ell and
/// one starting at 0 are the same arc across the seam.
class ArcSet {
 public:
  explicit ArcSet(double ell) : ell_(ell) {}
  static ArcSet full(double ell);

  /// Adds [a, b) mod ell; b - a >= ell fills the circle.
  void add(double a, double b);

  double circumference() const { return ell_; }
  bool is_full() const { return full_; }
  bool is_empty() const { return !full_ && arcs_.empty(); }
  const std::vector<std::pair<double, double>>& arcs() const { return arcs_; }
  double total_length() const;

  /// Distance from s to the nearest arc endpoint: positive inside the set,
  /// negative outside. Infinite for the full circle.
  double signed_distance(double s) const;
  /// Complementary arcs as (start, length), start in [0, ell).
  std::vector<std::pair<double, double>> gaps() const;

 private:
  void normalize();

  double ell_;
  bool full_ = false;
  std::vector<std::pair<double, double>> arcs_;
};

/// Largest square (centre, half-side delta) inside one of the region's
/// rectangles.
struct InscribedSquare {
  double cx = 0.0;
  double cy = 0.0;
  double delta = 0.0;
};
InscribedSquare inscribed_square(const Region& region);

/// Height p0 = ceil(2 pi / delta) + 1 beyond which every direction projects
/// the region onto the full transversal circle.
int direction_cutoff(const Region& region);

/// Canonical primitive directions with max(|p|,|q|) < p0, ordered by height.
std::vector<Direction> enumerate_directions(int p0);
/// Canonical primitive directions with lo <= max(|p|,|q|) < hi.
std::vector<Direction> enumerate_directions(int lo, int hi);

/// Projection of the region onto the transversal coordinate s = z.gamma_perp.
ArcSet project_region(const Region& region, const Direction& dir);

struct GccOffender {
  Direction direction;
  /// Transversal coordinate of a closed geodesic missing the region.
  double offset;
};

struct GccReport {
  bool holds = true;
  int cutoff = 0;
  std::vector<GccOffender> offenders;
};

GccReport gcc_check(const Region& region);

enum class MgccVerdict { satisfied, violated, boundary_case, auto_satisfied_beyond_cutoff };
std::string to_string(MgccVerdict v);

struct MgccDirectionRecord {
  Direction direction;
  CircleFunction a_gamma;
  CriticalPointSet critical;
  ArcSet projection;
  MgccVerdict verdict;
  /// Every critical point covered with margin (or full circle when A_gamma
  /// is constant).
  bool covered = false;
};

struct MgccReport {
  int cutoff = 0;
  MgccVerdict overall = MgccVerdict::satisfied;
  std::vector<MgccDirectionRecord> directions;
};

struct MgccOptions {
  double tol = 1e-6;
  /// When positive, directions with cutoff <= height < cutoff + audit_span are
  /// also checked instead of being marked satisfied by the cutoff guarantee.
  int audit_span = 0;
};

MgccReport mgcc_check(const VectorPotential& a, const Region& region,
                      const MgccOptions& options = {});

struct Witness {
  Direction direction;
  CriticalPoint critical_point;
  /// Transversal coordinate of the geodesic through the critical point.
  double offset;
};

struct WitnessResult {
  std::optional<Witness> witness;
  std::string note;
};

/// First direction (in enumeration order) with a non-degenerate critical
/// point of A_gamma at distance >= tol outside the closed projection.
WitnessResult optimality_witness(const VectorPotential& a, const Region& region,
                                 double tol = 1e-6);

}  // namespace magobs
