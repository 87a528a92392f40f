#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace magobs {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr cplx kI{0.0, 1.0};

/// Integer lattice point of Z^2, used both as a Fourier mode and a shift.
struct Mode {
  int k1 = 0;
  int k2 = 0;

  friend constexpr bool operator==(const Mode&, const Mode&) = default;
  friend constexpr auto operator<=>(const Mode&, const Mode&) = default;
  constexpr Mode operator+(const Mode& o) const { return {k1 + o.k1, k2 + o.k2}; }
  constexpr Mode operator-(const Mode& o) const { return {k1 - o.k1, k2 - o.k2}; }
  constexpr Mode operator-() const { return {-k1, -k2}; }
};

/// Rectangular window of Fourier modes
///   { k : |k1 - c1| <= n1, |k2 - c2| <= n2 }
/// ordered lexicographically (k1 major, k2 minor). The usual square
/// truncation |k|_inf <= N is ModeBasis(N).
///
/// Off-centre windows are used for frequency-localized experiments
/// (x-frequencies near 1/h) and for separable one-dimensional blocks
/// (n1 = 0).
class ModeBasis {
 public:
  ModeBasis() = default;
  explicit ModeBasis(int n) : ModeBasis(Mode{0, 0}, n, n) {}
  ModeBasis(Mode center, int n1, int n2);

  Mode center() const { return center_; }
  int half_width_x() const { return n1_; }
  int half_width_y() const { return n2_; }
  /// Largest half-width; equals N for the square basis.
  int bandwidth() const { return n1_ > n2_ ? n1_ : n2_; }
  std::size_t size() const { return static_cast<std::size_t>(nx() * ny()); }

  Mode mode(std::size_t index) const {
    const int i = static_cast<int>(index);
    return {center_.k1 - n1_ + i / ny(), center_.k2 - n2_ + i % ny()};
  }
  std::optional<std::size_t> index(Mode k) const {
    const int a = k.k1 - center_.k1 + n1_;
    const int b = k.k2 - center_.k2 + n2_;
    if (a < 0 || a >= nx() || b < 0 || b >= ny()) return std::nullopt;
    return static_cast<std::size_t>(a * ny() + b);
  }
  bool contains(Mode k) const { return index(k).has_value(); }
  /// Distance (in modes) from k to the window edge; negative outside.
  int interior_margin(Mode k) const;

  friend bool operator==(const ModeBasis&, const ModeBasis&) = default;

 private:
  int nx() const { return 2 * n1_ + 1; }
  int ny() const { return 2 * n2_ + 1; }

  Mode center_{0, 0};
  int n1_ = 0;
  int n2_ = 0;
};

/// Fourier coefficients of a state on the torus, normalized so that
/// ||u||^2 = sum |c_k|^2 = (2 pi)^-2 \int |u|^2.
struct ModeVector {
  ModeBasis basis;
  CVector coeffs;

  double norm() const { return coeffs.norm(); }
};

/// Unit-norm Gaussian packet of modes centred at `mean` with standard
/// deviations (s1, s2) in mode units.
ModeVector gaussian_packet(const ModeBasis& basis, double mean1, double mean2, double s1,
                           double s2);

}  // namespace magobs
