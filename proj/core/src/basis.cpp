#include "magobs/basis.hpp"

#include <algorithm>
#include <cmath>

#include "magobs/errors.hpp"

namespace magobs {

ModeBasis::ModeBasis(Mode center, int n1, int n2) : center_(center), n1_(n1), n2_(n2) {
  if (n1 < 0 || n2 < 0) throw InvalidInput("ModeBasis: half-widths must be nonnegative");
}

int ModeBasis::interior_margin(Mode k) const {
  const int d1 = n1_ - std::abs(k.k1 - center_.k1);
  const int d2 = n2_ - std::abs(k.k2 - center_.k2);
  return std::min(d1, d2);
}

ModeVector gaussian_packet(const ModeBasis& basis, double mean1, double mean2, double s1,
                           double s2) {
  if (!(s1 > 0.0) || !(s2 > 0.0)) throw InvalidInput("gaussian_packet: widths must be positive");
  ModeVector v{basis, CVector::Zero(static_cast<Eigen::Index>(basis.size()))};
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const Mode k = basis.mode(i);
    const double a = (k.k1 - mean1) / s1;
    const double b = (k.k2 - mean2) / s2;
    v.coeffs[static_cast<Eigen::Index>(i)] = std::exp(-0.5 * (a * a + b * b));
  }
  const double n = v.coeffs.norm();
  if (n == 0.0) throw InvalidInput("gaussian_packet: packet vanishes on the basis");
  v.coeffs /= n;
  return v;
}

}  // namespace magobs
