#include "magobs/direction.hpp"

#include <cstdlib>
#include <numeric>

#include "magobs/errors.hpp"

namespace magobs {

Direction Direction::make(int p, int q) {
  if (p == 0 && q == 0) throw InvalidInput("Direction: (0,0) is not a direction");
  if (std::gcd(std::abs(p), std::abs(q)) != 1) {
    throw InvalidInput("Direction: (" + std::to_string(p) + "," + std::to_string(q) +
                       ") is not primitive");
  }
  if (p < 0 || (p == 0 && q < 0)) {
    p = -p;
    q = -q;
  }
  return Direction(p, q);
}

int Direction::height() const { return std::max(std::abs(p_), std::abs(q_)); }

std::string Direction::str() const {
  return "(" + std::to_string(p_) + "," + std::to_string(q_) + ")";
}

}  // namespace magobs
