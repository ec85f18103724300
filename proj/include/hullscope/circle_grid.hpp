#ifndef HULLSCOPE_CIRCLE_GRID_HPP
#define HULLSCOPE_CIRCLE_GRID_HPP

#include <cmath>
#include <vector>

#include "hullscope/errors.hpp"
#include "hullscope/types.hpp"

namespace hullscope {

// M equispaced boundary nodes z_k = exp(2 pi i k / M); all ess-sup estimates
// over the circle are taken as maxima over these nodes.
struct CircleGrid {
  int size = 0;
  std::vector<Complex> nodes;

  explicit CircleGrid(int m) : size(m) {
    if (m < 4 || (m & (m - 1)) != 0)
      throw ConfigError("circle grid size must be a power of two >= 4, got " + std::to_string(m));
    nodes.resize(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k)
      nodes[static_cast<std::size_t>(k)] = std::polar(1.0, 2.0 * kPi * k / m);
  }

  Complex node(int k) const { return nodes[static_cast<std::size_t>(k)]; }
};

}  // namespace hullscope

#endif  // HULLSCOPE_CIRCLE_GRID_HPP
