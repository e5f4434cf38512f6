#pragma once

// Reference implementations used only by the tests. They are written to be
// obviously correct rather than fast.

#include <cstddef>
#include <queue>
#include <utility>
#include <vector>

#include "stochastid/svd_leg.hpp"

namespace oracle {

struct Counts {
  int b0 = 0;
  int b1 = 0;
};

// Two flood fills with explicit queues: 8-neighbourhood over foreground,
// 4-neighbourhood over background; background regions that reach the
// border are not holes.
inline Counts flood_fill_betti(const stochastid::svd::BinaryImage& img) {
  const int rows = img.rows();
  const int cols = img.cols();
  std::vector<char> seen(static_cast<std::size_t>(rows * cols), 0);
  auto id = [cols](int r, int c) { return static_cast<std::size_t>(r * cols + c); };
  Counts out;

  for (int r0 = 0; r0 < rows; ++r0) {
    for (int c0 = 0; c0 < cols; ++c0) {
      if (seen[id(r0, c0)]) continue;
      const bool fg = img.at(r0, c0);
      bool touches_border = false;
      std::queue<std::pair<int, int>> q;
      q.emplace(r0, c0);
      seen[id(r0, c0)] = 1;
      while (!q.empty()) {
        const auto [r, c] = q.front();
        q.pop();
        if (r == 0 || c == 0 || r == rows - 1 || c == cols - 1) touches_border = true;
        for (int dr = -1; dr <= 1; ++dr) {
          for (int dc = -1; dc <= 1; ++dc) {
            if (dr == 0 && dc == 0) continue;
            if (!fg && dr != 0 && dc != 0) continue;
            const int nr = r + dr;
            const int nc = c + dc;
            if (nr < 0 || nc < 0 || nr >= rows || nc >= cols) continue;
            if (seen[id(nr, nc)] || img.at(nr, nc) != fg) continue;
            seen[id(nr, nc)] = 1;
            q.emplace(nr, nc);
          }
        }
      }
      if (fg) {
        ++out.b0;
      } else if (!touches_border) {
        ++out.b1;
      }
    }
  }
  return out;
}

// Euler characteristic V - E + F of the closed cell complex spanned by the
// foreground pixels (each pixel a closed unit square). That complex has
// 8-connected components, matching the b0 - b1 convention of betti().
inline long euler_characteristic(const stochastid::svd::BinaryImage& img) {
  const int rows = img.rows();
  const int cols = img.cols();
  auto fg = [&](int r, int c) { return r >= 0 && c >= 0 && r < rows && c < cols && img.at(r, c); };
  long vertices = 0;
  long edges = 0;
  long faces = 0;
  for (int r = 0; r <= rows; ++r) {
    for (int c = 0; c <= cols; ++c) {
      // Vertex (r, c) is the top-left corner of pixel (r, c).
      if (fg(r - 1, c - 1) || fg(r - 1, c) || fg(r, c - 1) || fg(r, c)) ++vertices;
      // Horizontal edge from (r, c) to (r, c+1) borders pixels (r-1, c) and (r, c).
      if (c < cols && (fg(r - 1, c) || fg(r, c))) ++edges;
      // Vertical edge from (r, c) to (r+1, c) borders pixels (r, c-1) and (r, c).
      if (r < rows && (fg(r, c - 1) || fg(r, c))) ++edges;
      if (r < rows && c < cols && fg(r, c)) ++faces;
    }
  }
  return vertices - edges + faces;
}

}  // namespace oracle
