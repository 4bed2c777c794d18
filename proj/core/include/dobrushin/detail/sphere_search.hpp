#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

namespace dobrushin {

template <class F>
SphereMax maximize_on_sphere(F&& f, int restarts, std::uint64_t seed) {
  constexpr int kLat = 24;
  constexpr int kLon = 48;
  constexpr int kTopCells = 4;

  struct Candidate {
    double value;
    Eigen::Vector3d d;
  };
  std::vector<Candidate> grid;
  grid.reserve(kLat * kLon + 6);
  for (int axis = 0; axis < 3; ++axis) {
    for (double sign : {1.0, -1.0}) {
      Eigen::Vector3d d = Eigen::Vector3d::Zero();
      d(axis) = sign;
      grid.push_back({f(d), d});
    }
  }
  for (int i = 0; i < kLat; ++i) {
    const double theta = std::numbers::pi * (i + 0.5) / kLat;
    for (int j = 0; j < kLon; ++j) {
      const double phi = 2.0 * std::numbers::pi * j / kLon;
      Eigen::Vector3d d(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                        std::cos(theta));
      grid.push_back({f(d), d});
    }
  }
  const auto top = std::min<std::size_t>(kTopCells, grid.size());
  std::partial_sort(grid.begin(), grid.begin() + static_cast<std::ptrdiff_t>(top), grid.end(),
                    [](const Candidate& a, const Candidate& b) { return a.value > b.value; });

  std::vector<Eigen::Vector3d> starts;
  for (std::size_t k = 0; k < top; ++k) starts.push_back(grid[k].d);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int r = 0; r < restarts; ++r) {
    Eigen::Vector3d d(gauss(rng), gauss(rng), gauss(rng));
    if (d.norm() < 1e-9) d = Eigen::Vector3d::UnitX();
    starts.push_back(d.normalized());
  }

  std::vector<Candidate> refined;
  refined.reserve(starts.size());
  for (const Eigen::Vector3d& s : starts) {
    Eigen::Vector3d d = s;
    double best = f(d);
    double h = 0.25;
    int guard = 0;
    while (h > 1e-13 && guard++ < 4000) {
      bool improved = false;
      for (int k = 0; k < 3 && !improved; ++k) {
        for (double sign : {1.0, -1.0}) {
          Eigen::Vector3d trial = d;
          trial(k) += sign * h;
          const double n = trial.norm();
          if (n < 1e-12) continue;
          trial /= n;
          const double v = f(trial);
          if (v > best) {
            best = v;
            d = trial;
            improved = true;
            break;
          }
        }
      }
      if (!improved) h *= 0.5;
    }
    refined.push_back({best, d});
  }
  std::sort(refined.begin(), refined.end(),
            [](const Candidate& a, const Candidate& b) { return a.value > b.value; });
  SphereMax out;
  out.value = refined.front().value;
  out.direction = refined.front().d;
  out.spread = refined.size() > 1 ? refined[0].value - refined[1].value : 0.0;
  return out;
}

}  // namespace dobrushin
