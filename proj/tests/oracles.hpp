#pragma once

// Independent reference computations used only by the tests: brute-force
// enumeration and direct summation, written without the library's recursions.

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace oracle {

inline double weight(int k, int R, double c0, double c1) {
  double w = 1.0;
  for (int i = 1; i <= k; ++i) w /= (i <= R ? c0 : c1);
  return w;
}

inline void for_each_config(int L, int N, const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> eta(L, 0);
  std::function<void(int, int)> rec = [&](int x, int left) {
    if (x == L - 1) {
      eta[x] = left;
      f(eta);
      return;
    }
    for (int k = 0; k <= left; ++k) {
      eta[x] = k;
      rec(x + 1, left - k);
    }
  };
  rec(0, N);
}

inline double partition(int L, int N, int R, double c0, double c1) {
  double z = 0.0;
  for_each_config(L, N, [&](const std::vector<int>& eta) {
    double w = 1.0;
    for (int k : eta) w *= weight(k, R, c0, c1);
    z += w;
  });
  return z;
}

// Z^m: configurations with exactly m sites above R.
inline std::vector<double> phase_partition(int L, int N, int R, double c0, double c1) {
  std::vector<double> z(L + 1, 0.0);
  for_each_config(L, N, [&](const std::vector<int>& eta) {
    double w = 1.0;
    int m = 0;
    for (int k : eta) {
      w *= weight(k, R, c0, c1);
      if (k > R) ++m;
    }
    z[m] += w;
  });
  return z;
}

inline long long count_bounded(int L, int N, int R) {
  long long c = 0;
  for_each_config(L, N, [&](const std::vector<int>& eta) {
    bool ok = true;
    for (int k : eta) ok = ok && k <= R;
    if (ok) ++c;
  });
  return c;
}

// Truncated series sum_{k <= K} w_R(k) phi^k.
inline double z_series(double phi, int R, double c0, double c1, int K) {
  double z = 0.0;
  double term = 1.0;
  for (int k = 0; k <= K; ++k) {
    z += term;
    term *= phi / (k + 1 <= R ? c0 : c1);
  }
  return z;
}


// Least concave majorant of (x, y) evaluated at x[i].
inline std::vector<double> upper_hull_values(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<std::size_t> hull;
  for (std::size_t i = 0; i < x.size(); ++i) {
    while (hull.size() >= 2) {
      const std::size_t a = hull[hull.size() - 2];
      const std::size_t b = hull.back();
      const double cross = (x[b] - x[a]) * (y[i] - y[a]) - (y[b] - y[a]) * (x[i] - x[a]);
      if (cross >= 0.0) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(i);
  }
  std::vector<double> out(x.size());
  std::size_t h = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    while (h + 1 < hull.size() && x[hull[h + 1]] < x[i]) ++h;
    if (h + 1 >= hull.size()) {
      out[i] = y[hull[h]];
      continue;
    }
    const std::size_t a = hull[h];
    const std::size_t b = hull[h + 1];
    out[i] = y[a] + (y[b] - y[a]) * (x[i] - x[a]) / (x[b] - x[a]);
  }
  return out;
}

}  // namespace oracle
