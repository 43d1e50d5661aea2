#include <cmath>
#include <limits>
#include <random>

#include "mythqa/error.hpp"
#include "mythqa/suggest.hpp"

namespace mythqa {

namespace {

double sq_dist(const std::vector<float>& p, const std::vector<double>& c) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = p[i] - c[i];
    s += d * d;
  }
  return s;
}

// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::vector<double> as_centroid(const std::vector<float>& p) { return {p.begin(), p.end()}; }

std::vector<std::vector<double>> seed_plus_plus(const std::vector<std::vector<float>>& pts,
                                                std::size_t k, std::mt19937_64& rng) {
  const std::size_t n = pts.size();
  std::vector<std::vector<double>> centers;
  std::vector<bool> chosen(n, false);
  std::size_t first = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n));
  if (first >= n) first = n - 1;
  centers.push_back(as_centroid(pts[first]));
  chosen[first] = true;

  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = sq_dist(pts[i], centers[0]);
  while (centers.size() < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += d2[i];
    std::size_t pick = n;
    if (total > 0.0) {
      const double target = uniform01(rng) * total;
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (d2[i] <= 0.0) continue;
        acc += d2[i];
        pick = i;
        if (acc > target) break;
      }
    } else {
      // Every remaining point coincides with a center.
      for (std::size_t i = 0; i < n && pick == n; ++i) {
        if (!chosen[i]) pick = i;
      }
    }
    chosen[pick] = true;
    centers.push_back(as_centroid(pts[pick]));
    for (std::size_t i = 0; i < n; ++i) d2[i] = std::min(d2[i], sq_dist(pts[i], centers.back()));
  }
  return centers;
}

std::size_t nearest(const std::vector<float>& p, const std::vector<std::vector<double>>& cs) {
  std::size_t best = 0;
  double bd = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < cs.size(); ++c) {
    const double d = sq_dist(p, cs[c]);
    if (d < bd) {
      bd = d;
      best = c;
    }
  }
  return best;
}

void recompute(const std::vector<std::vector<float>>& pts, const std::vector<std::size_t>& assign,
               std::vector<std::vector<double>>& cs) {
  const std::size_t dim = pts.front().size();
  std::vector<std::vector<double>> sum(cs.size(), std::vector<double>(dim, 0.0));
  std::vector<std::size_t> count(cs.size(), 0);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    ++count[assign[i]];
    for (std::size_t d = 0; d < dim; ++d) sum[assign[i]][d] += pts[i][d];
  }
  for (std::size_t c = 0; c < cs.size(); ++c) {
    if (count[c] == 0) continue;
    for (std::size_t d = 0; d < dim; ++d) cs[c][d] = sum[c][d] / static_cast<double>(count[c]);
  }
}

void repair_empty(const std::vector<std::vector<float>>& pts, std::vector<std::size_t>& assign,
                  std::vector<std::vector<double>>& cs) {
  for (std::size_t c = 0; c < cs.size(); ++c) {
    std::vector<std::size_t> count(cs.size(), 0);
    for (auto a : assign) ++count[a];
    if (count[c] != 0) continue;
    std::size_t far = pts.size();
    double fd = -1.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (count[assign[i]] < 2) continue;
      const double d = sq_dist(pts[i], cs[assign[i]]);
      if (d > fd) {
        fd = d;
        far = i;
      }
    }
    if (far == pts.size()) continue;  // unreachable while n >= k
    assign[far] = c;
    cs[c] = as_centroid(pts[far]);
    recompute(pts, assign, cs);
  }
}

}  // namespace

KMeansResult kmeans(const std::vector<std::vector<float>>& vectors, std::size_t k,
                    std::size_t iters, std::uint64_t seed) {
  if (k == 0) throw InvalidArgument("kmeans: k must be at least 1");
  if (vectors.size() < k) {
    throw InvalidArgument("kmeans: " + std::to_string(vectors.size()) + " points for k = " +
                          std::to_string(k));
  }
  const std::size_t dim = vectors.front().size();
  for (const auto& v : vectors) {
    if (v.size() != dim) throw InvalidArgument("kmeans: vectors differ in dimension");
  }

  std::mt19937_64 rng(seed);
  KMeansResult r;
  r.centroids = seed_plus_plus(vectors, k, rng);
  r.assignment.assign(vectors.size(), 0);
  bool first = true;
  for (std::size_t it = 0; it < std::max<std::size_t>(iters, 1); ++it) {
    std::vector<std::size_t> next(vectors.size());
    for (std::size_t i = 0; i < vectors.size(); ++i) next[i] = nearest(vectors[i], r.centroids);
    recompute(vectors, next, r.centroids);
    repair_empty(vectors, next, r.centroids);
    ++r.iterations;
    const bool stable = !first && next == r.assignment;
    r.assignment = std::move(next);
    first = false;
    if (stable) break;
  }
  return r;
}

}  // namespace mythqa
