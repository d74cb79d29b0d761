#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "unimod/error.hpp"
#include "unimod/haar.hpp"
#include "unimod/lattice.hpp"
#include "unimod/parallel.hpp"
#include "unimod/regions.hpp"

namespace unimod {

// Samples per block of a parallel Monte Carlo run. Block b draws from the
// sampler stream b, so results depend only on (seed, N).
inline constexpr std::size_t kMonteCarloBlock = 8192;

struct MonteCarloOptions {
  std::uint64_t seed = 0;
  std::size_t samples = 1000000;
  unsigned workers = default_workers();
};

// Running sums of a sampled quantity.
struct SampleSums {
  std::uint64_t n = 0;
  double sum = 0.0;
  double sum_sq = 0.0;

  void add(double v) {
    ++n;
    sum += v;
    sum_sq += v * v;
  }
  void merge(const SampleSums& o) {
    n += o.n;
    sum += o.sum;
    sum_sq += o.sum_sq;
  }
  double mean() const { return n == 0 ? 0.0 : sum / static_cast<double>(n); }
  double variance() const {
    if (n < 2) return 0.0;
    const double m = mean();
    const double nd = static_cast<double>(n);
    return std::max(0.0, (sum_sq - nd * m * m) / (nd - 1.0));
  }
  double standard_error() const {
    return n == 0 ? 0.0 : std::sqrt(variance() / static_cast<double>(n));
  }
};

// Runs `visit(sampler, index, accumulator)` for N Haar samples split into
// fixed blocks, then folds the block accumulators in block order.
template <class Acc, class Visit>
Acc run_haar_blocks(const MonteCarloOptions& options, Visit&& visit) {
  auto blocks = run_blocks<Acc>(
      options.samples, kMonteCarloBlock, options.workers,
      [&](std::size_t b, std::size_t begin, std::size_t end) {
        HaarSampler sampler(options.seed, b);
        Acc acc{};
        for (std::size_t i = begin; i < end; ++i) visit(sampler, i, acc);
        return acc;
      });
  Acc total{};
  for (auto& a : blocks) total.merge(a);
  return total;
}

struct MonteCarloResult {
  double mean = 0.0;
  double standard_error = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  int power = 1;
  // Observed values of the primitive count and how often each occurred.
  std::map<std::uint64_t, std::uint64_t> histogram;

  double fraction(std::uint64_t count) const {
    const auto it = histogram.find(count);
    return it == histogram.end() || samples == 0
               ? 0.0
               : static_cast<double>(it->second) / static_cast<double>(samples);
  }
};

// Mean of f^k over Haar lattices, f the number of primitive points in the
// region, together with the distribution of f.
inline MonteCarloResult mc_moment(const ConvexRegion& region, int power,
                                  const MonteCarloOptions& options) {
  if (power != 1 && power != 2) throw ArgumentError("mc_moment: k must be 1 or 2");
  if (options.samples < 1000) throw ArgumentError("mc_moment: N must be >= 1000");
  struct Acc {
    std::uint64_t n = 0;
    std::uint64_t sum = 0;
    std::uint64_t sum_sq = 0;
    std::map<std::uint64_t, std::uint64_t> histogram;
    void merge(const Acc& o) {
      n += o.n;
      sum += o.sum;
      sum_sq += o.sum_sq;
      for (const auto& [k, v] : o.histogram) histogram[k] += v;
    }
  };
  const Acc acc = run_haar_blocks<Acc>(options, [&](HaarSampler& s, std::size_t i, Acc& a) {
    const LatticeBasis basis = s.sample_lattice();
    std::uint64_t count = 0;
    try {
      count = count_primitive_in_region(reduce(basis), region);
    } catch (const ResourceError& e) {
      throw ResourceError("sample " + std::to_string(i) + ": " + e.what());
    }
    const std::uint64_t value = power == 1 ? count : count * count;
    ++a.n;
    a.sum += value;
    a.sum_sq += value * value;
    ++a.histogram[count];
  });
  // Integer sums are exact; the variance is formed once at the end.
  const double n = static_cast<double>(acc.n);
  const double mean = static_cast<double>(acc.sum) / n;
  const double second = static_cast<double>(acc.sum_sq) / n;
  const double var = std::max(0.0, (second - mean * mean) * n / (n - 1.0));
  MonteCarloResult out;
  out.mean = mean;
  out.standard_error = std::sqrt(var / n);
  out.samples = acc.n;
  out.seed = options.seed;
  out.power = power;
  out.histogram = acc.histogram;
  return out;
}

struct FractionEstimate {
  double fraction = 0.0;
  double standard_error = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t hits = 0;
};

inline FractionEstimate make_fraction(std::uint64_t hits, std::uint64_t n) {
  const double p = n == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(n);
  const double se = n < 2 ? 0.0 : std::sqrt(p * (1.0 - p) / static_cast<double>(n - 1));
  return {p, se, n, hits};
}

// Fraction of Haar lattices with Delta <= r.
inline FractionEstimate mc_kr_fraction(double r, const MonteCarloOptions& options) {
  if (!(r >= 0.0)) throw ArgumentError("mc_kr_fraction: r must be >= 0");
  struct Acc {
    std::uint64_t n = 0, hits = 0;
    void merge(const Acc& o) { n += o.n; hits += o.hits; }
  };
  const Acc acc = run_haar_blocks<Acc>(options, [&](HaarSampler& s, std::size_t, Acc& a) {
    ++a.n;
    if (delta_from_reduced(reduce(s.sample_lattice())) <= r) ++a.hits;
  });
  return make_fraction(acc.hits, acc.n);
}

// A value computed by up to three independent routes.
struct MomentReport {
  std::optional<double> exact;
  std::optional<double> quadrature;
  std::optional<double> quadrature_error;
  std::optional<double> monte_carlo;
  std::optional<double> monte_carlo_se;
  std::uint64_t samples = 0;
  std::vector<double> terms;
};

}  // namespace unimod
