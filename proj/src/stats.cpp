#include "heterocut/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "heterocut/parallel.hpp"

namespace heterocut {

double EmpiricalDistribution::mean() const {
  double total = 0.0;
  for (const double s : samples) total += s;
  return samples.empty() ? 0.0 : total / static_cast<double>(samples.size());
}

EmpiricalDistribution sphere_pair_distance_samples(std::int64_t n, SeedStream& stream,
                                                   int bins) {
  if (n < 1) throw std::invalid_argument("sphere_pair_distance_samples: n < 1");
  EmpiricalDistribution dist;
  dist.samples.resize(n);

  const std::uint64_t base = stream.next_u64();
  parallel_for(0, n, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t s = lo; s < hi; ++s) {
      CounterRng rng(derive_seed(base, static_cast<std::uint64_t>(s)));
      double p[6];
      for (int v = 0; v < 2; ++v) {
        const double z = rng.uniform(-1.0, 1.0);
        const double phi = rng.uniform(0.0, 2.0 * M_PI);
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        p[3 * v + 0] = r * std::cos(phi);
        p[3 * v + 1] = r * std::sin(phi);
        p[3 * v + 2] = z;
      }
      const double dx = p[0] - p[3], dy = p[1] - p[4], dz = p[2] - p[5];
      dist.samples[s] = std::sqrt(dx * dx + dy * dy + dz * dz);
    }
  });

  dist.bin_edges.resize(bins + 1);
  for (int b = 0; b <= bins; ++b) dist.bin_edges[b] = 2.0 * b / bins;
  dist.bin_mass.assign(bins, 0.0);
  for (const double s : dist.samples) {
    int b = static_cast<int>(s / 2.0 * bins);
    b = std::clamp(b, 0, bins - 1);
    dist.bin_mass[b] += 1.0;
  }
  for (double& m : dist.bin_mass) m /= static_cast<double>(n);
  return dist;
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    worst = std::max(worst, std::abs((static_cast<double>(i) + 1.0) / n - f));
    worst = std::max(worst, std::abs(f - static_cast<double>(i) / n));
  }
  return worst;
}

double two_sample_ks(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t ia = 0, ib = 0;
  double worst = 0.0;
  while (ia < a.size() && ib < b.size()) {
    const double x = std::min(a[ia], b[ib]);
    while (ia < a.size() && a[ia] <= x) ++ia;
    while (ib < b.size() && b[ib] <= x) ++ib;
    worst = std::max(worst, std::abs(static_cast<double>(ia) / na - static_cast<double>(ib) / nb));
  }
  return worst;
}

double max_gaussian_bound_check(std::span<const double> mus, std::span<const double> sigmas,
                                int trials, SeedStream& stream) {
  if (mus.size() != sigmas.size() || mus.size() < 2)
    throw std::invalid_argument("max_gaussian_bound_check: need matching arrays, n >= 2");
  if (trials < 1) throw std::invalid_argument("max_gaussian_bound_check: trials < 1");
  const std::size_t n = mus.size();

  double mu_max = mus[0], sigma_max = sigmas[0];
  for (std::size_t i = 1; i < n; ++i) {
    mu_max = std::max(mu_max, mus[i]);
    sigma_max = std::max(sigma_max, sigmas[i]);
  }
  const double bound = mu_max + 2.0 * std::sqrt(std::log(static_cast<double>(n))) * sigma_max;

  const std::uint64_t base = stream.next_u64();
  std::vector<std::uint8_t> exceeded(trials, 0);
  parallel_for(0, trials, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t t = lo; t < hi; ++t) {
      SeedStream rng(derive_seed(base, static_cast<std::uint64_t>(t)));
      double max_y = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < n; ++i)
        max_y = std::max(max_y, mus[i] + sigmas[i] * rng.gaussian());
      if (max_y > bound) exceeded[t] = 1;
    }
  });
  std::int64_t count = 0;
  for (const std::uint8_t e : exceeded) count += e;
  return static_cast<double>(count) / static_cast<double>(trials);
}

}  // namespace heterocut
