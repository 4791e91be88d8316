#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "heterocut/rng.hpp"

namespace heterocut {

struct EmpiricalDistribution {
  std::vector<double> samples;
  std::vector<double> bin_edges;  // bins + 1 edges
  std::vector<double> bin_mass;   // sums to 1

  double mean() const;
};

/// n i.i.d. distances between two uniform points on the unit sphere,
/// histogrammed over [0, 2]. The law has density r/2 and mean 4/3.
EmpiricalDistribution sphere_pair_distance_samples(std::int64_t n, SeedStream& stream,
                                                   int bins = 40);

/// Kolmogorov-Smirnov statistic of samples against a CDF (samples get sorted).
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

/// Two-sample KS statistic (both get sorted).
double two_sample_ks(std::vector<double> a, std::vector<double> b);

/// Draws max of n independent Gaussians `trials` times; returns the fraction
/// of trials exceeding max(mu) + 2 sqrt(log n) max(sigma).
double max_gaussian_bound_check(std::span<const double> mus, std::span<const double> sigmas,
                                int trials, SeedStream& stream);

}  // namespace heterocut
