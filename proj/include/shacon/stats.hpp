#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace shacon {

/// Raised when a statistic is undefined for the given input (constant
/// vector, zero variance, size mismatch, too few samples).
class StatError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct StatResult {
  double statistic = 0.0;  // rho or t
  double p_value = 1.0;    // two-sided
  std::size_t n = 0;
  double df = 0.0;
};

/// 1-based ranks, tied values receive the mean of their positions.
std::vector<double> average_ranks(std::span<const double> v);

/// Spearman's rho as the Pearson correlation of average ranks; p from the
/// t approximation with n - 2 degrees of freedom.
StatResult spearman(std::span<const double> x, std::span<const double> y);

/// Two-sided permutation p-value for Spearman's rho: shuffles y
/// `iterations` times with a seeded generator and counts |rho*| >= |rho|.
double spearman_permutation_p(std::span<const double> x, std::span<const double> y, int iterations,
                              std::uint64_t seed);

/// Welch's t (unpaired) or the paired t on a - b; two-sided p.
StatResult t_test(std::span<const double> a, std::span<const double> b, bool paired);

/// Two-sided tail probability of Student's t with `df` degrees of freedom.
double student_t_two_sided_p(double t, double df);

double mean(std::span<const double> v);
/// Sample standard deviation (n - 1 denominator); 0 for fewer than 2 values.
double stddev(std::span<const double> v);

}  // namespace shacon
