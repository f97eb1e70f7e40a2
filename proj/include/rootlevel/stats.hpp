// Two-class region statistics: integer-binned greylevel histograms with
// running moments, Gaussian parameter estimation, and the region data term
// of the front evolution equation.
#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "rootlevel/core.hpp"

namespace rootlevel {

// Smallest admissible standard deviation, in greylevels. Degenerate classes
// (e.g. uniform seed marks) would otherwise blow up the log and 1/sigma^2
// terms of the data term.
inline constexpr double kSigmaFloor = 1.0;

struct GaussianParams {
  double mu = 0.0;
  double sigma = kSigmaFloor;
};

// Greylevel histogram with running moments. add/remove are O(1); the moments
// make parameter estimation O(1) per iteration instead of O(bins).
class ClassHistogram {
 public:
  ClassHistogram() = default;
  explicit ClassHistogram(int depth) : bins_(std::size_t{1} << depth, 0) {}

  void add(Grey g) {
    ++bins_[g];
    ++n_;
    sum_ += g;
    sumsq_ += static_cast<std::uint64_t>(g) * g;
  }

  // Removing a greylevel that is not present indicates a label bookkeeping
  // bug; it throws rather than corrupting the moments.
  void remove(Grey g);

  std::uint64_t n() const { return n_; }
  std::int64_t sum() const { return static_cast<std::int64_t>(sum_); }
  double sumsq() const { return static_cast<double>(sumsq_); }
  std::uint64_t bin(Grey g) const { return bins_[g]; }
  std::size_t bin_count() const { return bins_.size(); }

  // Mean/variance closed from the exact integer moments; sigma is floored.
  // Requires n >= 2.
  GaussianParams estimate() const;

  // Sum over the histogram of -log N(g | params); the per-class term of the
  // segmentation energy. Defined for any n (0 for an empty class).
  double negative_log_likelihood(const GaussianParams& params) const;

  bool operator==(const ClassHistogram&) const = default;

 private:
  std::vector<std::uint64_t> bins_;
  std::uint64_t n_ = 0;
  __int128 sum_ = 0;  // sumsq_ can exceed int64 on billion-voxel 16-bit volumes
  unsigned __int128 sumsq_ = 0;
};

// Region data term of the gradient flow for greyvalue g:
//   (g - mu2)^2 / (2 sigma2^2) - (g - mu1)^2 / (2 sigma1^2) + log(sigma2/sigma1)
// Positive values push a voxel toward the non-root class.
double speed_term(double g, const GaussianParams& th1, const GaussianParams& th2);

}  // namespace rootlevel
