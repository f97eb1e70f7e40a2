#include "rootlevel/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace rootlevel {

void ClassHistogram::remove(Grey g) {
  if (bins_[g] == 0) {
    throw std::logic_error("ClassHistogram::remove on empty bin");
  }
  --bins_[g];
  --n_;
  sum_ -= g;
  sumsq_ -= static_cast<std::uint64_t>(g) * g;
}

GaussianParams ClassHistogram::estimate() const {
  if (n_ < 2) {
    throw std::logic_error("insufficient samples for class");
  }
  const double n = static_cast<double>(n_);
  const double mean = static_cast<double>(sum_) / n;
  // Population variance. sumsq/n - mean^2 can go slightly negative in
  // floating point for near-constant data; the floor absorbs that too.
  double var = static_cast<double>(sumsq_) / n - mean * mean;
  const double floor2 = kSigmaFloor * kSigmaFloor;
  if (!(var > floor2)) {
    var = floor2;
  }
  return GaussianParams{mean, std::sqrt(var)};
}

double ClassHistogram::negative_log_likelihood(const GaussianParams& params) const {
  if (n_ == 0) {
    return 0.0;
  }
  // Sum_g count(g) * [ log(sigma sqrt(2 pi)) + (g - mu)^2 / (2 sigma^2) ]
  // expanded through the moments so the result is independent of bin order
  // and of how the samples were accumulated.
  const double n = static_cast<double>(n_);
  const double s1 = static_cast<double>(sum_);
  const double s2 = static_cast<double>(sumsq_);
  const double mu = params.mu;
  const double sig = params.sigma;
  const double quad = s2 - 2.0 * mu * s1 + n * mu * mu;
  return n * std::log(sig * std::sqrt(2.0 * M_PI)) + quad / (2.0 * sig * sig);
}

double speed_term(double g, const GaussianParams& th1, const GaussianParams& th2) {
  const double d2 = g - th2.mu;
  const double d1 = g - th1.mu;
  return d2 * d2 / (2.0 * th2.sigma * th2.sigma) -
         d1 * d1 / (2.0 * th1.sigma * th1.sigma) +
         std::log(th2.sigma / th1.sigma);
}

}  // namespace rootlevel
