#ifndef RSSKV_ZIPF_H_
#define RSSKV_ZIPF_H_

#include <cstdint>

#include "rsskv/simulator.h"

namespace rsskv {

// Zipfian ranks over [0, n): P(rank r) is proportional to 1 / (r+1)^theta.
// Rejection-inversion sampling (Hormann and Derflinger), O(1) per sample and
// no per-key tables. theta = 0 is uniform.
class ZipfGenerator {
 public:
  ZipfGenerator(std::uint64_t n, double theta);

  std::uint64_t Sample(RandomStream& rng) const;

  std::uint64_t n() const { return n_; }
  double theta() const { return theta_; }

 private:
  double H(double x) const;
  double HIntegral(double x) const;
  double HIntegralInverse(double x) const;

  std::uint64_t n_;
  double theta_;
  double h_integral_x1_ = 0;
  double h_integral_n_ = 0;
  double s_ = 0;
};

}  // namespace rsskv

#endif  // RSSKV_ZIPF_H_
