#include "rsskv/zipf.h"

#include <cmath>
#include <stdexcept>

namespace rsskv {

namespace {

// log1p(x)/x, continuous at 0.
double Helper1(double x) {
  return std::abs(x) > 1e-8 ? std::log1p(x) / x : 1.0 - x * (0.5 - x * (1.0 / 3.0 - 0.25 * x));
}

// expm1(x)/x, continuous at 0.
double Helper2(double x) {
  return std::abs(x) > 1e-8 ? std::expm1(x) / x
                            : 1.0 + x * 0.5 * (1.0 + x * (1.0 / 3.0) * (1.0 + 0.25 * x));
}

}  // namespace

ZipfGenerator::ZipfGenerator(std::uint64_t n, double theta) : n_(n), theta_(theta) {
  if (n == 0) throw std::invalid_argument("zipf over zero keys");
  if (theta < 0) throw std::invalid_argument("negative zipf skew");
  if (theta_ > 0) {
    h_integral_x1_ = HIntegral(1.5) - 1.0;
    h_integral_n_ = HIntegral(static_cast<double>(n_) + 0.5);
    s_ = 2.0 - HIntegralInverse(HIntegral(2.5) - H(2.0));
  }
}

double ZipfGenerator::H(double x) const { return std::exp(-theta_ * std::log(x)); }

double ZipfGenerator::HIntegral(double x) const {
  const double log_x = std::log(x);
  return Helper2((1.0 - theta_) * log_x) * log_x;
}

double ZipfGenerator::HIntegralInverse(double x) const {
  double t = x * (1.0 - theta_);
  if (t < -1.0) t = -1.0;
  return std::exp(Helper1(t) * x);
}

std::uint64_t ZipfGenerator::Sample(RandomStream& rng) const {
  if (n_ == 1) return 0;
  if (theta_ == 0) return rng.UniformInt(0, n_ - 1);
  while (true) {
    const double u = h_integral_n_ + rng.Uniform01() * (h_integral_x1_ - h_integral_n_);
    const double x = HIntegralInverse(u);
    double k = std::floor(x + 0.5);
    if (k < 1) {
      k = 1;
    } else if (k > static_cast<double>(n_)) {
      k = static_cast<double>(n_);
    }
    if (k - x <= s_ || u >= HIntegral(k + 0.5) - H(k)) {
      return static_cast<std::uint64_t>(k) - 1;
    }
  }
}

}  // namespace rsskv
