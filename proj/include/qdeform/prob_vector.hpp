#ifndef QDEFORM_PROB_VECTOR_HPP
#define QDEFORM_PROB_VECTOR_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "qdeform/errors.hpp"

namespace qdeform {

// Finite probability vector: nonnegative components summing to 1
// within 1e-12 (checked with compensated summation at construction).
class ProbVector {
public:
  explicit ProbVector(std::vector<double> components);

  std::span<const double> values() const noexcept { return components_; }
  std::size_t size() const noexcept { return components_.size(); }
  double operator[](std::size_t i) const noexcept { return components_[i]; }

private:
  std::vector<double> components_;
};

}  // namespace qdeform

#endif
