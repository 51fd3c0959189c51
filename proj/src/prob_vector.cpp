#include "qdeform/prob_vector.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace qdeform {

ProbVector::ProbVector(std::vector<double> components)
    : components_(std::move(components)) {
  if (components_.empty()) {
    throw Error(ErrorKind::Constraint, "probability vector must be non-empty");
  }
  double sum = 0.0, comp = 0.0;
  for (double c : components_) {
    if (!(c >= 0.0)) {
      throw Error(ErrorKind::Constraint,
                  "probability vector component is negative or NaN: " + std::to_string(c));
    }
    const double y = c - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  if (std::fabs(sum - 1.0) > 1e-12) {
    throw Error(ErrorKind::Constraint,
                "probability vector must sum to 1 within 1e-12, got " + std::to_string(sum));
  }
}

}  // namespace qdeform
