#ifndef QDEFORM_ERRORS_HPP
#define QDEFORM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qdeform {

enum class ErrorKind {
  Domain,      // argument outside a function's mathematical domain
  Range,       // index outside a table or sequence bound
  Support,     // divergence support mismatch (p_i > 0 where r_i = 0)
  Constraint,  // structural constraint violated (sums, ordering, sizes)
  Numeric,     // a numerical procedure failed (bracket expansion, ...)
  Window,      // too few grid points inside a requested window
  Fit,         // degenerate regression
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

}  // namespace qdeform

#endif
