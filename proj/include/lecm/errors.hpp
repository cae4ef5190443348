#pragma once

#include <stdexcept>
#include <string>

namespace lecm {

enum class Errc {
  invalid_argument,
  sector_mismatch,
  size_limit,
  convergence,
  basis_not_orthonormal,
  support_not_covered,
  symmetry,
  ill_defined_limit,
  inadmissible_et,
  optimizer_stall,
  not_symmetry_adapted,
  invalid_density,
  io
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace lecm
