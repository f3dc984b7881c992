#include "vexint/parallel.hpp"

#include <charconv>
#include <cstdlib>
#include <string_view>

#include "vexint/error.hpp"

namespace vexint {

std::size_t worker_count() {
  if (const char* env = std::getenv("VEXINT_THREADS")) {
    std::string_view text(env);
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec == std::errc() && ptr == text.data() + text.size() && value > 0) return value;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_configuration: return "invalid-configuration";
    case ErrorKind::resolution_exceeded: return "resolution-exceeded";
    case ErrorKind::invalid_exponent: return "invalid-exponent";
    case ErrorKind::conjugate_undefined: return "conjugate-undefined";
    case ErrorKind::invalid_input: return "invalid-input";
    case ErrorKind::solver_failure: return "solver-failure";
    case ErrorKind::precondition_violation: return "precondition-violation";
    case ErrorKind::invalid_selection: return "invalid-selection";
    case ErrorKind::admissibility_failure: return "admissibility-failure";
    case ErrorKind::unsupported_parameters: return "unsupported-parameters";
  }
  return "unknown";
}

}  // namespace vexint
