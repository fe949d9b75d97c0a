#pragma once

#include <stdexcept>
#include <string>

namespace chaos {

enum class errc {
  invalid_argument,
  numeric,     // non-finite state, diverging loss
  step_cap,    // integration hit the step cap before enough spikes
  too_short,   // series shorter than the operation requires
  io,
  format,
};

class error : public std::runtime_error {
public:
  error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const noexcept { return code_; }

private:
  errc code_;
};

}  // namespace chaos
