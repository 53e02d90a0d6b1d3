#ifndef ECBSD_ERRORS_HPP
#define ECBSD_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ecbsd {

// Exit-code contract used by the CLI:
//   0 success, 2 usage error, 3 budget/pole/conditioning refusal,
//   4 internal invariant violation.

struct usage_error : std::invalid_argument {
    explicit usage_error(const std::string& what) : std::invalid_argument(what) {}
};

struct refusal_error : std::runtime_error {
    explicit refusal_error(const std::string& what) : std::runtime_error(what) {}
};

struct internal_error : std::logic_error {
    explicit internal_error(const std::string& what) : std::logic_error(what) {}
};

} // namespace ecbsd

#endif
