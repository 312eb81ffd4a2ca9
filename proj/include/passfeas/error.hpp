#pragma once

#include <stdexcept>
#include <string>

namespace passfeas {

/// Raised for invalid model inputs (degenerate geometry, bad parameters,
/// malformed scenarios). Messages are single-line and name the offending item.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace passfeas
