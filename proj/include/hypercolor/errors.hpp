#pragma once

#include <stdexcept>
#include <string>

namespace hypercolor {

// Raised when a request exceeds a size limit that keeps the computation
// tractable (enumeration size, instance size, factorial overflow).
class GuardError : public std::runtime_error {
public:
    explicit GuardError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hypercolor
