#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace sphtail {

/// A request exceeds a fixed resource limit (enumeration size, sample budget).
class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A check was invoked on inputs that violate its hypothesis.  `index` names
/// the offending position when there is one (e.g. the failed partial sum).
class PreconditionError : public std::invalid_argument {
public:
    explicit PreconditionError(const std::string& what, std::optional<std::size_t> index = std::nullopt)
        : std::invalid_argument(what), index_(index) {}

    std::optional<std::size_t> index() const noexcept { return index_; }

private:
    std::optional<std::size_t> index_;
};

}  // namespace sphtail
