#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lqexec {

enum class ErrorKind {
    configuration,
    domain,
    alignment,
    strategy_kind,
    model,
    solver,
    unsupported,
    grid_mismatch,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Every failure raised by the library carries a kind so the CLI can emit a
// machine-readable error record. Solver failures also carry the node index.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what, std::optional<std::size_t> node = std::nullopt)
        : std::runtime_error(what), kind_(kind), node_(node) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }
    [[nodiscard]] std::optional<std::size_t> node() const noexcept { return node_; }

private:
    ErrorKind kind_;
    std::optional<std::size_t> node_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what,
                              std::optional<std::size_t> node = std::nullopt) {
    throw Error(kind, what, node);
}

inline void require(bool condition, ErrorKind kind, const std::string& what) {
    if (!condition) {
        fail(kind, what);
    }
}

}  // namespace lqexec
