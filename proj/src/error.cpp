#include "lqexec/error.hpp"

namespace lqexec {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::configuration: return "configuration";
        case ErrorKind::domain: return "domain";
        case ErrorKind::alignment: return "alignment";
        case ErrorKind::strategy_kind: return "kind";
        case ErrorKind::model: return "model";
        case ErrorKind::solver: return "solver";
        case ErrorKind::unsupported: return "unsupported";
        case ErrorKind::grid_mismatch: return "grid_mismatch";
    }
    return "unknown";
}

}  // namespace lqexec
