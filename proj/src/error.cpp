#include "scca/error.hpp"

namespace scca {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidInput: return "InvalidInput";
        case ErrorKind::InvalidState: return "InvalidState";
        case ErrorKind::NumericalFailure: return "NumericalFailure";
        case ErrorKind::DegenerateData: return "DegenerateData";
        case ErrorKind::NotPositiveSemidefinite: return "NotPositiveSemidefinite";
        case ErrorKind::FormatError: return "FormatError";
    }
    return "Error";
}

}  // namespace scca
