#pragma once

#include <stdexcept>
#include <string>

/*
 * Shared error hierarchy.  Every failure mode callers are expected to
 * handle has its own type; `code` carries a stable machine-readable name
 * that the CLI maps to exit codes.
 */
namespace qk {

class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& msg)
        : std::runtime_error(code + ": " + msg), code(std::move(code)) {}
    const std::string code;
};

#define QK_DEFINE_ERROR(Name)                                            \
    class Name : public Error {                                          \
    public:                                                              \
        explicit Name(const std::string& msg) : Error(#Name, msg) {}     \
    };

QK_DEFINE_ERROR(DimensionMismatch)    // incompatible matrix/subspace shapes
QK_DEFINE_ERROR(PathExplosion)        // path enumeration exceeded the cap
QK_DEFINE_ERROR(NotGradable)          // quiver admits no arrow-step grading
QK_DEFINE_ERROR(ComposeMismatch)      // algebra elements do not compose
QK_DEFINE_ERROR(ZeroModule)           // operation undefined on the zero module
QK_DEFINE_ERROR(NotProjectiveComponents) // linearity test needs graded projectives
QK_DEFINE_ERROR(OpenDiagonal)         // total complex over an unbounded diagonal
QK_DEFINE_ERROR(OpenWindow)           // cohomology at a truncated window end
QK_DEFINE_ERROR(ShapeMismatch)        // cone/sum of incompatible (double) complexes
QK_DEFINE_ERROR(NotNatural)           // a naturality square fails numerically
QK_DEFINE_ERROR(WindowTooSmall)       // certificate window below the required bound
QK_DEFINE_ERROR(ParseError)           // presentation file syntax/semantics

#undef QK_DEFINE_ERROR

} // namespace qk
