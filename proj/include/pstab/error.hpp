#pragma once

#include <stdexcept>
#include <string>

namespace pstab {

enum class ErrorKind {
    size,             // result would exceed SmallMatrix::kMaxDim
    shape,            // operand shapes incompatible
    input,            // precondition on an argument violated
    numerical,        // iteration cap reached or non-finite result
    internal,         // a state that should be unreachable
    notInAffineSpan,  // hull decomposition residual too large
    notInHull,        // hull coordinates outside [0, 1]
    nonRotation,      // planar flow never crosses an axis
    factorization,    // lifted trajectory is not a tensor product of factor trajectories
    io,
};

const char* toString(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(toString(kind)) + " error: " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace pstab
