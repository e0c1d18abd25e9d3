#pragma once

#include <stdexcept>
#include <string>

namespace nhqc {

/// A caller violated an operation's precondition (bad index, bad angle,
/// non-Hermitian input, ...). The CLI maps this to exit code 2.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The numerics could not produce a trustworthy answer (rank collapse,
/// unresolvable eigenphase assignment).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace nhqc
