#ifndef QCBIND_ERRORS_HPP
#define QCBIND_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qcbind {

/// Bad input values (non-finite angles, out-of-range knobs, mismatched lengths).
class input_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Structural misuse: qubit indices outside the register, control == target.
class structural_error : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Request exceeds the memory guardrails (statevector n > 24, density n > 12).
class capacity_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed file content; message carries the line number where known.
class parse_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Unreadable or unwritable source/sink.
class io_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Complex cannot be encoded (no ligand atoms, zero occupancy in a channel group).
class encode_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Every trial of a training protocol diverged.
class protocol_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Checkpoint written by an incompatible topology/gate-convention version.
class version_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace qcbind

#endif
