#pragma once

#include <stdexcept>
#include <string>

namespace strata {

enum class Errc {
    Dimension,      // shape / size mismatch
    FieldMismatch,  // operands over different fields
    Parse,          // malformed input file
    NotIdeal,       // subspace fails an ideal-closure check
    AxiomViolation, // cellular-system axiom refuted on the given datum
    InternalCheck,  // a theorem-backed cross-check failed: implementation bug
    Inapplicable,   // requested method does not apply (e.g. small characteristic)
    Inconclusive,   // procedure exhausted its search space without a verdict
    Input,          // bad user input (CLI, missing file, ...)
};

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Errc code() const { return code_; }

private:
    Errc code_;
};

inline void check(bool cond, Errc code, const std::string& msg) {
    if (!cond)
        throw Error(code, msg);
}

} // namespace strata
