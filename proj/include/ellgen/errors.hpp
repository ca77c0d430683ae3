#pragma once

#include <stdexcept>
#include <string>

namespace ellgen {

// Exit-code classes used by the CLI: 2 parse, 3 validation, 4 computation.
enum class ErrorClass { Parse = 2, Validation = 3, Computation = 4 };

class Error : public std::runtime_error {
public:
    Error(std::string code, ErrorClass cls, const std::string& what)
        : std::runtime_error(code + ": " + what), code_(std::move(code)), cls_(cls) {}
    const std::string& code() const { return code_; }
    ErrorClass error_class() const { return cls_; }

private:
    std::string code_;
    ErrorClass cls_;
};

#define ELLGEN_ERROR(Name, Cls)                                                     \
    struct Name : Error {                                                           \
        explicit Name(const std::string& w) : Error(#Name, ErrorClass::Cls, w) {}   \
    };

ELLGEN_ERROR(NonInvertibleLeadingCoefficient, Computation)
ELLGEN_ERROR(GeneratorTableMismatch, Computation)
ELLGEN_ERROR(NonNilpotentInput, Computation)
ELLGEN_ERROR(MissingTableEntry, Validation)
ELLGEN_ERROR(ZeroWeightNormalBundle, Validation)
ELLGEN_ERROR(InconsistentAnomaly, Validation)
ELLGEN_ERROR(DegreeOutOfRange, Validation)
ELLGEN_ERROR(NonconvergentDomain, Computation)
ELLGEN_ERROR(NearPole, Computation)
ELLGEN_ERROR(BoundaryZero, Computation)
ELLGEN_ERROR(NonFiniteSample, Computation)
ELLGEN_ERROR(UnknownEntry, Validation)
ELLGEN_ERROR(InvalidDataset, Validation)
ELLGEN_ERROR(ParseError, Parse)
ELLGEN_ERROR(LedgerMismatch, Computation)

#undef ELLGEN_ERROR

}  // namespace ellgen
