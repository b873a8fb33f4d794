#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sigid {

enum class Errc {
    invalid_argument,
    empty_image,
    bad_window,
    empty_signature,
    no_ink,
    no_templates,
    dimension_mismatch,
    singular_covariance,
    degenerate_training_set,
    unknown_subject,
    schema_mismatch,
    empty_trials,
    io_failure,
    parse_error,
    schema_version_mismatch,
};

constexpr std::string_view errc_name(Errc c) {
    switch (c) {
        case Errc::invalid_argument: return "InvalidArgument";
        case Errc::empty_image: return "EmptyImage";
        case Errc::bad_window: return "BadWindow";
        case Errc::empty_signature: return "EmptySignature";
        case Errc::no_ink: return "NoInk";
        case Errc::no_templates: return "NoTemplates";
        case Errc::dimension_mismatch: return "DimensionMismatch";
        case Errc::singular_covariance: return "SingularCovariance";
        case Errc::degenerate_training_set: return "DegenerateTrainingSet";
        case Errc::unknown_subject: return "UnknownSubject";
        case Errc::schema_mismatch: return "SchemaMismatch";
        case Errc::empty_trials: return "EmptyTrials";
        case Errc::io_failure: return "IoFailure";
        case Errc::parse_error: return "ParseError";
        case Errc::schema_version_mismatch: return "SchemaVersionMismatch";
    }
    return "Error";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& detail)
        : std::runtime_error(std::string(errc_name(code)) + ": " + detail), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& detail) {
    throw Error(code, detail);
}

}  // namespace sigid
