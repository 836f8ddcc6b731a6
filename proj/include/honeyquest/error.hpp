#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace honeyquest {

enum class ErrorCode {
    // core model
    out_of_range,
    duplicate_mark,
    overlapping_marks,
    unknown_query,
    invalid_query,
    unknown_enum,
    // honeyaml
    syntax,
    unknown_key,
    unknown_kind,
    unknown_op,
    missing_field,
    empty_operations,
    bad_name,
    op_not_allowed,
    duplicate_name,
    // injection
    incompatible_kind,
    no_compatible_technique,
    no_match,
    placement_out_of_range,
    already_deceptive,
    record_mismatch,
    // store
    malformed_query_file,
    dangling_reference,
    duplicate_id,
    manifest,
    io,
    // questionnaire
    no_session,
    not_consented,
    duplicate_answer,
    out_of_sequence,
    profile_required,
    profile_already_set,
    tutorial_incomplete,
    empty_feedback,
    // analysis
    invalid_argument,
    mixed_kind,
    unpaired_input,
    missing_injection_record,
    invalid_weights,
};

std::string_view to_string(ErrorCode code);

/// Structured failure raised by every module. Parse errors carry a source
/// location; catalog and store errors carry the offending file path.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string message);
    Error(ErrorCode code, std::string message, int line, int column);

    ErrorCode code() const noexcept { return code_; }
    const std::string& message() const noexcept { return message_; }
    std::optional<int> line() const noexcept { return line_; }
    std::optional<int> column() const noexcept { return column_; }
    const std::string& path() const noexcept { return path_; }

    /// Returns a copy annotated with the file the error came from.
    Error with_path(std::string path) const;

private:
    static std::string render(ErrorCode code, const std::string& message,
                              std::optional<int> line, std::optional<int> column,
                              const std::string& path);

    ErrorCode code_;
    std::string message_;
    std::optional<int> line_;
    std::optional<int> column_;
    std::string path_;
};

}  // namespace honeyquest
