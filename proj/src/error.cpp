#include "honeyquest/error.hpp"

namespace honeyquest {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::out_of_range: return "out-of-range";
    case ErrorCode::duplicate_mark: return "duplicate-mark";
    case ErrorCode::overlapping_marks: return "overlapping-marks";
    case ErrorCode::unknown_query: return "unknown-query";
    case ErrorCode::invalid_query: return "invalid-query";
    case ErrorCode::unknown_enum: return "unknown-enum";
    case ErrorCode::syntax: return "syntax";
    case ErrorCode::unknown_key: return "unknown-key";
    case ErrorCode::unknown_kind: return "unknown-kind";
    case ErrorCode::unknown_op: return "unknown-op";
    case ErrorCode::missing_field: return "missing-field";
    case ErrorCode::empty_operations: return "empty-operations";
    case ErrorCode::bad_name: return "bad-name";
    case ErrorCode::op_not_allowed: return "op-not-allowed";
    case ErrorCode::duplicate_name: return "duplicate-name";
    case ErrorCode::incompatible_kind: return "incompatible-kind";
    case ErrorCode::no_compatible_technique: return "no-compatible-technique";
    case ErrorCode::no_match: return "no-match";
    case ErrorCode::placement_out_of_range: return "placement-out-of-range";
    case ErrorCode::already_deceptive: return "already-deceptive";
    case ErrorCode::record_mismatch: return "record-mismatch";
    case ErrorCode::malformed_query_file: return "malformed-query-file";
    case ErrorCode::dangling_reference: return "dangling-reference";
    case ErrorCode::duplicate_id: return "duplicate-id";
    case ErrorCode::manifest: return "manifest";
    case ErrorCode::io: return "io";
    case ErrorCode::no_session: return "no-session";
    case ErrorCode::not_consented: return "not-consented";
    case ErrorCode::duplicate_answer: return "duplicate-answer";
    case ErrorCode::out_of_sequence: return "out-of-sequence";
    case ErrorCode::profile_required: return "profile-required";
    case ErrorCode::profile_already_set: return "profile-already-set";
    case ErrorCode::tutorial_incomplete: return "tutorial-incomplete";
    case ErrorCode::empty_feedback: return "empty-feedback";
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::mixed_kind: return "mixed-kind";
    case ErrorCode::unpaired_input: return "unpaired-input";
    case ErrorCode::missing_injection_record: return "missing-injection-record";
    case ErrorCode::invalid_weights: return "invalid-weights";
    }
    return "unknown";
}

Error::Error(ErrorCode code, std::string message)
    : std::runtime_error(render(code, message, std::nullopt, std::nullopt, {})),
      code_(code),
      message_(std::move(message)) {}

Error::Error(ErrorCode code, std::string message, int line, int column)
    : std::runtime_error(render(code, message, line, column, {})),
      code_(code),
      message_(std::move(message)),
      line_(line),
      column_(column) {}

Error Error::with_path(std::string path) const {
    Error copy = *this;
    copy.path_ = std::move(path);
    static_cast<std::runtime_error&>(copy) =
        std::runtime_error(render(code_, message_, line_, column_, copy.path_));
    return copy;
}

std::string Error::render(ErrorCode code, const std::string& message,
                          std::optional<int> line, std::optional<int> column,
                          const std::string& path) {
    std::string out;
    if (!path.empty()) {
        out += path;
        out += ": ";
    }
    if (line) {
        out += "line " + std::to_string(*line);
        if (column) out += ", column " + std::to_string(*column);
        out += ": ";
    }
    out += to_string(code);
    out += ": ";
    out += message;
    return out;
}

}  // namespace honeyquest
