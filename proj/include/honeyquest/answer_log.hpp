#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "honeyquest/model.hpp"

namespace honeyquest {

struct ConsentRecord {
    std::string user_id;
    std::int64_t at_ms = 0;
    std::uint64_t rng_seed = 0;

    bool operator==(const ConsentRecord&) const = default;
};

struct ProfileRecord {
    std::string user_id;
    UserProfile profile;
    std::int64_t at_ms = 0;

    bool operator==(const ProfileRecord&) const = default;
};

struct FeedbackRecord {
    std::string user_id;
    std::optional<std::string> query_id;
    std::string text;
    std::int64_t at_ms = 0;

    bool operator==(const FeedbackRecord&) const = default;
};

using LogRecord = std::variant<Answer, ConsentRecord, ProfileRecord, FeedbackRecord>;

/// One JSON object, no trailing newline. The "kind" field is
/// answer|consent|profile|feedback.
std::string serialize_log_record(const LogRecord& record);
LogRecord parse_log_record(std::string_view line);

/// Reads every complete line. A final line without '\n' is a torn write
/// and is dropped. A missing file reads as empty.
std::vector<LogRecord> read_log(const std::filesystem::path& file);

std::vector<Answer> answers_in(const std::vector<LogRecord>& records);

/// Append-only NDJSON writer. Each append is flushed to disk before returning.
class AnswerLog {
public:
    explicit AnswerLog(const std::filesystem::path& file);
    ~AnswerLog();
    AnswerLog(const AnswerLog&) = delete;
    AnswerLog& operator=(const AnswerLog&) = delete;

    void append(const LogRecord& record);
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
    int fd_ = -1;
};

}  // namespace honeyquest
