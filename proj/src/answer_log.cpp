#include "honeyquest/answer_log.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace honeyquest {

using json = nlohmann::ordered_json;

namespace {

json marks_json(const MarkVector& v) { return json(v.entries); }

MarkVector marks_from(const json& j) {
    MarkVector v;
    for (const auto& e : j) v.entries.push_back(e.get<int>());
    return v;
}

struct Writer {
    json operator()(const Answer& a) const {
        json j;
        j["kind"] = "answer";
        j["user"] = a.user_id;
        j["query"] = a.query_id;
        j["phase"] = to_string(a.phase);
        j["exploit"] = marks_json(a.exploit);
        j["trap"] = marks_json(a.trap);
        j["duration_ms"] = a.duration_ms;
        j["at"] = format_timestamp(a.answered_at_ms);
        if (a.comment) j["comment"] = *a.comment;
        return j;
    }
    json operator()(const ConsentRecord& c) const {
        json j;
        j["kind"] = "consent";
        j["user"] = c.user_id;
        j["at"] = format_timestamp(c.at_ms);
        j["seed"] = c.rng_seed;
        return j;
    }
    json operator()(const ProfileRecord& p) const {
        json j;
        j["kind"] = "profile";
        j["user"] = p.user_id;
        j["profession"] = to_string(p.profile.profession);
        j["skill"] = to_string(p.profile.skill);
        j["years"] = p.profile.years_experience;
        j["at"] = format_timestamp(p.at_ms);
        return j;
    }
    json operator()(const FeedbackRecord& f) const {
        json j;
        j["kind"] = "feedback";
        j["user"] = f.user_id;
        if (f.query_id) j["query"] = *f.query_id;
        j["text"] = f.text;
        j["at"] = format_timestamp(f.at_ms);
        return j;
    }
};

}  // namespace

std::string serialize_log_record(const LogRecord& record) { return std::visit(Writer{}, record).dump(); }

LogRecord parse_log_record(std::string_view line) {
    json j;
    try {
        j = json::parse(line);
        const std::string kind = j.at("kind").get<std::string>();
        const std::string user = j.at("user").get<std::string>();
        const std::int64_t at = parse_timestamp(j.at("at").get<std::string>());
        if (kind == "answer") {
            Answer a;
            a.user_id = user;
            a.query_id = j.at("query").get<std::string>();
            a.phase = parse_phase(j.at("phase").get<std::string>());
            a.exploit = marks_from(j.at("exploit"));
            a.trap = marks_from(j.at("trap"));
            a.duration_ms = j.at("duration_ms").get<std::int64_t>();
            a.answered_at_ms = at;
            if (j.contains("comment")) a.comment = j["comment"].get<std::string>();
            return a;
        }
        if (kind == "consent") return ConsentRecord{user, at, j.at("seed").get<std::uint64_t>()};
        if (kind == "profile") {
            UserProfile p{parse_profession(j.at("profession").get<std::string>()),
                          parse_skill(j.at("skill").get<std::string>()), j.at("years").get<double>()};
            return ProfileRecord{user, p, at};
        }
        if (kind == "feedback") {
            FeedbackRecord f{user, std::nullopt, j.at("text").get<std::string>(), at};
            if (j.contains("query")) f.query_id = j["query"].get<std::string>();
            return f;
        }
        throw Error(ErrorCode::invalid_argument, "unknown record kind '" + kind + "'");
    } catch (const json::exception& e) {
        throw Error(ErrorCode::invalid_argument, std::string("bad log record: ") + e.what());
    }
}

std::vector<LogRecord> read_log(const std::filesystem::path& file) {
    std::vector<LogRecord> out;
    std::ifstream in(file, std::ios::binary);
    if (!in) {
        std::error_code ec;
        if (!std::filesystem::exists(file, ec)) return out;
        throw Error(ErrorCode::io, "cannot open answer log").with_path(file.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    std::size_t pos = 0;
    int line_no = 0;
    while (pos < text.size()) {
        const std::size_t eol = text.find('\n', pos);
        if (eol == std::string::npos) break;
        ++line_no;
        const std::string_view line(text.data() + pos, eol - pos);
        pos = eol + 1;
        if (line.empty()) continue;
        try {
            out.push_back(parse_log_record(line));
        } catch (const Error& e) {
            throw Error(e.code(), e.message(), line_no, 1).with_path(file.string());
        }
    }
    return out;
}

std::vector<Answer> answers_in(const std::vector<LogRecord>& records) {
    std::vector<Answer> out;
    for (const auto& r : records)
        if (const auto* a = std::get_if<Answer>(&r)) out.push_back(*a);
    return out;
}

AnswerLog::AnswerLog(const std::filesystem::path& file) : path_(file) {
    fd_ = ::open(file.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
    if (fd_ < 0) throw Error(ErrorCode::io, std::strerror(errno)).with_path(file.string());
    // A torn final line from a previous crash would glue onto the next record.
    std::ifstream in(file, std::ios::binary | std::ios::ate);
    if (in && in.tellg() > 0) {
        in.seekg(-1, std::ios::end);
        if (in.get() != '\n') {
            std::string kept;
            in.seekg(0);
            std::ostringstream buf;
            buf << in.rdbuf();
            kept = buf.str();
            kept.resize(kept.rfind('\n') == std::string::npos ? 0 : kept.rfind('\n') + 1);
            if (::ftruncate(fd_, static_cast<off_t>(kept.size())) != 0)
                throw Error(ErrorCode::io, std::strerror(errno)).with_path(file.string());
        }
    }
}

AnswerLog::~AnswerLog() {
    if (fd_ >= 0) ::close(fd_);
}

void AnswerLog::append(const LogRecord& record) {
    const std::string line = serialize_log_record(record) + "\n";
    std::size_t done = 0;
    while (done < line.size()) {
        const ssize_t n = ::write(fd_, line.data() + done, line.size() - done);
        if (n < 0) {
            if (errno == EINTR) continue;
            throw Error(ErrorCode::io, std::strerror(errno)).with_path(path_.string());
        }
        done += static_cast<std::size_t>(n);
    }
    if (::fdatasync(fd_) != 0) throw Error(ErrorCode::io, std::strerror(errno)).with_path(path_.string());
}

}  // namespace honeyquest
