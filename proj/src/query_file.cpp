#include "honeyquest/query_file.hpp"

#include <charconv>

namespace honeyquest {

namespace {

[[noreturn]] void malformed(int line, const std::string& why) {
    throw Error(ErrorCode::malformed_query_file, why, line, 1);
}

LineSet parse_lines(std::string_view value, int at) {
    LineSet out;
    std::size_t pos = 0;
    while (pos <= value.size()) {
        std::size_t comma = value.find(',', pos);
        if (comma == std::string_view::npos) comma = value.size();
        std::string_view item = value.substr(pos, comma - pos);
        while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
        int n = 0;
        auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), n);
        if (item.empty() || ec != std::errc() || ptr != item.data() + item.size())
            malformed(at, "bad line number '" + std::string(item) + "'");
        if (!out.insert(n).second) malformed(at, "line " + std::to_string(n) + " listed twice");
        pos = comma + 1;
    }
    return out;
}

}  // namespace

Query parse_query(std::string_view text) {
    Query q;
    bool seen_id = false, seen_type = false, seen_label = false;
    std::size_t pos = 0;
    int line_no = 0;
    bool separator = false;
    std::vector<std::string> keys_seen;

    while (pos < text.size()) {
        const std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) malformed(line_no + 1, "header line without newline");
        const std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (line == "---") {
            separator = true;
            break;
        }
        const std::size_t colon = line.find(':');
        if (colon == std::string_view::npos) malformed(line_no, "expected 'key: value'");
        const std::string key(line.substr(0, colon));
        std::string_view value = line.substr(colon + 1);
        if (!value.empty() && value.front() == ' ') value.remove_prefix(1);
        for (const auto& k : keys_seen)
            if (k == key) malformed(line_no, "duplicate header '" + key + "'");
        keys_seen.push_back(key);

        try {
            if (key == "id") {
                q.id = std::string(value);
                seen_id = true;
            } else if (key == "type") {
                q.type = parse_query_type(value);
                seen_type = true;
            } else if (key == "label") {
                q.label = parse_query_label(value);
                seen_label = true;
            } else if (key == "technique") {
                q.technique_ref = std::string(value);
            } else if (key == "risk") {
                q.risk_ref = std::string(value);
            } else if (key == "risk-class") {
                q.risk_class = parse_risk_class(value);
            } else if (key == "risky-lines") {
                q.risky_lines = parse_lines(value, line_no);
            } else if (key == "deceptive-lines") {
                q.deceptive_lines = parse_lines(value, line_no);
            } else if (key == "source") {
                q.source_ref = std::string(value);
            } else {
                malformed(line_no, "unknown header '" + key + "'");
            }
        } catch (const Error& e) {
            if (e.code() == ErrorCode::unknown_enum) malformed(line_no, e.message());
            throw;
        }
    }
    if (!separator) malformed(line_no, "missing '---' separator");
    if (!seen_id || !seen_type || !seen_label) malformed(line_no, "id, type and label are required");

    while (pos < text.size()) {
        const std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) malformed(line_no + 1, "body must end with a newline");
        q.lines.emplace_back(text.substr(pos, eol - pos));
        pos = eol + 1;
        ++line_no;
    }
    return q;
}

std::string serialize_query(const Query& q) {
    std::string out;
    out += "id: " + q.id + "\n";
    out += "type: " + std::string(to_string(q.type)) + "\n";
    out += "label: " + std::string(to_string(q.label)) + "\n";
    if (q.technique_ref) out += "technique: " + *q.technique_ref + "\n";
    if (q.risk_ref) out += "risk: " + *q.risk_ref + "\n";
    if (q.risk_class) out += "risk-class: " + std::string(to_string(*q.risk_class)) + "\n";
    if (!q.risky_lines.empty()) out += "risky-lines: " + format_line_list(q.risky_lines) + "\n";
    if (!q.deceptive_lines.empty()) out += "deceptive-lines: " + format_line_list(q.deceptive_lines) + "\n";
    if (!q.source_ref.empty()) out += "source: " + q.source_ref + "\n";
    out += "---\n";
    for (const auto& line : q.lines) out += line + "\n";
    return out;
}

}  // namespace honeyquest
