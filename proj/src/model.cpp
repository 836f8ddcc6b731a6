#include "honeyquest/model.hpp"

#include <array>
#include <cstdio>
#include <ctime>
#include <utility>

namespace honeyquest {

namespace {

template <typename E, std::size_t N>
using NameTable = std::array<std::pair<E, std::string_view>, N>;

constexpr NameTable<QueryType, 4> kQueryTypes{{
    {QueryType::filesystem, "filesystem"},
    {QueryType::htaccess, "htaccess"},
    {QueryType::httpheaders, "httpheaders"},
    {QueryType::networkrequests, "networkrequests"},
}};

constexpr NameTable<QueryLabel, 3> kLabels{{
    {QueryLabel::neutral, "neutral"},
    {QueryLabel::risky, "risky"},
    {QueryLabel::deceptive, "deceptive"},
}};

constexpr NameTable<RiskClass, 3> kRiskClasses{{
    {RiskClass::vulnerability, "vulnerability"},
    {RiskClass::weakness, "weakness"},
    {RiskClass::attack, "attack"},
}};

constexpr NameTable<Phase, 3> kPhases{{
    {Phase::tutorial, "tutorial"},
    {Phase::warmup, "warmup"},
    {Phase::main, "main"},
}};

constexpr NameTable<Profession, 7> kProfessions{{
    {Profession::development, "development"},
    {Profession::operations, "operations"},
    {Profession::security_operations, "security-operations"},
    {Profession::business, "business"},
    {Profession::research, "research"},
    {Profession::student, "student"},
    {Profession::other, "other"},
}};

constexpr NameTable<Skill, 5> kSkills{{
    {Skill::none, "none"},
    {Skill::little, "little"},
    {Skill::good, "good"},
    {Skill::advanced, "advanced"},
    {Skill::expert, "expert"},
}};

template <typename E, std::size_t N>
std::string_view name_of(const NameTable<E, N>& table, E v) {
    for (const auto& [e, name] : table)
        if (e == v) return name;
    return "?";
}

template <typename E, std::size_t N>
E parse_name(const NameTable<E, N>& table, std::string_view s, std::string_view what) {
    for (const auto& [e, name] : table)
        if (name == s) return e;
    throw Error(ErrorCode::unknown_enum, "unknown " + std::string(what) + " '" + std::string(s) + "'");
}

}  // namespace

std::string_view to_string(QueryType v) { return name_of(kQueryTypes, v); }
std::string_view to_string(QueryLabel v) { return name_of(kLabels, v); }
std::string_view to_string(RiskClass v) { return name_of(kRiskClasses, v); }
std::string_view to_string(Phase v) { return name_of(kPhases, v); }
std::string_view to_string(Profession v) { return name_of(kProfessions, v); }
std::string_view to_string(Skill v) { return name_of(kSkills, v); }

QueryType parse_query_type(std::string_view s) { return parse_name(kQueryTypes, s, "query type"); }
QueryLabel parse_query_label(std::string_view s) { return parse_name(kLabels, s, "query label"); }
RiskClass parse_risk_class(std::string_view s) { return parse_name(kRiskClasses, s, "risk class"); }
Phase parse_phase(std::string_view s) { return parse_name(kPhases, s, "phase"); }
Profession parse_profession(std::string_view s) { return parse_name(kProfessions, s, "profession"); }
Skill parse_skill(std::string_view s) { return parse_name(kSkills, s, "skill"); }

void check_query(const Query& q) {
    auto fail = [&](const std::string& why) {
        throw Error(ErrorCode::invalid_query, "query '" + q.id + "': " + why);
    };
    if (q.id.empty()) fail("empty id");
    if (q.lines.empty()) fail("no lines");
    const int n = q.line_count();
    for (int l : q.risky_lines)
        if (l < 1 || l > n) fail("risky line " + std::to_string(l) + " outside 1.." + std::to_string(n));
    for (int l : q.deceptive_lines)
        if (l < 1 || l > n) fail("deceptive line " + std::to_string(l) + " outside 1.." + std::to_string(n));

    switch (q.label) {
    case QueryLabel::neutral:
        if (!q.risky_lines.empty() || !q.deceptive_lines.empty()) fail("neutral query carries annotations");
        break;
    case QueryLabel::risky:
        if (q.risky_lines.empty()) fail("risky query without risky lines");
        if (!q.deceptive_lines.empty()) fail("risky query with deceptive lines");
        break;
    case QueryLabel::deceptive:
        if (q.deceptive_lines.empty()) fail("deceptive query without deceptive lines");
        if (!q.technique_ref) fail("deceptive query without technique");
        break;
    }
    if (q.risk_class && q.label == QueryLabel::neutral) fail("risk class on a neutral query");
    for (int l : q.risky_lines)
        if (q.deceptive_lines.count(l)) fail("line " + std::to_string(l) + " is both risky and deceptive");
}

LineSet mark_set(const MarkVector& v) { return LineSet(v.entries.begin(), v.entries.end()); }

void validate_answer(const Answer& answer, const Query& query) {
    if (answer.query_id != query.id)
        throw Error(ErrorCode::unknown_query, "answer refers to '" + answer.query_id + "', not '" + query.id + "'");
    if (answer.duration_ms < 0) throw Error(ErrorCode::out_of_range, "negative duration");

    const int n = query.line_count();
    auto check_vector = [n](const MarkVector& v, std::string_view kind) {
        LineSet seen;
        for (int l : v.entries) {
            if (l < 1 || l > n)
                throw Error(ErrorCode::out_of_range, std::string(kind) + " mark " + std::to_string(l) +
                                                         " outside 1.." + std::to_string(n));
            if (!seen.insert(l).second)
                throw Error(ErrorCode::duplicate_mark,
                            std::string(kind) + " mark " + std::to_string(l) + " placed twice");
        }
    };
    check_vector(answer.exploit, "exploit");
    check_vector(answer.trap, "trap");

    const LineSet traps = answer.trap_set();
    for (int l : answer.exploit.entries)
        if (traps.count(l))
            throw Error(ErrorCode::overlapping_marks, "line " + std::to_string(l) + " has both mark kinds");
}

QueryIndex::QueryIndex(std::vector<Query> queries) : queries_(std::move(queries)) {
    for (std::size_t i = 0; i < queries_.size(); ++i) {
        if (!by_id_.emplace(queries_[i].id, i).second)
            throw Error(ErrorCode::duplicate_id, "duplicate query id '" + queries_[i].id + "'");
    }
}

const Query* QueryIndex::find(std::string_view id) const {
    auto it = by_id_.find(id);
    return it == by_id_.end() ? nullptr : &queries_[it->second];
}

const Query& QueryIndex::at(std::string_view id) const {
    if (const Query* q = find(id)) return *q;
    throw Error(ErrorCode::unknown_query, "unknown query id '" + std::string(id) + "'");
}

std::string format_line_list(const LineSet& lines) {
    std::string out;
    for (int l : lines) {
        if (!out.empty()) out += ',';
        out += std::to_string(l);
    }
    return out;
}

std::string format_timestamp(std::int64_t epoch_ms) {
    std::int64_t secs = epoch_ms / 1000;
    int ms = static_cast<int>(epoch_ms % 1000);
    if (ms < 0) {
        ms += 1000;
        --secs;
    }
    std::time_t t = static_cast<std::time_t>(secs);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900, tm.tm_mon + 1,
                  tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec, ms);
    return buf;
}

std::int64_t parse_timestamp(std::string_view iso) {
    int y, mo, d, h, mi, s, ms = 0;
    std::string text(iso);
    int consumed = 0;
    if (std::sscanf(text.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%n", &y, &mo, &d, &h, &mi, &s, &consumed) != 6)
        throw Error(ErrorCode::invalid_argument, "bad timestamp '" + text + "'");
    std::string_view rest = std::string_view(text).substr(static_cast<std::size_t>(consumed));
    if (!rest.empty() && rest.front() == '.') {
        int frac_len = 0;
        if (std::sscanf(std::string(rest).c_str(), ".%3d%n", &ms, &frac_len) != 1)
            throw Error(ErrorCode::invalid_argument, "bad timestamp fraction '" + text + "'");
        rest.remove_prefix(static_cast<std::size_t>(frac_len));
    }
    if (rest != "Z") throw Error(ErrorCode::invalid_argument, "timestamp must be UTC: '" + text + "'");
    std::tm tm{};
    tm.tm_year = y - 1900;
    tm.tm_mon = mo - 1;
    tm.tm_mday = d;
    tm.tm_hour = h;
    tm.tm_min = mi;
    tm.tm_sec = s;
    return static_cast<std::int64_t>(timegm(&tm)) * 1000 + ms;
}

}  // namespace honeyquest
