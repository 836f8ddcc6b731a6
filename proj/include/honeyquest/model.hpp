#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "honeyquest/error.hpp"

namespace honeyquest {

enum class QueryType { filesystem, htaccess, httpheaders, networkrequests };
enum class QueryLabel { neutral, risky, deceptive };
enum class RiskClass { vulnerability, weakness, attack };
enum class Phase { tutorial, warmup, main };

enum class Profession { development, operations, security_operations, business, research, student, other };
enum class Skill { none, little, good, advanced, expert };

std::string_view to_string(QueryType v);
std::string_view to_string(QueryLabel v);
std::string_view to_string(RiskClass v);
std::string_view to_string(Phase v);
std::string_view to_string(Profession v);
std::string_view to_string(Skill v);

// Parsers for the closed enumerations; unknown spellings throw unknown_enum.
QueryType parse_query_type(std::string_view s);
QueryLabel parse_query_label(std::string_view s);
RiskClass parse_risk_class(std::string_view s);
Phase parse_phase(std::string_view s);
Profession parse_profession(std::string_view s);
Skill parse_skill(std::string_view s);

inline constexpr QueryType kAllQueryTypes[] = {QueryType::filesystem, QueryType::htaccess,
                                               QueryType::httpheaders, QueryType::networkrequests};

/// 1-based line numbers.
using LineSet = std::set<int>;

struct Query {
    std::string id;
    QueryType type = QueryType::httpheaders;
    QueryLabel label = QueryLabel::neutral;
    std::vector<std::string> lines;
    LineSet risky_lines;
    LineSet deceptive_lines;
    std::optional<std::string> technique_ref;
    std::optional<std::string> risk_ref;
    std::optional<RiskClass> risk_class;
    std::string source_ref;

    int line_count() const { return static_cast<int>(lines.size()); }
    const std::string& line(int number) const { return lines.at(static_cast<std::size_t>(number - 1)); }

    bool operator==(const Query&) const = default;
};

/// Throws invalid_query when a label/annotation invariant is violated.
void check_query(const Query& q);

/// Marks in the order they were placed. Not validated on construction;
/// validate_answer() checks it against a query.
struct MarkVector {
    std::vector<int> entries;

    bool empty() const { return entries.empty(); }
    std::size_t size() const { return entries.size(); }
    bool operator==(const MarkVector&) const = default;
};

LineSet mark_set(const MarkVector& v);

struct Answer {
    std::string user_id;
    std::string query_id;
    MarkVector exploit;
    MarkVector trap;
    std::int64_t duration_ms = 0;
    std::int64_t answered_at_ms = 0;  // UTC, milliseconds since epoch
    std::optional<std::string> comment;
    Phase phase = Phase::main;

    LineSet exploit_set() const { return mark_set(exploit); }
    LineSet trap_set() const { return mark_set(trap); }
    bool has_marks() const { return !exploit.empty() || !trap.empty(); }

    bool operator==(const Answer&) const = default;
};

struct UserProfile {
    Profession profession = Profession::other;
    Skill skill = Skill::none;
    double years_experience = 0.0;

    bool operator==(const UserProfile&) const = default;
};

/// Throws out_of_range, duplicate_mark, overlapping_marks or unknown_query.
void validate_answer(const Answer& answer, const Query& query);

/// Immutable id -> query lookup shared by injection, store and analysis.
class QueryIndex {
public:
    QueryIndex() = default;
    explicit QueryIndex(std::vector<Query> queries);

    const Query* find(std::string_view id) const;
    const Query& at(std::string_view id) const;
    const std::vector<Query>& all() const { return queries_; }
    std::size_t size() const { return queries_.size(); }

private:
    std::vector<Query> queries_;
    std::map<std::string, std::size_t, std::less<>> by_id_;
};

std::string format_line_list(const LineSet& lines);
std::string format_timestamp(std::int64_t epoch_ms);
std::int64_t parse_timestamp(std::string_view iso);

}  // namespace honeyquest
