#include "honeyquest/matching.hpp"

#include <algorithm>

namespace honeyquest {

bool intersects(const LineSet& marks, const LineSet& lines) {
    auto a = marks.begin();
    auto l = lines.begin();
    while (a != marks.end() && l != lines.end()) {
        if (*a == *l) return true;
        if (*a < *l)
            ++a;
        else
            ++l;
    }
    return false;
}

std::string_view to_string(MatchVariant v) {
    switch (v) {
        case MatchVariant::A1: return "A1";
        case MatchVariant::A2: return "A2";
        case MatchVariant::A3: return "A3";
        case MatchVariant::A4: return "A4";
        case MatchVariant::A5: return "A5";
    }
    return "?";
}

MatchVariant variant(const LineSet& marks, const LineSet& lines) {
    if (lines.empty()) throw Error(ErrorCode::invalid_argument, "annotation set must not be empty");
    if (marks.empty()) return MatchVariant::A5;
    if (marks == lines) return MatchVariant::A1;
    if (std::includes(lines.begin(), lines.end(), marks.begin(), marks.end())) return MatchVariant::A2;
    if (intersects(marks, lines)) return MatchVariant::A3;
    return MatchVariant::A4;
}

std::string_view to_string(Outcome o) {
    switch (o) {
        case Outcome::exploit: return "exploit";
        case Outcome::trap: return "trap";
        case Outcome::other: return "other";
        case Outcome::none: return "none";
    }
    return "?";
}

Outcome classify(const Answer& answer, const LineSet& lines) {
    if (intersects(answer.exploit_set(), lines)) return Outcome::exploit;
    if (intersects(answer.trap_set(), lines)) return Outcome::trap;
    if (answer.has_marks()) return Outcome::other;
    return Outcome::none;
}

}  // namespace honeyquest
