#pragma once

#include <string_view>

#include "honeyquest/model.hpp"

namespace honeyquest {

/// Answer marks A match annotations L when they share a line.
bool intersects(const LineSet& marks, const LineSet& lines);

enum class MatchVariant {
    A1,  // A = L
    A2,  // nonempty A strictly inside L
    A3,  // A overlaps L and reaches outside it
    A4,  // nonempty A disjoint from L
    A5,  // no marks
};

std::string_view to_string(MatchVariant v);

/// L must be nonempty.
MatchVariant variant(const LineSet& marks, const LineSet& lines);

/// Mutually exclusive outcome of one answer against one annotation set,
/// in precedence order exploit-match, trap-match, other marks, none.
enum class Outcome { exploit, trap, other, none };

std::string_view to_string(Outcome o);

Outcome classify(const Answer& answer, const LineSet& lines);

}  // namespace honeyquest
