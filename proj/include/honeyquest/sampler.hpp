#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "honeyquest/store.hpp"

namespace honeyquest {

inline constexpr std::size_t kFrontBlockCap = 100;

/// The full per-user order: tutorial, warmup, balanced front block, rest.
struct QuerySequence {
    std::vector<std::string> ids;
    std::size_t front_begin = 0;  // index into ids
    std::size_t front_end = 0;    // one past the last front-block id
};

/// Picks the balanced front block from the main pool. One deceptive query per
/// technique, one risky query per risk, then each third padded to the larger
/// of the two and neutrals added to match. Unshuffled, sorted by id.
std::vector<std::string> front_block(const QueryStore& store, std::uint64_t seed);

/// Deterministic in (store, seed).
QuerySequence plan_sequence(const QueryStore& store, std::uint64_t seed);

}  // namespace honeyquest
