#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "honeyquest/honeyaml.hpp"
#include "honeyquest/model.hpp"

namespace honeyquest {

/// Where the lines produced by `add` operations go.
struct PlacementPolicy {
    enum class Mode { append, random_interior, fixed };

    Mode mode = Mode::random_interior;
    int index = 0;  // insertion position for Mode::fixed, in 1..len+1
    std::uint64_t rng_seed = 0;

    static PlacementPolicy append() { return {Mode::append, 0, 0}; }
    static PlacementPolicy random_interior(std::uint64_t seed) { return {Mode::random_interior, 0, seed}; }
    static PlacementPolicy fixed(int index) { return {Mode::fixed, index, 0}; }
};

std::string_view to_string(PlacementPolicy::Mode mode);
PlacementPolicy::Mode parse_placement_mode(std::string_view s);

/// A line of the derived query that replaced a source line in place.
struct ModifiedLine {
    int line = 0;  // in the derived query
    std::string original;

    bool operator==(const ModifiedLine&) const = default;
};

struct InjectionRecord {
    std::string source_query_id;
    std::string derived_query_id;
    std::string technique_name;
    LineSet inserted_lines;        // every deceptive line of the derived query
    LineSet shifted_risky_lines;   // L'_R
    std::vector<ModifiedLine> modified_lines;  // subset of inserted_lines edited in place

    bool operator==(const InjectionRecord&) const = default;
};

std::string serialize_record(const InjectionRecord& record);
InjectionRecord parse_record(std::string_view json_text);

/// Uniformly random technique among those compatible with q.type,
/// deterministic in `rng_seed`.
const TechniqueSpec& choose_technique(const Query& q, const std::vector<TechniqueSpec>& catalog,
                                      std::uint64_t rng_seed);

/// Applies one technique to a neutral or risky query. Derived id is
/// "<source id>--<technique name>".
std::pair<Query, InjectionRecord> make_deceptive(const Query& q, const TechniqueSpec& t,
                                                 const PlacementPolicy& placement);

/// Reverts an injection. The source query is looked up in `sources` and the
/// reconstruction must reproduce it exactly; otherwise record_mismatch.
Query undo_injection(const Query& derived, const InjectionRecord& record, const QueryIndex& sources);

/// Renders the ls-style row a filesystem `add` emits for `file_name`
/// given the listing it is inserted into.
std::string render_filesystem_row(const std::vector<std::string>& listing, const std::string& file_name);

}  // namespace honeyquest
