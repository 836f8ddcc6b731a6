#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "honeyquest/model.hpp"

namespace honeyquest {

enum class TechniqueKind { httpheader, filesystem, htaccess, networkrequest };
enum class OpCode { add, append_param, replace };

std::string_view to_string(TechniqueKind v);
std::string_view to_string(OpCode v);

/// Which op codes a technique kind may use:
/// httpheader {add}, filesystem {add}, htaccess {add, replace},
/// networkrequest {add, append-param, replace}.
bool kind_supports(TechniqueKind kind, OpCode op);

/// httpheader <-> httpheaders, networkrequest <-> networkrequests, others by name.
bool compatible(TechniqueKind kind, QueryType type);

struct TechniqueOp {
    OpCode op = OpCode::add;
    std::string key;                   // empty when absent
    std::string value;
    std::optional<std::string> match;  // target-line pattern for append-param and replace

    bool operator==(const TechniqueOp&) const = default;
};

struct TechniqueSpec {
    TechniqueKind kind = TechniqueKind::httpheader;
    std::string name;
    std::string description;
    std::vector<TechniqueOp> operations;

    bool operator==(const TechniqueSpec&) const = default;
};

bool is_valid_name(std::string_view name);

/// Parses and validates one HoneYAML document. Throws Error with a line and
/// column (1-based) for syntax problems and for schema violations.
TechniqueSpec parse_technique(std::string_view text);

/// Canonical form: keys in the order kind, name, description, operations;
/// op fields in the order op, key, value, match.
std::string serialize_technique(const TechniqueSpec& spec);

/// Loads every *.yaml / *.yml file in `dir`, sorted by name. The file stem
/// must equal the technique name.
std::vector<TechniqueSpec> load_catalog(const std::filesystem::path& dir);

const TechniqueSpec* find_technique(const std::vector<TechniqueSpec>& catalog, std::string_view name);

}  // namespace honeyquest
