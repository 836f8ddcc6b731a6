#include "honeyquest/injection.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <regex>
#include <sstream>

#include <json.hpp>

#include "honeyquest/rng.hpp"

namespace honeyquest {

std::string_view to_string(PlacementPolicy::Mode mode) {
    switch (mode) {
    case PlacementPolicy::Mode::append: return "append";
    case PlacementPolicy::Mode::random_interior: return "random-interior";
    case PlacementPolicy::Mode::fixed: return "fixed";
    }
    return "?";
}

PlacementPolicy::Mode parse_placement_mode(std::string_view s) {
    if (s == "append") return PlacementPolicy::Mode::append;
    if (s == "random-interior") return PlacementPolicy::Mode::random_interior;
    if (s == "fixed") return PlacementPolicy::Mode::fixed;
    throw Error(ErrorCode::unknown_enum, "unknown placement mode '" + std::string(s) + "'");
}

namespace {

std::vector<std::string> split_ws(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> out;
    for (std::string tok; in >> tok;) out.push_back(tok);
    return out;
}

bool is_month(const std::string& s) {
    static const char* const kMonths[] = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                          "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
    return std::find_if(std::begin(kMonths), std::end(kMonths), [&](const char* m) { return s == m; }) !=
           std::end(kMonths);
}

struct LsRow {
    std::string perms, links, owner;
    std::optional<std::string> group;
    std::string size, month, day, time_or_year, name;
};

std::optional<LsRow> parse_ls_row(const std::string& line) {
    const auto tok = split_ws(line);
    if (tok.size() < 8 || tok[0].size() != 10 || std::string("-dlcbps").find(tok[0][0]) == std::string::npos)
        return std::nullopt;
    LsRow row;
    row.perms = tok[0];
    row.links = tok[1];
    row.owner = tok[2];
    std::size_t i;
    if (is_month(tok[4]))
        i = 3;
    else if (tok.size() >= 9 && is_month(tok[5])) {
        row.group = tok[3];
        i = 4;
    } else
        return std::nullopt;
    row.size = tok[i];
    row.month = tok[i + 1];
    row.day = tok[i + 2];
    row.time_or_year = tok[i + 3];
    for (std::size_t k = i + 4; k < tok.size(); ++k) {
        if (!row.name.empty()) row.name += ' ';
        row.name += tok[k];
    }
    return row;
}

std::string pad_left(const std::string& s, std::size_t w) {
    return s.size() >= w ? s : std::string(w - s.size(), ' ') + s;
}

std::string most_common(const std::vector<std::string>& values) {
    std::map<std::string, int> counts;
    for (const auto& v : values) ++counts[v];
    std::string best;
    int best_count = 0;
    for (const auto& v : values) {  // first-seen wins ties
        if (counts[v] > best_count) {
            best = v;
            best_count = counts[v];
        }
    }
    return best;
}

bool is_dot_row(const std::string& line) {
    auto row = parse_ls_row(line);
    return row && (row->name == "." || row->name == "..");
}

int insertion_position(const Query& q, const PlacementPolicy& placement) {
    const int n = q.line_count();
    switch (placement.mode) {
    case PlacementPolicy::Mode::append: return n + 1;
    case PlacementPolicy::Mode::fixed:
        if (placement.index < 1 || placement.index > n + 1)
            throw Error(ErrorCode::placement_out_of_range, "fixed index " + std::to_string(placement.index) +
                                                               " outside 1.." + std::to_string(n + 1));
        return placement.index;
    case PlacementPolicy::Mode::random_interior: {
        int lo = 2;
        if (q.type == QueryType::filesystem) {
            int leading = 0;
            while (leading < n && is_dot_row(q.lines[static_cast<std::size_t>(leading)])) ++leading;
            lo = std::max(lo, leading + 1);
        }
        if (lo > n) return n + 1;
        Rng rng(placement.rng_seed);
        return lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - lo + 1)));
    }
    }
    return n + 1;
}

std::string request_time_before(const std::vector<std::string>& lines, int position) {
    if (position >= 2) {
        const auto tok = split_ws(lines[static_cast<std::size_t>(position - 2)]);
        if (!tok.empty() && tok[0].find_first_not_of("0123456789.") == std::string::npos) return tok[0];
    }
    return "0.000";
}

std::vector<std::string> render_add(const Query& q, TechniqueKind kind, const TechniqueOp& op, int position) {
    std::vector<std::string> out;
    switch (kind) {
    case TechniqueKind::httpheader: out.push_back(op.key + ": " + op.value); break;
    case TechniqueKind::filesystem: out.push_back(render_filesystem_row(q.lines, op.key)); break;
    case TechniqueKind::htaccess: {
        std::istringstream in(op.value);
        for (std::string line; std::getline(in, line);) out.push_back(line);
        break;
    }
    case TechniqueKind::networkrequest:
        out.push_back(request_time_before(q.lines, position) + " " + op.key + " " + op.value);
        break;
    }
    return out;
}

// Start/end of the URL token in a request row: first token containing "://"
// or starting with '/'.
std::optional<std::pair<std::size_t, std::size_t>> find_url(const std::string& line) {
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && line[i] == ' ') ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ') ++j;
        if (j > i) {
            const std::string_view tok(line.data() + i, j - i);
            if (tok.find("://") != std::string_view::npos || tok.front() == '/') return std::make_pair(i, j);
        }
        i = j;
    }
    return std::nullopt;
}

}  // namespace

std::string render_filesystem_row(const std::vector<std::string>& listing, const std::string& file_name) {
    std::vector<std::string> parsed_lines;
    std::vector<LsRow> rows;
    for (const auto& line : listing)
        if (auto row = parse_ls_row(line)) {
            rows.push_back(*row);
            parsed_lines.push_back(line);
        }

    // Human-readable like ls -h: 1.0K..9.9K, then whole kilobytes up to 64K.
    const std::uint64_t h = fnv1a64(file_name);
    const std::uint64_t kb = 1 + h % 64;
    const std::string size = kb < 10 ? std::to_string(kb) + "." + std::to_string((h >> 8) % 10) + "K"
                                     : std::to_string(kb) + "K";
    if (rows.empty()) return "-rw-r--r--  1 root " + pad_left(size, 4) + " Jan  1  2020 " + file_name;

    std::vector<std::string> owners, groups;
    for (const auto& r : rows) {
        owners.push_back(r.owner);
        if (r.group) groups.push_back(*r.group);
    }
    // Median over real entries; "." and ".." often carry unrelated dates.
    std::vector<std::size_t> entries;
    for (std::size_t k = 0; k < rows.size(); ++k)
        if (rows[k].name != "." && rows[k].name != "..") entries.push_back(k);
    if (entries.empty())
        for (std::size_t k = 0; k < rows.size(); ++k) entries.push_back(k);
    const std::size_t mid = entries[(entries.size() - 1) / 2];
    const LsRow& median = rows[mid];

    // Reuse the median row's column layout: numbers stay right-aligned to
    // their old end column, words start where the old ones started.
    struct Span {
        std::size_t start, end;
    };
    std::vector<Span> spans;
    const std::string& text = parsed_lines[mid];
    for (std::size_t k = 0; k < text.size();) {
        while (k < text.size() && text[k] == ' ') ++k;
        if (k >= text.size()) break;
        std::size_t e = k;
        while (e < text.size() && text[e] != ' ') ++e;
        spans.push_back({k, e});
        k = e;
    }
    std::vector<std::pair<std::string, bool>> fields = {{"-rw-r--r--", false}, {"1", true}, {most_common(owners), false}};
    if (median.group) fields.push_back({groups.empty() ? most_common(owners) : most_common(groups), false});
    fields.push_back({size, true});
    fields.push_back({median.month, false});
    fields.push_back({median.day, true});
    fields.push_back({median.time_or_year, true});
    fields.push_back({file_name, false});

    std::string out;
    for (std::size_t f = 0; f < fields.size(); ++f) {
        const auto& [value, right] = fields[f];
        std::size_t col = out.empty() ? 0 : out.size() + 1;
        if (f < spans.size()) {
            const Span& sp = spans[f];
            const std::size_t want = right ? (sp.end > value.size() ? sp.end - value.size() : 0) : sp.start;
            col = std::max(col, want);
        }
        out += std::string(col - out.size(), ' ') + value;
    }
    return out;
}

const TechniqueSpec& choose_technique(const Query& q, const std::vector<TechniqueSpec>& catalog,
                                      std::uint64_t rng_seed) {
    std::vector<const TechniqueSpec*> candidates;
    for (const auto& t : catalog)
        if (compatible(t.kind, q.type)) candidates.push_back(&t);
    if (candidates.empty())
        throw Error(ErrorCode::no_compatible_technique,
                    "no technique fits query type '" + std::string(to_string(q.type)) + "'");
    std::sort(candidates.begin(), candidates.end(),
              [](const TechniqueSpec* a, const TechniqueSpec* b) { return a->name < b->name; });
    Rng rng(rng_seed);
    return *candidates[static_cast<std::size_t>(rng.below(candidates.size()))];
}

std::pair<Query, InjectionRecord> make_deceptive(const Query& q, const TechniqueSpec& t,
                                                 const PlacementPolicy& placement) {
    if (q.label == QueryLabel::deceptive)
        throw Error(ErrorCode::already_deceptive, "query '" + q.id + "' is already deceptive");
    if (!compatible(t.kind, q.type))
        throw Error(ErrorCode::incompatible_kind, "technique '" + t.name + "' (" + std::string(to_string(t.kind)) +
                                                      ") does not fit query type '" +
                                                      std::string(to_string(q.type)) + "'");

    const int position = insertion_position(q, placement);

    // In-place edits first, addressed by source line number. Risky lines are
    // never targeted so their content stays byte-identical.
    std::vector<std::string> lines = q.lines;
    std::map<int, std::string> originals;
    for (const TechniqueOp& op : t.operations) {
        if (op.op == OpCode::add) continue;
        const std::regex pattern(*op.match);
        bool applied = false;
        for (int l = 1; l <= q.line_count() && !applied; ++l) {
            if (q.risky_lines.count(l)) continue;
            std::string& line = lines[static_cast<std::size_t>(l - 1)];
            std::smatch m;
            if (!std::regex_search(line, m, pattern)) continue;

            std::string edited;
            if (op.op == OpCode::replace) {
                edited = line.substr(0, static_cast<std::size_t>(m.position(0))) + op.value +
                         line.substr(static_cast<std::size_t>(m.position(0) + m.length(0)));
            } else {
                const auto url = find_url(line);
                if (!url) continue;
                const std::string_view token(line.data() + url->first, url->second - url->first);
                const char sep = token.find('?') == std::string_view::npos ? '?' : '&';
                edited = line.substr(0, url->second) + sep + op.key + "=" + op.value + line.substr(url->second);
            }
            if (edited == line) continue;
            originals.emplace(l, line);
            line = std::move(edited);
            applied = true;
        }
        if (!applied)
            throw Error(ErrorCode::no_match, "technique '" + t.name + "': pattern '" + *op.match +
                                                 "' selects no line of '" + q.id + "'");
    }

    std::vector<std::string> block;
    for (const TechniqueOp& op : t.operations) {
        if (op.op != OpCode::add) continue;
        for (auto& rendered : render_add(q, t.kind, op, position)) block.push_back(std::move(rendered));
    }
    const int inserted = static_cast<int>(block.size());
    lines.insert(lines.begin() + (position - 1), block.begin(), block.end());

    auto shift = [&](int l) { return l >= position ? l + inserted : l; };

    InjectionRecord record;
    record.source_query_id = q.id;
    record.derived_query_id = q.id + "--" + t.name;
    record.technique_name = t.name;
    for (int i = 0; i < inserted; ++i) record.inserted_lines.insert(position + i);
    for (const auto& [l, original] : originals) {
        record.inserted_lines.insert(shift(l));
        record.modified_lines.push_back({shift(l), original});
    }
    for (int l : q.risky_lines) record.shifted_risky_lines.insert(shift(l));

    Query derived = q;
    derived.id = record.derived_query_id;
    derived.label = QueryLabel::deceptive;
    derived.lines = std::move(lines);
    derived.technique_ref = t.name;
    derived.deceptive_lines = record.inserted_lines;
    derived.risky_lines = record.shifted_risky_lines;
    derived.source_ref = "derived from " + q.id + " via " + t.name;
    check_query(derived);
    return {std::move(derived), std::move(record)};
}

Query undo_injection(const Query& derived, const InjectionRecord& record, const QueryIndex& sources) {
    auto mismatch = [&](const std::string& why) {
        return Error(ErrorCode::record_mismatch, "record for '" + record.derived_query_id + "' does not match '" +
                                                     derived.id + "': " + why);
    };
    if (derived.id != record.derived_query_id) throw mismatch("derived id");
    if (derived.label != QueryLabel::deceptive) throw mismatch("query is not deceptive");
    if (derived.technique_ref != record.technique_name) throw mismatch("technique");
    if (derived.deceptive_lines != record.inserted_lines) throw mismatch("deceptive lines");
    if (derived.risky_lines != record.shifted_risky_lines) throw mismatch("risky lines");

    std::map<int, const std::string*> originals;
    for (const auto& m : record.modified_lines) {
        if (!record.inserted_lines.count(m.line)) throw mismatch("modified line outside inserted lines");
        originals.emplace(m.line, &m.original);
    }
    const Query* source = sources.find(record.source_query_id);
    if (!source) throw mismatch("unknown source query '" + record.source_query_id + "'");

    std::vector<std::string> lines;
    std::map<int, int> to_source;
    for (int l = 1; l <= derived.line_count(); ++l) {
        if (auto it = originals.find(l); it != originals.end()) {
            lines.push_back(*it->second);
        } else if (record.inserted_lines.count(l)) {
            continue;
        } else {
            lines.push_back(derived.line(l));
        }
        to_source[l] = static_cast<int>(lines.size());
    }
    LineSet risky;
    for (int l : derived.risky_lines) {
        auto it = to_source.find(l);
        if (it == to_source.end()) throw mismatch("risky line " + std::to_string(l) + " was inserted");
        risky.insert(it->second);
    }

    Query restored = *source;
    restored.lines = std::move(lines);
    restored.risky_lines = std::move(risky);
    if (restored != *source) throw mismatch("reconstruction differs from source '" + source->id + "'");
    return restored;
}

std::string serialize_record(const InjectionRecord& record) {
    nlohmann::ordered_json j;
    j["source_query_id"] = record.source_query_id;
    j["derived_query_id"] = record.derived_query_id;
    j["technique"] = record.technique_name;
    j["inserted_lines"] = std::vector<int>(record.inserted_lines.begin(), record.inserted_lines.end());
    j["shifted_risky_lines"] =
        std::vector<int>(record.shifted_risky_lines.begin(), record.shifted_risky_lines.end());
    auto modified = nlohmann::ordered_json::array();
    for (const auto& m : record.modified_lines) modified.push_back({{"line", m.line}, {"original", m.original}});
    j["modified_lines"] = std::move(modified);
    return j.dump(2) + "\n";
}

InjectionRecord parse_record(std::string_view json_text) {
    try {
        const auto j = nlohmann::json::parse(json_text);
        InjectionRecord r;
        r.source_query_id = j.at("source_query_id").get<std::string>();
        r.derived_query_id = j.at("derived_query_id").get<std::string>();
        r.technique_name = j.at("technique").get<std::string>();
        for (int l : j.at("inserted_lines")) r.inserted_lines.insert(l);
        for (int l : j.at("shifted_risky_lines")) r.shifted_risky_lines.insert(l);
        for (const auto& m : j.at("modified_lines"))
            r.modified_lines.push_back({m.at("line").get<int>(), m.at("original").get<std::string>()});
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::malformed_query_file, std::string("bad injection record: ") + e.what());
    }
}

}  // namespace honeyquest
