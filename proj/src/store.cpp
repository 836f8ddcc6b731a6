#include "honeyquest/store.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "honeyquest/query_file.hpp"

namespace honeyquest {

namespace fs = std::filesystem;

std::string read_file(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw Error(ErrorCode::io, "cannot open file").with_path(file.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& file, std::string_view content) {
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::io, "cannot write file").with_path(file.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(ErrorCode::io, "short write").with_path(file.string());
}

std::vector<RiskEntry> load_risk_catalog(const fs::path& file) {
    std::istringstream in(read_file(file));
    std::vector<RiskEntry> out;
    std::set<std::string> ids;
    int line_no = 0;
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        if (line.empty() || line.front() == '#') continue;
        const auto t1 = line.find('\t');
        const auto t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
        if (t2 == std::string::npos)
            throw Error(ErrorCode::malformed_query_file, "expected id<TAB>class<TAB>description", line_no, 1)
                .with_path(file.string());
        RiskEntry e;
        e.id = line.substr(0, t1);
        try {
            e.risk_class = parse_risk_class(line.substr(t1 + 1, t2 - t1 - 1));
        } catch (const Error& err) {
            throw Error(ErrorCode::malformed_query_file, err.message(), line_no, 1).with_path(file.string());
        }
        e.description = line.substr(t2 + 1);
        if (!is_valid_name(e.id))
            throw Error(ErrorCode::bad_name, "risk id '" + e.id + "' must match [a-z0-9-]+", line_no, 1)
                .with_path(file.string());
        if (!ids.insert(e.id).second)
            throw Error(ErrorCode::duplicate_id, "risk '" + e.id + "' listed twice", line_no, 1)
                .with_path(file.string());
        out.push_back(std::move(e));
    }
    return out;
}

QueryStore::QueryStore(QueryIndex index, std::vector<std::string> tutorial, std::vector<std::string> warmup,
                       std::map<QueryType, std::string> tooltips, std::map<std::string, InjectionRecord> records)
    : index_(std::move(index)),
      tutorial_(std::move(tutorial)),
      warmup_(std::move(warmup)),
      tooltips_(std::move(tooltips)),
      records_(std::move(records)) {
    std::set<std::string_view> special(tutorial_.begin(), tutorial_.end());
    special.insert(warmup_.begin(), warmup_.end());
    for (const Query& q : index_.all())
        if (!special.count(q.id)) main_.push_back(q.id);
    std::sort(main_.begin(), main_.end());
}

Phase QueryStore::phase_of(std::string_view id) const {
    if (std::find(tutorial_.begin(), tutorial_.end(), id) != tutorial_.end()) return Phase::tutorial;
    if (std::find(warmup_.begin(), warmup_.end(), id) != warmup_.end()) return Phase::warmup;
    return Phase::main;
}

const std::string& QueryStore::tooltip(QueryType type) const {
    static const std::string empty;
    auto it = tooltips_.find(type);
    return it == tooltips_.end() ? empty : it->second;
}

const InjectionRecord* QueryStore::record_for(std::string_view derived_id) const {
    auto it = records_.find(std::string(derived_id));
    return it == records_.end() ? nullptr : &it->second;
}

namespace {

std::vector<std::string> split_ids(std::string_view value) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in{std::string(value)};
    while (std::getline(in, item, ',')) {
        const auto b = item.find_first_not_of(' ');
        const auto e = item.find_last_not_of(' ');
        if (b == std::string::npos) continue;
        out.push_back(item.substr(b, e - b + 1));
    }
    return out;
}

struct Manifest {
    std::vector<std::string> tutorial;
    std::vector<std::string> warmup;
};

Manifest read_manifest(const fs::path& file) {
    Manifest m;
    std::istringstream in(read_file(file));
    int line_no = 0;
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        if (line.empty() || line.front() == '#') continue;
        const auto colon = line.find(':');
        if (colon == std::string::npos)
            throw Error(ErrorCode::manifest, "expected 'key: ids'", line_no, 1).with_path(file.string());
        const std::string key = line.substr(0, colon);
        if (key == "tutorial")
            m.tutorial = split_ids(std::string_view(line).substr(colon + 1));
        else if (key == "warmup")
            m.warmup = split_ids(std::string_view(line).substr(colon + 1));
        else
            throw Error(ErrorCode::manifest, "unknown key '" + key + "'", line_no, 1).with_path(file.string());
    }
    return m;
}

void lint_manifest(const Manifest& m, const QueryIndex& index) {
    if (m.tutorial.size() != kTutorialSize)
        throw Error(ErrorCode::manifest, "expected " + std::to_string(kTutorialSize) + " tutorial queries, got " +
                                             std::to_string(m.tutorial.size()));
    std::map<QueryType, std::size_t> per_type;
    std::set<std::string> seen;
    for (const auto& id : m.tutorial) {
        index.at(id);
        if (!seen.insert(id).second) throw Error(ErrorCode::manifest, "'" + id + "' listed twice");
    }
    for (const auto& id : m.warmup) {
        ++per_type[index.at(id).type];
        if (!seen.insert(id).second) throw Error(ErrorCode::manifest, "'" + id + "' listed twice");
    }
    for (QueryType t : kAllQueryTypes)
        if (per_type[t] != kWarmupPerType)
            throw Error(ErrorCode::manifest, "warmup needs " + std::to_string(kWarmupPerType) +
                                                 " queries of type " + std::string(to_string(t)) + ", got " +
                                                 std::to_string(per_type[t]));
}

void lint_references(const Query& q, const std::vector<TechniqueSpec>& techniques,
                     const std::vector<RiskEntry>& risks) {
    if (q.technique_ref) {
        const TechniqueSpec* t = find_technique(techniques, *q.technique_ref);
        if (!t) throw Error(ErrorCode::dangling_reference, "unknown technique '" + *q.technique_ref + "'");
        if (!compatible(t->kind, q.type))
            throw Error(ErrorCode::incompatible_kind, "technique '" + t->name + "' does not fit type '" +
                                                          std::string(to_string(q.type)) + "'");
    }
    if (q.risk_ref) {
        auto it = std::find_if(risks.begin(), risks.end(), [&](const RiskEntry& r) { return r.id == *q.risk_ref; });
        if (it == risks.end()) throw Error(ErrorCode::dangling_reference, "unknown risk '" + *q.risk_ref + "'");
        if (q.risk_class && *q.risk_class != it->risk_class)
            throw Error(ErrorCode::dangling_reference, "risk class of '" + *q.risk_ref + "' disagrees with catalog");
    }
}

}  // namespace

QueryStore load_store(const fs::path& dir, const std::vector<TechniqueSpec>& techniques,
                      const std::vector<RiskEntry>& risks) {
    const fs::path query_dir = dir / "queries";
    std::error_code ec;
    if (!fs::is_directory(query_dir, ec))
        throw Error(ErrorCode::io, "missing queries directory").with_path(query_dir.string());

    std::vector<fs::path> query_files, record_files;
    for (const auto& entry : fs::directory_iterator(query_dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string name = entry.path().filename().string();
        if (entry.path().extension() == ".query")
            query_files.push_back(entry.path());
        else if (name.size() > 15 && name.ends_with(".injection.json"))
            record_files.push_back(entry.path());
    }
    std::sort(query_files.begin(), query_files.end());
    std::sort(record_files.begin(), record_files.end());

    std::vector<Query> queries;
    std::set<std::string> ids;
    for (const fs::path& file : query_files) {
        try {
            Query q = parse_query(read_file(file));
            if (file.stem().string() != q.id)
                throw Error(ErrorCode::malformed_query_file, "file name must equal id '" + q.id + "'");
            if (!ids.insert(q.id).second) throw Error(ErrorCode::duplicate_id, "duplicate query id '" + q.id + "'");
            check_query(q);
            lint_references(q, techniques, risks);
            queries.push_back(std::move(q));
        } catch (const Error& e) {
            throw e.with_path(file.string());
        }
    }
    QueryIndex index(std::move(queries));

    std::map<std::string, InjectionRecord> records;
    for (const fs::path& file : record_files) {
        try {
            InjectionRecord r = parse_record(read_file(file));
            const std::string expected = file.filename().string().substr(
                0, file.filename().string().size() - std::string(".injection.json").size());
            if (r.derived_query_id != expected)
                throw Error(ErrorCode::record_mismatch, "record names '" + r.derived_query_id + "'");
            const Query& derived = index.at(r.derived_query_id);
            undo_injection(derived, r, index);
            records.emplace(r.derived_query_id, std::move(r));
        } catch (const Error& e) {
            throw e.with_path(file.string());
        }
    }

    const fs::path manifest_file = dir / "manifest.txt";
    Manifest manifest = read_manifest(manifest_file);
    try {
        lint_manifest(manifest, index);
    } catch (const Error& e) {
        throw Error(ErrorCode::manifest, e.message()).with_path(manifest_file.string());
    }

    std::map<QueryType, std::string> tooltips;
    for (QueryType t : kAllQueryTypes) {
        const fs::path file = dir / "tooltips" / (std::string(to_string(t)) + ".txt");
        tooltips[t] = read_file(file);
    }

    return QueryStore(std::move(index), std::move(manifest.tutorial), std::move(manifest.warmup),
                      std::move(tooltips), std::move(records));
}

QueryStore load_store(const fs::path& dir, const fs::path& technique_dir) {
    return load_store(dir, load_catalog(technique_dir), load_risk_catalog(dir / "risks.tsv"));
}

std::vector<StoreSummaryRow> summarize(const QueryStore& store) {
    std::vector<StoreSummaryRow> rows;
    for (QueryType t : kAllQueryTypes)
        for (QueryLabel l : {QueryLabel::neutral, QueryLabel::risky, QueryLabel::deceptive}) {
            StoreSummaryRow row{t, l, 0};
            for (const Query& q : store.index().all())
                if (q.type == t && q.label == l) ++row.count;
            rows.push_back(row);
        }
    return rows;
}

}  // namespace honeyquest
