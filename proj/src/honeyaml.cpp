#include "honeyquest/honeyaml.hpp"

#include <yaml-cpp/eventhandler.h>
#include <yaml-cpp/exceptions.h>
#include <yaml-cpp/mark.h>
#include <yaml-cpp/parser.h>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <regex>
#include <sstream>

namespace honeyquest {

std::string_view to_string(TechniqueKind v) {
    switch (v) {
    case TechniqueKind::httpheader: return "httpheader";
    case TechniqueKind::filesystem: return "filesystem";
    case TechniqueKind::htaccess: return "htaccess";
    case TechniqueKind::networkrequest: return "networkrequest";
    }
    return "?";
}

std::string_view to_string(OpCode v) {
    switch (v) {
    case OpCode::add: return "add";
    case OpCode::append_param: return "append-param";
    case OpCode::replace: return "replace";
    }
    return "?";
}

bool kind_supports(TechniqueKind kind, OpCode op) {
    switch (kind) {
    case TechniqueKind::httpheader:
    case TechniqueKind::filesystem: return op == OpCode::add;
    case TechniqueKind::htaccess: return op == OpCode::add || op == OpCode::replace;
    case TechniqueKind::networkrequest: return true;
    }
    return false;
}

bool compatible(TechniqueKind kind, QueryType type) {
    switch (kind) {
    case TechniqueKind::httpheader: return type == QueryType::httpheaders;
    case TechniqueKind::filesystem: return type == QueryType::filesystem;
    case TechniqueKind::htaccess: return type == QueryType::htaccess;
    case TechniqueKind::networkrequest: return type == QueryType::networkrequests;
    }
    return false;
}

bool is_valid_name(std::string_view name) {
    if (name.empty()) return false;
    return std::all_of(name.begin(), name.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-';
    });
}

namespace {

// Minimal document tree built from parser events. Only the YAML subset the
// format allows survives: anchors, aliases and explicit tags are rejected.
struct Node {
    enum class Kind { scalar, null, sequence, mapping };
    Kind kind = Kind::null;
    int line = 1;
    int column = 1;
    std::string value;
    std::vector<Node> items;
    std::vector<std::pair<Node, Node>> entries;
};

[[noreturn]] void fail_at(ErrorCode code, const std::string& msg, const Node& at) {
    throw Error(code, msg, at.line, at.column);
}

class TreeBuilder : public YAML::EventHandler {
public:
    std::optional<Node> root;

    void OnDocumentStart(const YAML::Mark&) override {}
    void OnDocumentEnd() override {}

    void OnNull(const YAML::Mark& mark, YAML::anchor_t anchor) override {
        no_anchor(mark, anchor);
        Node n = make(mark, Node::Kind::null);
        push(std::move(n));
    }

    void OnAlias(const YAML::Mark& mark, YAML::anchor_t) override {
        throw Error(ErrorCode::syntax, "aliases are not supported", mark.line + 1, mark.column + 1);
    }

    void OnAnchor(const YAML::Mark& mark, const std::string&) override {
        throw Error(ErrorCode::syntax, "anchors are not supported", mark.line + 1, mark.column + 1);
    }

    void OnScalar(const YAML::Mark& mark, const std::string& tag, YAML::anchor_t anchor,
                  const std::string& value) override {
        no_anchor(mark, anchor);
        no_tag(mark, tag);
        Node n = make(mark, Node::Kind::scalar);
        n.value = value;
        push(std::move(n));
    }

    void OnSequenceStart(const YAML::Mark& mark, const std::string& tag, YAML::anchor_t anchor,
                         YAML::EmitterStyle::value) override {
        no_anchor(mark, anchor);
        no_tag(mark, tag);
        open_.push_back(make(mark, Node::Kind::sequence));
    }

    void OnSequenceEnd() override { close(); }

    void OnMapStart(const YAML::Mark& mark, const std::string& tag, YAML::anchor_t anchor,
                    YAML::EmitterStyle::value) override {
        no_anchor(mark, anchor);
        no_tag(mark, tag);
        open_.push_back(make(mark, Node::Kind::mapping));
        pending_keys_.push_back(std::nullopt);
    }

    void OnMapEnd() override {
        pending_keys_.pop_back();
        close();
    }

private:
    static Node make(const YAML::Mark& mark, Node::Kind kind) {
        Node n;
        n.kind = kind;
        n.line = mark.line + 1;
        n.column = mark.column + 1;
        return n;
    }

    static void no_anchor(const YAML::Mark& mark, YAML::anchor_t anchor) {
        if (anchor != YAML::NullAnchor)
            throw Error(ErrorCode::syntax, "anchors are not supported", mark.line + 1, mark.column + 1);
    }

    static void no_tag(const YAML::Mark& mark, const std::string& tag) {
        if (!tag.empty() && tag != "?" && tag != "!")
            throw Error(ErrorCode::syntax, "tags are not supported ('" + tag + "')", mark.line + 1,
                        mark.column + 1);
    }

    void close() {
        Node done = std::move(open_.back());
        open_.pop_back();
        push(std::move(done));
    }

    void push(Node n) {
        if (open_.empty()) {
            root = std::move(n);
            return;
        }
        Node& parent = open_.back();
        if (parent.kind == Node::Kind::sequence) {
            parent.items.push_back(std::move(n));
            return;
        }
        auto& key = pending_keys_.back();
        if (!key) {
            if (n.kind != Node::Kind::scalar) fail_at(ErrorCode::syntax, "mapping keys must be scalars", n);
            for (const auto& [k, v] : parent.entries)
                if (k.value == n.value) fail_at(ErrorCode::syntax, "duplicate key '" + n.value + "'", n);
            key = std::move(n);
        } else {
            parent.entries.emplace_back(std::move(*key), std::move(n));
            key.reset();
        }
    }

    std::vector<Node> open_;
    std::vector<std::optional<Node>> pending_keys_;
};

Node parse_tree(std::string_view text) {
    std::istringstream in{std::string(text)};
    TreeBuilder builder;
    try {
        YAML::Parser parser(in);
        if (!parser.HandleNextDocument(builder) || !builder.root)
            throw Error(ErrorCode::syntax, "empty document", 1, 1);
        TreeBuilder extra;
        if (parser.HandleNextDocument(extra))
            throw Error(ErrorCode::syntax, "expected a single document", 1, 1);
    } catch (const YAML::Exception& e) {
        throw Error(ErrorCode::syntax, e.msg, e.mark.line + 1, e.mark.column + 1);
    }
    return std::move(*builder.root);
}

const Node* field(const Node& map, std::string_view key) {
    for (const auto& [k, v] : map.entries)
        if (k.value == key) return &v;
    return nullptr;
}

std::string scalar_field(const Node& map, std::string_view key, bool required) {
    const Node* n = field(map, key);
    if (!n || n->kind == Node::Kind::null) {
        if (required) fail_at(ErrorCode::missing_field, "missing required field '" + std::string(key) + "'", map);
        return {};
    }
    if (n->kind != Node::Kind::scalar) fail_at(ErrorCode::syntax, "field '" + std::string(key) + "' must be a scalar", *n);
    if (required && n->value.empty())
        fail_at(ErrorCode::missing_field, "field '" + std::string(key) + "' must not be empty", *n);
    return n->value;
}

void reject_unknown_keys(const Node& map, std::initializer_list<std::string_view> allowed) {
    for (const auto& [k, v] : map.entries) {
        if (std::find(allowed.begin(), allowed.end(), std::string_view(k.value)) == allowed.end())
            fail_at(ErrorCode::unknown_key, "unknown key '" + k.value + "'", k);
    }
}

TechniqueKind parse_kind(const Node& map) {
    const std::string kind = scalar_field(map, "kind", true);
    for (auto k : {TechniqueKind::httpheader, TechniqueKind::filesystem, TechniqueKind::htaccess,
                   TechniqueKind::networkrequest})
        if (to_string(k) == kind) return k;
    fail_at(ErrorCode::unknown_kind, "unknown kind '" + kind + "'", *field(map, "kind"));
}

TechniqueOp parse_op(const Node& item, TechniqueKind kind) {
    if (item.kind != Node::Kind::mapping) fail_at(ErrorCode::syntax, "operation must be a mapping", item);
    reject_unknown_keys(item, {"op", "key", "value", "match"});

    TechniqueOp op;
    const std::string code = scalar_field(item, "op", true);
    if (code == "add")
        op.op = OpCode::add;
    else if (code == "append-param")
        op.op = OpCode::append_param;
    else if (code == "replace")
        op.op = OpCode::replace;
    else
        fail_at(ErrorCode::unknown_op, "unknown op '" + code + "'", *field(item, "op"));

    if (!kind_supports(kind, op.op))
        fail_at(ErrorCode::op_not_allowed,
                "op '" + code + "' is not valid for kind '" + std::string(to_string(kind)) + "'", item);

    switch (op.op) {
    case OpCode::add:
        op.key = scalar_field(item, "key", true);
        op.value = scalar_field(item, "value", true);
        if (field(item, "match")) fail_at(ErrorCode::unknown_key, "op 'add' takes no 'match'", item);
        break;
    case OpCode::append_param:
        op.key = scalar_field(item, "key", true);
        op.value = scalar_field(item, "value", true);
        op.match = scalar_field(item, "match", true);
        break;
    case OpCode::replace:
        op.key = scalar_field(item, "key", false);
        op.value = scalar_field(item, "value", true);
        op.match = scalar_field(item, "match", true);
        break;
    }
    if (op.match) {
        try {
            std::regex check(*op.match);
        } catch (const std::regex_error&) {
            fail_at(ErrorCode::syntax, "match is not a valid pattern: '" + *op.match + "'", *field(item, "match"));
        }
    }
    return op;
}

// Scalars that survive as YAML plain scalars without changing meaning.
bool plain_safe(const std::string& s) {
    if (s.empty()) return false;
    static const char* const kReserved[] = {"null", "Null", "NULL", "~", "true", "false", "True", "False"};
    for (const char* r : kReserved)
        if (s == r) return false;
    const unsigned char first = static_cast<unsigned char>(s.front());
    if (!(std::isalnum(first) || first == '/' || first == '.' || first == '_' || first == '(')) return false;
    if (s.back() == ' ' || s.back() == ':') return false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const unsigned char c = static_cast<unsigned char>(s[i]);
        if (c < 0x20 || c >= 0x7f) return false;
        if (c == '#' || c == '"' || c == '\'' || c == '\\' || c == '{' || c == '}' || c == '[' || c == ']' ||
            c == ',' || c == '&' || c == '*' || c == '!' || c == '|' || c == '>' || c == '%' || c == '@' ||
            c == '`')
            return false;
        if (c == ':' && i + 1 < s.size() && s[i + 1] == ' ') return false;
        if (c == ' ' && i + 1 < s.size() && s[i + 1] == ' ') return false;
    }
    return true;
}

std::string quote(const std::string& s) {
    if (plain_safe(s)) return s;
    std::string out = "\"";
    for (unsigned char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\r': out += "\\r"; break;
        default:
            if (c < 0x20 || c == 0x7f) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\x%02x", c);
                out += buf;
            } else {
                out += static_cast<char>(c);
            }
        }
    }
    out += '"';
    return out;
}

}  // namespace

TechniqueSpec parse_technique(std::string_view text) {
    const Node root = parse_tree(text);
    if (root.kind != Node::Kind::mapping) fail_at(ErrorCode::syntax, "document must be a mapping", root);
    reject_unknown_keys(root, {"kind", "name", "description", "operations"});

    TechniqueSpec spec;
    spec.kind = parse_kind(root);
    spec.name = scalar_field(root, "name", true);
    if (!is_valid_name(spec.name))
        fail_at(ErrorCode::bad_name, "name '" + spec.name + "' must match [a-z0-9-]+", *field(root, "name"));
    spec.description = scalar_field(root, "description", true);

    const Node* ops = field(root, "operations");
    if (!ops) fail_at(ErrorCode::missing_field, "missing required field 'operations'", root);
    if (ops->kind == Node::Kind::null) fail_at(ErrorCode::empty_operations, "operations must not be empty", *ops);
    if (ops->kind != Node::Kind::sequence) fail_at(ErrorCode::syntax, "operations must be a sequence", *ops);
    if (ops->items.empty()) fail_at(ErrorCode::empty_operations, "operations must not be empty", *ops);
    for (const Node& item : ops->items) spec.operations.push_back(parse_op(item, spec.kind));
    return spec;
}

std::string serialize_technique(const TechniqueSpec& spec) {
    std::string out;
    out += "kind: " + std::string(to_string(spec.kind)) + "\n";
    out += "name: " + quote(spec.name) + "\n";
    out += "description: " + quote(spec.description) + "\n";
    out += "operations:\n";
    for (const TechniqueOp& op : spec.operations) {
        out += "  - op: " + std::string(to_string(op.op)) + "\n";
        if (!op.key.empty()) out += "    key: " + quote(op.key) + "\n";
        out += "    value: " + quote(op.value) + "\n";
        if (op.match) out += "    match: " + quote(*op.match) + "\n";
    }
    return out;
}

std::vector<TechniqueSpec> load_catalog(const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (!fs::is_directory(dir, ec))
        throw Error(ErrorCode::io, "technique directory not readable").with_path(dir.string());

    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const auto ext = entry.path().extension();
        if (ext == ".yaml" || ext == ".yml") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());

    std::vector<std::pair<TechniqueSpec, fs::path>> loaded;
    for (const fs::path& file : files) {
        std::ifstream in(file, std::ios::binary);
        if (!in) throw Error(ErrorCode::io, "cannot open file").with_path(file.string());
        std::ostringstream buf;
        buf << in.rdbuf();
        try {
            loaded.emplace_back(parse_technique(buf.str()), file);
        } catch (const Error& e) {
            throw e.with_path(file.string());
        }
    }

    std::map<std::string, fs::path> seen;
    for (const auto& [spec, file] : loaded) {
        if (auto [it, inserted] = seen.emplace(spec.name, file); !inserted)
            throw Error(ErrorCode::duplicate_name,
                        "technique '" + spec.name + "' also defined in " + it->second.string())
                .with_path(file.string());
    }
    std::vector<TechniqueSpec> catalog;
    for (auto& [spec, file] : loaded) {
        if (file.stem().string() != spec.name)
            throw Error(ErrorCode::bad_name, "file name must equal technique name '" + spec.name + "'")
                .with_path(file.string());
        catalog.push_back(std::move(spec));
    }
    std::sort(catalog.begin(), catalog.end(),
              [](const TechniqueSpec& a, const TechniqueSpec& b) { return a.name < b.name; });
    return catalog;
}

const TechniqueSpec* find_technique(const std::vector<TechniqueSpec>& catalog, std::string_view name) {
    for (const auto& t : catalog)
        if (t.name == name) return &t;
    return nullptr;
}

}  // namespace honeyquest
