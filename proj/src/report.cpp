#include "honeyquest/report.hpp"

#include <cstdio>
#include <optional>
#include <variant>

#include <json.hpp>

namespace honeyquest {

using json = nlohmann::ordered_json;

Format parse_format(std::string_view s) {
    if (s == "tsv") return Format::tsv;
    if (s == "json") return Format::json;
    throw Error(ErrorCode::unknown_enum, "unknown format '" + std::string(s) + "'");
}

namespace {

using Cell = std::variant<std::string, long long, std::optional<double>, bool>;

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

class Table {
public:
    Table(std::string name, std::vector<std::string> columns) : name_(std::move(name)), columns_(std::move(columns)) {}

    void add(std::vector<Cell> row) { rows_.push_back(std::move(row)); }

    std::string render(Format format, Grouping grouping) const {
        return format == Format::tsv ? tsv() : json_text(grouping);
    }

private:
    std::string tsv() const {
        std::string out;
        for (std::size_t i = 0; i < columns_.size(); ++i) out += (i ? "\t" : "") + columns_[i];
        out += "\n";
        for (const auto& row : rows_) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i) out += "\t";
                out += tsv_cell(row[i]);
            }
            out += "\n";
        }
        return out;
    }

    static std::string tsv_cell(const Cell& c) {
        if (const auto* s = std::get_if<std::string>(&c)) {
            std::string v = *s;
            for (char& ch : v)
                if (ch == '\t' || ch == '\n') ch = ' ';
            return v;
        }
        if (const auto* n = std::get_if<long long>(&c)) return std::to_string(*n);
        if (const auto* d = std::get_if<std::optional<double>>(&c)) return *d ? fmt(**d) : "NA";
        return std::get<bool>(c) ? "true" : "false";
    }

    std::string json_text(Grouping grouping) const {
        json doc;
        doc["report"] = name_;
        doc["grouping"] = to_string(grouping);
        json rows = json::array();
        for (const auto& row : rows_) {
            json r;
            for (std::size_t i = 0; i < row.size(); ++i) {
                const Cell& c = row[i];
                if (const auto* s = std::get_if<std::string>(&c))
                    r[columns_[i]] = *s;
                else if (const auto* n = std::get_if<long long>(&c))
                    r[columns_[i]] = *n;
                else if (const auto* d = std::get_if<std::optional<double>>(&c))
                    r[columns_[i]] = *d ? json(std::stod(fmt(**d))) : json(nullptr);
                else
                    r[columns_[i]] = std::get<bool>(c);
            }
            rows.push_back(std::move(r));
        }
        doc["rows"] = std::move(rows);
        return doc.dump(2) + "\n";
    }

    std::string name_;
    std::vector<std::string> columns_;
    std::vector<std::vector<Cell>> rows_;
};

Cell num(int v) { return static_cast<long long>(v); }
Cell real(std::optional<double> v) { return v; }
Cell text(std::string_view s) { return std::string(s); }

std::optional<double> p_of(const std::optional<TestResult>& t) {
    return t ? t->p_value : std::nullopt;
}
std::optional<double> power_of(const std::optional<TestResult>& t) {
    return t ? t->power : std::nullopt;
}

Table counts(const std::vector<Answer>& answers, const QueryStore& store, const ReportOptions& o) {
    Table t("counts", {"kind", "group", "total", "ex", "tr", "other", "none", "excl_ex", "excl_tr", "excl_other",
                       "excl_none", "ex_share", "ex_lo", "ex_hi"});
    for (const CountRow& r : count_answers(answers, store.index(), o.grouping)) {
        std::optional<double> share, lo, hi;
        if (r.total > 0) {
            share = static_cast<double>(r.excl_ex) / r.total;
            const Interval iv = wilson_interval(r.excl_ex, r.total);
            lo = iv.lo;
            hi = iv.hi;
        }
        t.add({text(to_string(r.kind)), text(r.group), num(r.total), num(r.ex), num(r.tr), num(r.other),
               num(r.none), num(r.excl_ex), num(r.excl_tr), num(r.excl_other), num(r.excl_none), real(share),
               real(lo), real(hi)});
    }
    return t;
}

Table confusion_table(const std::vector<Answer>& answers, const QueryStore& store, const ReportOptions& o) {
    Table t("confusion", {"kind", "group", "tn", "fp", "fn", "tp", "acc", "ppv", "tpr", "fpr"});
    for (const ConfusionRow& r : confusion_by_group(answers, store.index(), o.grouping)) {
        const ConfusionMatrix& m = r.matrix;
        t.add({text(to_string(r.kind)), text(r.group), num(m.tn), num(m.fp), num(m.fn), num(m.tp), real(m.acc()),
               real(m.ppv()), real(m.tpr()), real(m.fpr())});
    }
    return t;
}

Table b1(const std::vector<Answer>& answers, const QueryStore& store, const ReportOptions& o) {
    Table t("b1", {"group", "d_b", "d_b_first", "ratio", "p_value", "power", "status"});
    for (const B1Row& r : aspect_b1(answers, store.index(), o.grouping, o.min_samples, o.alpha)) {
        std::optional<double> ratio;
        if (r.d_b > 0) ratio = static_cast<double>(r.d_b_first) / r.d_b;
        t.add({text(r.group), num(r.d_b), num(r.d_b_first), real(ratio), real(p_of(r.test)), real(power_of(r.test)),
               text(r.sufficient ? "tested" : "insufficient")});
    }
    return t;
}

Table b2(const std::vector<Answer>& answers, const QueryStore& store, const ReportOptions& o) {
    Table t("b2", {"group", "alpha", "beta", "gamma", "delta", "rr", "risk_reduction", "p_one_sided", "p_mcnemar",
                   "power", "low_expected"});
    for (const B2Row& r : aspect_b2_by_group(answers, store, o.grouping, o.alpha)) {
        const B2Result& b = r.result;
        t.add({text(r.group), num(b.table.alpha), num(b.table.beta), num(b.table.gamma), num(b.table.delta),
               real(b.relative_risk), real(b.risk_reduction), real(p_of(b.one_sided)), real(p_of(b.mcnemar)),
               real(power_of(b.one_sided)), Cell(b.low_expected)});
    }
    return t;
}

Table lines(const std::vector<Answer>& answers, const QueryStore& store, const ReportOptions& o) {
    Table t("lines", {"query", "line", "n_ex", "n_tr", "annotation", "text"});
    for (const LineRow& r : rank_lines(answers, store.index(), o.by, o.top))
        t.add({text(r.query_id), num(r.line), num(r.n_ex), num(r.n_tr), text(r.annotation), text(r.text)});
    return t;
}

Table reward(const std::vector<Answer>& answers, const QueryStore& store, const ReportOptions& o) {
    Table t("reward", {"rank", "technique", "n", "mean_reward"});
    int rank = 0;
    for (const RewardRow& r : reward_rank(answers, store.index(), o.weights))
        t.add({num(++rank), text(r.technique), num(r.n), real(r.mean)});
    return t;
}

}  // namespace

std::string render_report(std::string_view name, const QueryStore& store, const std::vector<Answer>& all_answers,
                          const ReportOptions& options) {
    const std::vector<Answer> answers = filter_answers(all_answers, store, options.filter);
    std::optional<Table> t;
    if (name == "counts")
        t = counts(answers, store, options);
    else if (name == "confusion")
        t = confusion_table(answers, store, options);
    else if (name == "b1")
        t = b1(answers, store, options);
    else if (name == "b2")
        t = b2(answers, store, options);
    else if (name == "lines")
        t = lines(answers, store, options);
    else if (name == "reward")
        t = reward(answers, store, options);
    else
        throw Error(ErrorCode::invalid_argument, "unknown report '" + std::string(name) + "'");
    return t->render(options.format, options.grouping);
}

}  // namespace honeyquest
