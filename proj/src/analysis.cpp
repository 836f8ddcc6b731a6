#include "honeyquest/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace honeyquest {

std::string_view to_string(Grouping g) {
    switch (g) {
        case Grouping::technique: return "technique";
        case Grouping::risk: return "risk";
        case Grouping::query: return "query";
    }
    return "?";
}

Grouping parse_grouping(std::string_view s) {
    if (s == "technique") return Grouping::technique;
    if (s == "risk") return Grouping::risk;
    if (s == "query") return Grouping::query;
    throw Error(ErrorCode::unknown_enum, "unknown grouping '" + std::string(s) + "'");
}

std::string_view to_string(MarkKind k) { return k == MarkKind::exploit ? "exploit" : "trap"; }

MarkKind parse_mark_kind(std::string_view s) {
    if (s == "exploit") return MarkKind::exploit;
    if (s == "trap") return MarkKind::trap;
    throw Error(ErrorCode::unknown_enum, "unknown mark kind '" + std::string(s) + "'");
}

std::vector<Answer> filter_answers(const std::vector<Answer>& answers, const QueryStore& store,
                                   const FilterOptions& options) {
    std::map<std::string, std::size_t> main_count;
    for (const Answer& a : answers)
        if (store.phase_of(a.query_id) == Phase::main) ++main_count[a.user_id];
    std::vector<Answer> out;
    for (const Answer& a : answers) {
        const Phase phase = store.phase_of(a.query_id);
        if (phase == Phase::tutorial) continue;
        if (phase == Phase::warmup && !options.include_warmup) continue;
        if (main_count[a.user_id] < options.min_main_answers) continue;
        out.push_back(a);
    }
    return out;
}

namespace {

const Query& query_of(const QueryIndex& index, const Answer& a) {
    const Query* q = index.find(a.query_id);
    if (!q) throw Error(ErrorCode::unknown_query, "answer references unknown query '" + a.query_id + "'");
    return *q;
}

void add_outcome(CountRow& row, const Answer& a, const LineSet& lines) {
    ++row.total;
    const bool ex = intersects(a.exploit_set(), lines);
    const bool tr = intersects(a.trap_set(), lines);
    if (ex) ++row.ex;
    if (tr) ++row.tr;
    if (!ex && !tr && a.has_marks()) ++row.other;
    if (!a.has_marks()) ++row.none;
    switch (classify(a, lines)) {
        case Outcome::exploit: ++row.excl_ex; break;
        case Outcome::trap: ++row.excl_tr; break;
        case Outcome::other: ++row.excl_other; break;
        case Outcome::none: ++row.excl_none; break;
    }
}

void add_neutral(CountRow& row, const Answer& a) {
    ++row.total;
    const bool ex = !a.exploit.empty(), tr = !a.trap.empty();
    int* cell = ex && tr ? &row.other : ex ? &row.ex : tr ? &row.tr : &row.none;
    ++*cell;
    int* excl = ex && tr ? &row.excl_other : ex ? &row.excl_ex : tr ? &row.excl_tr : &row.excl_none;
    ++*excl;
}

std::optional<double> ratio(int num, int den) {
    if (den == 0) return std::nullopt;
    return static_cast<double>(num) / den;
}

}  // namespace

std::vector<CountRow> count_answers(const std::vector<Answer>& answers, const QueryIndex& index,
                                    Grouping grouping) {
    std::map<std::pair<QueryLabel, std::string>, CountRow> rows;
    auto row = [&](QueryLabel kind, const std::string& group) -> CountRow& {
        CountRow& r = rows[{kind, group}];
        r.kind = kind;
        r.group = group;
        return r;
    };
    for (const Answer& a : answers) {
        const Query& q = query_of(index, a);
        if (q.label == QueryLabel::neutral) {
            add_neutral(row(QueryLabel::neutral, grouping == Grouping::query ? q.id : std::string(to_string(q.type))),
                        a);
            continue;
        }
        switch (grouping) {
            case Grouping::query:
                add_outcome(row(q.label, q.id), a,
                            q.label == QueryLabel::deceptive ? q.deceptive_lines : q.risky_lines);
                break;
            case Grouping::technique:
                if (q.label == QueryLabel::deceptive && q.technique_ref)
                    add_outcome(row(QueryLabel::deceptive, *q.technique_ref), a, q.deceptive_lines);
                break;
            case Grouping::risk:
                if (q.risk_ref && !q.risky_lines.empty())
                    add_outcome(row(QueryLabel::risky, *q.risk_ref), a, q.risky_lines);
                break;
        }
    }
    std::vector<CountRow> out;
    for (auto& [key, r] : rows) out.push_back(r);
    return out;
}

std::optional<double> ConfusionMatrix::acc() const { return ratio(tp + tn, tp + tn + fp + fn); }
std::optional<double> ConfusionMatrix::ppv() const { return ratio(tp, tp + fp); }
std::optional<double> ConfusionMatrix::tpr() const { return ratio(tp, tp + fn); }
std::optional<double> ConfusionMatrix::fpr() const { return ratio(fp, fp + tn); }

ConfusionMatrix confusion(const std::vector<Answer>& positive, QueryLabel positive_kind,
                          const std::vector<Answer>& neutral, const QueryIndex& index) {
    if (positive_kind == QueryLabel::neutral)
        throw Error(ErrorCode::invalid_argument, "positive kind must be deceptive or risky");
    const bool by_trap = positive_kind == QueryLabel::deceptive;
    ConfusionMatrix m;
    for (const Answer& a : neutral) {
        if (query_of(index, a).label != QueryLabel::neutral)
            throw Error(ErrorCode::mixed_kind, "'" + a.query_id + "' is not a neutral query");
        const bool marked = by_trap ? !a.trap.empty() : !a.exploit.empty();
        ++(marked ? m.fp : m.tn);
    }
    for (const Answer& a : positive) {
        const Query& q = query_of(index, a);
        if (q.label != positive_kind)
            throw Error(ErrorCode::mixed_kind, "'" + a.query_id + "' is not a " + std::string(to_string(positive_kind)) +
                                                   " query");
        const bool hit = by_trap ? intersects(a.trap_set(), q.deceptive_lines)
                                 : intersects(a.exploit_set(), q.risky_lines);
        ++(hit ? m.tp : m.fn);
    }
    return m;
}

std::vector<ConfusionRow> confusion_by_group(const std::vector<Answer>& answers, const QueryIndex& index,
                                             Grouping grouping) {
    struct Bucket {
        QueryLabel kind;
        std::vector<Answer> positive;
        std::set<QueryType> types;
    };
    std::map<std::pair<QueryLabel, std::string>, Bucket> buckets;
    std::map<QueryType, std::vector<Answer>> neutral;
    for (const Answer& a : answers) {
        const Query& q = query_of(index, a);
        if (q.label == QueryLabel::neutral) {
            neutral[q.type].push_back(a);
            continue;
        }
        std::optional<std::string> key;
        if (grouping == Grouping::query)
            key = q.id;
        else if (grouping == Grouping::technique && q.label == QueryLabel::deceptive)
            key = q.technique_ref;
        else if (grouping == Grouping::risk && q.label == QueryLabel::risky)
            key = q.risk_ref;
        if (!key) continue;
        Bucket& b = buckets.try_emplace({q.label, *key}, Bucket{q.label, {}, {}}).first->second;
        b.positive.push_back(a);
        b.types.insert(q.type);
    }
    std::vector<ConfusionRow> out;
    for (const auto& [key, b] : buckets) {
        std::vector<Answer> negatives;
        for (QueryType t : b.types) negatives.insert(negatives.end(), neutral[t].begin(), neutral[t].end());
        out.push_back({b.kind, key.second, confusion(b.positive, b.kind, negatives, index)});
    }
    return out;
}

B1Classification classify_b1(const Answer& answer, const Query& query) {
    B1Classification c;
    const auto& v = answer.exploit.entries;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const bool deceptive = query.deceptive_lines.count(v[i]) > 0;
        int& slot = deceptive ? c.first_deceptive : c.first_other;
        if (slot == 0) slot = static_cast<int>(i) + 1;
    }
    c.eligible = query.label == QueryLabel::deceptive && c.first_deceptive > 0 && c.first_other > 0;
    c.deceptive_first = c.eligible && c.first_deceptive < c.first_other;
    return c;
}

namespace {

std::optional<std::string> group_key(const Query& q, Grouping grouping) {
    switch (grouping) {
        case Grouping::query: return q.id;
        case Grouping::technique: return q.technique_ref;
        case Grouping::risk: return q.risk_ref;
    }
    return std::nullopt;
}

B1Row finish_b1(std::string group, int d_b, int first, int min_samples, double alpha) {
    B1Row r{std::move(group), d_b, first, d_b >= min_samples && d_b > 0, std::nullopt};
    if (r.sufficient) {
        TestResult t = binom_test(first, d_b, 0.5, Alternative::greater);
        if (first > 0 && first < d_b)
            t.power = binom_power(d_b, 0.5, static_cast<double>(first) / d_b, alpha, Alternative::greater);
        r.test = t;
    }
    return r;
}

}  // namespace

std::vector<B1Row> aspect_b1(const std::vector<Answer>& answers, const QueryIndex& index, Grouping grouping,
                             int min_samples, double alpha) {
    std::map<std::string, std::pair<int, int>> tally;
    int all_b = 0, all_first = 0;
    for (const Answer& a : answers) {
        const Query& q = query_of(index, a);
        if (q.label != QueryLabel::deceptive) continue;
        const auto key = group_key(q, grouping);
        if (!key) continue;
        const B1Classification c = classify_b1(a, q);
        auto& [d_b, first] = tally[*key];
        if (!c.eligible) continue;
        ++d_b;
        ++all_b;
        if (c.deceptive_first) {
            ++first;
            ++all_first;
        }
    }
    std::vector<B1Row> out;
    for (const auto& [group, t] : tally) out.push_back(finish_b1(group, t.first, t.second, min_samples, alpha));
    out.push_back(finish_b1("(all)", all_b, all_first, min_samples, alpha));
    return out;
}

B2Result evaluate_b2(const ContingencyTable& t, double alpha) {
    if (t.alpha < 0 || t.beta < 0 || t.gamma < 0 || t.delta < 0)
        throw Error(ErrorCode::invalid_argument, "contingency counts must be nonnegative");
    B2Result r;
    r.table = t;
    const int discordant = t.beta + t.gamma;
    r.low_expected = discordant / 2.0 < 5.0;
    if (discordant > 0) {
        TestResult one = binom_test(t.gamma, discordant, 0.5, Alternative::less);
        one.low_expected = r.low_expected;
        if (t.gamma > 0 && t.beta > 0)
            one.power = binom_power(discordant, 0.5, static_cast<double>(t.gamma) / discordant, alpha,
                                    Alternative::less);
        r.one_sided = one;
        TestResult two = binom_test(t.gamma, discordant, 0.5, Alternative::two_sided);
        two.low_expected = r.low_expected;
        r.mcnemar = two;
    }
    if (t.beta + t.delta > 0) {
        r.relative_risk = static_cast<double>(t.gamma + t.delta) / (t.beta + t.delta);
        r.risk_reduction = 1.0 - *r.relative_risk;
    }
    return r;
}

namespace {

struct CheckedPair {
    bool before;
    bool after;
};

CheckedPair check_pair(const AnswerPair& p, const QueryStore& store) {
    if (p.before.user_id != p.after.user_id)
        throw Error(ErrorCode::unpaired_input, "pair mixes users '" + p.before.user_id + "' and '" +
                                                   p.after.user_id + "'");
    const Query* src = store.find(p.before.query_id);
    const Query* derived = store.find(p.after.query_id);
    if (!src || !derived) throw Error(ErrorCode::unknown_query, "pair references an unknown query");
    if (src->label != QueryLabel::risky || derived->label != QueryLabel::deceptive)
        throw Error(ErrorCode::unpaired_input, "pair must be a risky query and a deceptive query");
    const InjectionRecord* rec = store.record_for(derived->id);
    if (!rec) throw Error(ErrorCode::missing_injection_record, "no injection record for '" + derived->id + "'");
    if (rec->source_query_id != src->id)
        throw Error(ErrorCode::unpaired_input, "'" + derived->id + "' was not derived from '" + src->id + "'");
    return {intersects(p.before.exploit_set(), src->risky_lines),
            intersects(p.after.exploit_set(), rec->shifted_risky_lines)};
}

void tabulate(ContingencyTable& t, const CheckedPair& c) {
    if (c.before && c.after)
        ++t.delta;
    else if (c.before)
        ++t.beta;
    else if (c.after)
        ++t.gamma;
    else
        ++t.alpha;
}

}  // namespace

B2Result aspect_b2(const std::vector<AnswerPair>& pairs, const QueryStore& store, double alpha) {
    ContingencyTable t;
    for (const AnswerPair& p : pairs) tabulate(t, check_pair(p, store));
    return evaluate_b2(t, alpha);
}

std::vector<AnswerPair> pair_answers(const std::vector<Answer>& answers, const QueryStore& store) {
    std::map<std::pair<std::string, std::string>, const Answer*> by_key;
    std::set<std::string> users;
    for (const Answer& a : answers) {
        by_key[{a.user_id, a.query_id}] = &a;
        users.insert(a.user_id);
    }
    for (const Query& q : store.index().all())
        if (q.label == QueryLabel::deceptive && !q.risky_lines.empty() && !store.record_for(q.id))
            throw Error(ErrorCode::missing_injection_record, "no injection record for '" + q.id + "'");
    std::vector<AnswerPair> out;
    for (const auto& [derived_id, rec] : store.records()) {
        const Query* src = store.find(rec.source_query_id);
        if (!src || src->label != QueryLabel::risky) continue;
        for (const std::string& user : users) {
            auto b = by_key.find({user, rec.source_query_id});
            auto a = by_key.find({user, derived_id});
            if (b != by_key.end() && a != by_key.end()) out.push_back({*b->second, *a->second});
        }
    }
    return out;
}

std::vector<B2Row> aspect_b2_by_group(const std::vector<Answer>& answers, const QueryStore& store,
                                      Grouping grouping, double alpha) {
    std::map<std::string, ContingencyTable> tables;
    ContingencyTable all;
    for (const AnswerPair& p : pair_answers(answers, store)) {
        const CheckedPair c = check_pair(p, store);
        const Query& derived = store.at(p.after.query_id);
        std::optional<std::string> key;
        if (grouping == Grouping::risk)
            key = store.at(p.before.query_id).risk_ref;
        else
            key = group_key(derived, grouping);
        if (key) tabulate(tables[*key], c);
        tabulate(all, c);
    }
    std::vector<B2Row> out;
    for (const auto& [group, t] : tables) out.push_back({group, evaluate_b2(t, alpha)});
    out.push_back({"(all)", evaluate_b2(all, alpha)});
    return out;
}

std::vector<LineRow> rank_lines(const std::vector<Answer>& answers, const QueryIndex& index, MarkKind by,
                                std::size_t top_k) {
    std::map<std::pair<std::string, int>, LineRow> rows;
    auto touch = [&](const Query& q, int line) -> LineRow& {
        LineRow& r = rows[{q.id, line}];
        if (r.line == 0) {
            r.query_id = q.id;
            r.line = line;
            r.text = q.line(line);
            if (q.deceptive_lines.count(line))
                r.annotation = "deceptive:" + q.technique_ref.value_or("");
            else if (q.risky_lines.count(line))
                r.annotation = "risky:" + q.risk_ref.value_or("");
        }
        return r;
    };
    for (const Answer& a : answers) {
        const Query& q = query_of(index, a);
        for (int l : a.exploit.entries) ++touch(q, l).n_ex;
        for (int l : a.trap.entries) ++touch(q, l).n_tr;
    }
    std::vector<LineRow> out;
    for (auto& [key, r] : rows) out.push_back(std::move(r));
    const bool ex = by == MarkKind::exploit;
    std::stable_sort(out.begin(), out.end(), [ex](const LineRow& a, const LineRow& b) {
        const int a1 = ex ? a.n_ex : a.n_tr, b1 = ex ? b.n_ex : b.n_tr;
        if (a1 != b1) return a1 > b1;
        const int a2 = ex ? a.n_tr : a.n_ex, b2 = ex ? b.n_tr : b.n_ex;
        if (a2 != b2) return a2 > b2;
        if (a.query_id != b.query_id) return a.query_id < b.query_id;
        return a.line < b.line;
    });
    if (top_k > 0 && out.size() > top_k) out.resize(top_k);
    return out;
}

RewardWeights RewardWeights::defaults() {
    RewardWeights r;
    r.w[static_cast<int>(QueryLabel::neutral)] = {0.0, -0.10, 0.10};
    r.w[static_cast<int>(QueryLabel::risky)] = {-0.10, -0.20, 0.20};
    r.w[static_cast<int>(QueryLabel::deceptive)] = {-0.10, -0.35, 0.35};
    return r;
}

RewardWeights RewardWeights::scaled(double factor) const {
    RewardWeights r = *this;
    for (auto& row : r.w)
        for (double& x : row) x *= factor;
    return r;
}

double RewardWeights::at(QueryLabel label, int column) const {
    return w[static_cast<std::size_t>(label)][static_cast<std::size_t>(column)];
}

void RewardWeights::validate() const {
    for (const auto& row : w)
        for (double x : row)
            if (!std::isfinite(x)) throw Error(ErrorCode::invalid_weights, "weights must be finite");
    for (QueryLabel l : {QueryLabel::neutral, QueryLabel::risky, QueryLabel::deceptive}) {
        if (at(l, kExploitMarks) < 0) throw Error(ErrorCode::invalid_weights, "exploit weights must be >= 0");
        if (at(l, kTrapMarks) > 0) throw Error(ErrorCode::invalid_weights, "trap weights must be <= 0");
    }
    for (int col : {kTrapMarks, kExploitMarks}) {
        const double n = std::abs(at(QueryLabel::neutral, col)), r = std::abs(at(QueryLabel::risky, col)),
                     d = std::abs(at(QueryLabel::deceptive, col));
        if (!(d >= r && r >= n))
            throw Error(ErrorCode::invalid_weights, "magnitudes must order deceptive >= risky >= neutral");
    }
}

int reward_column(const Answer& answer, const Query& query) {
    const LineSet& lines = query.label == QueryLabel::deceptive ? query.deceptive_lines : query.risky_lines;
    switch (classify(answer, lines)) {
        case Outcome::exploit: return kExploitMarks;
        case Outcome::trap: return kTrapMarks;
        case Outcome::other: return answer.exploit.empty() ? kTrapMarks : kExploitMarks;
        case Outcome::none: return kNoMarks;
    }
    return kNoMarks;
}

std::vector<RewardRow> reward_rank(const std::vector<Answer>& answers, const QueryIndex& index,
                                   const RewardWeights& weights) {
    weights.validate();
    std::map<std::string, std::pair<int, double>> sums;
    for (const Answer& a : answers) {
        const Query& q = query_of(index, a);
        if (!q.technique_ref) continue;
        auto& [n, sum] = sums[*q.technique_ref];
        ++n;
        sum += weights.at(q.label, reward_column(a, q));
    }
    std::vector<RewardRow> out;
    for (const auto& [name, s] : sums) out.push_back({name, s.first, s.second / s.first});
    std::stable_sort(out.begin(), out.end(), [](const RewardRow& a, const RewardRow& b) {
        if (a.mean != b.mean) return a.mean > b.mean;
        return a.technique < b.technique;
    });
    return out;
}

}  // namespace honeyquest
