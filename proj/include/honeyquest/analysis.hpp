#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "honeyquest/matching.hpp"
#include "honeyquest/stats.hpp"
#include "honeyquest/store.hpp"

namespace honeyquest {

enum class Grouping { technique, risk, query };

std::string_view to_string(Grouping g);
Grouping parse_grouping(std::string_view s);

struct FilterOptions {
    bool include_warmup = false;
    /// Users with fewer main-phase answers are dropped; 0 keeps everyone.
    std::size_t min_main_answers = 8;
};

/// Drops tutorial answers always, warmup answers unless asked, and users
/// below the main-answer threshold. Order is preserved.
std::vector<Answer> filter_answers(const std::vector<Answer>& answers, const QueryStore& store,
                                   const FilterOptions& options);

// ---- Aspect A: counting --------------------------------------------------

/// One row of the twelve-count table. For neutral rows `ex`, `tr`, `other`
/// and `none` are n_Ex (exploit only), n_Tr (trap only), n_and (both) and
/// n_none. For deceptive and risky rows they are the raw, overlapping
/// counts of exploit-match, trap-match, marks-without-match and no marks.
/// The `excl_*` fields apply the precedence exploit > trap > other > none
/// and always sum to `total`.
struct CountRow {
    QueryLabel kind = QueryLabel::neutral;
    std::string group;
    int total = 0;
    int ex = 0, tr = 0, other = 0, none = 0;
    int excl_ex = 0, excl_tr = 0, excl_other = 0, excl_none = 0;
};

/// Neutral rows are keyed by query type unless grouping by query. With
/// technique grouping, deceptive answers are counted against L_D; with risk
/// grouping, every answer on a query carrying the risk counts against L_R.
std::vector<CountRow> count_answers(const std::vector<Answer>& answers, const QueryIndex& index,
                                    Grouping grouping);

// ---- confusion matrices --------------------------------------------------

struct ConfusionMatrix {
    int tn = 0, fp = 0, fn = 0, tp = 0;

    std::optional<double> acc() const;
    std::optional<double> ppv() const;
    std::optional<double> tpr() const;
    std::optional<double> fpr() const;
};

/// Deceptive positives are judged by trap marks against L_D, risky
/// positives by exploit marks against L_R; neutral answers use the same
/// mark kind. Throws mixed_kind when an answer's query has another label.
ConfusionMatrix confusion(const std::vector<Answer>& positive, QueryLabel positive_kind,
                          const std::vector<Answer>& neutral, const QueryIndex& index);

struct ConfusionRow {
    QueryLabel kind = QueryLabel::deceptive;
    std::string group;
    ConfusionMatrix matrix;
};

/// One matrix per group; the negatives are the neutral answers on queries
/// of the same type(s) as the group.
std::vector<ConfusionRow> confusion_by_group(const std::vector<Answer>& answers, const QueryIndex& index,
                                             Grouping grouping);

// ---- Aspect B1: order ------------------------------------------------------

struct B1Classification {
    bool eligible = false;     // both a' and a'' exist
    int first_deceptive = 0;   // 1-based rank of a' in the exploit vector
    int first_other = 0;       // 1-based rank of a''
    bool deceptive_first = false;
};

B1Classification classify_b1(const Answer& answer, const Query& query);

struct B1Row {
    std::string group;
    int d_b = 0;
    int d_b_first = 0;  // d'_B
    bool sufficient = false;
    std::optional<TestResult> test;
};

/// Rows sorted by group, followed by an "(all)" row.
std::vector<B1Row> aspect_b1(const std::vector<Answer>& answers, const QueryIndex& index, Grouping grouping,
                             int min_samples = 10, double alpha = 0.05);

// ---- Aspect B2: paired before/after ----------------------------------------

/// beta = matched on q_R only, gamma = matched on q_D only, delta = both,
/// alpha = neither.
struct ContingencyTable {
    int alpha = 0, beta = 0, gamma = 0, delta = 0;

    int total() const { return alpha + beta + gamma + delta; }
    bool operator==(const ContingencyTable&) const = default;
};

struct B2Result {
    ContingencyTable table;
    std::optional<TestResult> one_sided;  // after-only cell smaller than chance
    std::optional<TestResult> mcnemar;    // exact, two-sided
    std::optional<double> relative_risk;
    std::optional<double> risk_reduction;
    bool low_expected = false;
};

B2Result evaluate_b2(const ContingencyTable& table, double alpha = 0.05);

/// Answers of one user on a risky query and on a query derived from it.
struct AnswerPair {
    Answer before;
    Answer after;
};

B2Result aspect_b2(const std::vector<AnswerPair>& pairs, const QueryStore& store, double alpha = 0.05);

struct B2Row {
    std::string group;
    B2Result result;
};

/// Pairs every (user, risky source, derived deceptive query) present in the
/// answers. Groups by technique, risk, or derived query id. Rows sorted by
/// group, followed by an "(all)" row.
std::vector<AnswerPair> pair_answers(const std::vector<Answer>& answers, const QueryStore& store);
std::vector<B2Row> aspect_b2_by_group(const std::vector<Answer>& answers, const QueryStore& store,
                                      Grouping grouping, double alpha = 0.05);

// ---- per-line rankings -------------------------------------------------------

enum class MarkKind { exploit, trap };

std::string_view to_string(MarkKind k);
MarkKind parse_mark_kind(std::string_view s);

struct LineRow {
    std::string query_id;
    int line = 0;
    std::string text;
    int n_ex = 0;
    int n_tr = 0;
    std::string annotation;  // "risky:<risk>", "deceptive:<technique>" or empty
};

/// Lines with at least one mark. top_k = 0 returns every line.
std::vector<LineRow> rank_lines(const std::vector<Answer>& answers, const QueryIndex& index, MarkKind by,
                                std::size_t top_k);

// ---- reward ranking ------------------------------------------------------------

/// Indexed [label][column] with columns none, trap, exploit.
struct RewardWeights {
    std::array<std::array<double, 3>, 3> w{};

    static RewardWeights defaults();
    RewardWeights scaled(double factor) const;
    double at(QueryLabel label, int column) const;
    void validate() const;  // throws invalid_weights
};

enum RewardColumn { kNoMarks = 0, kTrapMarks = 1, kExploitMarks = 2 };

/// Exploit-match, then trap-match; unmatched marks fall into the column of
/// the mark kind present (exploit first); otherwise no marks.
int reward_column(const Answer& answer, const Query& query);

struct RewardRow {
    std::string technique;
    int n = 0;
    double mean = 0.0;
};

std::vector<RewardRow> reward_rank(const std::vector<Answer>& answers, const QueryIndex& index,
                                   const RewardWeights& weights);

}  // namespace honeyquest
