#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "honeyquest/analysis.hpp"

namespace honeyquest {

enum class Format { tsv, json };

Format parse_format(std::string_view s);

struct ReportOptions {
    Grouping grouping = Grouping::technique;
    Format format = Format::tsv;
    int min_samples = 10;
    double alpha = 0.05;
    std::size_t top = 0;
    MarkKind by = MarkKind::exploit;
    RewardWeights weights = RewardWeights::defaults();
    FilterOptions filter;
};

inline constexpr const char* kReportNames[] = {"counts", "confusion", "b1", "b2", "lines", "reward"};

/// Renders one analyze report over already loaded answers. The answers are
/// filtered with options.filter first. Column order is fixed:
///
///   counts     kind group total ex tr other none excl_ex excl_tr excl_other excl_none ex_share ex_lo ex_hi
///   confusion  kind group tn fp fn tp acc ppv tpr fpr
///   b1         group d_b d_b_first ratio p_value power status
///   b2         group alpha beta gamma delta rr risk_reduction p_one_sided p_mcnemar power low_expected
///   lines      query line n_ex n_tr annotation text
///   reward     rank technique n mean_reward
///
/// Undefined values print as NA (tsv) or null (json).
std::string render_report(std::string_view name, const QueryStore& store, const std::vector<Answer>& answers,
                           const ReportOptions& options);

}  // namespace honeyquest
