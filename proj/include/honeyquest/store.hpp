#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "honeyquest/honeyaml.hpp"
#include "honeyquest/injection.hpp"
#include "honeyquest/model.hpp"

namespace honeyquest {

struct RiskEntry {
    std::string id;
    RiskClass risk_class = RiskClass::vulnerability;
    std::string description;
};

/// Tab-separated: id, class, description. '#' starts a comment line.
std::vector<RiskEntry> load_risk_catalog(const std::filesystem::path& file);

/// The pre-computed query store. Directory layout:
///
///   manifest.txt          "tutorial: a,b,..." and "warmup: c,d,..."
///   risks.tsv             risk catalog
///   tooltips/<type>.txt   syntax help shown next to each query type
///   queries/<id>.query    one query per file, file stem == id
///   queries/<id>.injection.json   optional injection record sidecar
class QueryStore {
public:
    QueryStore() = default;
    QueryStore(QueryIndex index, std::vector<std::string> tutorial, std::vector<std::string> warmup,
               std::map<QueryType, std::string> tooltips, std::map<std::string, InjectionRecord> records);

    const QueryIndex& index() const { return index_; }
    const Query* find(std::string_view id) const { return index_.find(id); }
    const Query& at(std::string_view id) const { return index_.at(id); }

    const std::vector<std::string>& tutorial() const { return tutorial_; }
    const std::vector<std::string>& warmup() const { return warmup_; }
    /// Every id that is neither tutorial nor warmup, in id order.
    const std::vector<std::string>& main() const { return main_; }

    Phase phase_of(std::string_view id) const;
    bool is_tutorial(std::string_view id) const { return phase_of(id) == Phase::tutorial; }
    /// warmup + main; the progress bar total.
    std::size_t questionnaire_size() const { return warmup_.size() + main_.size(); }

    const std::string& tooltip(QueryType type) const;
    /// Injection record keyed by derived query id, if one was shipped.
    const InjectionRecord* record_for(std::string_view derived_id) const;
    const std::map<std::string, InjectionRecord>& records() const { return records_; }

private:
    QueryIndex index_;
    std::vector<std::string> tutorial_;
    std::vector<std::string> warmup_;
    std::vector<std::string> main_;
    std::map<QueryType, std::string> tooltips_;
    std::map<std::string, InjectionRecord> records_;
};

inline constexpr std::size_t kTutorialSize = 8;
inline constexpr std::size_t kWarmupPerType = 2;

/// Loads and lints the store: per-query invariants, file stem == id,
/// technique/risk references against the catalogs, manifest shape, and
/// consistency of injection sidecars.
QueryStore load_store(const std::filesystem::path& dir, const std::vector<TechniqueSpec>& techniques,
                      const std::vector<RiskEntry>& risks);

/// Convenience: techniques from `technique_dir`, risks from <dir>/risks.tsv.
QueryStore load_store(const std::filesystem::path& dir, const std::filesystem::path& technique_dir);

struct StoreSummaryRow {
    QueryType type;
    QueryLabel label;
    int count = 0;
};

/// Counts per (type, label) over the whole store, tutorial included.
std::vector<StoreSummaryRow> summarize(const QueryStore& store);

std::string read_file(const std::filesystem::path& file);
void write_file(const std::filesystem::path& file, std::string_view content);

}  // namespace honeyquest
