#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "honeyquest/answer_log.hpp"
#include "honeyquest/sampler.hpp"
#include "honeyquest/store.hpp"

namespace honeyquest {

struct UserState {
    std::string user_id;
    std::vector<std::string> answered;  // in answer order
    std::set<std::string> answered_set;
    std::optional<UserProfile> profile;
    std::optional<std::int64_t> consented_at_ms;
    std::uint64_t rng_seed = 0;
    QuerySequence sequence;
    std::size_t tutorial_answered = 0;

    std::size_t questionnaire_answered() const { return answered.size() - tutorial_answered; }
    bool operator==(const UserState& o) const {
        return user_id == o.user_id && answered == o.answered && profile == o.profile &&
               consented_at_ms == o.consented_at_ms && rng_seed == o.rng_seed && sequence.ids == o.sequence.ids;
    }
};

struct ProgressView {
    std::size_t answered_count = 0;
    std::size_t total_count = 0;
    double cohort_mean_answered = 0.0;
};

/// Per-user questionnaire state over one store. Every mutation is written to
/// the log (when one is attached) before it is applied, so replaying the log
/// rebuilds the same state. Not thread-safe; callers serialize.
class Questionnaire {
public:
    Questionnaire(const QueryStore& store, std::uint64_t global_seed, AnswerLog* log = nullptr);

    std::uint64_t seed_for(const std::string& user_id) const;

    /// Creates the user on first call; later calls return the existing state.
    const UserState& consent(const std::string& user_id, std::int64_t now_ms);
    const UserState* find(const std::string& user_id) const;

    bool tutorial_complete(const UserState& user) const;
    /// The next id in the user's sequence, or nullptr when exhausted. Does
    /// not apply the profile gate.
    const Query* next_query(const UserState& user) const;
    /// True when the next query is past the tutorial but no profile is set.
    bool needs_profile(const UserState& user) const;

    /// Returns the answer's position within the user's own sequence.
    /// The answer's phase is taken from the store, not from the argument.
    std::size_t record_answer(Answer answer);
    void set_profile(const std::string& user_id, const UserProfile& profile, std::int64_t now_ms);
    void add_feedback(FeedbackRecord feedback);

    ProgressView progress(const UserState& user) const;

    /// Applies records as if they had arrived live, without writing them.
    void replay(const std::vector<LogRecord>& records);

    const std::map<std::string, UserState>& users() const { return users_; }
    const QueryStore& store() const { return store_; }

private:
    UserState& require(const std::string& user_id);
    void apply_consent(const ConsentRecord& c);
    void check_answer(const Answer& a, const UserState& user) const;
    void check_profile(const ProfileRecord& p, const UserState& user) const;
    void apply(const LogRecord& r);
    void write(const LogRecord& r);

    const QueryStore& store_;
    std::uint64_t global_seed_;
    AnswerLog* log_;
    std::map<std::string, UserState> users_;
};

}  // namespace honeyquest
