#include "honeyquest/questionnaire.hpp"

#include <algorithm>

#include "honeyquest/rng.hpp"

namespace honeyquest {

Questionnaire::Questionnaire(const QueryStore& store, std::uint64_t global_seed, AnswerLog* log)
    : store_(store), global_seed_(global_seed), log_(log) {}

std::uint64_t Questionnaire::seed_for(const std::string& user_id) const {
    return splitmix64(global_seed_ + fnv1a64(user_id));
}

const UserState* Questionnaire::find(const std::string& user_id) const {
    auto it = users_.find(user_id);
    return it == users_.end() ? nullptr : &it->second;
}

UserState& Questionnaire::require(const std::string& user_id) {
    auto it = users_.find(user_id);
    if (it == users_.end()) throw Error(ErrorCode::not_consented, "no consent recorded for this session");
    return it->second;
}

void Questionnaire::write(const LogRecord& r) {
    if (log_) log_->append(r);
}

const UserState& Questionnaire::consent(const std::string& user_id, std::int64_t now_ms) {
    if (const UserState* u = find(user_id)) return *u;
    ConsentRecord c{user_id, now_ms, seed_for(user_id)};
    write(c);
    apply_consent(c);
    return users_.at(user_id);
}

void Questionnaire::apply_consent(const ConsentRecord& c) {
    if (users_.count(c.user_id)) return;
    UserState u;
    u.user_id = c.user_id;
    u.consented_at_ms = c.at_ms;
    u.rng_seed = c.rng_seed;
    u.sequence = plan_sequence(store_, c.rng_seed);
    users_.emplace(c.user_id, std::move(u));
}

bool Questionnaire::tutorial_complete(const UserState& user) const {
    return user.tutorial_answered >= store_.tutorial().size();
}

const Query* Questionnaire::next_query(const UserState& user) const {
    if (user.answered.size() >= user.sequence.ids.size()) return nullptr;
    return &store_.at(user.sequence.ids[user.answered.size()]);
}

bool Questionnaire::needs_profile(const UserState& user) const {
    const Query* q = next_query(user);
    return q && !user.profile && !store_.is_tutorial(q->id);
}

void Questionnaire::check_answer(const Answer& a, const UserState& user) const {
    const Query* q = store_.find(a.query_id);
    if (!q) throw Error(ErrorCode::unknown_query, "unknown query '" + a.query_id + "'");
    if (user.answered_set.count(a.query_id))
        throw Error(ErrorCode::duplicate_answer, "query '" + a.query_id + "' was already answered");
    const Query* expected = next_query(user);
    if (!expected || expected->id != a.query_id)
        throw Error(ErrorCode::out_of_sequence, "query '" + a.query_id + "' is not the current query");
    if (!store_.is_tutorial(a.query_id) && !user.profile)
        throw Error(ErrorCode::profile_required, "profile must be submitted after the tutorial");
    validate_answer(a, *q);
}

std::size_t Questionnaire::record_answer(Answer answer) {
    UserState& user = require(answer.user_id);
    answer.phase = store_.phase_of(answer.query_id);
    check_answer(answer, user);
    write(answer);
    const std::size_t position = user.answered.size();
    apply(answer);
    return position;
}

void Questionnaire::check_profile(const ProfileRecord& p, const UserState& user) const {
    if (user.profile) throw Error(ErrorCode::profile_already_set, "profile was already submitted");
    if (!tutorial_complete(user)) throw Error(ErrorCode::tutorial_incomplete, "finish the tutorial first");
    if (!(p.profile.years_experience >= 0.0))
        throw Error(ErrorCode::invalid_argument, "years of experience must be nonnegative");
}

void Questionnaire::set_profile(const std::string& user_id, const UserProfile& profile, std::int64_t now_ms) {
    UserState& user = require(user_id);
    ProfileRecord p{user_id, profile, now_ms};
    check_profile(p, user);
    write(p);
    apply(p);
}

void Questionnaire::add_feedback(FeedbackRecord feedback) {
    require(feedback.user_id);
    const bool blank = std::all_of(feedback.text.begin(), feedback.text.end(),
                                   [](unsigned char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; });
    if (blank) throw Error(ErrorCode::empty_feedback, "feedback text is empty");
    if (feedback.query_id && !store_.find(*feedback.query_id))
        throw Error(ErrorCode::unknown_query, "unknown query '" + *feedback.query_id + "'");
    write(feedback);
}

void Questionnaire::apply(const LogRecord& r) {
    if (const auto* c = std::get_if<ConsentRecord>(&r)) {
        apply_consent(*c);
    } else if (const auto* a = std::get_if<Answer>(&r)) {
        UserState& user = require(a->user_id);
        user.answered.push_back(a->query_id);
        user.answered_set.insert(a->query_id);
        if (a->phase == Phase::tutorial) ++user.tutorial_answered;
    } else if (const auto* p = std::get_if<ProfileRecord>(&r)) {
        require(p->user_id).profile = p->profile;
    }
}

void Questionnaire::replay(const std::vector<LogRecord>& records) {
    for (const LogRecord& r : records) {
        if (const auto* a = std::get_if<Answer>(&r)) {
            const UserState& user = require(a->user_id);
            Answer copy = *a;
            copy.phase = store_.phase_of(copy.query_id);
            check_answer(copy, user);
            apply(copy);
        } else if (const auto* p = std::get_if<ProfileRecord>(&r)) {
            check_profile(*p, require(p->user_id));
            apply(r);
        } else if (const auto* f = std::get_if<FeedbackRecord>(&r)) {
            require(f->user_id);
        } else {
            apply(r);
        }
    }
}

ProgressView Questionnaire::progress(const UserState& user) const {
    ProgressView v;
    v.answered_count = user.questionnaire_answered();
    v.total_count = store_.questionnaire_size();
    if (!users_.empty()) {
        double sum = 0.0;
        for (const auto& [id, u] : users_) sum += static_cast<double>(u.questionnaire_answered());
        v.cohort_mean_answered = sum / static_cast<double>(users_.size());
    }
    return v;
}

}  // namespace honeyquest
