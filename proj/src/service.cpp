#include "honeyquest/service.hpp"

#include <chrono>
#include <cstdio>
#include <random>

#include <httplib.h>
#include <json.hpp>

#include "honeyquest/rng.hpp"

namespace honeyquest {

using json = nlohmann::ordered_json;

std::string random_token() {
    std::random_device rd;
    std::string out;
    char buf[9];
    for (int i = 0; i < 4; ++i) {
        std::snprintf(buf, sizeof buf, "%08x", static_cast<unsigned>(rd()));
        out += buf;
    }
    return out;
}

int http_status(ErrorCode code) {
    switch (code) {
        case ErrorCode::no_session:
        case ErrorCode::not_consented:
            return 401;
        case ErrorCode::profile_required:
        case ErrorCode::out_of_sequence:
        case ErrorCode::duplicate_answer:
        case ErrorCode::profile_already_set:
        case ErrorCode::tutorial_incomplete:
            return 409;
        default:
            return 422;
    }
}

namespace {

bool is_token(std::string_view s) {
    if (s.size() != 32) return false;
    for (char c : s)
        if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return false;
    return true;
}

HttpResponse json_response(int status, const json& body) { return {status, body.dump(), std::nullopt}; }

HttpResponse error_response(int status, std::string_view code, const std::string& message) {
    json j;
    j["error"] = code;
    j["message"] = message;
    return json_response(status, j);
}

HttpResponse error_response(const Error& e) {
    return error_response(http_status(e.code()), to_string(e.code()), e.message());
}

json parse_body(const std::string& body) { return json::parse(body.empty() ? "{}" : body); }

MarkVector marks_field(const json& j, const char* key) {
    MarkVector v;
    if (!j.contains(key) || j[key].is_null()) return v;
    if (!j[key].is_array()) throw Error(ErrorCode::invalid_argument, std::string(key) + " must be an array");
    for (const auto& e : j[key]) {
        if (!e.is_number_integer()) throw Error(ErrorCode::invalid_argument, std::string(key) + " must hold integers");
        v.entries.push_back(e.get<int>());
    }
    return v;
}

std::string string_field(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_string())
        throw Error(ErrorCode::invalid_argument, std::string(key) + " must be a string");
    return j[key].get<std::string>();
}

json progress_json(const ProgressView& v) {
    json j;
    j["answered_count"] = v.answered_count;
    j["total_count"] = v.total_count;
    j["cohort_mean_answered"] = v.cohort_mean_answered;
    return j;
}

}  // namespace

Service::Service(const QueryStore& store, Questionnaire& questionnaire, ServiceOptions options)
    : store_(store), questionnaire_(questionnaire), options_(std::move(options)) {
    if (!options_.new_token) options_.new_token = random_token;
    if (!options_.now_ms)
        options_.now_ms = [] {
            return std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::system_clock::now().time_since_epoch())
                .count();
        };
    const std::string salt = std::to_string(options_.seed) + ":";
    char buf[17];
    for (const Query& q : store_.index().all()) {
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(salt + q.id)));
        if (!to_internal_.emplace(buf, q.id).second)
            throw Error(ErrorCode::duplicate_id, "public id collision for '" + q.id + "'; pick another seed");
        to_public_.emplace(q.id, buf);
    }
}

std::string Service::public_id(const std::string& query_id) const { return to_public_.at(query_id); }

std::optional<std::string> Service::internal_id(const std::string& public_id) const {
    auto it = to_internal_.find(public_id);
    if (it == to_internal_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::string> Service::session_of(const HttpRequest& request) const {
    const std::string needle = std::string(kSessionCookie) + "=";
    std::string_view c = request.cookie;
    while (!c.empty()) {
        const std::size_t semi = c.find(';');
        std::string_view part = c.substr(0, semi);
        while (!part.empty() && part.front() == ' ') part.remove_prefix(1);
        if (part.substr(0, needle.size()) == needle) {
            const std::string token(part.substr(needle.size()));
            if (is_token(token) && questionnaire_.find(token)) return token;
            return std::nullopt;
        }
        if (semi == std::string_view::npos) break;
        c.remove_prefix(semi + 1);
    }
    return std::nullopt;
}

HttpResponse Service::handle(const HttpRequest& request) {
    std::lock_guard lock(mutex_);
    try {
        return dispatch(request);
    } catch (const Error& e) {
        return error_response(e);
    } catch (const json::parse_error& e) {
        return error_response(400, "malformed-json", e.what());
    } catch (const json::exception& e) {
        return error_response(422, "invalid-argument", e.what());
    }
}

HttpResponse Service::dispatch(const HttpRequest& request) {
    struct Route {
        const char* method;
        const char* path;
    };
    static constexpr Route routes[] = {{"POST", "/api/consent"},  {"GET", "/api/next"},
                                       {"POST", "/api/answer"},   {"POST", "/api/profile"},
                                       {"POST", "/api/feedback"}, {"GET", "/api/progress"}};
    bool path_known = false, allowed = false;
    for (const Route& r : routes)
        if (request.path == r.path) {
            path_known = true;
            allowed = allowed || request.method == r.method;
        }
    if (!path_known) return error_response(404, "not-found", "no such endpoint");
    if (!allowed) return error_response(405, "method-not-allowed", "wrong method for " + request.path);

    if (request.path == "/api/consent") return consent(request);

    const std::optional<std::string> token = session_of(request);
    if (!token) return error_response(401, "no-session", "consent first");
    const UserState& user = *questionnaire_.find(*token);
    if (request.path == "/api/next") return next(user);
    if (request.path == "/api/answer") return answer(user, request.body);
    if (request.path == "/api/profile") return profile(user, request.body);
    if (request.path == "/api/feedback") return feedback(user, request.body);
    return progress(user);
}

HttpResponse Service::consent(const HttpRequest& request) {
    json j;
    j["consented"] = true;
    if (session_of(request)) {
        j["new_session"] = false;
        return json_response(200, j);
    }
    std::string token = options_.new_token();
    while (questionnaire_.find(token)) token = options_.new_token();
    if (!is_token(token)) throw Error(ErrorCode::invalid_argument, "token source returned a malformed token");
    questionnaire_.consent(token, options_.now_ms());
    j["new_session"] = true;
    HttpResponse r = json_response(200, j);
    r.set_cookie = std::string(kSessionCookie) + "=" + token + "; Path=/; HttpOnly; SameSite=Strict";
    return r;
}

HttpResponse Service::next(const UserState& user) {
    if (questionnaire_.needs_profile(user))
        return error_response(409, "profile-required", "submit your profile before continuing");
    const Query* q = questionnaire_.next_query(user);
    json j;
    if (!q) {
        j["exhausted"] = true;
        return json_response(200, j);
    }
    j["id"] = public_id(q->id);
    j["type"] = to_string(q->type);
    j["lines"] = q->lines;
    j["phase"] = to_string(store_.phase_of(q->id));
    j["tooltip_text"] = store_.tooltip(q->type);
    return json_response(200, j);
}

HttpResponse Service::answer(const UserState& user, const std::string& body) {
    const json j = parse_body(body);
    const std::string pid = string_field(j, "query_id");
    const std::optional<std::string> id = internal_id(pid);
    if (!id) throw Error(ErrorCode::unknown_query, "unknown query '" + pid + "'");
    Answer a;
    a.user_id = user.user_id;
    a.query_id = *id;
    a.exploit = marks_field(j, "exploit");
    a.trap = marks_field(j, "trap");
    if (j.contains("duration_ms")) {
        if (!j["duration_ms"].is_number_integer())
            throw Error(ErrorCode::invalid_argument, "duration_ms must be an integer");
        a.duration_ms = j["duration_ms"].get<std::int64_t>();
    }
    if (j.contains("comment") && !j["comment"].is_null()) a.comment = string_field(j, "comment");
    a.answered_at_ms = options_.now_ms();
    const std::size_t position = questionnaire_.record_answer(std::move(a));
    json out;
    out["ok"] = true;
    out["position"] = position;
    out["progress"] = progress_json(questionnaire_.progress(user));
    return json_response(200, out);
}

HttpResponse Service::profile(const UserState& user, const std::string& body) {
    const json j = parse_body(body);
    UserProfile p;
    p.profession = parse_profession(string_field(j, "profession"));
    p.skill = parse_skill(string_field(j, "skill"));
    if (!j.contains("years") || !j["years"].is_number())
        throw Error(ErrorCode::invalid_argument, "years must be a number");
    p.years_experience = j["years"].get<double>();
    questionnaire_.set_profile(user.user_id, p, options_.now_ms());
    json out;
    out["ok"] = true;
    return json_response(200, out);
}

HttpResponse Service::feedback(const UserState& user, const std::string& body) {
    const json j = parse_body(body);
    FeedbackRecord f;
    f.user_id = user.user_id;
    f.text = string_field(j, "text");
    if (j.contains("query_id") && !j["query_id"].is_null()) {
        const std::string pid = string_field(j, "query_id");
        f.query_id = internal_id(pid);
        if (!f.query_id) throw Error(ErrorCode::unknown_query, "unknown query '" + pid + "'");
    }
    f.at_ms = options_.now_ms();
    questionnaire_.add_feedback(std::move(f));
    json out;
    out["ok"] = true;
    return json_response(200, out);
}

HttpResponse Service::progress(const UserState& user) const {
    return json_response(200, progress_json(questionnaire_.progress(user)));
}

void Service::mount(httplib::Server& server, const std::optional<std::filesystem::path>& ui_dir) {
    auto bridge = [this](const httplib::Request& req, httplib::Response& res) {
        HttpRequest r{req.method, req.path, req.body, req.get_header_value("Cookie")};
        HttpResponse out = handle(r);
        res.status = out.status;
        if (out.set_cookie) res.set_header("Set-Cookie", *out.set_cookie);
        res.set_header("Cache-Control", "no-store");
        res.set_content(out.body, "application/json");
    };
    const char* pattern = R"(/api/.*)";
    server.Get(pattern, bridge);
    server.Post(pattern, bridge);
    server.Put(pattern, bridge);
    server.Delete(pattern, bridge);
    if (ui_dir) server.set_mount_point("/", ui_dir->string());
}

}  // namespace honeyquest
