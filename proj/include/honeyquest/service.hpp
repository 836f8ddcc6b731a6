#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>

#include "honeyquest/questionnaire.hpp"

namespace httplib {
class Server;
}

namespace honeyquest {

inline constexpr const char* kSessionCookie = "honeyquest-session";

struct HttpRequest {
    std::string method;
    std::string path;
    std::string body;
    std::string cookie;  // raw Cookie header
};

struct HttpResponse {
    int status = 200;
    std::string body;
    std::optional<std::string> set_cookie;
};

struct ServiceOptions {
    std::uint64_t seed = 0;
    /// 32 lowercase hex characters. Defaults to std::random_device.
    std::function<std::string()> new_token;
    /// Milliseconds since the epoch. Defaults to the system clock.
    std::function<std::int64_t()> now_ms;
};

std::string random_token();

/// JSON API over a Questionnaire. Clients only ever see opaque query ids;
/// labels, annotations, techniques and risks never leave the process.
class Service {
public:
    Service(const QueryStore& store, Questionnaire& questionnaire, ServiceOptions options = {});

    /// Thread-safe; requests are serialized.
    HttpResponse handle(const HttpRequest& request);

    std::string public_id(const std::string& query_id) const;
    std::optional<std::string> internal_id(const std::string& public_id) const;

    /// Routes /api/* to handle() and, when `ui_dir` is set, serves it at /.
    void mount(httplib::Server& server, const std::optional<std::filesystem::path>& ui_dir = std::nullopt);

private:
    HttpResponse dispatch(const HttpRequest& request);
    std::optional<std::string> session_of(const HttpRequest& request) const;

    HttpResponse consent(const HttpRequest& request);
    HttpResponse next(const UserState& user);
    HttpResponse answer(const UserState& user, const std::string& body);
    HttpResponse profile(const UserState& user, const std::string& body);
    HttpResponse feedback(const UserState& user, const std::string& body);
    HttpResponse progress(const UserState& user) const;

    const QueryStore& store_;
    Questionnaire& questionnaire_;
    ServiceOptions options_;
    std::map<std::string, std::string> to_public_;
    std::map<std::string, std::string> to_internal_;
    std::mutex mutex_;
};

/// Status code for an error raised while handling a request.
int http_status(ErrorCode code);

}  // namespace honeyquest
