#pragma once

#include <filesystem>
#include <initializer_list>
#include <random>
#include <string>

#include "honeyquest/store.hpp"

namespace testing {

inline std::filesystem::path fixtures() { return HONEYQUEST_FIXTURES; }
inline std::filesystem::path store_dir() { return fixtures() / "store"; }
inline std::filesystem::path technique_dir() { return fixtures() / "techniques"; }

inline const honeyquest::QueryStore& fixture_store() {
    static const honeyquest::QueryStore store = honeyquest::load_store(store_dir(), technique_dir());
    return store;
}

inline const std::vector<honeyquest::TechniqueSpec>& fixture_techniques() {
    static const auto catalog = honeyquest::load_catalog(technique_dir());
    return catalog;
}

inline honeyquest::Answer answer(std::string user, std::string query, std::initializer_list<int> exploit,
                                 std::initializer_list<int> trap = {}) {
    honeyquest::Answer a;
    a.user_id = std::move(user);
    a.query_id = std::move(query);
    a.exploit.entries = exploit;
    a.trap.entries = trap;
    return a;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    TempDir() {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() / ("hq-test-" + std::to_string(rd()) + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

}  // namespace testing
