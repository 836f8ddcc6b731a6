// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <httplib.h>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <regex>
#include <set>
#include <sstream>
#include <thread>

#include "honeyquest/analysis.hpp"
#include "honeyquest/answer_log.hpp"
#include "honeyquest/injection.hpp"
#include "honeyquest/query_file.hpp"
#include "honeyquest/questionnaire.hpp"
#include "honeyquest/report.hpp"
#include "honeyquest/rng.hpp"
#include "honeyquest/service.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace honeyquest;
using json = nlohmann::json;

namespace {

const char* const kExample = "hh-r-outdated-php--decoy-apiserver";
const char* const kExampleSource = "hh-r-outdated-php";

// Collects the first few problems of a criterion.
class Check {
public:
    void expect(bool ok, const std::string& what) {
        if (ok) return;
        ++failures_;
        if (failures_ <= 3) notes_ += (notes_.empty() ? "" : "; ") + what;
    }
    bool ok() const { return failures_ == 0; }
    std::string summary() const {
        return failures_ <= 3 ? notes_ : notes_ + "; ... " + std::to_string(failures_) + " problems in total";
    }
    std::string info;

private:
    int failures_ = 0;
    std::string notes_;
};

Answer answer(std::string user, std::string query, std::vector<int> ex, std::vector<int> tr = {}) {
    Answer a;
    a.user_id = std::move(user);
    a.query_id = std::move(query);
    a.exploit.entries = std::move(ex);
    a.trap.entries = std::move(tr);
    return a;
}

std::string run_command(const std::string& cmd, int& status) {
    std::string out;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) {
        status = -1;
        return out;
    }
    char buf[4096];
    for (std::size_t n; (n = std::fread(buf, 1, sizeof buf, p)) > 0;) out.append(buf, n);
    status = pclose(p);
    return out;
}

// ---- 1 -----------------------------------------------------------------------

void worked_example(Check& c) {
    const QueryStore& store = testing::fixture_store();
    const Query& q = store.at(kExample);
    c.expect(q.risky_lines == LineSet{3}, "fixture L_R is not {3}");
    c.expect(q.deceptive_lines == LineSet{4}, "fixture L_D is not {4}");
    const Answer a = answer("u", kExample, {4, 3}, {2});
    validate_answer(a, q);

    const bool fell_for_trap = intersects(a.exploit_set(), q.deceptive_lines);
    const bool risk_detected = intersects(a.exploit_set(), q.risky_lines);
    const bool trap_detected = intersects(a.trap_set(), q.deceptive_lines);
    c.expect(fell_for_trap, "fell-for-trap should be true");
    c.expect(risk_detected, "risk-detected should be true");
    c.expect(!trap_detected, "trap-detected should be false");

    // the same booleans through the counting tables
    const auto by_tech = count_answers({a}, store.index(), Grouping::technique);
    c.expect(by_tech.size() == 1 && by_tech[0].ex == 1 && by_tech[0].tr == 0, "technique counts disagree");
    const auto by_risk = count_answers({a}, store.index(), Grouping::risk);
    c.expect(by_risk.size() == 1 && by_risk[0].ex == 1, "risk counts disagree");

    const B1Classification b1 = classify_b1(a, q);
    c.expect(b1.eligible && b1.deceptive_first && b1.first_deceptive == 1 && b1.first_other == 2,
             "B1 should rank the deceptive line first");
    const auto rows = aspect_b1({a}, store.index(), Grouping::technique, 1);
    c.expect(!rows.empty() && rows[0].d_b == 1 && rows[0].d_b_first == 1, "aspect_b1 tally disagrees");
    c.info = "fell-for-trap=" + std::string(fell_for_trap ? "true" : "false") +
             " risk-detected=" + (risk_detected ? "true" : "false") +
             " trap-detected=" + (trap_detected ? "true" : "false") +
             " b1-first=" + (b1.deceptive_first ? "true" : "false");
}

// ---- 2 -----------------------------------------------------------------------

void variant_partition(Check& c) {
    Rng rng(20240501);
    std::map<MatchVariant, int> counts;
    for (int i = 0; i < 10000; ++i) {
        const int universe = 1 + static_cast<int>(rng.below(10));
        LineSet l, a;
        while (l.empty())
            for (int x = 1; x <= universe; ++x)
                if (rng.bernoulli(0.35)) l.insert(x);
        const double density = rng.unit();
        for (int x = 1; x <= universe; ++x)
            if (rng.bernoulli(density)) a.insert(x);

        bool subset = true, meets = false;
        for (int x : a) {
            subset = subset && l.count(x);
            meets = meets || l.count(x);
        }
        const bool defs[5] = {a == l, !a.empty() && subset && a != l, !subset && meets, !a.empty() && !meets,
                              a.empty()};
        int holding = 0, which = -1;
        for (int k = 0; k < 5; ++k)
            if (defs[k]) {
                ++holding;
                which = k;
            }
        c.expect(holding == 1, "a pair satisfies " + std::to_string(holding) + " definitions");
        const MatchVariant v = variant(a, l);
        c.expect(static_cast<int>(v) == which, "variant() disagrees with the definitions");
        ++counts[v];
    }
    int total = 0;
    std::string spread;
    for (const auto& [v, n] : counts) {
        total += n;
        spread += std::string(spread.empty() ? "" : " ") + std::string(to_string(v)) + "=" + std::to_string(n);
    }
    c.expect(total == 10000, "counts sum to " + std::to_string(total));
    c.expect(counts.size() == 5, "not every variant occurred");
    c.info = spread;
}

// ---- 3 -----------------------------------------------------------------------

void exact_tests(Check& c) {
    const auto tail = [](Alternative a) {
        return a == Alternative::greater ? oracle::Tail::greater
               : a == Alternative::less  ? oracle::Tail::less
                                         : oracle::Tail::two_sided;
    };
    const Alternative alts[] = {Alternative::greater, Alternative::less, Alternative::two_sided};
    double worst = 0.0;
    int cases = 0;
    for (double p0 : {0.5, 0.25, 0.7})
        for (int n = 1; n <= 12; ++n)
            for (int k = 0; k <= n; ++k)
                for (Alternative alt : alts) {
                    const double want = std::min(1.0, oracle::enumerate_p(k, n, p0, tail(alt)));
                    const double err = std::abs(*binom_test(k, n, p0, alt).p_value - want);
                    worst = std::max(worst, err);
                    ++cases;
                    c.expect(err <= 1e-12, "binom_test off at k=" + std::to_string(k) + " n=" + std::to_string(n));
                }
    c.expect(std::abs(*binom_test(3, 4, 0.5, Alternative::greater).p_value - 0.3125) <= 1e-12,
             "k=3 n=4 greater is not 0.3125");

    // paired tables, built from answers and pushed through aspect_b2
    const QueryStore& store = testing::fixture_store();
    int tables = 0;
    for (int beta = 0; beta <= 12; ++beta)
        for (int gamma = 0; beta + gamma <= 12; ++gamma) {
            std::vector<AnswerPair> pairs;
            auto add = [&](int n, bool before, bool after) {
                for (int i = 0; i < n; ++i) {
                    const std::string u = "u" + std::to_string(pairs.size());
                    pairs.push_back({answer(u, kExampleSource, before ? std::vector<int>{3} : std::vector<int>{}),
                                     answer(u, kExample, after ? std::vector<int>{3} : std::vector<int>{4})});
                }
            };
            add(2, false, false);
            add(beta, true, false);
            add(gamma, false, true);
            add(1, true, true);
            const B2Result r = aspect_b2(pairs, store);
            c.expect(r.table == ContingencyTable{2, beta, gamma, 1}, "table tabulated wrongly");
            if (beta + gamma == 0) {
                c.expect(!r.one_sided, "test should be undefined without discordant pairs");
                continue;
            }
            const double err = std::abs(*r.one_sided->p_value - oracle::discordant_p(beta, gamma));
            worst = std::max(worst, err);
            ++tables;
            c.expect(err <= 1e-12, "aspect_b2 p off at beta=" + std::to_string(beta) + " gamma=" + std::to_string(gamma));
        }

    int powers = 0;
    for (int n = 1; n <= 20; ++n)
        for (double p_true : {0.05, 0.3, 0.5, 0.7, 0.9})
            for (Alternative alt : alts) {
                const double want = oracle::region_power(n, 0.5, p_true, 0.05, tail(alt));
                const double err = std::abs(binom_power(n, 0.5, p_true, 0.05, alt) - want);
                worst = std::max(worst, err);
                ++powers;
                c.expect(err <= 1e-12, "binom_power off at n=" + std::to_string(n));
            }
    std::ostringstream info;
    info << cases << " binomial cases, " << tables << " paired tables, " << powers << " power cases, max error "
         << worst;
    c.info = info.str();
}

// ---- 4 -----------------------------------------------------------------------

void wilson(Check& c) {
    double worst = 0.0;
    int cases = 0;
    for (int n = 1; n <= 50; ++n)
        for (int k = 0; k <= n; ++k) {
            const Interval iv = wilson_interval(k, n, 0.95);
            const auto ref = oracle::wilson_roots(k, n, 0.95);
            const double phat = static_cast<double>(k) / n;
            const std::string at = " at k=" + std::to_string(k) + " n=" + std::to_string(n);
            c.expect(iv.lo >= 0.0 && iv.hi <= 1.0 && iv.lo <= iv.hi, "interval leaves [0,1]" + at);
            c.expect(iv.lo <= phat && phat <= iv.hi, "interval misses k/n" + at);
            if (k == 0) c.expect(iv.lo == 0.0, "lo(0,n) is not exactly 0" + at);
            if (k == n) c.expect(iv.hi == 1.0, "hi(n,n) is not exactly 1" + at);
            const double err = std::max(std::abs(iv.lo - ref.lo), std::abs(iv.hi - ref.hi));
            worst = std::max(worst, err);
            c.expect(err <= 1e-9, "root-finding oracle disagrees" + at);
            ++cases;
        }
    std::ostringstream info;
    info << cases << " intervals, max deviation " << worst;
    c.info = info.str();
}

// ---- 5 -----------------------------------------------------------------------

bool pattern_has_target(const Query& q, const TechniqueOp& op) {
    const std::regex re(*op.match);
    for (int l = 1; l <= q.line_count(); ++l) {
        if (q.risky_lines.count(l)) continue;
        std::smatch m;
        if (!std::regex_search(q.line(l), m, re)) continue;
        if (op.op == OpCode::replace) {
            std::string edited = q.line(l);
            edited.replace(static_cast<std::size_t>(m.position(0)), static_cast<std::size_t>(m.length(0)), op.value);
            if (edited != q.line(l)) return true;
        } else {
            return true;
        }
    }
    return false;
}

void injection_round_trip(Check& c) {
    const QueryStore& store = testing::fixture_store();
    const auto& catalog = testing::fixture_techniques();
    int applied = 0, skipped = 0;
    for (const Query& src : store.index().all()) {
        if (src.label == QueryLabel::deceptive) continue;
        const QueryIndex sources({src});
        const std::string source_text = serialize_query(src);
        for (const TechniqueSpec& t : catalog) {
            if (!compatible(t.kind, src.type)) continue;
            for (std::uint64_t seed = 1; seed <= 5; ++seed) {
                const PlacementPolicy policies[] = {
                    PlacementPolicy::append(), PlacementPolicy::random_interior(seed * 7919),
                    PlacementPolicy::fixed(1 + static_cast<int>(seed % static_cast<std::uint64_t>(src.line_count() + 1)))};
                for (const PlacementPolicy& p : policies) {
                    const std::string where = src.id + " x " + t.name + " (" + std::string(to_string(p.mode)) + ")";
                    std::pair<Query, InjectionRecord> out;
                    try {
                        out = make_deceptive(src, t, p);
                    } catch (const Error& e) {
                        // only a pattern with nothing to edit may refuse
                        bool targetless = false;
                        for (const auto& op : t.operations)
                            if (op.match && !pattern_has_target(src, op)) targetless = true;
                        c.expect(e.code() == ErrorCode::no_match && targetless, "unexpected refusal: " + where);
                        ++skipped;
                        continue;
                    }
                    ++applied;
                    const auto& [d, rec] = out;
                    c.expect(serialize_query(undo_injection(d, rec, sources)) == source_text, "undo differs: " + where);
                    c.expect(rec.inserted_lines == d.deceptive_lines, "record/deceptive lines differ: " + where);
                    c.expect(rec.shifted_risky_lines.size() == src.risky_lines.size(), "risky count changed: " + where);
                    c.expect(make_deceptive(src, t, p).first == d, "not deterministic: " + where);

                    // deceptive lines are new or edited content
                    std::map<int, std::string> edited;
                    for (const auto& m : rec.modified_lines) edited[m.line] = m.original;
                    const std::set<std::string> source_lines(src.lines.begin(), src.lines.end());
                    for (int l : d.deceptive_lines) {
                        if (edited.count(l))
                            c.expect(d.line(l) != edited[l], "edited line unchanged: " + where);
                        else
                            c.expect(!source_lines.count(d.line(l)), "inserted line already in source: " + where);
                    }
                    // risky lines point at the same bytes, in order
                    auto it = src.risky_lines.begin();
                    for (int l : d.risky_lines) {
                        c.expect(it != src.risky_lines.end() && d.line(l) == src.line(*it), "risky line moved: " + where);
                        if (it != src.risky_lines.end()) ++it;
                    }
                }
            }
        }
    }
    c.expect(applied > 0, "nothing was injected");
    c.info = std::to_string(applied) + " injections round-tripped, " + std::to_string(skipped) +
             " refused because the pattern has no target line";
}

// ---- 6 -----------------------------------------------------------------------

std::uint64_t simulate_users(const QueryStore& store, std::uint64_t global_seed, int users, Check& c) {
    std::set<std::string> techniques, risks;
    for (const Query& q : store.index().all()) {
        if (q.technique_ref) techniques.insert(*q.technique_ref);
        if (q.risk_ref) risks.insert(*q.risk_ref);
    }
    const std::set<std::string> warmup(store.warmup().begin(), store.warmup().end());
    const UserProfile profile{Profession::development, Skill::good, 3.0};

    Questionnaire qn(store, global_seed);
    std::uint64_t digest = 0xcbf29ce484222325ULL;
    for (int i = 0; i < users; ++i) {
        const std::string user = "sim-" + std::to_string(i);
        const UserState& u = qn.consent(user, 0);
        while (const Query* q = qn.next_query(u)) {
            if (qn.needs_profile(u)) qn.set_profile(user, profile, 0);
            Answer a;
            a.user_id = user;
            a.query_id = q->id;
            qn.record_answer(a);
        }
        const auto& seq = u.answered;
        c.expect(seq == u.sequence.ids, user + ": answers do not follow the plan");
        c.expect(std::set<std::string>(seq.begin(), seq.end()).size() == seq.size(), user + ": repeated query");
        c.expect(seq.size() == store.index().size(), user + ": not every query was served");
        c.expect(std::equal(store.tutorial().begin(), store.tutorial().end(), seq.begin()), user + ": tutorial prefix");
        c.expect(std::set<std::string>(seq.begin() + 8, seq.begin() + 16) == warmup, user + ": warm-up prefix");
        std::set<std::string> t_seen, r_seen;
        for (std::size_t k = u.sequence.front_begin; k < u.sequence.front_end; ++k) {
            const Query& q = store.at(u.sequence.ids[k]);
            if (q.technique_ref) t_seen.insert(*q.technique_ref);
            if (q.risk_ref) r_seen.insert(*q.risk_ref);
        }
        c.expect(t_seen == techniques, user + ": front block misses a technique");
        c.expect(r_seen == risks, user + ": front block misses a risk");
        for (const auto& id : seq) digest = fnv1a64(id, digest);
    }
    return digest;
}

void sampling(Check& c) {
    const QueryStore& store = testing::fixture_store();
    const std::uint64_t first = simulate_users(store, 2024, 1000, c);
    Check again;
    const std::uint64_t second = simulate_users(store, 2024, 1000, again);
    c.expect(first == second, "simulation is not deterministic");
    Check other;
    c.expect(simulate_users(store, 2025, 50, other) != simulate_users(store, 2024, 50, other),
             "sequences ignore the seed");
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(first));
    c.info = "1000 users, sequence digest " + std::string(buf);
}

// ---- 7 -----------------------------------------------------------------------

B2Result planted(std::uint64_t seed, double p_before, double p_after) {
    Rng rng(seed);
    std::vector<AnswerPair> pairs;
    for (int i = 0; i < 200; ++i) {
        const std::string u = "p" + std::to_string(i);
        const bool before = rng.bernoulli(p_before), after = rng.bernoulli(p_after);
        pairs.push_back({answer(u, kExampleSource, before ? std::vector<int>{3} : std::vector<int>{1}),
                         answer(u, kExample, after ? std::vector<int>{3} : std::vector<int>{})});
    }
    return aspect_b2(pairs, testing::fixture_store());
}

void planted_effect(Check& c) {
    int detected = 0, false_alarms = 0;
    double rr_min = 1e9, rr_max = -1e9;
    for (std::uint64_t rep = 0; rep < 100; ++rep) {
        const B2Result r = planted(1000 + rep, 0.6, 0.3);
        const double rr = r.relative_risk.value_or(-1.0);
        rr_min = std::min(rr_min, rr);
        rr_max = std::max(rr_max, rr);
        if (std::abs(rr - 0.5) <= 0.15 && r.one_sided && *r.one_sided->p_value < 0.05) ++detected;

        const B2Result null = planted(5000 + rep, 0.6, 0.6);
        if (null.one_sided && *null.one_sided->p_value < 0.05) ++false_alarms;
    }
    c.expect(detected >= 95, "effect found in only " + std::to_string(detected) + " of 100");
    c.expect(false_alarms <= 10, std::to_string(false_alarms) + " false alarms under the null");
    std::ostringstream info;
    info << "effect detected " << detected << "/100 (RR " << rr_min << ".." << rr_max << "), null rejected "
         << false_alarms << "/100";
    c.info = info.str();
}

// ---- 8 -----------------------------------------------------------------------

struct Client {
    httplib::Client http;
    std::string cookie;
    Rng rng;

    Client(int port, std::uint64_t seed) : http("127.0.0.1", port), rng(seed) {}

    json call(const std::string& method, const std::string& path, const json& body, int& status) {
        httplib::Headers headers;
        if (!cookie.empty()) headers.emplace("Cookie", cookie);
        const auto res = method == "GET" ? http.Get(path, headers)
                                         : http.Post(path, headers, body.dump(), "application/json");
        if (!res) {
            status = -1;
            return {};
        }
        status = res->status;
        const std::string set = res->get_header_value("Set-Cookie");
        if (!set.empty()) cookie = set.substr(0, set.find(';'));
        return json::parse(res->body);
    }

    // Exploit and trap marks chosen without looking at anything but the lines.
    json marks_for(const json& q) {
        const int n = static_cast<int>(q["lines"].size());
        std::vector<int> lines;
        for (int l = 1; l <= n; ++l) lines.push_back(l);
        rng.shuffle(lines);
        const std::size_t n_ex = std::min<std::size_t>(rng.below(4), lines.size());
        const std::size_t n_tr = std::min<std::size_t>(rng.below(2), lines.size() - n_ex);
        json ex = json::array(), tr = json::array();
        for (std::size_t i = 0; i < n_ex; ++i) ex.push_back(lines[i]);
        for (std::size_t i = n_ex; i < n_ex + n_tr; ++i) tr.push_back(lines[i]);
        return {{"query_id", q["id"]}, {"exploit", ex}, {"trap", tr}, {"duration_ms", 1000 + rng.below(30000)}};
    }
};

void scripted_session(Client& cl, const QueryStore& store, Check& c, const std::string& who) {
    int status = 0;
    cl.call("POST", "/api/consent", json::object(), status);
    c.expect(status == 200 && !cl.cookie.empty(), who + ": consent failed");

    auto answer_phase = [&](const char* phase, std::size_t count) {
        for (std::size_t i = 0; i < count; ++i) {
            const json q = cl.call("GET", "/api/next", {}, status);
            if (status != 200 || q.contains("exhausted") || q["phase"] != phase) {
                c.expect(false, who + ": expected a " + phase + " query");
                return false;
            }
            cl.call("POST", "/api/answer", cl.marks_for(q), status);
            c.expect(status == 200, who + ": answer rejected");
        }
        return true;
    };
    if (!answer_phase("tutorial", store.tutorial().size())) return;
    cl.call("GET", "/api/next", {}, status);
    c.expect(status == 409, who + ": profile gate missing");
    cl.call("POST", "/api/profile", {{"profession", "security-operations"}, {"skill", "good"}, {"years", 4}}, status);
    c.expect(status == 200, who + ": profile rejected");
    if (!answer_phase("warmup", store.warmup().size())) return;
    std::size_t main_answered = 0;
    for (;;) {
        const json q = cl.call("GET", "/api/next", {}, status);
        if (status != 200) {
            c.expect(false, who + ": next failed in the main phase");
            return;
        }
        if (q.contains("exhausted")) break;
        c.expect(q["phase"] == "main", who + ": unexpected phase");
        const json ack = cl.call("POST", "/api/answer", cl.marks_for(q), status);
        c.expect(status == 200 && ack["ok"] == true, who + ": answer rejected");
        ++main_answered;
    }
    c.expect(main_answered == store.main().size(), who + ": main store not completed");
    const json progress = cl.call("GET", "/api/progress", {}, status);
    c.expect(progress["answered_count"] == progress["total_count"], who + ": progress incomplete");
}

void end_to_end(Check& c, const std::filesystem::path& log_file) {
    const QueryStore store = load_store(testing::store_dir(), testing::technique_dir());
    constexpr int kUsers = 24;
    std::map<std::string, UserState> live_users;
    {
        AnswerLog log(log_file);
        Questionnaire qn(store, 31337, &log);
        Service service(store, qn, ServiceOptions{31337, {}, {}});
        httplib::Server server;
        service.mount(server);
        const int port = server.bind_to_any_port("127.0.0.1");
        c.expect(port > 0, "cannot bind");
        std::thread worker([&] { server.listen_after_bind(); });
        server.wait_until_ready();
        for (int i = 0; i < kUsers; ++i) {
            Client cl(port, 900 + i);
            scripted_session(cl, store, c, "client " + std::to_string(i));
        }
        server.stop();
        worker.join();
        live_users = qn.users();
    }

    const auto records = read_log(log_file);
    Questionnaire replayed(store, 31337);
    replayed.replay(records);
    c.expect(replayed.users().size() == live_users.size(), "replay lost users");
    for (const auto& [id, state] : live_users) {
        const UserState* r = replayed.find(id);
        c.expect(r && *r == state, "replayed state differs for a user");
    }

    int runs = 0;
    const std::string base = std::string(HONEYQUEST_CLI) + " analyze ";
    for (const char* name : kReportNames)
        for (const char* group : {"technique", "risk", "query"})
            for (const char* format : {"tsv", "json"}) {
                const std::string cmd = base + name + " --store " + testing::store_dir().string() + " --answers " +
                                        log_file.string() + " --group-by " + group + " --format " + format;
                int s1 = 0, s2 = 0;
                const std::string a = run_command(cmd, s1);
                const std::string b = run_command(cmd, s2);
                runs += 2;
                const std::string what = std::string(name) + " " + group + " " + format;
                c.expect(s1 == 0 && s2 == 0, what + ": cli failed");
                c.expect(a == b, what + ": reports differ between runs");
                c.expect(std::count(a.begin(), a.end(), '\n') > 2, what + ": report is empty");
            }
    c.info = std::to_string(kUsers) + " clients, " + std::to_string(records.size()) + " log records, " +
             std::to_string(runs) + " analyze runs byte-identical in pairs";
}

// ---- 9 -----------------------------------------------------------------------

void reward_invariance(Check& c, const std::filesystem::path& log_file) {
    const QueryStore& store = testing::fixture_store();
    const auto records = read_log(log_file);
    c.expect(!records.empty(), "no replay log from the end-to-end run");
    const auto answers = filter_answers(answers_in(records), store, FilterOptions{});
    const RewardWeights base = RewardWeights::defaults();
    auto order = [&](const RewardWeights& w) {
        std::vector<std::string> names;
        for (const auto& r : reward_rank(answers, store.index(), w)) names.push_back(r.technique);
        return names;
    };
    const auto ref = order(base);
    c.expect(ref.size() >= 2, "fewer than two techniques ranked");
    c.expect(order(base.scaled(2.0)) == ref, "ordering changed under x2.0");
    c.expect(order(base.scaled(0.5)) == ref, "ordering changed under x0.5");
    c.info = std::to_string(ref.size()) + " techniques, top " + (ref.empty() ? "-" : ref.front());
}

}  // namespace

int main() {
    testing::TempDir scratch;
    const auto log_file = scratch / "replay.ndjson";

    struct Criterion {
        int id;
        const char* name;
        double limit_s;
        std::function<void(Check&)> body;
    };
    const Criterion criteria[] = {
        {1, "worked example", 1, worked_example},
        {2, "variant partition", 5, variant_partition},
        {3, "exact-test oracles", 30, exact_tests},
        {4, "wilson properties", 10, wilson},
        {5, "injection round-trip", 30, injection_round_trip},
        {6, "sampling contract", 60, sampling},
        {7, "planted-effect B2", 60, planted_effect},
        {8, "end-to-end replay", 120, [&](Check& c) { end_to_end(c, log_file); }},
        {9, "reward invariance", 5, [&](Check& c) { reward_invariance(c, log_file); }},
    };

    int failed = 0;
    for (const Criterion& cr : criteria) {
        Check c;
        const auto start = std::chrono::steady_clock::now();
        try {
            cr.body(c);
        } catch (const std::exception& e) {
            c.expect(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        c.expect(secs < cr.limit_s, "took longer than " + std::to_string(static_cast<int>(cr.limit_s)) + " s");
        char timing[32];
        std::snprintf(timing, sizeof timing, "%.3f s", secs);
        if (c.ok()) {
            std::cout << "PASS " << cr.id << " " << cr.name << " (" << timing << ") " << c.info << "\n";
        } else {
            ++failed;
            std::cout << "FAIL " << cr.id << " " << cr.name << " (" << timing << ") " << c.summary() << "\n";
        }
        std::cout.flush();
    }
    return failed == 0 ? 0 : 1;
}
