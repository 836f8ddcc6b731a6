#include <doctest.h>

#include "honeyquest/matching.hpp"
#include "honeyquest/model.hpp"
#include "honeyquest/query_file.hpp"
#include "support.hpp"

using namespace honeyquest;

namespace {

Query php_query() {
    Query q;
    q.id = "php";
    q.type = QueryType::httpheaders;
    q.label = QueryLabel::deceptive;
    q.lines = {"HTTP/1.1 200 OK", "Server: Apache/2.4.1", "X-Powered-By: PHP/5.1.6", "X-Kube-ApiServer: /hko/api"};
    q.risky_lines = {3};
    q.deceptive_lines = {4};
    q.technique_ref = "decoy-apiserver";
    q.risk_ref = "hh-outdated-php";
    q.risk_class = RiskClass::vulnerability;
    return q;
}

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::io;
}

}  // namespace

TEST_CASE("enumerations round-trip through their spelling") {
    for (QueryType t : kAllQueryTypes) CHECK(parse_query_type(to_string(t)) == t);
    for (auto l : {QueryLabel::neutral, QueryLabel::risky, QueryLabel::deceptive})
        CHECK(parse_query_label(to_string(l)) == l);
    for (auto c : {RiskClass::vulnerability, RiskClass::weakness, RiskClass::attack})
        CHECK(parse_risk_class(to_string(c)) == c);
    CHECK(parse_profession("security-operations") == Profession::security_operations);
    CHECK(parse_skill("expert") == Skill::expert);
    CHECK(code_of([] { parse_query_type("robots"); }) == ErrorCode::unknown_enum);
    CHECK(code_of([] { parse_profession("wizard"); }) == ErrorCode::unknown_enum);
}

TEST_CASE("validate_answer") {
    const Query q = php_query();
    Answer a = testing::answer("u", "php", {4, 3}, {2});
    CHECK_NOTHROW(validate_answer(a, q));
    CHECK_NOTHROW(validate_answer(testing::answer("u", "php", {}, {}), q));
    CHECK(code_of([&] { validate_answer(testing::answer("u", "php", {5}), q); }) == ErrorCode::out_of_range);
    CHECK(code_of([&] { validate_answer(testing::answer("u", "php", {0}), q); }) == ErrorCode::out_of_range);
    CHECK(code_of([&] { validate_answer(testing::answer("u", "php", {2, 2}), q); }) == ErrorCode::duplicate_mark);
    CHECK(code_of([&] { validate_answer(testing::answer("u", "php", {}, {1, 1}), q); }) ==
          ErrorCode::duplicate_mark);
    CHECK(code_of([&] { validate_answer(testing::answer("u", "php", {2}, {2}), q); }) ==
          ErrorCode::overlapping_marks);
    CHECK(code_of([&] { validate_answer(testing::answer("u", "other", {}), q); }) == ErrorCode::unknown_query);
    a.duration_ms = -1;
    CHECK(code_of([&] { validate_answer(a, q); }) == ErrorCode::out_of_range);
}

TEST_CASE("mark_set forgets order") {
    CHECK(mark_set(MarkVector{{4, 3}}) == LineSet{3, 4});
    CHECK(mark_set(MarkVector{}).empty());
    CHECK(mark_set(MarkVector{{2}}) == LineSet{2});
}

TEST_CASE("check_query label invariants") {
    CHECK_NOTHROW(check_query(php_query()));

    Query q = php_query();
    q.deceptive_lines.clear();
    CHECK(code_of([&] { check_query(q); }) == ErrorCode::invalid_query);

    q = php_query();
    q.technique_ref.reset();
    CHECK(code_of([&] { check_query(q); }) == ErrorCode::invalid_query);

    q = php_query();
    q.deceptive_lines = {3};
    CHECK(code_of([&] { check_query(q); }) == ErrorCode::invalid_query);

    q = php_query();
    q.risky_lines = {5};
    CHECK(code_of([&] { check_query(q); }) == ErrorCode::invalid_query);

    q = php_query();
    q.label = QueryLabel::risky;
    CHECK(code_of([&] { check_query(q); }) == ErrorCode::invalid_query);
    q.deceptive_lines.clear();
    CHECK_NOTHROW(check_query(q));
    q.risky_lines.clear();
    CHECK(code_of([&] { check_query(q); }) == ErrorCode::invalid_query);

    q = php_query();
    q.label = QueryLabel::neutral;
    q.deceptive_lines.clear();
    q.risky_lines.clear();
    q.risk_class.reset();
    CHECK_NOTHROW(check_query(q));
    q.risky_lines = {1};
    CHECK(code_of([&] { check_query(q); }) == ErrorCode::invalid_query);
}

TEST_CASE("query file round-trip") {
    const Query q = php_query();
    const std::string text = serialize_query(q);
    CHECK(text ==
          "id: php\ntype: httpheaders\nlabel: deceptive\ntechnique: decoy-apiserver\nrisk: hh-outdated-php\n"
          "risk-class: vulnerability\nrisky-lines: 3\ndeceptive-lines: 4\n---\nHTTP/1.1 200 OK\n"
          "Server: Apache/2.4.1\nX-Powered-By: PHP/5.1.6\nX-Kube-ApiServer: /hko/api\n");
    CHECK(parse_query(text) == q);
}

TEST_CASE("query file keeps whitespace and empty lines verbatim") {
    const std::string text = "id: x\ntype: htaccess\nlabel: neutral\n---\n  indented\n\ntrailing  \n";
    const Query q = parse_query(text);
    REQUIRE(q.lines.size() == 3);
    CHECK(q.lines[0] == "  indented");
    CHECK(q.lines[1].empty());
    CHECK(q.lines[2] == "trailing  ");
    CHECK(serialize_query(q) == text);
}

TEST_CASE("malformed query files report a line") {
    auto line_of = [](const std::string& text) -> std::optional<int> {
        try {
            parse_query(text);
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::malformed_query_file);
            return e.line();
        }
        FAIL("expected an Error");
        return std::nullopt;
    };
    CHECK(line_of("id: x\ntype: filesystem\nlabel: neutral\n") == 3);
    CHECK(line_of("id: x\ntype: robots\nlabel: neutral\n---\n") == 2);
    CHECK(line_of("id: x\ntype: htaccess\nlabel: risky\nrisky-lines: 1,x\n---\na\n") == 4);
    CHECK(line_of("id: x\nid: y\n---\n") == 2);
    CHECK(line_of("id: x\ntype: htaccess\nlabel: neutral\n---\nno newline") == 5);
    CHECK(line_of("id: x\ncolour: red\n---\n") == 2);
}

TEST_CASE("timestamps are UTC with milliseconds") {
    CHECK(format_timestamp(0) == "1970-01-01T00:00:00.000Z");
    CHECK(format_timestamp(1683001934123) == "2023-05-02T04:32:14.123Z");
    CHECK(parse_timestamp("2023-05-02T04:32:14.123Z") == 1683001934123);
    CHECK(parse_timestamp(format_timestamp(-1)) == -1);
    CHECK(code_of([] { parse_timestamp("2023-05-02 04:32:14"); }) == ErrorCode::invalid_argument);
    CHECK(code_of([] { parse_timestamp("2023-05-02T04:32:14+02:00"); }) == ErrorCode::invalid_argument);
}

TEST_CASE("QueryIndex rejects duplicate ids") {
    Query a = php_query(), b = php_query();
    CHECK(code_of([&] { QueryIndex({a, b}); }) == ErrorCode::duplicate_id);
    QueryIndex idx({a});
    CHECK(idx.find("php") != nullptr);
    CHECK(idx.find("nope") == nullptr);
    CHECK(code_of([&] { idx.at("nope"); }) == ErrorCode::unknown_query);
}

TEST_CASE("intersects") {
    CHECK(intersects({3, 4}, {4}));
    CHECK_FALSE(intersects({}, {1, 2}));
    CHECK_FALSE(intersects({2}, {4}));
}

TEST_CASE("match variants") {
    CHECK(variant({2, 3}, {2, 3}) == MatchVariant::A1);
    CHECK(variant({2}, {2, 3}) == MatchVariant::A2);
    CHECK(variant({3, 5}, {2, 3}) == MatchVariant::A3);
    CHECK(variant({5}, {2, 3}) == MatchVariant::A4);
    CHECK(variant({}, {2, 3}) == MatchVariant::A5);
    CHECK(code_of([] { variant({1}, {}); }) == ErrorCode::invalid_argument);
}

TEST_CASE("outcome precedence") {
    // exploit on L beats trap on L
    CHECK(classify(testing::answer("u", "q", {4}, {3}), {3, 4}) == Outcome::exploit);
    CHECK(classify(testing::answer("u", "q", {1}, {3}), {3, 4}) == Outcome::trap);
    CHECK(classify(testing::answer("u", "q", {1}, {2}), {3, 4}) == Outcome::other);
    CHECK(classify(testing::answer("u", "q", {}, {}), {3, 4}) == Outcome::none);
}
