#include <catch2/catch_amalgamated.hpp>

#include "exagg/csv.hpp"
#include "exagg/rng.hpp"
#include "exagg/time_util.hpp"

using namespace exagg;

TEST_CASE("rfc3339 parses dates and timestamps") {
    CHECK(parse_rfc3339("1970-01-01T00:00:00Z") == 0);
    CHECK(parse_rfc3339("1970-01-02T00:00:00Z") == 86400);
    CHECK(parse_rfc3339("2011-07-13") == parse_rfc3339("2011-07-13T00:00:00Z"));
    CHECK(parse_rfc3339("2011-07-13T08:30:15Z") ==
          *parse_rfc3339("2011-07-13") + 8 * 3600 + 30 * 60 + 15);
    // offsets normalize to UTC
    CHECK(parse_rfc3339("2011-07-13T10:00:00+02:00") == parse_rfc3339("2011-07-13T08:00:00Z"));
    CHECK(parse_rfc3339("2011-07-13T06:30:00-02:00") == parse_rfc3339("2011-07-13T08:30:00Z"));
    // fractional seconds truncate
    CHECK(parse_rfc3339("2011-07-13T08:30:15.999Z") == parse_rfc3339("2011-07-13T08:30:15Z"));
}

TEST_CASE("rfc3339 rejects malformed input") {
    CHECK_FALSE(parse_rfc3339("").has_value());
    CHECK_FALSE(parse_rfc3339("2011-13-01").has_value());
    CHECK_FALSE(parse_rfc3339("2011-02-30").has_value());
    CHECK_FALSE(parse_rfc3339("2011-07-13T25:00:00Z").has_value());
    CHECK_FALSE(parse_rfc3339("2011-07-13T08:30:00").has_value());  // offset required
    CHECK_FALSE(parse_rfc3339("not a date").has_value());
    CHECK_FALSE(parse_rfc3339("2011-07-13T08:30:00Zjunk").has_value());
}

TEST_CASE("rfc3339 leap years") {
    CHECK(parse_rfc3339("2012-02-29").has_value());
    CHECK_FALSE(parse_rfc3339("2011-02-29").has_value());
    CHECK(parse_rfc3339("2000-02-29").has_value());
    CHECK_FALSE(parse_rfc3339("1900-02-29").has_value());
}

TEST_CASE("rfc3339 round trip") {
    for (const char* s : {"1970-01-01T00:00:00Z", "2011-07-13T08:30:15Z", "2024-02-29T23:59:59Z",
                          "1999-12-31T12:00:01Z"}) {
        const auto t = parse_rfc3339(s);
        REQUIRE(t.has_value());
        CHECK(format_rfc3339(*t) == s);
    }
}

TEST_CASE("csv quoted fields") {
    const auto records = csv::parse("a,b,c\n\"x,y\",\"he said \"\"hi\"\"\",\"line1\nline2\"\n");
    REQUIRE(records.size() == 2);
    CHECK(records[0].fields == std::vector<std::string>{"a", "b", "c"});
    CHECK(records[1].fields == std::vector<std::string>{"x,y", "he said \"hi\"", "line1\nline2"});
    CHECK(records[1].line == 2);
}

TEST_CASE("csv line numbers skip embedded newlines correctly") {
    const auto records = csv::parse("h\n\"a\nb\"\nlast\n");
    REQUIRE(records.size() == 3);
    CHECK(records[2].line == 4);
    CHECK(records[2].fields[0] == "last");
}

TEST_CASE("csv escape round trip") {
    const std::vector<std::string> row = {"plain", "with,comma", "with\"quote", "with\nnewline"};
    const auto parsed = csv::parse(csv::join_row(row));
    REQUIRE(parsed.size() == 1);
    CHECK(parsed[0].fields == row);
}

TEST_CASE("rng bounded draws stay in range and reproduce") {
    Rng a(42), b(42);
    for (int i = 0; i < 1000; ++i) {
        const auto bound = 1 + a.next_u64() % 100;
        Rng c(b.next_u64());
        const auto v = c.next_below(bound);
        CHECK(v < bound);
    }
    Rng x(7), y(7);
    std::vector<int> vx(50), vy(50);
    for (int i = 0; i < 50; ++i) vx[i] = vy[i] = i;
    x.shuffle(vx);
    y.shuffle(vy);
    CHECK(vx == vy);
}

TEST_CASE("derive_seed gives distinct streams") {
    CHECK(derive_seed(1, 0) != derive_seed(1, 1));
    CHECK(derive_seed(1, 0) != derive_seed(2, 0));
}
