#include "ldstat/errors.hpp"
#include "ldstat/sample.hpp"

#include <doctest.h>

#include <sstream>

using namespace ldstat;

TEST_CASE("frequency table and summaries") {
    const Sample s({3, 0, 7, 3, 0, 0});
    CHECK(s.size() == 6);
    CHECK(s.max() == 7);
    CHECK(s.zeros() == 3);
    CHECK(s.count_of(3) == 2);
    CHECK(s.count_of(5) == 0);
    const auto& f = s.frequencies();
    REQUIRE(f.size() == 3);
    CHECK(f[0] == std::pair<std::int64_t, std::int64_t>{0, 3});
    CHECK(f[2] == std::pair<std::int64_t, std::int64_t>{7, 1});
}

TEST_CASE("quantile is the ceil(qn)-th order statistic") {
    const Sample s({5, 1, 4, 2, 3, 9, 8, 7, 6, 10});
    CHECK(s.quantile(0.1) == 1);
    CHECK(s.quantile(0.11) == 2);
    CHECK(s.quantile(0.5) == 5);
    CHECK(s.quantile(1.0) == 10);
    CHECK_THROWS_AS(s.quantile(0.0), DomainError);
}

TEST_CASE("invalid samples") {
    CHECK_THROWS_AS(Sample({}), InputError);
    CHECK_THROWS_AS(Sample({1, -2}), InputError);
}

TEST_CASE("reader accepts comments, blanks and a header") {
    std::istringstream in("# culture counts\ncount\n\n12\n0\r\n  4  \n# end\n");
    const Sample s = read_sample(in);
    CHECK(s.size() == 3);
    CHECK(s.max() == 12);
}

TEST_CASE("reader errors name the line") {
    std::istringstream bad("1\n2\nx3\n");
    try {
        read_sample(bad);
        FAIL("expected InputError");
    } catch (const InputError& e) {
        CHECK(e.line() == 3);
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
    std::istringstream neg("1\n-4\n");
    CHECK_THROWS_AS(read_sample(neg), InputError);
    std::istringstream frac("1.5\n");
    CHECK_THROWS_AS(read_sample(frac), InputError);
    std::istringstream empty("# nothing\n\n");
    CHECK_THROWS_AS(read_sample(empty), InputError);
    CHECK_THROWS_AS(read_sample_file("/nonexistent/counts.txt"), InputError);
}

TEST_CASE("reader round-trips large counts") {
    std::istringstream in("1320000000000000\n0\n");
    const Sample s = read_sample(in);
    CHECK(s.max() == 1320000000000000LL);
}
