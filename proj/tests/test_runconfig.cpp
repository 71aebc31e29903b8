#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ethopipe/errors.hpp"
#include "ethopipe/runconfig.hpp"

using namespace ethopipe;

TEST_CASE("runconfig: parses key = value with comments") {
    const RunConfig cfg = RunConfig::parse(
        "# pipeline defaults\n"
        "window = 45\n"
        "stride = 5   # inference stride\n"
        "theta_on = 0.5\n"
        "background = true\n"
        "seed = 12345\n"
        "\n");
    CHECK(cfg.get_int("window", 0) == 45);
    CHECK(cfg.get_int("stride", 0) == 5);
    CHECK(cfg.get_double("theta_on", 0) == 0.5);
    CHECK(cfg.get_bool("background", false));
    CHECK(cfg.get_u64("seed", 0) == 12345);
    CHECK(cfg.get_int("workers", 3) == 3);  // fallback
    CHECK(!cfg.has("workers"));
}

TEST_CASE("runconfig: unknown key rejected with its line number") {
    CHECK_THROWS_WITH_AS(RunConfig::parse("window = 45\nfrobnicate = 1\n"),
                         doctest::Contains("line 2"), ValidationError);
    CHECK_THROWS_WITH_AS(RunConfig::parse("window = 45\nfrobnicate = 1\n"),
                         doctest::Contains("unknown key 'frobnicate'"), ValidationError);
}

TEST_CASE("runconfig: type and syntax validation") {
    CHECK_THROWS_AS(RunConfig::parse("window = abc\n"), ValidationError);
    CHECK_THROWS_AS(RunConfig::parse("background = yes\n"), ValidationError);
    CHECK_THROWS_AS(RunConfig::parse("just some text\n"), ValidationError);
    CHECK_THROWS_WITH_AS(RunConfig::parse("window = 45\nwindow = 30\n"),
                         doctest::Contains("duplicate"), ValidationError);
}
