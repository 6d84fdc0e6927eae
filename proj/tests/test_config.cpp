#include <doctest.h>

#include <random>

#include "volreg/config.hpp"
#include "volreg/errors.hpp"

using namespace volreg;

TEST_CASE("config round-trips through render and parse") {
    ExperimentConfig cfg;
    cfg.set("scenario", "solve");
    cfg.set("modes", "64");
    cfg.set("dt", "0.001");
    cfg.set("kernel", "exp:1,1");
    const ExperimentConfig back = ExperimentConfig::parse(cfg.render());
    CHECK(back == cfg);
    CHECK(back.scenario() == "solve");

    // random configs round-trip as well
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> len(1, 12);
    std::uniform_int_distribution<int> ch(0, 25);
    for (int trial = 0; trial < 50; ++trial) {
        ExperimentConfig random_cfg;
        for (int i = 0; i < 6; ++i) {
            std::string key, value;
            for (int j = 0; j < len(rng); ++j) key.push_back(static_cast<char>('a' + ch(rng)));
            for (int j = 0; j < len(rng); ++j) value.push_back(static_cast<char>('a' + ch(rng)));
            random_cfg.set(key, value);
        }
        CHECK(ExperimentConfig::parse(random_cfg.render()) == random_cfg);
    }
}

TEST_CASE("config rejects malformed lines and unknown keys") {
    CHECK_THROWS_AS(ExperimentConfig::parse("novaluehere\n"), ValidationError);
    CHECK_THROWS_AS(ExperimentConfig::parse("=x\n"), ValidationError);
    ExperimentConfig cfg = ExperimentConfig::parse("modes=4\nweird=1\n");
    CHECK_THROWS_AS(cfg.require_keys({"modes", "dt"}), ValidationError);
    CHECK_NOTHROW(cfg.require_keys({"modes", "weird"}));
    // comments and blank lines are ignored
    CHECK(ExperimentConfig::parse("# comment\n\nmodes=4\n").values.size() == 1);
}

TEST_CASE("csv writer emits one header and locale-free numbers") {
    CsvWriter csv({"a", "b"});
    csv.append_row({CsvWriter::format(0.5), CsvWriter::format(3)});
    csv.append_row({CsvWriter::format(1e-7), CsvWriter::format(-2)});
    const std::string text = csv.str();
    CHECK(text == "a,b\n0.5,3\n9.9999999999999995e-08,-2\n");
    CHECK_THROWS_AS(csv.append_row({"only-one"}), ValidationError);
}
