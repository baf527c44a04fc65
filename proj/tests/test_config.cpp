#include <catch2/catch_amalgamated.hpp>

#include "laneguard/config.hpp"

using namespace laneguard;
using Catch::Approx;

TEST_CASE("defaults match the reference operating point") {
    const RunConfig c;
    CHECK(c.learning_rate == Approx(1e-3));
    CHECK(c.weight_decay == Approx(1e-5));
    CHECK(c.batch_size == 128);
    CHECK(c.max_epochs == 150);
    CHECK(c.beta == Approx(0.25));
    CHECK(c.percentile == Approx(95.0));
    CHECK(c.contamination_label == Approx(0.3));
    CHECK(c.contamination_ml == Approx(0.1));
    CHECK(c.split_ratio == Approx(0.8));
    CHECK(c.forest_trees == 100);
    CHECK(c.forest_subsample == 256);
    CHECK(c.fusion_policy == "or");
    CHECK(c.cwt_scales == 32);
}

TEST_CASE("key=value parsing with comments and whitespace") {
    const auto kv = KeyValueFile::parse_text(
        "# a comment\n"
        "seed = 99\n"
        "\n"
        "percentile=90\n"
        "  fusion_policy =  majority \n");
    const auto c = RunConfig::from_kv(kv);
    CHECK(c.seed == 99);
    CHECK(c.percentile == Approx(90.0));
    CHECK(c.fusion_policy == "majority");
    CHECK(c.batch_size == 128);  // untouched default
}

TEST_CASE("bad config lines are rejected") {
    CHECK_THROWS_AS(KeyValueFile::parse_text("novalue\n"), Error);
    CHECK_THROWS_AS(KeyValueFile::parse_text("a=1\na=2\n"), Error);
    CHECK_THROWS_AS(RunConfig::from_kv(KeyValueFile::parse_text("batch_size=zz\n")), Error);
    CHECK_THROWS_AS(RunConfig::from_kv(KeyValueFile::parse_text("split_ratio=1.5\n")), Error);
    CHECK_THROWS_AS(RunConfig::from_kv(KeyValueFile::parse_text("percentile=0\n")), Error);
    CHECK_THROWS_AS(RunConfig::from_kv(KeyValueFile::parse_text("contamination_ml=0.9\n")), Error);
}

TEST_CASE("config hash is stable and sensitive") {
    RunConfig a, b;
    CHECK(a.hash() == b.hash());
    b.seed = 43;
    CHECK(a.hash() != b.hash());
    RunConfig c;
    c.percentile = 99.0;
    CHECK(a.hash() != c.hash());
}

TEST_CASE("canonical text round-trips through the parser") {
    RunConfig a;
    a.seed = 1234;
    a.percentile = 97.5;
    a.learning_rate = 0.000325;
    a.raw["scenario.span_hours"] = "12";
    const auto text = a.canonical();
    const auto b = RunConfig::from_kv(KeyValueFile::parse_text(text));
    CHECK(b.canonical() == text);
    CHECK(b.hash() == a.hash());
}

TEST_CASE("provenance line carries hash and seed") {
    RunConfig c;
    c.seed = 77;
    const auto p = c.provenance();
    CHECK(p.find("config_hash=") != std::string::npos);
    CHECK(p.find("seed=77") != std::string::npos);
}
