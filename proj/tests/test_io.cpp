#include "gmix/io.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <random>

using namespace gmix;

TEST(Format, ShortestRoundTrip) {
    EXPECT_EQ(fmt_double(0.5), "0.5");
    EXPECT_EQ(fmt_double(0.1), "0.1");
    EXPECT_EQ(fmt_double(1.0 / 3.0), "0.3333333333333333");
    EXPECT_EQ(fmt_double(-2.0), "-2");
}

TEST(Property, FormatRoundTripsRandomDoubles) {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> e(-300.0, 300.0);
    for (int i = 0; i < 5000; ++i) {
        const double v = (rng() & 1 ? -1.0 : 1.0) * std::pow(10.0, e(rng));
        EXPECT_EQ(std::strtod(fmt_double(v).c_str(), nullptr), v);
    }
}

TEST(Csv, SchemaLineHeaderAndQuoting) {
    CsvWriter w({"a", "b"});
    w.row({"1", "x,y"});
    w.row({"say \"hi\"", ""});
    EXPECT_EQ(w.str(), "# schema_version=1\na,b\n1,\"x,y\"\n\"say \"\"hi\"\"\",\n");
    EXPECT_THROW(w.row({"only one"}), std::invalid_argument);
}

TEST(Hash, StableAndSensitive) {
    Json a = {{"command", "validate"}, {"seed", 1}};
    Json b = {{"command", "validate"}, {"seed", 1}};
    Json c = {{"command", "validate"}, {"seed", 2}};
    EXPECT_EQ(config_hash(a), config_hash(b));
    EXPECT_NE(config_hash(a), config_hash(c));
    EXPECT_EQ(config_hash(a).size(), 16u);
    EXPECT_EQ(hex64(fnv1a("")), "cbf29ce484222325");
    EXPECT_EQ(hex64(fnv1a("a")), "af63dc4c8601ec8c");
}

TEST(Json, VersionedPutsSchemaFirst) {
    const Json j = versioned({{"x", 1}, {"y", "z"}});
    EXPECT_EQ(j.begin().key(), "schema_version");
    EXPECT_EQ(j["schema_version"], schema_version);
    EXPECT_EQ(j["y"], "z");
}

TEST(Files, WriteThenRead) {
    const auto dir = std::filesystem::temp_directory_path() / "gmix_io_test" / "nested";
    const auto path = dir / "f.txt";
    write_text(path, "line\n");
    EXPECT_EQ(read_text(path), "line\n");
    std::filesystem::remove_all(dir.parent_path());
    EXPECT_THROW(read_text(path), std::runtime_error);
}
