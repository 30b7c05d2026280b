#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>

#include "support.hpp"

using namespace hypclt;
using io::json;

TEST(Io, DigraphRoundTripIsOneBased) {
    const auto g = fixture("PSL2Z").combing.digraph;
    const json j = io::to_json(g);
    EXPECT_EQ(j["initial"], 1);
    EXPECT_EQ(j["edges"][0], json::parse(R"([1, 2, "s"])"));
    EXPECT_TRUE(io::digraph_from_json(j) == g);
}

TEST(Io, DigraphDocumentErrors) {
    auto j = json::parse(R"({"alphabet": ["x"], "vertices": 2, "initial": 2, "edges": [[1, 2, "x"]]})");
    EXPECT_THROW(io::digraph_from_json(j), InvalidDigraph);
    j["initial"] = 1;
    j["edges"] = json::parse(R"([[0, 1, "x"]])");
    EXPECT_THROW(io::digraph_from_json(j), InvalidDigraph);
    j.erase("alphabet");
    EXPECT_THROW(io::digraph_from_json(j), io::FormatError);
    j = json::parse(R"({"alphabet": ["x"], "vertices": 2, "edges": [[1, 2, "x"], [1, 2, "x"]]})");
    EXPECT_THROW(io::digraph_from_json(j), NondeterministicLabel);
}

TEST(Io, GroupRoundTrip) {
    for (auto o : {free_group_oracle(), psl2z_oracle(), zxz2_oracle(), f2xf2_oracle(8)}) {
        const json j = io::to_json(*o);
        const auto back = io::group_from_json(j);
        EXPECT_EQ(back->kind().name(), o->kind().name());
        EXPECT_EQ(back->genset_names(), o->genset_names());
        EXPECT_EQ(back->max_radius(), o->max_radius());
        for (const auto& name : o->genset_names()) EXPECT_EQ(back->genset(name).letters, o->genset(name).letters);
    }
    EXPECT_THROW(io::group_from_json(json::parse(R"({"kind": "torus"})")), io::FormatError);
}

TEST(Io, GroupDocumentWithExtraGenset) {
    const auto j = json::parse(R"J({"group": {"kind": "free", "rank": 2},
                                   "gensets": [{"name": "T", "letters": ["a", "A", "b", "B", "(aa)", "(AA)"]}]})J");
    const auto o = io::group_from_json(j);
    EXPECT_EQ(o->word_length("aaaa", "T"), 2);
    EXPECT_TRUE(o->genset("T").symmetric);
}

TEST(Io, CombingAndFunctionBundles) {
    const auto fx = fixture("ZxZ2_Lprime");
    const json cj = io::to_json(fx.combing);
    const auto c = io::combing_from_json(cj);
    EXPECT_TRUE(c.digraph == fx.combing.digraph);
    EXPECT_EQ(c.genset, "Sprime");
    EXPECT_EQ(c.verified_radius, fx.combing.verified_radius);
    EXPECT_TRUE(validate_combing(c, 6).passed);

    const auto f = word_length_function(fx.combing);
    const auto path = (std::filesystem::temp_directory_path() / "hypclt_fn_bundle.json").string();
    io::write_file(path, io::to_json(f));
    const auto g = io::function_from_json(io::read_file(path));
    std::remove(path.c_str());
    EXPECT_EQ(g.dphi, f.dphi);
    EXPECT_EQ(g.base_vertex, f.base_vertex);
    EXPECT_EQ(g.provenance, "word-length");
    EXPECT_EQ(g.evaluate(std::string_view("b(ab)(ab)")), 3);
}

TEST(Io, ReportsCarryKeyFields) {
    const auto s = analyze<Rational>(fixture("F2_standard").combing.digraph);
    const json j = io::to_json(s);
    EXPECT_EQ(j["verdict"], "pass");
    EXPECT_EQ(j["exact"]["mu"][1], "1/4");
    EXPECT_EQ(j["support"], json::parse("[2, 3, 4, 5]"));
    const auto coin = coin_fixture();
    const auto r = drift_variance(analyze<double>(coin.digraph), coin.dphi);
    const auto e = empirical_from_values({0, 1, 1, 2, 2, 2, 3}, 4, 0.5, 0.25, 4);
    const auto csv = io::histogram_csv(e);
    EXPECT_EQ(csv.substr(0, 24), "bin_left,bin_right,count");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
    EXPECT_NEAR(io::to_json(r)["sigma2"].get<double>(), 0.25, 1e-12);
}

TEST(Io, MissingFile) { EXPECT_THROW(io::read_file("/nonexistent/x.json"), io::FormatError); }
