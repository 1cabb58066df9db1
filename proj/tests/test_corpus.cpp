#include <doctest.h>

#include <jokemeter/corpus.hpp>
#include <jokemeter/csv.hpp>

#include <random>

#include "testutil.hpp"

using namespace jokemeter;

TEST_SUITE_BEGIN("corpus");

TEST_CASE("parse task1 row with long grade string truncates to five") {
    testutil::TempDir td;
    auto p = td.path("t1.csv");
    testutil::write_file(p,
                         "id,original,edit,grades,meanGrade\n"
                         "x1,Police <arrest/> suspect,hug,3321000,1.8\n");
    auto ds = parse_task1_file(p);
    REQUIRE(ds.records.size() == 1);
    const auto& h = ds.records[0];
    CHECK(h.id == "x1");
    CHECK(h.original == "Police <arrest/> suspect");
    CHECK(h.edit == "hug");
    CHECK(h.grades == std::vector<int>{3, 3, 2, 1, 0});
    CHECK(h.mean_grade == doctest::Approx(1.8));
}

TEST_CASE("strict parse throws on malformed rows") {
    testutil::TempDir td;
    auto check_throws = [&](const std::string& row) {
        auto p = td.path("bad.csv");
        testutil::write_file(p, "id,original,edit,grades,meanGrade\n" + row + "\n");
        CHECK_THROWS_AS(parse_task1_file(p), MalformedRow);
    };
    check_throws("b1,no span here,hug,32110,1.4");           // missing marker
    check_throws("b2,two <a/> spans <b/>,hug,32110,1.4");    // two markers
    check_throws("b3,Police <arrest/> suspect,hug,321,1.4"); // short grades
    check_throws("b4,Police <arrest/> suspect,hug,32410,1.4"); // grade out of range
    check_throws("b5,Police <arrest/> suspect,hug,31210,1.4"); // not descending
    check_throws("b6,Police <arrest/> suspect,hug,32110,3.4"); // mean out of range
    check_throws("b7,Police <arrest/> suspect,hug,32110,xyz"); // non-numeric mean
}

TEST_CASE("duplicate ids rejected") {
    testutil::TempDir td;
    auto p = td.path("dup.csv");
    testutil::write_file(p,
                         "id,original,edit,grades,meanGrade\n"
                         "a,Police <arrest/> suspect,hug,32110,1.4\n"
                         "a,Police <arrest/> suspect,pat,22110,1.2\n");
    CHECK_THROWS_AS(parse_task1_file(p), std::runtime_error);
}

TEST_CASE("lenient parse skips bad rows and records warnings") {
    testutil::TempDir td;
    auto p = td.path("mixed.csv");
    testutil::write_file(p,
                         "id,original,edit,grades,meanGrade\n"
                         "g1,Police <arrest/> suspect,hug,32110,1.4\n"
                         "b1,no span at all,hug,32110,1.4\n"
                         "g2,President signs <bill/> into law,banana,00000,0\n");
    std::vector<std::string> warnings;
    ParseOptions opts;
    opts.lenient = true;
    opts.warnings = &warnings;
    auto ds = parse_task1_file(p, opts);
    CHECK(ds.records.size() == 2);
    CHECK(ds.records[0].id == "g1");
    CHECK(ds.records[1].id == "g2");
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("row 2") != std::string::npos);
}

TEST_CASE("quoted fields with commas survive the round trip") {
    testutil::TempDir td;
    auto p = td.path("q.csv");
    testutil::write_file(p,
                         "id,original,edit,grades,meanGrade\n"
                         "q1,\"Stocks fall, then <rally/> hard\",flop,21100,1\n");
    auto ds = parse_task1_file(p);
    REQUIRE(ds.records.size() == 1);
    CHECK(ds.records[0].original == "Stocks fall, then <rally/> hard");
    auto p2 = td.path("q2.csv");
    write_task1_file(p2, ds);
    auto ds2 = parse_task1_file(p2);
    CHECK(ds2.records[0].original == ds.records[0].original);
}

TEST_CASE("apply_edit replaces the span and strips markers") {
    HeadlineEdit h;
    h.original = "Police <arrest/> suspect after chase";
    h.edit = "hug";
    CHECK(apply_edit(h) == "Police hug suspect after chase");

    h.original = "<Trump/> denies report";
    h.edit = "Toddler";
    CHECK(apply_edit(h) == "Toddler denies report");

    h.original = "City opens new <bridge/>";
    h.edit = "bakery";
    CHECK(apply_edit(h) == "City opens new bakery");
}

TEST_CASE("apply_edit output never contains marker characters") {
    auto ds = parse_task1_file(testutil::data_dir() + "/mini/task1_train.csv");
    for (const auto& h : ds.records) {
        auto s = apply_edit(h);
        CHECK(s.find('<') == std::string::npos);
        CHECK(s.find("/>") == std::string::npos);
        CHECK(s.find(h.edit) != std::string::npos);
    }
}

TEST_CASE("strip_marker keeps the original word") {
    CHECK(strip_marker("Police <arrest/> suspect") == "Police arrest suspect");
    CHECK(strip_marker("<Trump/> denies report") == "Trump denies report");
}

TEST_CASE("first_five_mean") {
    CHECK(first_five_mean({3, 2, 1, 1, 0}) == doctest::Approx(1.4));
    CHECK(first_five_mean({0, 0, 0, 0, 0}) == doctest::Approx(0.0));
    CHECK(first_five_mean({3, 3, 3, 3, 3}) == doctest::Approx(3.0));
    CHECK_THROWS(first_five_mean({3, 2, 1}));
    CHECK_THROWS(first_five_mean({3, 2, 1, 1, 0, 0}));
}

TEST_CASE("stored mean grade stays near the first-five mean") {
    // Files round their mean to one or two decimals, so the gap is small.
    for (const char* f : {"/mini/task1_train.csv", "/mini/task1_dev.csv",
                          "/planted/task1_train.csv"}) {
        auto ds = parse_task1_file(testutil::data_dir() + f);
        for (const auto& h : ds.records)
            CHECK(std::abs(h.mean_grade - first_five_mean(h.grades)) < 0.21);
    }
}

TEST_CASE("task1 write/parse round trip is the identity") {
    auto ds = parse_task1_file(testutil::data_dir() + "/mini/task1_train.csv");
    testutil::TempDir td;
    auto p = td.path("rt.csv");
    write_task1_file(p, ds);
    auto ds2 = parse_task1_file(p);
    REQUIRE(ds2.records.size() == ds.records.size());
    for (std::size_t i = 0; i < ds.records.size(); ++i) {
        CHECK(ds2.records[i].id == ds.records[i].id);
        CHECK(ds2.records[i].original == ds.records[i].original);
        CHECK(ds2.records[i].edit == ds.records[i].edit);
        CHECK(ds2.records[i].grades == ds.records[i].grades);
        CHECK(ds2.records[i].mean_grade == ds.records[i].mean_grade);
    }
}

TEST_CASE("task2 parse: labels, missing labels, and mismatched originals") {
    auto ds = parse_task2_file(testutil::data_dir() + "/mini/task2_train.csv");
    REQUIRE(ds.records.size() == 3);
    CHECK(ds.records[0].label == 1);
    CHECK(ds.records[0].first.edit == "hug");
    CHECK(ds.records[0].second.edit == "tickle");

    testutil::TempDir td;
    auto p = td.path("t2.csv");
    testutil::write_file(
        p,
        "id,original1,edit1,grades1,meanGrade1,original2,edit2,grades2,meanGrade2\n"
        "u1,Police <arrest/> suspect,hug,32110,1.4,Police <arrest/> suspect,pat,22110,1.2\n");
    auto unlabeled = parse_task2_file(p);
    REQUIRE(unlabeled.records.size() == 1);
    CHECK_FALSE(unlabeled.records[0].label.has_value());

    testutil::write_file(
        p,
        "id,original1,edit1,grades1,meanGrade1,original2,edit2,grades2,meanGrade2,label\n"
        "u2,Police <arrest/> suspect,hug,32110,1.4,Mayor <opens/> bridge,pat,22110,1.2,1\n");
    CHECK_THROWS_AS(parse_task2_file(p), MalformedRow);

    testutil::write_file(
        p,
        "id,original1,edit1,grades1,meanGrade1,original2,edit2,grades2,meanGrade2,label\n"
        "u3,Police <arrest/> suspect,hug,32110,1.4,Police <arrest/> suspect,pat,22110,1.2,3\n");
    CHECK_THROWS_AS(parse_task2_file(p), MalformedRow);
}

TEST_CASE("task2 write/parse round trip is the identity") {
    auto ds = parse_task2_file(testutil::data_dir() + "/mini/task2_train.csv");
    testutil::TempDir td;
    auto p = td.path("rt2.csv");
    write_task2_file(p, ds);
    auto ds2 = parse_task2_file(p);
    REQUIRE(ds2.records.size() == ds.records.size());
    for (std::size_t i = 0; i < ds.records.size(); ++i) {
        CHECK(ds2.records[i].id == ds.records[i].id);
        CHECK(ds2.records[i].label == ds.records[i].label);
        CHECK(ds2.records[i].first.original == ds.records[i].first.original);
        CHECK(ds2.records[i].second.grades == ds.records[i].second.grades);
    }
}

TEST_CASE("csv helpers handle quoting edge cases") {
    CHECK(csv::split_row("a,b,c") == std::vector<std::string>{"a", "b", "c"});
    CHECK(csv::split_row("a,\"b,c\",d") == std::vector<std::string>{"a", "b,c", "d"});
    CHECK(csv::split_row("\"he said \"\"hi\"\"\",x") ==
          std::vector<std::string>{"he said \"hi\"", "x"});
    CHECK(csv::split_row(",") == std::vector<std::string>{"", ""});
    // join then split is the identity on random field sets
    std::mt19937_64 rng(7);
    const std::string alphabet = "ab,\"c d";
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<std::string> fields(1 + rng() % 5);
        for (auto& f : fields) {
            f.resize(rng() % 8);
            for (auto& c : f) c = alphabet[rng() % alphabet.size()];
        }
        CHECK(csv::split_row(csv::join_row(fields)) == fields);
    }
}

TEST_SUITE_END();
