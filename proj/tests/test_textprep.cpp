#include <doctest.h>

#include <jokemeter/corpus.hpp>
#include <jokemeter/textprep.hpp>

#include <algorithm>
#include <sstream>

#include "testutil.hpp"

using namespace jokemeter;

namespace {

std::string decode_span(const Vocab& v, const TokenSequence& seq) {
    std::string out;
    for (int i = seq.edit_begin; i < seq.edit_end; ++i) out += v.token(seq.ids[i]);
    return out;
}

std::vector<std::string> mini_corpus_lines() {
    auto ds = parse_task1_file(testutil::data_dir() + "/mini/task1_train.csv");
    std::vector<std::string> lines;
    for (const auto& h : ds.records) lines.push_back(assemble_input(h));
    return lines;
}

}  // namespace

TEST_SUITE_BEGIN("textprep");

TEST_CASE("assemble_input examples") {
    HeadlineEdit h;
    h.original = "Police <arrest/> suspect after chase";
    h.edit = "hug";
    CHECK(assemble_input(h) == "<s> Police # arrest / hug # suspect after chase </s>");

    h.original = "<Trump/> denies report";
    h.edit = "Toddler";
    CHECK(assemble_input(h) == "<s> # Trump / Toddler # denies report </s>");

    h.original = "City opens new <bridge/>";
    h.edit = "bakery";
    CHECK(assemble_input(h) == "<s> City opens new # bridge / bakery # </s>");

    h.original = "Full <scale war/> averted";
    h.edit = "fat";
    CHECK(assemble_input(h) == "<s> Full # scale war / fat # averted </s>");
}

TEST_CASE("bpe learns the expected merge on a two-word corpus") {
    Vocab v = Vocab::train({"ab", "ab"}, 10);
    // reserved 6 + 'a' + 'b' + merged "ab"
    CHECK(v.size() == 9);
    CHECK(v.token(6) == "a");
    CHECK(v.token(7) == "b");
    CHECK(v.token(8) == "ab");
    CHECK(v.segment_word("ab") == std::vector<int>{8});
    CHECK(v.segment_word("ba") == std::vector<int>{7, 6});
}

TEST_CASE("merges stop when the best pair occurs only once") {
    Vocab v = Vocab::train({"ab", "cd"}, 100);
    // No pair reaches count 2, so only single characters are kept.
    CHECK(v.size() == 6 + 4);
}

TEST_CASE("cap below the corpus character set is an error") {
    CHECK_THROWS(Vocab::train({"ab", "ab"}, 7));
    CHECK_THROWS(Vocab::train({"a"}, 3));
}

TEST_CASE("training is deterministic") {
    auto lines = mini_corpus_lines();
    Vocab a = Vocab::train(lines, 200);
    Vocab b = Vocab::train(lines, 200);
    REQUIRE(a.size() == b.size());
    for (int i = 0; i < a.size(); ++i) CHECK(a.token(i) == b.token(i));
    CHECK(a.hash() == b.hash());
}

TEST_CASE("reserved ids are fixed") {
    Vocab v = Vocab::train({"ab", "ab"}, 10);
    CHECK(v.token(kPad) == "<pad>");
    CHECK(v.token(kUnk) == "<unk>");
    CHECK(v.token(kBos) == "<s>");
    CHECK(v.token(kEos) == "</s>");
    CHECK(v.token(kHash) == "#");
    CHECK(v.token(kSlash) == "/");
}

TEST_CASE("save/load round trip") {
    auto lines = mini_corpus_lines();
    Vocab v = Vocab::train(lines, 300);
    testutil::TempDir td;
    auto p = td.path("vocab.txt");
    v.save(p);
    Vocab w = Vocab::load(p);
    REQUIRE(w.size() == v.size());
    for (int i = 0; i < v.size(); ++i) CHECK(w.token(i) == v.token(i));
    CHECK(w.hash() == v.hash());
    CHECK(w.lowercase() == v.lowercase());
    CHECK(w.segment_word("police") == v.segment_word("police"));
}

TEST_CASE("load rejects tampered reserved rows") {
    Vocab v = Vocab::train({"ab", "ab"}, 10);
    testutil::TempDir td;
    auto p = td.path("vocab.txt");
    v.save(p);
    auto text = testutil::read_file(p);
    auto pos = text.find("<unk>");
    text.replace(pos, 5, "<ukn>");
    testutil::write_file(p, text);
    CHECK_THROWS(Vocab::load(p));
}

TEST_CASE("segmentation is lossless for in-corpus words") {
    auto lines = mini_corpus_lines();
    Vocab v = Vocab::train(lines, 400);
    for (const auto& line : lines) {
        std::istringstream is(line);
        std::string w;
        while (is >> w) {
            if (w == "<s>" || w == "</s>" || w == "#" || w == "/") continue;
            std::string lower;
            for (char c : w) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
            std::string rebuilt;
            for (int id : v.segment_word(lower)) {
                CHECK(id != kUnk);
                rebuilt += v.token(id);
            }
            CHECK(rebuilt == lower);
        }
    }
}

TEST_CASE("unseen bytes segment to unk") {
    Vocab v = Vocab::train({"ab", "ab"}, 10);
    CHECK(v.segment_word("aqb") == std::vector<int>{6, kUnk, 7});
    CHECK(v.id("zzz") == kUnk);
}

TEST_CASE("encode produces a fixed-length sequence with a correct edit span") {
    auto lines = mini_corpus_lines();
    Vocab v = Vocab::train(lines, 400);
    auto ds = parse_task1_file(testutil::data_dir() + "/mini/task1_train.csv");
    for (const auto& h : ds.records) {
        auto seq = encode(v, assemble_input(h), 512);
        CHECK(seq.ids.size() == 512);
        CHECK(seq.ids[0] == kBos);
        CHECK(seq.ids[seq.real_length - 1] == kEos);
        for (int i = seq.real_length; i < 512; ++i) CHECK(seq.ids[i] == kPad);
        std::string lower_edit;
        for (char c : h.edit)
            lower_edit += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        std::string span = decode_span(v, seq);
        std::string no_space;
        for (char c : lower_edit) if (c != ' ') no_space += c;
        CHECK(span == no_space);
    }
}

TEST_CASE("encode is a pure function") {
    auto lines = mini_corpus_lines();
    Vocab v = Vocab::train(lines, 400);
    auto a = encode(v, lines[0], 64);
    auto b = encode(v, lines[0], 64);
    CHECK(a.ids == b.ids);
    CHECK(a.real_length == b.real_length);
    CHECK(a.edit_begin == b.edit_begin);
    CHECK(a.edit_end == b.edit_end);
}

TEST_CASE("over-long inputs are right-truncated with a forced sentence end") {
    Vocab v = Vocab::train({"xy", "xy"}, 10);
    std::string assembled = "<s> # a / b #";
    for (int i = 0; i < 200; ++i) assembled += " xy";
    assembled += " </s>";
    auto seq = encode(v, assembled, 32);
    CHECK(seq.ids.size() == 32);
    CHECK(seq.real_length == 32);
    CHECK(seq.ids[31] == kEos);
    CHECK(seq.edit_begin < seq.edit_end);
}

TEST_CASE("encode rejects inputs without an edit region") {
    Vocab v = Vocab::train({"ab", "ab"}, 10);
    CHECK_THROWS(encode(v, "<s> ab ab </s>", 16));
    CHECK_THROWS(encode(v, "<s> # ab # </s>", 16));   // no slash
    CHECK_THROWS(encode(v, "<s> # ab / # </s>", 16)); // empty edit
}

TEST_SUITE_END();
