#include "unidiag/word.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace unidiag;

namespace {
Word mw(const std::string& s) { return Word{AutomatonId::M0, 0, s}; }
Word nw(const std::string& s) { return Word{AutomatonId::N0, 0, s}; }
Word mpw(uint32_t p, const std::string& s) { return Word{AutomatonId::Mp, p, s}; }
Word npw(uint32_t p, const std::string& s) { return Word{AutomatonId::Np, p, s}; }
} // namespace

TEST_CASE("acceptance conditions") {
    CHECK(accepts(mw("RRLL")));
    CHECK_FALSE(accepts(mw("LR")));
    CHECK(accepts(nw("<>.")));
    CHECK_FALSE(accepts(nw("<.>")));
    CHECK_FALSE(accepts(nw("<<>")));
    CHECK(accepts(mpw(3, "RLRRB")));
    CHECK_FALSE(accepts(mpw(3, "RRLL")));  // touches depth 2 before its end
    CHECK_FALSE(accepts(mpw(3, "RRB" "R"))); // R after the AB part
    CHECK(accepts(npw(3, "<<*>>")));
    CHECK_FALSE(accepts(npw(3, "<*>")));
    CHECK_FALSE(accepts(npw(2, "<<>>")));
    CHECK_THROWS_AS(accepts(mw("RXL")), AlphabetMismatch);
}

TEST_CASE("M0 enumeration and counts") {
    auto words = enumerate_words(AutomatonId::M0, 0, 4);
    REQUIRE(words.size() == 6);
    CHECK(count_words(AutomatonId::M0, 0, 4) == 6);
    for (size_t n = 0; n <= 16; ++n)
        CHECK(count_words(AutomatonId::M0, 0, n) == binomial(n, n / 2));
    for (size_t n = 0; n <= 10; ++n) {
        CHECK(enumerate_words(AutomatonId::M0, 0, n).size() ==
              count_words(AutomatonId::M0, 0, n).convert_to<size_t>());
        CHECK(enumerate_words(AutomatonId::N0, 0, n).size() ==
              count_words(AutomatonId::N0, 0, n).convert_to<size_t>());
    }
}

TEST_CASE("the eleven words of L_{M_3}(5) in order") {
    std::vector<std::string> expected{"RLRLR", "RLRRB", "RLRRA", "RRBBB", "RRABB", "RRBAB",
                                      "RRAAB", "RRBBA", "RRABA", "RRBAA", "RRAAA"};
    auto words = enumerate_words(AutomatonId::Mp, 3, 5);
    REQUIRE(words.size() == expected.size());
    for (size_t i = 0; i < expected.size(); ++i) CHECK(words[i].letters == expected[i]);
    CHECK(count_words(AutomatonId::Mp, 3, 5) == 11);
}

TEST_CASE("M2 counts 2^{n-1}") {
    for (size_t n = 1; n <= 16; ++n) {
        BigInt expect = BigInt(1) << (n - 1);
        CHECK(count_words(AutomatonId::Mp, 2, n) == expect);
    }
    auto w4 = enumerate_words(AutomatonId::Mp, 2, 4);
    CHECK(w4.size() == 8);
    for (const Word& w : w4) CHECK(w.letters[0] == 'R');
}

TEST_CASE("counts agree between M and N languages") {
    for (uint32_t p : {2u, 3u, 4u, 5u})
        for (size_t n = 0; n <= 12; ++n)
            CHECK(count_words(AutomatonId::Mp, p, n) == count_words(AutomatonId::Np, p, n));
    for (size_t n = 0; n <= 12; ++n)
        CHECK(count_words(AutomatonId::M0, 0, n) == count_words(AutomatonId::N0, 0, n));
}

TEST_CASE("m0 <-> n0 bijection") {
    CHECK(m0_to_n0(mw("RRL")).letters == ".<>");
    CHECK(m0_to_n0(mw("RLR")).letters == "<>.");
    CHECK(m0_to_n0(mw("")).letters == "");
    for (size_t n = 0; n <= 12; ++n) {
        auto ms = enumerate_words(AutomatonId::M0, 0, n);
        std::set<std::string> images;
        for (const Word& w : ms) {
            Word img = m0_to_n0(w);
            CHECK(accepts(img));
            CHECK(img.letters.size() == n);
            images.insert(img.letters);
            CHECK(n0_to_m0(img).letters == w.letters);
        }
        CHECK(images.size() == ms.size());
    }
}

TEST_CASE("mp <-> np bijection is a length-preserving involution") {
    for (uint32_t p : {2u, 3u, 4u, 5u}) {
        for (size_t n = 0; n <= 12; ++n) {
            auto ms = enumerate_words(AutomatonId::Mp, p, n);
            std::set<std::string> images;
            for (const Word& w : ms) {
                Word img = mp_to_np(w);
                CHECK(accepts(img));
                CHECK(img.letters.size() == n);
                images.insert(img.letters);
                CHECK(np_to_mp(img).letters == w.letters);
            }
            CHECK(images.size() == ms.size());
        }
    }
}

TEST_CASE("figure mountain maps to figure plateau") {
    // the length-29, height-4 mountain and its plateau partner
    std::string mountain = "RLRRRLRRBBAAABAAAAABAABBBBAAB";
    std::string plateau = "<>..<><<<<**><**>>><>>..<<>>.";
    REQUIRE(mountain.size() == 29);
    REQUIRE(plateau.size() == 29);
    Word m = mpw(5, mountain);
    REQUIRE(accepts(m));
    CHECK(mp_to_np(m).letters == plateau);
    CHECK(np_to_mp(npw(5, plateau)).letters == mountain);
}

TEST_CASE("mp_to_np falls back to the height-free bijection") {
    Word w = mpw(3, "RLRLR");
    CHECK(mp_to_np(w).letters == m0_to_n0(mw("RLRLR")).letters);
    // "RR" at p=3 reaches depth 2 exactly at its end; both steps swing up,
    // giving ".." (note "<>" is already taken: it is the image of "RL").
    Word rr = mpw(3, "RR");
    Word img = mp_to_np(rr);
    CHECK(accepts(img));
    CHECK(img.letters.size() == 2);
    CHECK(img.letters == "..");
    CHECK(mp_to_np(mpw(3, "RL")).letters == "<>");
}

TEST_CASE("Np words have dots at depth 0 and stars at depth p-1") {
    for (uint32_t p : {2u, 3u, 5u}) {
        for (size_t n = 0; n <= 10; ++n) {
            for (const Word& w : enumerate_words(AutomatonId::Np, p, n)) {
                auto d = depth_profile(w.letters);
                int cur = 0;
                for (size_t i = 0; i < w.letters.size(); ++i) {
                    char c = w.letters[i];
                    if (c == '.') CHECK(cur == 0);
                    if (c == '*') CHECK(cur == (int)p - 1);
                    cur = d[i];
                }
                CHECK((d.empty() || d.back() == 0));
            }
        }
    }
}

TEST_CASE("RR at p=3 maps inside N3") {
    // depth profile of the image stays within [0, p-1]
    Word img = mp_to_np(mpw(3, "RR"));
    for (int dep : depth_profile(img.letters)) {
        CHECK(dep >= 0);
        CHECK(dep <= 2);
    }
}
