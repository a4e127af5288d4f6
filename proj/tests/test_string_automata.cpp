#include <set>

#include "doctest.h"
#include "jep/dfa.hpp"
#include "jep/errors.hpp"
#include "jep/oracle.hpp"

using namespace jep;

namespace {

LabelSetPtr ab() { return LabelSet::from_tokens({"a", "b"}); }

Word w(const char* text) { return parse_word(*ab(), text); }

std::vector<Word> words_up_to(int len) {
    std::vector<Word> out{{}};
    std::size_t begin = 0;
    for (int l = 1; l <= len; ++l) {
        std::size_t end = out.size();
        for (std::size_t i = begin; i < end; ++i)
            for (int s = 0; s < 2; ++s) {
                Word v = out[i];
                v.push_back(s);
                out.push_back(v);
            }
        begin = end;
    }
    return out;
}

}  // namespace

TEST_CASE("dfa_run folds from the start state") {
    Dfa m = forb_dfa({w("ab")}, ab());
    CHECK(dfa_run(m, {}) == m.start());
    // states: 0 nothing seen, 1 after an a, 2 dead
    CHECK(m.state_count() == 3);
    CHECK(dfa_run(m, w("ba")) == 1);
    // left-fold composition
    Word u = w("ba"), v = w("abb");
    Word uv = u;
    uv.insert(uv.end(), v.begin(), v.end());
    int mid = dfa_run(m, u);
    int direct = dfa_run(m, uv);
    int folded = mid;
    for (int s : v) folded = m.step(folded, s);
    CHECK(direct == folded);
    CHECK_THROWS_AS(dfa_run(m, {5}), AlphabetError);
}

TEST_CASE("sup_dfa recognizes supersequences") {
    Dfa sup = sup_dfa(w("ab"), ab());
    CHECK(sup.state_count() == 3);
    CHECK(sup.accepts(w("ab")));
    CHECK(sup.accepts(w("aab")));
    CHECK(sup.accepts(w("bab")));
    CHECK_FALSE(sup.accepts(w("ba")));
    CHECK_FALSE(sup_dfa(w("aa"), ab()).accepts(w("a")));
    CHECK(sup_dfa({}, ab()).accepts({}));
    for (const auto& word : words_up_to(7))
        for (const Word& pattern : {w("a"), w("ab"), w("bba"), w("abab")})
            CHECK(sup_dfa(pattern, ab()).accepts(word) == word_subsequence(pattern, word));
}

TEST_CASE("forb_dfa agrees with the brute subsequence check") {
    Dfa no_ab = forb_dfa({w("ab")}, ab());
    Dfa no_ab_ba = forb_dfa({w("ab"), w("ba")}, ab());
    Dfa everything = forb_dfa({}, ab());
    for (const auto& word : words_up_to(6)) {
        CHECK(no_ab.accepts(word) == !word_subsequence(w("ab"), word));
        CHECK(no_ab_ba.accepts(word) ==
              (!word_subsequence(w("ab"), word) && !word_subsequence(w("ba"), word)));
        CHECK(everything.accepts(word));
    }
}

TEST_CASE("boolean operations preserve language semantics") {
    Dfa m = forb_dfa({w("ab")}, ab());
    Dfa twice = dfa_complement(dfa_complement(m));
    Dfa trimmed = dfa_trim(dfa_product(m, forb_dfa({w("ba")}, ab()), BoolOp::Or));
    for (const auto& word : words_up_to(5)) {
        CHECK(twice.accepts(word) == m.accepts(word));
        CHECK(trimmed.accepts(word) ==
              (!word_subsequence(w("ab"), word) || !word_subsequence(w("ba"), word)));
    }
}

TEST_CASE("product emptiness and witnesses") {
    // a* ∪ b* has no member with subsequence ab
    Dfa aa_or_bb = forb_dfa({w("ab"), w("ba")}, ab());
    Dfa with_ab = dfa_product(aa_or_bb, sup_dfa(w("ab"), ab()), BoolOp::And);
    CHECK_FALSE(dfa_empty_witness(with_ab).has_value());
    // shortest superstring of a pattern is the pattern itself
    auto witness = dfa_empty_witness(sup_dfa(w("ab"), ab()));
    REQUIRE(witness.has_value());
    CHECK(*witness == w("ab"));
    // ties broken lexicographically
    Dfa any = forb_dfa({}, ab());
    auto shortest = dfa_empty_witness(any);
    REQUIRE(shortest.has_value());
    CHECK(shortest->empty());
}

TEST_CASE("hash_pair_dfa concatenates with a separator") {
    // only the empty word on both sides: the language is exactly "#"
    Dfa eps = forb_dfa({w("a"), w("b")}, ab());
    Dfa pair = hash_pair_dfa(eps, eps);
    LabelSetPtr hashed = pair.alphabet();
    int hash = hashed->size() - 1;
    CHECK(pair.accepts({hash}));
    CHECK_FALSE(pair.accepts({}));
    CHECK_FALSE(pair.accepts({hash, hash}));

    Dfa no_ab = forb_dfa({w("ab")}, ab());
    Dfa all = forb_dfa({}, ab());
    Dfa mixed = hash_pair_dfa(no_ab, all);
    auto word_h = [&](const char* text) { return parse_word(*mixed.alphabet(), text); };
    CHECK(mixed.accepts(word_h("ba#ab")));
    CHECK_FALSE(mixed.accepts(word_h("ab#ab")));
    CHECK_FALSE(mixed.accepts(word_h("ba")));
    CHECK_FALSE(mixed.accepts(word_h("ba#a#b")));
}

TEST_CASE("dfa text format round-trips and enforces totality") {
    Dfa m = forb_dfa({w("ab")}, ab());
    Dfa back = parse_dfa(format_dfa(m));
    for (const auto& word : words_up_to(5)) CHECK(back.accepts(word) == m.accepts(word));
    CHECK_THROWS_AS(parse_dfa("alphabet: a b\nstates: 2\nstart: 0\naccept: 0\n"
                              "trans: 0 a 1\ntrans: 0 b 0\ntrans: 1 a 0\n"),
                    ParseError);
    CHECK_THROWS_AS(parse_dfa("alphabet: a\nstates: 1\nstart: 0\naccept: 0\n"
                              "trans: 0 a 0\ntrans: 0 a 0\n"),
                    ParseError);
}

TEST_CASE("random dfas are deterministic per seed") {
    Rng r1(42), r2(42);
    Dfa a = random_dfa(r1, 4, 2);
    Dfa b = random_dfa(r2, 4, 2);
    CHECK(format_dfa(a) == format_dfa(b));
    CHECK(a.state_count() <= 4);
}
