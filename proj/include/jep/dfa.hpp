#ifndef JEP_DFA_HPP
#define JEP_DFA_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "jep/labels.hpp"

namespace jep {

/// A word over a LabelSet, as symbol indices.
using Word = std::vector<int>;

/// Deterministic finite automaton with a total transition function.
class Dfa {
  public:
    Dfa(LabelSetPtr alphabet, int states, int start, std::vector<bool> accepting,
        std::vector<std::vector<int>> delta);

    const LabelSetPtr& alphabet() const { return alphabet_; }
    int state_count() const { return static_cast<int>(accepting_.size()); }
    int start() const { return start_; }
    bool accepting(int state) const { return accepting_[state]; }
    int step(int state, int symbol) const { return delta_[state][symbol]; }
    const std::vector<std::vector<int>>& delta() const { return delta_; }

    bool accepts(const Word& w) const;

  private:
    LabelSetPtr alphabet_;
    int start_;
    std::vector<bool> accepting_;
    std::vector<std::vector<int>> delta_;  // [state][symbol]
};

enum class BoolOp { And, Or };

/// State reached after reading w from the start state.
int dfa_run(const Dfa& a, const Word& w);

/// Product automaton; state set is the reachable part of the product.
Dfa dfa_product(const Dfa& a, const Dfa& b, BoolOp op);
Dfa dfa_complement(const Dfa& a);
/// Restriction to the states reachable from the start.
Dfa dfa_trim(const Dfa& a);
/// Shortest accepted word, ties broken lexicographically; absent iff L empty.
std::optional<Word> dfa_empty_witness(const Dfa& a);

/// Language { z : w is a subsequence of z }, with |w|+1 states.
Dfa sup_dfa(const Word& w, LabelSetPtr alphabet);
/// Language of words avoiding every f in S as a subsequence; trimmed.
Dfa forb_dfa(const std::vector<Word>& forbidden, LabelSetPtr alphabet);
/// Language { x#y : x in L(a), y in L(b) } over the alphabet plus '#'.
Dfa hash_pair_dfa(const Dfa& a, const Dfa& b);

/// Text format: header lines (alphabet/states/start/accept) plus one
/// `trans: state symbol state` line per transition; totality enforced.
Dfa parse_dfa(std::string_view text);
std::string format_dfa(const Dfa& a);

/// Word helpers: a word is written with one token per symbol; when every
/// alphabet token is a single character tokens may be concatenated.
Word parse_word(const LabelSet& alphabet, std::string_view text);
std::string format_word(const LabelSet& alphabet, const Word& w);

extern const std::string kHashToken;

}  // namespace jep

#endif
