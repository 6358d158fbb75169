#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fischer/triple_system.hpp"

namespace fischer {

// A word is the symbol array of a generator sequence. Slot 0 holds the
// element at the distinguished first position; slot t (t >= 1) the element
// at position t. The distinguished position counts as odd, so the word
// interleaves two subsequences: the "odd chain" (slots 0, 1, 3, 5, ...) and
// the "even chain" (slots 2, 4, 6, ...).
using Word = std::vector<int>;

// Append-and-reflect action of y on x:
//   (x, reverse(tail of y), head of y, tail of y).
Word rho_apply(const Word& y, const Word& x);

// The four elementary rewrites generating word equivalence. Position
// arguments use the paper-position convention above: j = -1 addresses the
// distinguished slot 0. All preconditions are checked; violations throw
// std::invalid_argument.

// Swap the entries two positions apart around a fixed middle: j = -1 swaps
// slots 0 and 1 (no middle); 1 <= j <= m-2 swaps slots j and j+2.
Word move_swap(const Word& w, int j);

// Delete slot 1 when it repeats the distinguished slot 0.
Word move_drop_head(const Word& w);

// Delete the equal adjacent pair at slots j, j+1 (1 <= j <= m-1).
Word move_drop_pair(const Word& w, int j);

// Rewrite the pattern (s, t, s) at slots j, j+1, j+2 into (t, s, t),
// for 1 <= j <= m-2.
Word move_braid(const Word& w, int j);

// Membership test for the normal-form set: every symbol at most twice, both
// chains sorted ascending, and any doubled symbol occupies two neighbouring
// even-chain slots and exceeds every odd-chain symbol.
bool is_normal_word(const Word& w);

// Rewrites w to its normal form using only the four moves, in stages:
// (a) while some symbol occurs three or more times, or occurs twice with an
//     odd-chain occurrence, cancel via swaps plus the deletion moves (an
//     all-even triple is first broken up with move_braid);
// (b) while some doubled symbol is smaller than some odd-chain symbol,
//     exchange the two values with move_braid;
// (c) sort both chains with move_swap.
// A step budget guards termination; exhausting it (or producing a non-normal
// result) throws std::logic_error, which would falsify the strategy.
Word reduce(Word w);

// All normal words over symbols {1..n}, sorted by (length, lexicographic).
// Validates the expected count 3^(n-1). n is capped at 8.
std::vector<Word> enumerate_normal(int n);

// Number of normal words using exactly the symbols {1..k}, 1 <= k <= n <= 8.
std::uint64_t count_T(int n, int k);

// The quotient of all words by equivalence, materialized on normal-form
// representatives, with the induced action and the derived triple system
// whose lines are {x, y, action[y][x]} for x != y.
struct WordQuotient {
    std::vector<Word> points;  // normal representatives, (length, lex) order
    std::vector<std::vector<std::uint32_t>> action;  // action[y][x]
    TripleSystem system;
};

// n is capped at 6 by the quadratic action table.
WordQuotient build_word_quotient(int n);

struct PresentationReport {
    bool ok = true;
    std::uint32_t n_points = 0;
    std::vector<Point> image;  // quotient point -> affine point id
    std::string detail;        // first inconsistency, empty when ok
};

// Builds the correspondence sending the one-symbol generator words to the
// affine generators (the n-th to the zero vector) and extending along the
// action, then checks it is a well-defined line-preserving bijection onto
// affine_space(n-1). 2 <= n <= 5; n = 1 is the trivial one-point case.
PresentationReport presentation_matches_affine(int n);

}  // namespace fischer
