#include "fischer/rewrite.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

#include "fischer/constructions.hpp"

namespace fischer {

namespace {

std::string word_str(const Word& w) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < w.size(); ++i) os << (i ? "," : "") << w[i];
    os << ')';
    return os.str();
}

// Chain coordinates. Slot 0 and the odd slots 1, 3, 5, ... form the odd
// chain; slots 2, 4, ... the even chain. Chain index = position within the
// chain, so chain-adjacent elements sit two array slots apart (one apart for
// the leading pair of the odd chain).
bool on_odd_chain(std::size_t slot) { return slot == 0 || slot % 2 == 1; }
std::size_t odd_slot(std::size_t idx) { return idx == 0 ? 0 : 2 * idx - 1; }
std::size_t even_slot(std::size_t idx) { return 2 * idx + 2; }
std::size_t odd_size(std::size_t len) { return len == 0 ? 0 : (len + 2) / 2; }
std::size_t even_size(std::size_t len) { return len <= 2 ? 0 : (len - 1) / 2; }
std::size_t chain_index(std::size_t slot) {
    if (on_odd_chain(slot)) return slot == 0 ? 0 : (slot + 1) / 2;
    return slot / 2 - 1;
}

std::map<int, std::vector<std::size_t>> occurrences(const Word& w) {
    std::map<int, std::vector<std::size_t>> occ;
    for (std::size_t s = 0; s < w.size(); ++s) occ[w[s]].push_back(s);
    return occ;
}

// Drives a word to normal form through the four elementary moves only.
struct Rewriter {
    Word w;
    std::uint64_t steps = 0;
    std::uint64_t budget;

    explicit Rewriter(Word word)
        : w(std::move(word)),
          budget(1000 + 400 * static_cast<std::uint64_t>(w.size()) * w.size()) {}

    void bump() {
        if (++steps > budget)
            throw std::logic_error(
                "rewrite budget exhausted; the reduction strategy is falsified on " +
                word_str(w));
    }

    void swap_odd(std::size_t idx) {  // swap odd-chain elements idx, idx+1
        w = move_swap(w, idx == 0 ? -1 : static_cast<int>(2 * idx - 1));
        bump();
    }
    void swap_even(std::size_t idx) {  // swap even-chain elements idx, idx+1
        w = move_swap(w, static_cast<int>(2 * idx + 2));
        bump();
    }
    void route_odd(std::size_t from, std::size_t to) {
        for (; from > to; --from) swap_odd(from - 1);
        for (; from < to; ++from) swap_odd(from);
    }
    void route_even(std::size_t from, std::size_t to) {
        for (; from > to; --from) swap_even(from - 1);
        for (; from < to; ++from) swap_even(from);
    }

    // Stage (a): no symbol thrice, duplicates confined to the even chain.
    // Each pass strictly decreases the sum of squared symbol multiplicities.
    void cancel_duplicates() {
        while (true) {
            const auto occ = occurrences(w);
            const std::vector<std::size_t>* odd_involved = nullptr;
            const std::vector<std::size_t>* even_triple = nullptr;
            for (const auto& [sym, slots] : occ) {
                const bool has_odd = std::any_of(slots.begin(), slots.end(),
                                                 [](std::size_t s) { return on_odd_chain(s); });
                if (slots.size() >= 2 && has_odd && !odd_involved) odd_involved = &slots;
                if (slots.size() >= 3 && !has_odd && !even_triple) even_triple = &slots;
            }
            if (odd_involved) {
                std::vector<std::size_t> odds, evens;
                for (std::size_t s : *odd_involved)
                    (on_odd_chain(s) ? odds : evens).push_back(chain_index(s));
                if (odds.size() >= 2) {
                    // meet at the head pair, then drop one copy
                    route_odd(odds[0], 0);
                    route_odd(odds[1], 1);
                    w = move_drop_head(w);
                } else {
                    // meet at slots 1 and 2, then drop the pair
                    route_odd(odds[0], 1);
                    route_even(evens[0], 0);
                    w = move_drop_pair(w, 1);
                }
                bump();
            } else if (even_triple) {
                // expose an odd-chain copy: (s,.,s) -> (.,s,.)
                const std::size_t a = chain_index((*even_triple)[0]);
                route_even(chain_index((*even_triple)[1]), a + 1);
                w = move_braid(w, static_cast<int>(even_slot(a)));
                bump();
            } else {
                return;
            }
        }
    }

    // Stage (b): every doubled symbol must exceed the whole odd chain; the
    // braid move exchanges an offending double with a larger odd single.
    // The sum of doubled values strictly increases.
    void promote_doubles() {
        while (true) {
            const auto occ = occurrences(w);
            int best_odd = 0;
            std::size_t best_odd_idx = 0;
            for (std::size_t idx = 0; idx < odd_size(w.size()); ++idx)
                if (w[odd_slot(idx)] > best_odd) {
                    best_odd = w[odd_slot(idx)];
                    best_odd_idx = idx;
                }
            const std::vector<std::size_t>* offender = nullptr;
            for (const auto& [sym, slots] : occ)
                if (slots.size() == 2 && sym < best_odd) {
                    offender = &slots;
                    break;
                }
            if (!offender) return;
            const std::size_t f0 = chain_index((*offender)[0]);
            route_even(chain_index((*offender)[1]), f0 + 1);
            route_odd(best_odd_idx, f0 + 2);  // the slot between the double
            w = move_braid(w, static_cast<int>(even_slot(f0)));
            bump();
        }
    }

    // Stage (c): chain-local bubble sort.
    void sort_chains() {
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t i = 0; i + 1 < odd_size(w.size()); ++i)
                if (w[odd_slot(i)] > w[odd_slot(i + 1)]) {
                    swap_odd(i);
                    changed = true;
                }
            for (std::size_t i = 0; i + 1 < even_size(w.size()); ++i)
                if (w[even_slot(i)] > w[even_slot(i + 1)]) {
                    swap_even(i);
                    changed = true;
                }
        }
    }
};

void require_word(const Word& w) {
    if (w.empty()) throw std::invalid_argument("empty word");
    for (int v : w)
        if (v < 1) throw std::invalid_argument("word symbols must be positive");
}

std::uint64_t pow3(int e) {
    std::uint64_t r = 1;
    for (int i = 0; i < e; ++i) r *= 3;
    return r;
}

}  // namespace

Word rho_apply(const Word& y, const Word& x) {
    require_word(y);
    require_word(x);
    Word r = x;
    r.reserve(x.size() + 2 * y.size() - 1);
    r.insert(r.end(), y.rbegin(), y.rend() - 1);  // reversed tail
    r.push_back(y[0]);                            // head
    r.insert(r.end(), y.begin() + 1, y.end());    // tail
    return r;
}

Word move_swap(const Word& w, int j) {
    require_word(w);
    const int m = static_cast<int>(w.size()) - 1;
    if (j == -1) {
        if (m < 1) throw std::invalid_argument("swap needs two leading entries");
        Word r = w;
        std::swap(r[0], r[1]);
        return r;
    }
    if (j < 1 || j > m - 2) throw std::invalid_argument("swap position out of range");
    Word r = w;
    std::swap(r[j], r[j + 2]);
    return r;
}

Word move_drop_head(const Word& w) {
    require_word(w);
    if (w.size() < 2 || w[0] != w[1])
        throw std::invalid_argument("leading entries must repeat to drop one");
    Word r = w;
    r.erase(r.begin() + 1);
    return r;
}

Word move_drop_pair(const Word& w, int j) {
    require_word(w);
    const int m = static_cast<int>(w.size()) - 1;
    if (j < 1 || j > m - 1) throw std::invalid_argument("pair position out of range");
    if (w[j] != w[j + 1]) throw std::invalid_argument("pair entries must be equal");
    Word r = w;
    r.erase(r.begin() + j, r.begin() + j + 2);
    return r;
}

Word move_braid(const Word& w, int j) {
    require_word(w);
    const int m = static_cast<int>(w.size()) - 1;
    if (j < 1 || j > m - 2) throw std::invalid_argument("braid position out of range");
    if (w[j] != w[j + 2]) throw std::invalid_argument("braid needs equal outer entries");
    Word r = w;
    r[j] = w[j + 1];
    r[j + 1] = w[j];
    r[j + 2] = w[j + 1];
    return r;
}

bool is_normal_word(const Word& w) {
    if (w.empty()) return false;
    for (int v : w)
        if (v < 1) return false;
    for (std::size_t i = 0; i + 1 < odd_size(w.size()); ++i)
        if (w[odd_slot(i)] > w[odd_slot(i + 1)]) return false;
    for (std::size_t i = 0; i + 1 < even_size(w.size()); ++i)
        if (w[even_slot(i)] > w[even_slot(i + 1)]) return false;
    int max_odd = 0;
    for (std::size_t i = 0; i < odd_size(w.size()); ++i)
        max_odd = std::max(max_odd, w[odd_slot(i)]);
    for (const auto& [sym, slots] : occurrences(w)) {
        if (slots.size() > 2) return false;
        if (slots.size() == 2) {
            if (on_odd_chain(slots[0]) || on_odd_chain(slots[1])) return false;
            if (chain_index(slots[1]) != chain_index(slots[0]) + 1) return false;
            if (sym <= max_odd) return false;
        }
    }
    return true;
}

Word reduce(Word w) {
    require_word(w);
    Rewriter rw(std::move(w));
    rw.cancel_duplicates();
    rw.promote_doubles();
    rw.sort_chains();
    if (!is_normal_word(rw.w))
        throw std::logic_error("reduction strategy produced a non-normal word " +
                               word_str(rw.w));
    return std::move(rw.w);
}

std::vector<Word> enumerate_normal(int n) {
    if (n < 1) throw std::invalid_argument("enumerate_normal requires n >= 1");
    if (n > 8) throw std::length_error("enumerate_normal is capped at n = 8");

    // Classify each symbol as unused / odd-chain / even-chain single /
    // even-chain double; a class determines at most one normal word.
    std::vector<Word> result;
    std::uint64_t codes = 1;
    for (int i = 0; i < n; ++i) codes *= 4;
    for (std::uint64_t code = 0; code < codes; ++code) {
        std::vector<int> odd, even_single, doubled;
        std::uint64_t c = code;
        for (int sym = 1; sym <= n; ++sym, c /= 4) {
            switch (c % 4) {
                case 1: odd.push_back(sym); break;
                case 2: even_single.push_back(sym); break;
                case 3: doubled.push_back(sym); break;
                default: break;
            }
        }
        if (odd.empty()) continue;
        const int diff = static_cast<int>(odd.size()) -
                         static_cast<int>(even_single.size()) -
                         2 * static_cast<int>(doubled.size());
        if (diff != 1 && diff != 2) continue;
        if (!doubled.empty() && doubled.front() <= odd.back()) continue;

        std::vector<int> even;
        for (int s : even_single) even.push_back(s);
        for (int s : doubled) {
            even.push_back(s);
            even.push_back(s);
        }
        std::sort(even.begin(), even.end());

        Word w(odd.size() + even.size());
        for (std::size_t i = 0; i < odd.size(); ++i) w[odd_slot(i)] = odd[i];
        for (std::size_t i = 0; i < even.size(); ++i) w[even_slot(i)] = even[i];
        if (!is_normal_word(w))
            throw std::logic_error("enumeration produced a non-normal word " +
                                   word_str(w));
        result.push_back(std::move(w));
    }

    std::sort(result.begin(), result.end(), [](const Word& a, const Word& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    if (result.size() != pow3(n - 1))
        throw std::logic_error("normal word count does not match the expected power of three");
    return result;
}

std::uint64_t count_T(int n, int k) {
    if (k < 1 || k > n) throw std::invalid_argument("count_T requires 1 <= k <= n");
    std::uint64_t count = 0;
    for (const Word& w : enumerate_normal(n)) {
        const std::set<int> syms(w.begin(), w.end());
        if (static_cast<int>(syms.size()) == k && *syms.rbegin() == k) ++count;
    }
    return count;
}

WordQuotient build_word_quotient(int n) {
    if (n < 1) throw std::invalid_argument("build_word_quotient requires n >= 1");
    if (n > 6) throw std::length_error("build_word_quotient is capped at n = 6");

    std::vector<Word> points = enumerate_normal(n);
    const std::uint32_t size = static_cast<std::uint32_t>(points.size());
    std::map<Word, std::uint32_t> index;
    for (std::uint32_t i = 0; i < size; ++i) index.emplace(points[i], i);

    std::vector<std::vector<std::uint32_t>> action(size,
                                                   std::vector<std::uint32_t>(size));
    for (std::uint32_t y = 0; y < size; ++y)
        for (std::uint32_t x = 0; x < size; ++x) {
            const Word image = reduce(rho_apply(points[y], points[x]));
            const auto it = index.find(image);
            if (it == index.end())
                throw std::logic_error("action image left the normal set");
            action[y][x] = it->second;
        }

    std::set<std::array<Point, 3>> line_set;
    for (std::uint32_t x = 0; x < size; ++x)
        for (std::uint32_t y = 0; y < size; ++y) {
            if (x == y) continue;
            const std::uint32_t r = action[y][x];
            if (r == x || r == y)
                throw std::logic_error("degenerate line in the word quotient");
            std::array<Point, 3> line{x, y, r};
            std::sort(line.begin(), line.end());
            line_set.insert(line);
        }

    TripleSystem system(size,
                        std::vector<std::array<Point, 3>>(line_set.begin(), line_set.end()));
    return WordQuotient{std::move(points), std::move(action), std::move(system)};
}

namespace {

// digitwise arithmetic on base-3 little-endian vector ids
Point add3(Point a, Point b, int dim) {
    Point r = 0, pow = 1;
    for (int i = 0; i < dim; ++i) {
        r += (a % 3 + b % 3) % 3 * pow;
        a /= 3;
        b /= 3;
        pow *= 3;
    }
    return r;
}

Point neg3(Point a, int dim) {
    Point r = 0, pow = 1;
    for (int i = 0; i < dim; ++i) {
        r += (3 - a % 3) % 3 * pow;
        a /= 3;
        pow *= 3;
    }
    return r;
}

}  // namespace

PresentationReport presentation_matches_affine(int n) {
    if (n < 1) throw std::invalid_argument("presentation check requires n >= 1");
    if (n > 5) throw std::length_error("presentation check is capped at n = 5");

    PresentationReport report;
    const WordQuotient q = build_word_quotient(n);
    report.n_points = q.system.n_points();

    if (n == 1) {  // one generator, one point, no lines
        report.image = {0};
        report.ok = q.system.n_points() == 1 && q.system.n_lines() == 0;
        if (!report.ok) report.detail = "one-generator quotient is not a single point";
        return report;
    }

    const int dim = n - 1;
    const TripleSystem ag = affine_space(dim);
    const auto unit = [&](int i) -> Point {  // the i-th affine generator
        return i == n ? 0 : static_cast<Point>(pow3(i - 1));
    };

    std::map<Word, std::uint32_t> index;
    for (std::uint32_t i = 0; i < q.system.n_points(); ++i) index.emplace(q.points[i], i);

    report.image.assign(q.system.n_points(), no_point);
    std::vector<std::uint32_t> generator(n + 1);
    std::queue<std::uint32_t> frontier;
    for (int i = 1; i <= n; ++i) {
        const std::uint32_t p = index.at(Word{i});
        generator[i] = p;
        if (report.image[p] == no_point) {
            report.image[p] = unit(i);
            frontier.push(p);
        } else if (report.image[p] != unit(i)) {
            report.ok = false;
            report.detail = "generator images collide";
            return report;
        }
    }

    // extend along the action; a clash means the map is not well-defined
    while (!frontier.empty()) {
        const std::uint32_t p = frontier.front();
        frontier.pop();
        for (int j = 1; j <= n; ++j) {
            const std::uint32_t t = q.action[generator[j]][p];
            const Point want = neg3(add3(report.image[p], unit(j), dim), dim);
            if (report.image[t] == no_point) {
                report.image[t] = want;
                frontier.push(t);
            } else if (report.image[t] != want) {
                report.ok = false;
                report.detail = "action image clashes at point " + std::to_string(t);
                return report;
            }
        }
    }

    std::vector<char> hit(ag.n_points(), 0);
    for (std::uint32_t p = 0; p < q.system.n_points(); ++p) {
        if (report.image[p] == no_point) {
            report.ok = false;
            report.detail = "point " + std::to_string(p) + " unreachable from generators";
            return report;
        }
        if (hit[report.image[p]]++) {
            report.ok = false;
            report.detail = "correspondence is not injective";
            return report;
        }
    }

    for (const auto& l : q.system.lines()) {
        const Point a = report.image[l[0]], b = report.image[l[1]], c = report.image[l[2]];
        if (add3(add3(a, b, dim), c, dim) != 0) {
            report.ok = false;
            report.detail = "a line image is not an affine line";
            return report;
        }
    }
    if (q.system.n_lines() != ag.n_lines()) {
        report.ok = false;
        report.detail = "line counts differ from the affine space";
        return report;
    }
    return report;
}

}  // namespace fischer
