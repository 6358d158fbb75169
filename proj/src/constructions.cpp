#include "fischer/constructions.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>

namespace fischer {

namespace {

using Perm = std::vector<Point>;

Perm compose(const Perm& f, const Perm& g) {  // x -> f(g(x))
    Perm r(g.size());
    for (std::size_t x = 0; x < g.size(); ++x) r[x] = f[g[x]];
    return r;
}

bool is_identity(const Perm& p) {
    for (std::size_t x = 0; x < p.size(); ++x)
        if (p[x] != x) return false;
    return true;
}

// Conjugate c^d = d c d for involutions d.
Perm conjugate(const Perm& c, const Perm& d) { return compose(d, compose(c, d)); }

// Order of cd, early-out at 4 (only 1, 2, 3 are acceptable anywhere here).
int product_order(const Perm& c, const Perm& d) {
    const Perm p = compose(c, d);
    if (is_identity(p)) return 1;
    Perm q = compose(p, p);
    if (is_identity(q)) return 2;
    if (is_identity(compose(p, q))) return 3;
    return 4;
}

}  // namespace

InvolutionSet::InvolutionSet(Point dom, std::vector<std::vector<Point>> gens)
    : domain(dom), generators(std::move(gens)) {
    for (const auto& g : generators) {
        if (g.size() != domain)
            throw std::invalid_argument("generator does not act on the domain");
        std::vector<char> seen(domain, 0);
        for (Point x : g) {
            if (x >= domain || seen[x])
                throw std::invalid_argument("generator is not a permutation");
            seen[x] = 1;
        }
        if (is_identity(g)) throw std::invalid_argument("generator has order 1");
        for (Point x = 0; x < domain; ++x)
            if (g[g[x]] != x) throw std::invalid_argument("generator has order > 2");
    }
}

TripleSystem sym_fischer(int n) {
    if (n < 2) throw std::invalid_argument("sym_fischer requires n >= 2");
    std::vector<std::vector<Point>> pid(n, std::vector<Point>(n, no_point));
    Point next = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) pid[i][j] = next++;
    std::vector<std::array<Point, 3>> lines;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k)
                lines.push_back({pid[i][j], pid[i][k], pid[j][k]});
    return TripleSystem(next, std::move(lines));
}

TripleSystem affine_space(int n) {
    if (n < 1) throw std::invalid_argument("affine_space requires n >= 1");
    if (n > 7) throw std::length_error("affine_space is capped at n = 7");
    Point size = 1;
    for (int i = 0; i < n; ++i) size *= 3;
    // Componentwise negated sum of the pair, base-3 little-endian ids.
    const auto third = [&](Point x, Point y) {
        Point z = 0, pow = 1;
        for (int i = 0; i < n; ++i) {
            z += (6 - x % 3 - y % 3) % 3 * pow;
            x /= 3;
            y /= 3;
            pow *= 3;
        }
        return z;
    };
    std::vector<std::array<Point, 3>> lines;
    for (Point x = 0; x < size; ++x)
        for (Point y = x + 1; y < size; ++y) {
            const Point z = third(x, y);
            if (z > y) lines.push_back({x, y, z});
        }
    return TripleSystem(size, std::move(lines));
}

TripleSystem dual_affine_plane() {
    return TripleSystem(6, {{0, 2, 3}, {0, 4, 5}, {1, 2, 4}, {1, 3, 5}});
}

TripleSystem fischer_from_involutions(const InvolutionSet& gens) {
    if (gens.generators.empty())
        throw std::invalid_argument("at least one generator required");

    // Conjugating by generators alone reaches the full normal closure: every
    // group element is a product of the involution generators.
    std::vector<Perm> elems;
    std::map<Perm, Point> index;
    for (const auto& g : gens.generators)
        if (index.emplace(g, static_cast<Point>(elems.size())).second)
            elems.push_back(g);
    for (std::size_t i = 0; i < elems.size(); ++i)
        for (const auto& g : gens.generators) {
            Perm c = conjugate(elems[i], g);
            if (index.emplace(c, static_cast<Point>(elems.size())).second)
                elems.push_back(std::move(c));
        }

    std::sort(elems.begin(), elems.end());
    for (std::size_t a = 0; a < elems.size(); ++a)
        for (std::size_t b = a + 1; b < elems.size(); ++b)
            if (product_order(elems[a], elems[b]) > 3)
                throw std::domain_error(
                    "3-transposition axiom violated: elements " + std::to_string(a) +
                    " and " + std::to_string(b) + " have product order > 3");

    index.clear();
    for (std::size_t i = 0; i < elems.size(); ++i)
        index.emplace(elems[i], static_cast<Point>(i));
    std::vector<std::array<Point, 3>> lines;
    for (std::size_t a = 0; a < elems.size(); ++a)
        for (std::size_t b = a + 1; b < elems.size(); ++b) {
            if (product_order(elems[a], elems[b]) != 3) continue;
            const Point c = index.at(conjugate(elems[a], elems[b]));
            std::array<Point, 3> line{static_cast<Point>(a), static_cast<Point>(b), c};
            std::sort(line.begin(), line.end());
            // Every pair on a line regenerates it; keep it for the least pair only.
            if (line[0] == static_cast<Point>(a) && line[1] == static_cast<Point>(b))
                lines.push_back(line);
        }
    return TripleSystem(static_cast<Point>(elems.size()), std::move(lines));
}

TripleSystem affine_as_fs(int n) {
    if (n < 1 || n > 4)
        throw std::invalid_argument("affine_as_fs supports 1 <= n <= 4");
    Point size = 1;
    for (int i = 0; i < n; ++i) size *= 3;
    const auto subtract = [&](Point v, Point x) {  // v - x componentwise
        Point r = 0, pow = 1;
        for (int i = 0; i < n; ++i) {
            r += (3 + v % 3 - x % 3) % 3 * pow;
            v /= 3;
            x /= 3;
            pow *= 3;
        }
        return r;
    };
    std::vector<std::vector<Point>> gens;
    for (Point v = 0; v < size; ++v) {
        std::vector<Point> g(size);
        for (Point x = 0; x < size; ++x) g[x] = subtract(v, x);
        gens.push_back(std::move(g));
    }
    TripleSystem fs = fischer_from_involutions(InvolutionSet(size, std::move(gens)));
    if (!isomorphic(fs, affine_space(n)))
        throw std::logic_error("affine_as_fs does not match affine_space");
    return fs;
}

TripleSystem hall_triple_81() {
    static constexpr int pow3[4] = {1, 3, 9, 27};
    const auto digit = [](Point v, int i) { return static_cast<int>(v / pow3[i] % 3); };
    const auto encode = [](int a, int b, int c, int d) {
        return static_cast<Point>(((a % 3 + 3) % 3) + 3 * ((b % 3 + 3) % 3) +
                                  9 * ((c % 3 + 3) % 3) + 27 * ((d % 3 + 3) % 3));
    };
    // Loop product on F_3^4:
    //   x*y = (x1+y1, x2+y2, x3+y3, x4+y4+(x1-y1)(x2*y3-x3*y2)),
    // lines are the triples {x, y, -(x*y)}.
    const auto third = [&](Point x, Point y) {
        const int x1 = digit(x, 0), x2 = digit(x, 1), x3 = digit(x, 2), x4 = digit(x, 3);
        const int y1 = digit(y, 0), y2 = digit(y, 1), y3 = digit(y, 2), y4 = digit(y, 3);
        const int corr = (x1 - y1) * (x2 * y3 - x3 * y2);
        return encode(-(x1 + y1), -(x2 + y2), -(x3 + y3), -(x4 + y4 + corr));
    };
    std::vector<std::array<Point, 3>> lines;
    for (Point x = 0; x < 81; ++x)
        for (Point y = x + 1; y < 81; ++y) {
            const Point z = third(x, y);
            if (z == x || z == y)
                throw std::logic_error("degenerate Hall line");
            if (z > y) lines.push_back({x, y, z});
        }
    TripleSystem t(81, std::move(lines));
    if (t.n_lines() != 1080) throw std::logic_error("Hall system line count is off");
    for (Point p = 0; p < 81; ++p)
        if (t.degree(p) != 40)
            throw std::logic_error("Hall system pair coverage is incomplete");
    return t;
}

}  // namespace fischer
