#include "fischer/triple_system.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace fischer {

namespace {

// Flat-index cap keeps the n*n pair table within a 64 MiB budget.
constexpr Point k_max_points = 4096;

std::string point_str(Point p) { return std::to_string(p); }

}  // namespace

bool Automorphism::is_identity() const {
    for (Point i = 0; i < image.size(); ++i)
        if (image[i] != i) return false;
    return true;
}

Automorphism Automorphism::after(const Automorphism& first) const {
    Automorphism r;
    r.image.resize(first.image.size());
    for (Point i = 0; i < first.image.size(); ++i)
        r.image[i] = image[first.image[i]];
    return r;
}

Automorphism Automorphism::inverse() const {
    Automorphism r;
    r.image.resize(image.size());
    for (Point i = 0; i < image.size(); ++i) r.image[image[i]] = i;
    return r;
}

Automorphism identity_automorphism(Point n) {
    Automorphism a;
    a.image.resize(n);
    std::iota(a.image.begin(), a.image.end(), Point{0});
    return a;
}

TripleSystem::TripleSystem(Point n_points, std::vector<std::array<Point, 3>> lines)
    : n_(n_points), lines_(std::move(lines)) {
    if (n_ > k_max_points)
        throw std::length_error("triple system too large: " + point_str(n_) + " points");
    for (auto& l : lines_) {
        std::sort(l.begin(), l.end());
        if (l[0] == l[1] || l[1] == l[2])
            throw std::invalid_argument("line with a repeated point");
        if (l[2] >= n_)
            throw std::invalid_argument("line point out of range: " + point_str(l[2]));
    }
    std::sort(lines_.begin(), lines_.end());
    if (std::adjacent_find(lines_.begin(), lines_.end()) != lines_.end())
        throw std::invalid_argument("duplicate line");

    third_.assign(std::size_t{n_} * n_, no_point);
    degree_.assign(n_, 0);
    const auto link = [&](Point a, Point b, Point c) {
        Point& slot = third_[std::size_t{a} * n_ + b];
        if (slot != no_point)
            throw std::invalid_argument("lines sharing two points: pair {" +
                                        point_str(a) + "," + point_str(b) + "}");
        slot = c;
    };
    for (const auto& l : lines_) {
        link(l[0], l[1], l[2]);
        link(l[1], l[0], l[2]);
        link(l[0], l[2], l[1]);
        link(l[2], l[0], l[1]);
        link(l[1], l[2], l[0]);
        link(l[2], l[1], l[0]);
        for (Point p : l) ++degree_[p];
    }
}

bool operator==(const TripleSystem& a, const TripleSystem& b) {
    return a.n_ == b.n_ && a.lines_ == b.lines_;
}

std::optional<Point> third_point(const TripleSystem& s, Point p, Point q) {
    if (p >= s.n_points() || q >= s.n_points())
        throw std::out_of_range("point id out of range");
    if (p == q) throw std::invalid_argument("third_point requires distinct points");
    const Point r = s.third_raw(p, q);
    if (r == no_point) return std::nullopt;
    return r;
}

Subsystem generate_subsystem(const TripleSystem& s, std::vector<Point> seed) {
    std::vector<char> in_set(s.n_points(), 0);
    std::vector<Point> members;
    members.reserve(seed.size());
    for (Point p : seed) {
        if (p >= s.n_points()) throw std::out_of_range("seed point out of range");
        if (!in_set[p]) {
            in_set[p] = 1;
            members.push_back(p);
        }
    }
    for (std::size_t i = 0; i < members.size(); ++i) {
        const Point x = members[i];
        for (std::size_t j = 0; j < i; ++j) {
            const Point r = s.third_raw(x, members[j]);
            if (r != no_point && !in_set[r]) {
                in_set[r] = 1;
                members.push_back(r);
            }
        }
    }
    std::sort(members.begin(), members.end());

    std::vector<Point> local(s.n_points(), no_point);
    for (Point i = 0; i < members.size(); ++i) local[members[i]] = i;
    std::vector<std::array<Point, 3>> induced;
    for (const auto& l : s.lines())
        if (in_set[l[0]] && in_set[l[1]] && in_set[l[2]])
            induced.push_back({local[l[0]], local[l[1]], local[l[2]]});
    return Subsystem{std::move(members),
                     TripleSystem(static_cast<Point>(std::count(in_set.begin(), in_set.end(), 1)),
                                  std::move(induced))};
}

namespace {

const TripleSystem& reference_da22() {
    // Point set {p,q,r,s,t,u} = {0,...,5}, lines {p,r,s},{p,t,u},{q,r,t},{q,s,u}.
    static const TripleSystem t(6, {{0, 2, 3}, {0, 4, 5}, {1, 2, 4}, {1, 3, 5}});
    return t;
}

const TripleSystem& reference_ag23() {
    // The nine vectors of F_3^2, id = v0 + 3*v1, lines {x, y, -x-y}.
    static const TripleSystem t = [] {
        std::vector<std::array<Point, 3>> lines;
        for (Point x = 0; x < 9; ++x)
            for (Point y = x + 1; y < 9; ++y) {
                const Point z = static_cast<Point>((6 - x % 3 - y % 3) % 3 +
                                                   3 * ((6 - x / 3 - y / 3) % 3));
                if (z > y) lines.push_back({x, y, z});
            }
        return TripleSystem(9, std::move(lines));
    }();
    return t;
}

// Enumerates each unordered pair of distinct intersecting lines exactly once
// (they meet in exactly one point, so the pair shows up at that point only).
// The callback returns false to stop early.
void for_each_plane(const TripleSystem& s,
                    const std::function<bool(std::uint32_t, std::uint32_t, Subsystem)>& fn) {
    std::vector<std::vector<std::uint32_t>> at_point(s.n_points());
    for (std::uint32_t i = 0; i < s.n_lines(); ++i)
        for (Point p : s.lines()[i]) at_point[p].push_back(i);
    for (Point p = 0; p < s.n_points(); ++p) {
        const auto& incident = at_point[p];
        for (std::size_t a = 0; a < incident.size(); ++a)
            for (std::size_t b = a + 1; b < incident.size(); ++b) {
                const auto& la = s.lines()[incident[a]];
                const auto& lb = s.lines()[incident[b]];
                auto plane = generate_subsystem(
                    s, {la[0], la[1], la[2], lb[0], lb[1], lb[2]});
                if (!fn(incident[a], incident[b], std::move(plane))) return;
            }
    }
}

// Classifies by (point, line) counts. The first plane matching each tag per
// state object is cross-checked against the reference instance by a full
// isomorphism search; counts alone are provably sufficient only for planes
// of valid Fischer spaces.
struct PlaneClassifier {
    bool da22_checked = false;
    bool ag23_checked = false;

    PlaneClass classify(const Subsystem& plane) {
        const Point np = plane.system.n_points();
        const std::uint32_t nl = plane.system.n_lines();
        if (np == 6 && nl == 4) {
            if (!da22_checked) {
                da22_checked = true;
                if (!isomorphic(plane.system, reference_da22()))
                    return {PlaneTag::Other, np, nl};
            }
            return {PlaneTag::DA22, np, nl};
        }
        if (np == 9 && nl == 12) {
            if (!ag23_checked) {
                ag23_checked = true;
                if (!isomorphic(plane.system, reference_ag23()))
                    return {PlaneTag::Other, np, nl};
            }
            return {PlaneTag::AG23, np, nl};
        }
        return {PlaneTag::Other, np, nl};
    }
};

}  // namespace

std::vector<PlaneEntry> planes(const TripleSystem& s) {
    std::vector<PlaneEntry> out;
    PlaneClassifier cls;
    for_each_plane(s, [&](std::uint32_t a, std::uint32_t b, Subsystem plane) {
        PlaneClass c = cls.classify(plane);
        out.push_back(PlaneEntry{a, b, std::move(plane), c});
        return true;
    });
    return out;
}

PlaneCensus classify_all_planes(const TripleSystem& s) {
    PlaneCensus census;
    PlaneClassifier cls;
    for_each_plane(s, [&](std::uint32_t a, std::uint32_t b, Subsystem plane) {
        switch (cls.classify(plane).tag) {
            case PlaneTag::DA22: ++census.n_da22; break;
            case PlaneTag::AG23: ++census.n_ag23; break;
            case PlaneTag::Other:
                if (census.n_other++ == 0) {
                    census.first_other_a = a;
                    census.first_other_b = b;
                }
                break;
        }
        return true;
    });
    return census;
}

bool is_fischer(const TripleSystem& s) {
    bool ok = true;
    PlaneClassifier cls;
    for_each_plane(s, [&](std::uint32_t, std::uint32_t, Subsystem plane) {
        if (cls.classify(plane).tag == PlaneTag::Other) {
            ok = false;
            return false;
        }
        return true;
    });
    return ok;
}

std::vector<std::vector<Point>> connected_components(const TripleSystem& s) {
    std::vector<Point> parent(s.n_points());
    std::iota(parent.begin(), parent.end(), Point{0});
    std::function<Point(Point)> find = [&](Point x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& l : s.lines()) {
        parent[find(l[1])] = find(l[0]);
        parent[find(l[2])] = find(l[0]);
    }
    std::vector<std::vector<Point>> by_root(s.n_points());
    for (Point p = 0; p < s.n_points(); ++p) by_root[find(p)].push_back(p);
    std::vector<std::vector<Point>> components;
    for (auto& c : by_root)
        if (!c.empty()) components.push_back(std::move(c));
    return components;
}

Automorphism tau(const TripleSystem& s, Point p) {
    if (p >= s.n_points()) throw std::out_of_range("point id out of range");
    Automorphism a = identity_automorphism(s.n_points());
    for (Point q = 0; q < s.n_points(); ++q) {
        if (q == p) continue;
        const Point r = s.third_raw(p, q);
        if (r != no_point) a.image[q] = r;
    }
    return a;
}

bool is_automorphism(const TripleSystem& s, const Automorphism& a) {
    if (a.size() != s.n_points()) return false;
    std::vector<char> seen(s.n_points(), 0);
    for (Point p = 0; p < s.n_points(); ++p) {
        if (a.image[p] >= s.n_points() || seen[a.image[p]]) return false;
        seen[a.image[p]] = 1;
    }
    for (const auto& l : s.lines()) {
        const Point x = a.image[l[0]], y = a.image[l[1]], z = a.image[l[2]];
        if (s.third_raw(x, y) != z) return false;
    }
    return true;
}

namespace {

std::vector<Automorphism> all_tau(const TripleSystem& s) {
    std::vector<Automorphism> t;
    t.reserve(s.n_points());
    for (Point p = 0; p < s.n_points(); ++p) t.push_back(tau(s, p));
    return t;
}

}  // namespace

TauAxiomReport tau_axiom_check(const TripleSystem& s) {
    TauAxiomReport rep;
    const Point n = s.n_points();
    const auto t = all_tau(s);
    const auto note = [&rep](bool& flag, const std::string& msg) {
        if (flag) {
            flag = false;
            if (rep.failure.empty()) rep.failure = msg;
        }
    };

    for (Point p = 0; p < n && rep.automorphisms_ok; ++p)
        if (!is_automorphism(s, t[p]))
            note(rep.automorphisms_ok, "tau(" + point_str(p) + ") does not preserve lines");

    for (Point p = 0; p < n && rep.involutions_ok; ++p)
        for (Point x = 0; x < n; ++x)
            if (t[p].image[t[p].image[x]] != x) {
                note(rep.involutions_ok, "tau(" + point_str(p) + ") is not an involution");
                break;
            }

    for (Point p = 0; p < n && rep.noncollinear_commute_ok; ++p)
        for (Point q = p + 1; q < n && rep.noncollinear_commute_ok; ++q) {
            if (s.collinear(p, q)) continue;
            for (Point x = 0; x < n; ++x)
                if (t[p].image[t[q].image[x]] != t[q].image[t[p].image[x]]) {
                    note(rep.noncollinear_commute_ok,
                         "tau(" + point_str(p) + "), tau(" + point_str(q) +
                             ") do not commute");
                    break;
                }
        }

    // Involutions make the conjugating inverses implicit on both sides.
    for (Point p = 0; p < n && rep.collinear_conjugation_ok; ++p)
        for (Point q = p + 1; q < n && rep.collinear_conjugation_ok; ++q) {
            if (!s.collinear(p, q)) continue;
            for (Point x = 0; x < n; ++x) {
                const Point lhs = t[q].image[t[p].image[t[q].image[x]]];
                const Point rhs = t[p].image[t[q].image[t[p].image[x]]];
                if (lhs != rhs) {
                    note(rep.collinear_conjugation_ok,
                         "conjugation identity fails for collinear pair (" +
                             point_str(p) + "," + point_str(q) + ")");
                    break;
                }
            }
        }

    for (Point p = 0; p < n && rep.equivariance_ok; ++p)
        for (Point q = 0; q < n; ++q) {
            const Automorphism& lhs = t[t[q].image[p]];
            bool match = true;
            for (Point x = 0; x < n; ++x)
                if (lhs.image[x] != t[q].image[t[p].image[t[q].image[x]]]) {
                    match = false;
                    break;
                }
            if (!match) {
                note(rep.equivariance_ok,
                     "tau of the image of " + point_str(p) + " under tau(" +
                         point_str(q) + ") is not the conjugate");
                break;
            }
        }

    return rep;
}

CommutationCheck affine_tau_commutation(const TripleSystem& s) {
    const Point n = s.n_points();
    const auto t = all_tau(s);
    for (Point x = 0; x < n; ++x)
        for (Point y = 0; y < n; ++y)
            for (Point z = 0; z < n; ++z) {
                if (x == z) continue;  // the two products coincide verbatim
                for (Point w = 0; w < n; ++w) {
                    if (t[x].image[t[y].image[t[z].image[w]]] !=
                        t[z].image[t[y].image[t[x].image[w]]])
                        return CommutationCheck{false, {x, y, z}};
                }
            }
    return CommutationCheck{};
}

namespace {

struct IsoSearch {
    const TripleSystem& s1;
    const TripleSystem& s2;
    std::vector<Point> order;                  // s1 points in assignment order
    std::vector<std::array<Point, 2>> parent;  // generating pair per order slot
    std::vector<Point> map1;                   // s1 -> s2, no_point while unset
    std::vector<char> used;                    // s2 images taken
    std::vector<Point> roots2;                 // candidate images for free slots

    bool consistent(Point u, Point v) const {
        for (Point m = 0; m < s1.n_points(); ++m) {
            const Point fm = map1[m];
            if (fm == no_point || m == u) continue;
            const Point c1 = s1.third_raw(u, m);
            const Point c2 = s2.third_raw(v, fm);
            if ((c1 == no_point) != (c2 == no_point)) return false;
            if (c1 != no_point && map1[c1] != no_point && map1[c1] != c2) return false;
        }
        return true;
    }

    bool extend(std::size_t depth) {
        if (depth == order.size()) return true;
        const Point u = order[depth];
        const auto [a, b] = parent[depth];
        if (a != no_point) {
            const Point v = s2.third_raw(map1[a], map1[b]);
            if (v == no_point || used[v] || !consistent(u, v)) return false;
            map1[u] = v;
            used[v] = 1;
            if (extend(depth + 1)) return true;
            map1[u] = no_point;
            used[v] = 0;
            return false;
        }
        const bool is_root = depth == 0;
        for (Point v : is_root ? roots2 : std::vector<Point>(free_candidates(u))) {
            if (used[v] || s2.degree(v) != s1.degree(u) || !consistent(u, v)) continue;
            map1[u] = v;
            used[v] = 1;
            if (extend(depth + 1)) return true;
            map1[u] = no_point;
            used[v] = 0;
        }
        return false;
    }

    std::vector<Point> free_candidates(Point) const {
        std::vector<Point> c;
        for (Point v = 0; v < s2.n_points(); ++v)
            if (!used[v]) c.push_back(v);
        return c;
    }
};

// True when the tau maps are all automorphisms and their generated group has
// a single point orbit; used to pin the root image during isomorphism search.
bool tau_transitive(const TripleSystem& s) {
    if (s.n_points() == 0) return false;
    const auto t = all_tau(s);
    for (const auto& a : t)
        if (!is_automorphism(s, a)) return false;
    std::vector<char> seen(s.n_points(), 0);
    std::vector<Point> queue{0};
    seen[0] = 1;
    std::size_t head = 0;
    while (head < queue.size()) {
        const Point x = queue[head++];
        for (const auto& a : t)
            if (!seen[a.image[x]]) {
                seen[a.image[x]] = 1;
                queue.push_back(a.image[x]);
            }
    }
    return queue.size() == s.n_points();
}

}  // namespace

std::optional<std::vector<Point>> isomorphic(const TripleSystem& s1,
                                             const TripleSystem& s2) {
    if (s1.n_points() > 100 || s2.n_points() > 100)
        throw std::length_error("isomorphism search is limited to 100 points");
    if (s1.n_points() != s2.n_points() || s1.n_lines() != s2.n_lines())
        return std::nullopt;
    const Point n = s1.n_points();
    if (n == 0) return std::vector<Point>{};

    auto degrees = [](const TripleSystem& s) {
        std::vector<std::uint32_t> d;
        for (Point p = 0; p < s.n_points(); ++p) d.push_back(s.degree(p));
        std::sort(d.begin(), d.end());
        return d;
    };
    if (degrees(s1) != degrees(s2)) return std::nullopt;

    // The ordered-triple commutation identity is incidence-defined, hence an
    // isomorphism invariant; it separates same-parameter systems cheaply.
    if (n >= 28 &&
        affine_tau_commutation(s1).holds != affine_tau_commutation(s2).holds)
        return std::nullopt;

    // Assignment order: each point generated by an earlier mapped pair where
    // possible (its image is then forced); fresh points open a new free slot.
    std::vector<Point> order;
    std::vector<std::array<Point, 2>> parent;
    std::vector<char> placed(n, 0);
    while (order.size() < n) {
        Point next = no_point;
        std::array<Point, 2> par{no_point, no_point};
        for (Point u = 0; u < n && next == no_point; ++u) {
            if (placed[u]) continue;
            for (std::size_t i = 0; i < order.size() && next == no_point; ++i)
                for (std::size_t j = i + 1; j < order.size(); ++j) {
                    if (s1.third_raw(order[i], order[j]) == u) {
                        next = u;
                        par = {order[i], order[j]};
                        break;
                    }
                }
        }
        if (next == no_point) {
            std::uint32_t best = 0;
            for (Point u = 0; u < n; ++u)
                if (!placed[u] && (next == no_point || s1.degree(u) > best)) {
                    next = u;
                    best = s1.degree(u);
                }
        }
        placed[next] = 1;
        order.push_back(next);
        parent.push_back(par);
    }

    IsoSearch search{s1, s2, std::move(order), std::move(parent),
                     std::vector<Point>(n, no_point), std::vector<char>(n, 0),
                     {}};
    if (tau_transitive(s2)) {
        search.roots2 = {0};
        // Any image works for the root up to composing with an automorphism,
        // but it must still satisfy the degree filter applied in extend().
        for (Point v = 0; v < n; ++v)
            if (s2.degree(v) == s1.degree(search.order[0])) {
                search.roots2 = {v};
                break;
            }
    } else {
        for (Point v = 0; v < n; ++v) search.roots2.push_back(v);
    }

    if (!search.extend(0)) return std::nullopt;

    for (const auto& l : s1.lines()) {
        const Point x = search.map1[l[0]], y = search.map1[l[1]], z = search.map1[l[2]];
        if (s2.third_raw(x, y) != z)
            throw std::logic_error("isomorphism search produced a non-isomorphism");
    }
    return search.map1;
}

namespace {

// Closure size with reusable buffers; stops early once the target is hit.
struct ClosureScratch {
    std::vector<Point> members;
    std::vector<std::uint32_t> stamp;
    std::uint32_t epoch = 0;

    Point run(const TripleSystem& s, const std::vector<Point>& seed, Point target) {
        if (stamp.size() < s.n_points()) stamp.assign(s.n_points(), 0);
        ++epoch;
        members.clear();
        for (Point p : seed)
            if (stamp[p] != epoch) {
                stamp[p] = epoch;
                members.push_back(p);
            }
        for (std::size_t i = 0; i < members.size(); ++i) {
            const Point x = members[i];
            for (std::size_t j = 0; j < i; ++j) {
                const Point r = s.third_raw(x, members[j]);
                if (r != no_point && stamp[r] != epoch) {
                    stamp[r] = epoch;
                    members.push_back(r);
                    if (members.size() == target) return target;
                }
            }
        }
        return static_cast<Point>(members.size());
    }
};

RankResult rank_connected(const TripleSystem& s, std::uint64_t closure_cap) {
    const Point n = s.n_points();
    if (n == 0) return {RankResult::Kind::exact, 0, 0, 0};
    if (n == 1) return {RankResult::Kind::exact, 1, 1, 0};

    ClosureScratch scratch;
    std::uint64_t closures = 0;

    // Greedy upper bound: extend by the point with the largest closure gain.
    std::vector<Point> greedy;
    Point upper = n;
    {
        std::vector<Point> trial;
        Point covered = 0;
        while (covered < n && closures < closure_cap) {
            Point best_point = no_point, best_size = 0;
            for (Point x = 0; x < n && closures < closure_cap; ++x) {
                trial = greedy;
                trial.push_back(x);
                ++closures;
                const Point sz = scratch.run(s, trial, n);
                if (sz > best_size) {
                    best_size = sz;
                    best_point = x;
                }
            }
            if (best_point == no_point) break;
            greedy.push_back(best_point);
            covered = best_size;
        }
        if (covered == n) upper = static_cast<Point>(greedy.size());
    }

    // The transitivity probe tabulates every tau map; skip it on systems too
    // large for the exact search to finish anyway.
    const bool transitive = n <= 256 && tau_transitive(s);

    // Iterative deepening below the greedy bound; subsets in ascending
    // lexicographic order so the reported generating set is reproducible.
    std::vector<Point> subset;
    for (Point k = 1; k < upper; ++k) {
        subset.assign(k, 0);
        // First seed pinned to 0 for transitive inputs: any generating set
        // can be translated to one through 0 by a point-moving automorphism.
        const Point first_max = transitive ? 0 : static_cast<Point>(n - k);
        std::function<bool(Point, Point)> descend = [&](Point slot, Point lo) -> bool {
            if (slot == k) {
                ++closures;
                return scratch.run(s, subset, n) == n;
            }
            const Point hi = static_cast<Point>(n - (k - 1 - slot));
            for (Point x = lo; x < hi; ++x) {
                subset[slot] = x;
                if (descend(static_cast<Point>(slot + 1), static_cast<Point>(x + 1)))
                    return true;
                if (closures >= closure_cap) return false;
            }
            return false;
        };
        bool found = false;
        for (Point f = 0; f <= first_max && !found; ++f) {
            subset[0] = f;
            if (k == 1) {
                ++closures;
                found = scratch.run(s, subset, n) == n;
            } else {
                found = descend(1, static_cast<Point>(f + 1));
            }
            if (closures >= closure_cap && !found)
                return {RankResult::Kind::at_least, k, upper, closures};
        }
        if (found) return {RankResult::Kind::exact, k, k, closures};
    }
    return {RankResult::Kind::exact, upper, upper, closures};
}

}  // namespace

RankResult rank(const TripleSystem& s, std::uint64_t closure_cap) {
    const auto components = connected_components(s);
    if (components.size() <= 1) return rank_connected(s, closure_cap);
    RankResult total{RankResult::Kind::exact, 0, 0, 0};
    for (const auto& comp : components) {
        const auto sub = generate_subsystem(s, comp);
        const auto r = rank_connected(sub.system, closure_cap - total.closures_used);
        total.value = static_cast<Point>(total.value + r.value);
        total.upper_bound = static_cast<Point>(total.upper_bound + r.upper_bound);
        total.closures_used += r.closures_used;
        if (r.kind != RankResult::Kind::exact) total.kind = RankResult::Kind::at_least;
    }
    return total;
}

TripleSystem disjoint_union(const TripleSystem& a, const TripleSystem& b) {
    std::vector<std::array<Point, 3>> lines = a.lines();
    const Point off = a.n_points();
    for (const auto& l : b.lines())
        lines.push_back({static_cast<Point>(l[0] + off),
                         static_cast<Point>(l[1] + off),
                         static_cast<Point>(l[2] + off)});
    return TripleSystem(static_cast<Point>(a.n_points() + b.n_points()),
                        std::move(lines));
}

}  // namespace fischer
