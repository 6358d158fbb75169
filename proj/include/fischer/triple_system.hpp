#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace fischer {

using Point = std::uint32_t;
inline constexpr Point no_point = std::numeric_limits<Point>::max();

// A permutation of a point set. Line preservation is a property checked
// separately (is_automorphism); the type itself only guarantees bijectivity.
struct Automorphism {
    std::vector<Point> image;

    Point operator()(Point p) const { return image[p]; }
    std::size_t size() const noexcept { return image.size(); }
    bool is_identity() const;
    Automorphism after(const Automorphism& first) const;  // (*this) ∘ first
    Automorphism inverse() const;

    friend bool operator==(const Automorphism&, const Automorphism&) = default;
};

Automorphism identity_automorphism(Point n);

// A partial triple system: n points, 3-element lines, any two distinct lines
// meeting in at most one point. Lines are canonicalized (each ascending, the
// list sorted) so equal systems compare equal and files re-emit bit-exactly.
class TripleSystem {
public:
    TripleSystem(Point n_points, std::vector<std::array<Point, 3>> lines);

    Point n_points() const noexcept { return n_; }
    const std::vector<std::array<Point, 3>>& lines() const noexcept { return lines_; }
    std::uint32_t n_lines() const noexcept { return static_cast<std::uint32_t>(lines_.size()); }

    // Third point on the line through p and q, or no_point when none.
    // Bounds and p != q are the caller's responsibility on this fast path.
    Point third_raw(Point p, Point q) const noexcept { return third_[std::size_t{p} * n_ + q]; }
    bool collinear(Point p, Point q) const noexcept { return third_raw(p, q) != no_point; }
    std::uint32_t degree(Point p) const noexcept { return degree_[p]; }

    friend bool operator==(const TripleSystem&, const TripleSystem&);

private:
    Point n_;
    std::vector<std::array<Point, 3>> lines_;
    std::vector<Point> third_;  // flat n*n pair index
    std::vector<std::uint32_t> degree_;
};

// Checked variant of TripleSystem::third_raw.
std::optional<Point> third_point(const TripleSystem& s, Point p, Point q);

// A subsystem given by original point ids plus the induced system on local
// ids; points[i] is the original id of local point i, ascending.
struct Subsystem {
    std::vector<Point> points;
    TripleSystem system;
};

// Least subsystem whose point set contains the seed: closes under
// "two points of a line present => the third as well".
Subsystem generate_subsystem(const TripleSystem& s, std::vector<Point> seed);

enum class PlaneTag { DA22, AG23, Other };

struct PlaneClass {
    PlaneTag tag;
    Point n_points;
    std::uint32_t n_lines;
};

struct PlaneEntry {
    std::uint32_t line_a, line_b;  // indices into lines(), line_a < line_b
    Subsystem plane;
    PlaneClass cls;
};

// All planes, one entry per unordered pair of distinct lines meeting in
// exactly one point. Materializes every plane; meant for small systems.
std::vector<PlaneEntry> planes(const TripleSystem& s);

// Streaming census of plane classes; does not keep the planes.
struct PlaneCensus {
    std::uint64_t n_da22 = 0, n_ag23 = 0, n_other = 0;
    std::uint32_t first_other_a = 0, first_other_b = 0;  // witness line pair
    bool all_fischer() const noexcept { return n_other == 0; }
};
PlaneCensus classify_all_planes(const TripleSystem& s);

// True iff every plane is DA(2,2) or AG(2,3). Plane classes are decided by
// (point, line) counts; the first plane of each class per call is verified
// against a reference instance by full isomorphism.
bool is_fischer(const TripleSystem& s);

// Collinearity-connectivity classes, each ascending, ordered by least point.
std::vector<std::vector<Point>> connected_components(const TripleSystem& s);

struct RankResult {
    enum class Kind { exact, at_least, unknown } kind;
    Point value;        // exact rank, or a certified lower bound
    Point upper_bound;  // greedy upper bound; equals value when exact
    std::uint64_t closures_used;
};

// Minimum size of a generating point set, by iterative deepening over seed
// sizes. Point-transitive inputs pin the first seed to point 0. The cap
// bounds the number of closure computations before giving up on exactness.
RankResult rank(const TripleSystem& s, std::uint64_t closure_cap = 10'000'000);

// The point reflection map of p: fixes p and everything not collinear with
// p, swaps q and r for every line {p,q,r}. An automorphism exactly when the
// system is a Fischer space.
Automorphism tau(const TripleSystem& s, Point p);

bool is_automorphism(const TripleSystem& s, const Automorphism& a);

struct TauAxiomReport {
    bool automorphisms_ok = true;          // every tau(p) maps lines to lines
    bool involutions_ok = true;            // tau(p)^2 = id
    bool noncollinear_commute_ok = true;   // [tau(p), tau(q)] = id off lines
    bool collinear_conjugation_ok = true;  // tau(p)^tau(q) = tau(q)^tau(p) on lines
    bool equivariance_ok = true;           // tau(p^tau(q)) = tau(p)^tau(q)
    std::string failure;                   // first counterexample, empty if ok
    bool ok() const noexcept {
        return automorphisms_ok && involutions_ok && noncollinear_commute_ok &&
               collinear_conjugation_ok && equivariance_ok;
    }
};
TauAxiomReport tau_axiom_check(const TripleSystem& s);

struct CommutationCheck {
    bool holds = true;
    std::array<Point, 3> witness{no_point, no_point, no_point};
};

// Scans ordered point triples (x,y,z) for tau(x)tau(y)tau(z) =
// tau(z)tau(y)tau(x); reports the lexicographically first violation.
CommutationCheck affine_tau_commutation(const TripleSystem& s);

// Searches for a line-preserving point bijection s1 -> s2. Definitive on
// systems of at most 100 points; larger inputs throw std::length_error.
std::optional<std::vector<Point>> isomorphic(const TripleSystem& s1,
                                             const TripleSystem& s2);

// Points of b appended after points of a; no lines across the parts.
TripleSystem disjoint_union(const TripleSystem& a, const TripleSystem& b);

}  // namespace fischer
