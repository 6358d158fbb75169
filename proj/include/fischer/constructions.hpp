#pragma once

#include <vector>

#include "fischer/triple_system.hpp"

namespace fischer {

// Involutions on a common finite domain, as permutation arrays. Construction
// validates that every generator is a fixed-point-allowed involution (order
// exactly 2) on the domain.
struct InvolutionSet {
    Point domain;
    std::vector<std::vector<Point>> generators;

    InvolutionSet(Point domain, std::vector<std::vector<Point>> gens);
};

// Transpositions of Sym(n) with lines {c, d, c^d} for |cd| = 3: one line per
// 3-subset of {1..n}. Points ordered by lexicographic (i, j), i < j.
TripleSystem sym_fischer(int n);

// 3^n vectors over F_3 with the 1-flats as lines {x, y, -x-y}. Points ordered
// by base-3 little-endian encoding. n is capped at 7 by the size budget.
TripleSystem affine_space(int n);

// The dual affine plane of order 2: points {p,q,r,s,t,u} as 0..5, lines
// {p,r,s}, {p,t,u}, {q,r,t}, {q,s,u}.
TripleSystem dual_affine_plane();

// Generic construction: D = closure of the generators under conjugation,
// points = D in lexicographic permutation order, lines {c, d, c^d} for
// |cd| = 3. Throws if some pair of D has product order outside {1,2,3}.
TripleSystem fischer_from_involutions(const InvolutionSet& gens);

// The affine space realized as the Fischer space of the point reflections
// x -> v - x acting on F_3^n; asserts isomorphism with affine_space(n).
TripleSystem affine_as_fs(int n);

// The 81-point Hall triple system: points F_3^4, lines {x, y, -(x o y)} for
// the commutative Moufang loop product
//   x o y = (x1+y1, x2+y2, x3+y3, x4+y4+(x1-y1)(x2*y3-x3*y2)).
// Validates point count, line count and full pair coverage; the plane census
// and the commutation scan that certify its exotic type live in the checks
// built on top of it.
TripleSystem hall_triple_81();

}  // namespace fischer
