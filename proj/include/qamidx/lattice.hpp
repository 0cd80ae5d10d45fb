#pragma once

#include "qamidx/indexcode.hpp"

#include <cstddef>
#include <optional>

namespace qamidx {

inline constexpr int max_enumeration_dim = 12;
inline constexpr std::size_t default_witness_cap = 64;
inline constexpr std::uint64_t default_pair_budget = std::uint64_t(1) << 24;

// Full-rank integer lattice containing scale * Z^K, stored as a row basis.
struct IntegerLattice {
    IntMat basis;
    Int scale;
    Int det_abs;
};

// Row-style Hermite normal form of the lattice spanned by the input rows:
// upper triangular, positive diagonal, entries above each pivot reduced into
// [0, pivot). Redundant input rows are fine; only the nonzero rows return.
// Exact (arbitrary precision internally); throws std::overflow_error if an
// entry of the result leaves the 64-bit range.
IntMat hermite_normal_form(const IntMat& rows);

// The lattice of the expurgated zero subcode: integer span of the generators
// of the unknown messages together with M * Z^K. S must be a proper subset.
IntegerLattice construction_a(const IndexCode& code, Subset s);

// Exact LLL reduction (rational Gram-Schmidt, no floating point); delta given
// as a fraction in (1/4, 1].
IntegerLattice lll_reduce(const IntegerLattice& lat, long delta_num = 3, long delta_den = 4);

// True iff v is an integer combination of the basis rows.
bool lattice_contains(const IntegerLattice& lat, const IntVec& v);

struct ShortestVectorReport {
    Int norm_sq;
    // Minimal vectors up to sign, first nonzero coordinate positive, sorted;
    // list capped, count not.
    std::vector<IntVec> witnesses;
    std::uint64_t witness_count;
    // Some minimal vector has a coordinate not divisible by the lattice scale.
    bool any_outside_scaled_grid;
};

// Exact shortest nonzero vectors by Fincke-Pohst enumeration seeded with the
// LLL basis. Dimension guard: K <= max_enumeration_dim.
ShortestVectorReport shortest_vectors(const IntegerLattice& lat,
                                      std::size_t witness_cap = default_witness_cap);

// Minimum-norm lattice vectors outside scale * Z^K; nullopt when the lattice
// is contained in the scaled grid (no such vector exists).
std::optional<ShortestVectorReport> shortest_outside_scaled_grid(
    const IntegerLattice& lat, std::size_t witness_cap = default_witness_cap);

enum class DistanceMethod { lattice, lattice_extended, brute_force };
const char* to_string(DistanceMethod m);

// d_S^2: least squared distance within any expurgated subcode of the given
// side-information set (minimized over the known values).
struct SubsetDistance {
    Subset s;
    Int d_sq;
    DistanceMethod method;
};

// Lattice path: the subcode distance equals the shortest-vector length when a
// shortest vector survives outside M Z^K; otherwise the enumeration extends to
// the shortest vector outside the scaled grid (and cross-checks against the
// pairwise oracle when the work fits confirm_budget).
SubsetDistance subset_distance(const IndexCode& code, Subset s,
                               std::uint64_t confirm_budget = default_pair_budget);

// Ground truth: enumerate every coset value and all point pairs within each
// expurgated subcode. Work is M^|S| * C(M^|unknown|, 2) pair evaluations;
// throws budget_error beyond pair_budget.
SubsetDistance brute_force_distance(const IndexCode& code, Subset s,
                                    std::uint64_t pair_budget = default_pair_budget);

// Minimum pairwise squared distance within the single expurgated subcode
// fixed by the side-information values.
Int coset_min_distance_sq(const IndexCode& code, const SideInfo& side,
                          std::uint64_t pair_budget = default_pair_budget);

} // namespace qamidx
