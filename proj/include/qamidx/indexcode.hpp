#pragma once

#include "qamidx/modring.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qamidx {

// Subsets of message indices {1,...,K} as bitmasks: bit i-1 <=> message i known.
using Subset = std::uint32_t;

Subset full_subset(int k);
int subset_size(Subset s);
bool subset_contains(Subset s, int index);            // 1-based index
Subset subset_complement(Subset s, int k);
Subset cyclic_shift_subset(Subset s, int k);          // message i -> i+1, K wraps to 1
std::string format_subset(Subset s, int k);           // "{1,3}"; empty set -> "{}"
Subset parse_subset(const std::string& text, int k);  // comma-separated 1-based indices; "" -> empty

// A Z_M-linear code on the grid Z_M^K: messages w map to x = w C mod M with
// symmetric representatives, so codewords are QAM points directly. Rows of C
// are the per-message generators.
struct IndexCode {
    Modulus modulus;
    int k;
    IntMat c;
    bool circulant;
};

// Circulant construction: row i is the right cyclic shift of row i-1. Throws
// invalid_code_error when det(C) is not a unit (encoder not bijective).
IndexCode make_circulant(Modulus m, int k, const IntVec& first_row);

// Arbitrary square generator matrix; the circulant flag is detected.
IndexCode make_general(Modulus m, const IntMat& c);

IntVec encode(const IndexCode& code, const IntVec& w);

// C^{-1} mod M via adjugate times det^{-1}; exists because det is a unit.
IntMat inverse_matrix(const IndexCode& code);

// Nearest grid point (per-coordinate round then clamp into the symmetric set;
// rounding ties go to the smaller value), mapped back through the inverse.
IntVec decode(const IndexCode& code, const std::vector<double>& y);

struct SideInfo {
    Subset subset = 0;
    IntVec values;  // length k; read only at indices in subset
};

inline constexpr std::uint64_t default_enumeration_cap = std::uint64_t(1) << 20;

// The expurgated subcode: all codewords consistent with the known values.
// Unknown messages sweep canonical residues 0..M-1 lexicographically, lower
// index most significant. Throws budget_error when M^|unknown| exceeds cap.
std::vector<IntVec> subcode_points(const IndexCode& code, const SideInfo& side,
                                   std::uint64_t cap = default_enumeration_cap);

// Exhaustive nearest-point decoding over the expurgated subcode; entries of
// the result at known indices echo the side information. Distance ties break
// toward the earlier enumerated point.
IntVec decode(const IndexCode& code, const std::vector<double>& y,
              const SideInfo& side, std::uint64_t cap = default_enumeration_cap);

} // namespace qamidx
