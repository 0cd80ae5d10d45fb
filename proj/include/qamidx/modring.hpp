#pragma once

#include <cstdint>
#include <vector>

namespace qamidx {

// Ring elements are plain integers kept in the symmetric representative set of
// Z_M: {-M/2, ..., M/2 - 1} for even M, {-(M-1)/2, ..., (M-1)/2} for odd M.
// This centering makes codewords QAM points directly and gives the reduction
// the key property |a mod M| <= |a|.
using Int = std::int64_t;
using IntVec = std::vector<Int>;
using IntMat = std::vector<IntVec>;

class Modulus {
public:
    explicit Modulus(Int m);

    Int value() const { return m_; }
    bool even() const { return m_ % 2 == 0; }
    // Bounds of the symmetric representative set.
    Int sym_min() const { return even() ? -m_ / 2 : -(m_ - 1) / 2; }
    Int sym_max() const { return even() ? m_ / 2 - 1 : (m_ - 1) / 2; }

    friend bool operator==(Modulus a, Modulus b) { return a.m_ == b.m_; }
    friend bool operator!=(Modulus a, Modulus b) { return a.m_ != b.m_; }

private:
    Int m_;
};

// Overflow-checked machine arithmetic; throws std::overflow_error instead of
// wrapping. All ring arithmetic in the library goes through these.
Int checked_add(Int a, Int b);
Int checked_sub(Int a, Int b);
Int checked_mul(Int a, Int b);

// The unique representative of a mod M in the symmetric set.
Int symmetric_mod(Int a, Modulus m);
bool in_symmetric_set(Int a, Modulus m);

// Units of Z_M are exactly the residues coprime to M.
bool is_unit(Int a, Modulus m);
// Multiplicative inverse of a unit; throws std::invalid_argument otherwise.
Int inverse_mod(Int a, Modulus m);

Int add_mod(Int a, Int b, Modulus m);
Int sub_mod(Int a, Int b, Modulus m);
Int mul_mod(Int a, Int b, Modulus m);

// Determinant reduced to the symmetric set. Exact: fraction-free elimination
// over arbitrary-precision integers, reduced once at the end. Throws
// std::invalid_argument on non-square input.
Int det_mod(const IntMat& c, Modulus m);

// Componentwise operations followed by symmetric reduction.
IntVec vec_mod(const IntVec& x, Modulus m);
IntVec vec_add(const IntVec& a, const IntVec& b, Modulus m);
IntVec vec_sub(const IntVec& a, const IntVec& b, Modulus m);
IntVec scalar_mul(Int s, const IntVec& v, Modulus m);

// Squared Euclidean norm as an exact integer.
Int norm_sq(const IntVec& v);

} // namespace qamidx
