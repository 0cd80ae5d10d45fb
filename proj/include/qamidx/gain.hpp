#pragma once

#include "qamidx/lattice.hpp"

namespace qamidx {

struct GainEntry {
    Subset s;
    double rate_bits_per_dim;
    Int d_sq;
    double gain_db; // 10 log10(d_sq) / R_S, in dB per bit per dimension
    DistanceMethod method;
};

struct GainReport {
    Int m;
    int k;
    double per_message_rate; // log2(M) / K, equal for every message
    std::vector<GainEntry> entries; // every proper nonempty subset, ascending mask
    double gamma_db; // minimum gain over the entries
    std::vector<Subset> argmin_subsets; // all subsets attaining it (exact comparison)
};

// R_S = (|S|/K) log2 M bits per dimension.
double rate_of_subset(const IndexCode& code, Subset s);

// 10 log10(d_S^2) / R_S for a proper nonempty subset.
double subset_gain_db(const IndexCode& code, Subset s);

// Exact three-way comparison of two gains for a common (M, K): the order of
// 10 log10(d)/R_S pairs equals the order of d1^{|S2|} versus d2^{|S1|}, which
// big-integer powers decide without logarithms. Returns -1, 0, or 1.
int compare_gain(Int d1_sq, int s1_size, Int d2_sq, int s2_size);

// Full gain evaluation. With use_symmetry (and a circulant code), distances
// are computed once per cyclic-shift class of subsets and replicated; the
// entries always cover every proper nonempty subset either way.
GainReport gamma(const IndexCode& code, bool use_symmetry = true);

} // namespace qamidx
