#pragma once

#include "qamidx/gain.hpp"

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace qamidx {

enum class FirstEntryPolicy { orbit_representatives, all };

std::string to_string(FirstEntryPolicy policy);
FirstEntryPolicy parse_first_entry_policy(const std::string& name);

// One representative per orbit of Z_M under multiplication by units: the divisors
// of M in ascending order, with M itself listed as 0. Two elements are in the
// same orbit exactly when they share their gcd with M.
std::vector<Int> orbit_representatives(const Modulus& m);

struct SearchSpec {
    Int m = 4;
    int k = 2;
    FirstEntryPolicy first_entry_policy = FirstEntryPolicy::orbit_representatives;
    // Abandon a candidate as soon as one subset gain drops strictly below the best
    // gamma found so far. Never changes the result, only the speed.
    bool prune = true;
    // Worker threads; values below 1 use the hardware concurrency. The result is
    // identical for every thread count.
    int threads = 1;
    // Report every tying generator (up to tie_cap) instead of only the smallest.
    bool all_ties = false;
    std::size_t tie_cap = 64;
    // Candidates to examine in this call; the run stops early and reports an
    // incomplete result when the cap is hit. Combined with a checkpoint this
    // slices a long search into resumable pieces.
    std::uint64_t budget = std::numeric_limits<std::uint64_t>::max();
    // When nonempty, progress is persisted here as JSON and an existing file is
    // resumed from. The file must match the spec (same M, K, policy, space).
    std::string checkpoint_path;
    std::uint64_t checkpoint_interval = 1 << 16;
};

struct SearchResult {
    double best_gamma_db = -std::numeric_limits<double>::infinity();
    // Exact pair behind best_gamma_db: the binding subset distance and size.
    Int best_d_sq = 0;
    int best_subset_size = 0;
    // Lexicographically sorted generators attaining the maximum: the smallest one,
    // or up to tie_cap of them under all_ties. Circulant search lists first rows
    // of length K, the general search row-major K*K matrices.
    std::vector<IntVec> best_rows;
    std::uint64_t tie_count = 0;
    std::uint64_t candidates_examined = 0;
    std::uint64_t candidates_valid = 0;
    std::uint64_t next_index = 0;
    std::uint64_t total_candidates = 0;
    double elapsed_seconds = 0.0;
    bool complete = false;
};

// Exhaustive search over circulant encoding matrices, maximizing the side
// information gain with exact (log-free) comparisons.
SearchResult search_circulant(const SearchSpec& spec);

// Exhaustive search over all K-by-K encoding matrices. The space grows as
// M^(K*K), so this is only viable for tiny parameters.
SearchResult search_general(const SearchSpec& spec);

} // namespace qamidx
