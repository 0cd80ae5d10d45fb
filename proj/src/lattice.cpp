#include "qamidx/lattice.hpp"

#include "qamidx/errors.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <set>
#include <stdexcept>

namespace qamidx {

namespace {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;
using BigVec = std::vector<cpp_int>;
using BigMat = std::vector<BigVec>;

BigMat to_big(const IntMat& m) {
    BigMat out(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) out[i].assign(m[i].begin(), m[i].end());
    return out;
}

Int to_int64_checked(const cpp_int& v) {
    static const cpp_int lo = std::numeric_limits<Int>::min();
    static const cpp_int hi = std::numeric_limits<Int>::max();
    if (v < lo || v > hi) throw std::overflow_error("lattice entry exceeds 64-bit range");
    return v.convert_to<Int>();
}

IntMat to_int64(const BigMat& m) {
    IntMat out(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        out[i].resize(m[i].size());
        for (std::size_t j = 0; j < m[i].size(); ++j) out[i][j] = to_int64_checked(m[i][j]);
    }
    return out;
}

cpp_int floor_div(const cpp_int& a, const cpp_int& b) {
    cpp_int q = a / b; // b > 0; truncates toward zero
    if (a % b != 0 && a < 0) --q;
    return q;
}

cpp_int round_nearest(const cpp_rational& x) {
    const cpp_int num = numerator(x);
    const cpp_int den = denominator(x); // canonical: den > 0
    return floor_div(2 * num + den, 2 * den);
}

// Row-style HNF, in place over big integers. Pivot columns strictly increase,
// so the nonzero rows come out in staircase (upper-triangular for full rank).
BigMat hnf_big(BigMat a) {
    const std::size_t ncols = a.empty() ? 0 : a[0].size();
    std::size_t r = 0;
    for (std::size_t col = 0; col < ncols && r < a.size(); ++col) {
        for (;;) {
            std::size_t best = a.size();
            for (std::size_t i = r; i < a.size(); ++i) {
                if (a[i][col] == 0) continue;
                if (best == a.size() || abs(a[i][col]) < abs(a[best][col])) best = i;
            }
            if (best == a.size()) break;
            std::swap(a[r], a[best]);
            bool leftover = false;
            for (std::size_t i = r + 1; i < a.size(); ++i) {
                if (a[i][col] == 0) continue;
                cpp_int q = a[i][col] / a[r][col];
                for (std::size_t j = 0; j < ncols; ++j) a[i][j] -= q * a[r][j];
                leftover = leftover || a[i][col] != 0;
            }
            if (!leftover) break;
        }
        if (a[r][col] == 0) continue;
        if (a[r][col] < 0)
            for (std::size_t j = 0; j < ncols; ++j) a[r][j] = -a[r][j];
        for (std::size_t i = 0; i < r; ++i) {
            cpp_int q = floor_div(a[i][col], a[r][col]);
            if (q == 0) continue;
            for (std::size_t j = 0; j < ncols; ++j) a[i][j] -= q * a[r][j];
        }
        ++r;
    }
    a.resize(r);
    return a;
}

cpp_int det_big(BigMat a) {
    const std::size_t k = a.size();
    int sign = 1;
    cpp_int prev = 1;
    for (std::size_t col = 0; col < k; ++col) {
        std::size_t pivot = col;
        while (pivot < k && a[pivot][col] == 0) ++pivot;
        if (pivot == k) return 0;
        if (pivot != col) {
            std::swap(a[pivot], a[col]);
            sign = -sign;
        }
        for (std::size_t i = col + 1; i < k; ++i) {
            for (std::size_t j = col + 1; j < k; ++j)
                a[i][j] = (a[i][j] * a[col][col] - a[i][col] * a[col][j]) / prev;
            a[i][col] = 0;
        }
        prev = a[col][col];
    }
    return sign * a[k - 1][k - 1];
}

struct Gso {
    std::vector<std::vector<cpp_rational>> mu;
    std::vector<cpp_rational> b_norm; // squared lengths of the orthogonalized rows
};

Gso compute_gso(const BigMat& b) {
    const std::size_t n = b.size();
    const std::size_t dim = b[0].size();
    std::vector<std::vector<cpp_rational>> star(n, std::vector<cpp_rational>(dim));
    Gso g;
    g.mu.assign(n, std::vector<cpp_rational>(n, cpp_rational(0)));
    g.b_norm.assign(n, cpp_rational(0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t d = 0; d < dim; ++d) star[i][d] = cpp_rational(b[i][d]);
        for (std::size_t j = 0; j < i; ++j) {
            cpp_rational dot = 0;
            for (std::size_t d = 0; d < dim; ++d) dot += cpp_rational(b[i][d]) * star[j][d];
            g.mu[i][j] = dot / g.b_norm[j];
            for (std::size_t d = 0; d < dim; ++d) star[i][d] -= g.mu[i][j] * star[j][d];
        }
        for (std::size_t d = 0; d < dim; ++d) g.b_norm[i] += star[i][d] * star[i][d];
    }
    return g;
}

BigMat lll_big(BigMat b, const cpp_rational& delta) {
    const std::size_t n = b.size();
    if (n <= 1) return b;
    Gso g = compute_gso(b);
    std::size_t k = 1;
    while (k < n) {
        for (std::size_t j = k; j-- > 0;) {
            cpp_int q = round_nearest(g.mu[k][j]);
            if (q == 0) continue;
            for (std::size_t d = 0; d < b[k].size(); ++d) b[k][d] -= q * b[j][d];
            g = compute_gso(b);
        }
        cpp_rational lovasz = (delta - g.mu[k][k - 1] * g.mu[k][k - 1]) * g.b_norm[k - 1];
        if (g.b_norm[k] >= lovasz) {
            ++k;
        } else {
            std::swap(b[k], b[k - 1]);
            g = compute_gso(b);
            k = k > 1 ? k - 1 : 1;
        }
    }
    return b;
}

void validate_lattice(const IntegerLattice& lat) {
    if (lat.basis.empty()) throw std::invalid_argument("empty lattice basis");
    const std::size_t dim = lat.basis[0].size();
    if (lat.basis.size() != dim) throw std::invalid_argument("lattice basis must be square");
    for (const auto& row : lat.basis)
        if (row.size() != dim) throw std::invalid_argument("ragged lattice basis");
    if (lat.scale < 2) throw std::invalid_argument("lattice scale must be at least 2");
}

bool divisible_by(const IntVec& v, Int scale) {
    for (Int x : v)
        if (x % scale != 0) return false;
    return true;
}

void canonicalize_sign(IntVec& v) {
    for (Int x : v) {
        if (x > 0) return;
        if (x < 0) break;
    }
    for (Int& x : v) x = -x;
}

// Depth-first Fincke-Pohst over the (already reduced) basis. Pruning runs in
// double precision with a half-unit slack above the exact integer bound, and
// every surviving leaf is re-checked in exact arithmetic, so float rounding
// can widen the search but never lose a minimal vector. When outside_only is
// set, only vectors with some coordinate not divisible by the scale count
// (and the result is empty when the whole lattice lies in the scaled grid).
std::optional<ShortestVectorReport> enumerate_minimal(const IntegerLattice& red,
                                                      std::size_t witness_cap,
                                                      bool outside_only) {
    const IntMat& b = red.basis;
    const int n = int(b.size());

    Int best = -1;
    for (const auto& row : b) {
        if (outside_only && divisible_by(row, red.scale)) continue;
        Int ns = norm_sq(row);
        if (best < 0 || ns < best) best = ns;
    }
    if (best < 0) return std::nullopt;

    Gso g = compute_gso(to_big(b));
    std::vector<std::vector<double>> mu(n, std::vector<double>(n, 0.0));
    std::vector<double> bn(n);
    for (int i = 0; i < n; ++i) {
        bn[i] = g.b_norm[i].convert_to<double>();
        for (int j = 0; j < i; ++j) mu[i][j] = g.mu[i][j].convert_to<double>();
    }

    double bound_d = double(best) + 0.5;
    std::set<IntVec> found;
    bool any_outside = false;
    std::vector<Int> z(n, 0);

    auto visit_leaf = [&]() {
        IntVec v(n, 0);
        for (int i = 0; i < n; ++i) {
            if (z[i] == 0) continue;
            for (int d = 0; d < n; ++d)
                v[d] = checked_add(v[d], checked_mul(z[i], b[i][d]));
        }
        bool zero = std::all_of(v.begin(), v.end(), [](Int x) { return x == 0; });
        if (zero) return;
        bool outside = !divisible_by(v, red.scale);
        if (outside_only && !outside) return;
        Int ns = norm_sq(v);
        if (ns > best) return;
        if (ns < best) {
            best = ns;
            bound_d = double(best) + 0.5;
            found.clear();
            any_outside = false;
        }
        canonicalize_sign(v);
        found.insert(std::move(v));
        any_outside = any_outside || outside;
    };

    std::function<void(int, double)> descend = [&](int i, double used) {
        if (i < 0) {
            visit_leaf();
            return;
        }
        double t = 0;
        for (int j = i + 1; j < n; ++j) t += mu[j][i] * double(z[j]);
        double budget = bound_d - used;
        if (budget < 0) return;
        double span = std::sqrt(budget / bn[i]);
        Int lo = Int(std::ceil(-span - t - 1e-9));
        Int hi = Int(std::floor(span - t + 1e-9));
        for (z[i] = lo; z[i] <= hi; ++z[i]) {
            double c = double(z[i]) + t;
            double contrib = c * c * bn[i];
            if (used + contrib > bound_d) continue;
            descend(i - 1, used + contrib);
        }
        z[i] = 0;
    };
    descend(n - 1, 0.0);

    ShortestVectorReport rep;
    rep.norm_sq = best;
    rep.witness_count = found.size();
    rep.any_outside_scaled_grid = any_outside;
    for (const auto& w : found) {
        if (rep.witnesses.size() >= witness_cap) break;
        rep.witnesses.push_back(w);
    }
    return rep;
}

void validate_subset(const IndexCode& code, Subset s) {
    if ((s & ~full_subset(code.k)) != 0)
        throw std::invalid_argument("subset contains message indices beyond K");
    if (s == full_subset(code.k))
        throw std::invalid_argument("side-information set must be a proper subset");
}

std::uint64_t saturating_pow(Int base, int exp, std::uint64_t limit) {
    std::uint64_t r = 1;
    for (int i = 0; i < exp; ++i) {
        if (r > limit / std::uint64_t(base)) return std::numeric_limits<std::uint64_t>::max();
        r *= std::uint64_t(base);
    }
    return r;
}

// Pair-enumeration work for the brute-force oracle; saturates instead of
// overflowing so budget comparisons stay valid.
std::uint64_t pairwise_work(const IndexCode& code, Subset s) {
    const std::uint64_t sat = std::numeric_limits<std::uint64_t>::max();
    const int unknown = code.k - subset_size(s);
    std::uint64_t points = saturating_pow(code.modulus.value(), unknown, sat);
    std::uint64_t cosets = saturating_pow(code.modulus.value(), subset_size(s), sat);
    if (points == sat || cosets == sat) return sat;
    unsigned __int128 pairs = (unsigned __int128)points * (points - 1) / 2;
    if (pairs > sat || (pairs != 0 && cosets > sat / std::uint64_t(pairs))) return sat;
    return std::uint64_t(pairs) * cosets;
}

} // namespace

IntMat hermite_normal_form(const IntMat& rows) {
    if (rows.empty()) return {};
    const std::size_t ncols = rows[0].size();
    for (const auto& r : rows)
        if (r.size() != ncols) throw std::invalid_argument("ragged input rows");
    return to_int64(hnf_big(to_big(rows)));
}

IntegerLattice construction_a(const IndexCode& code, Subset s) {
    validate_subset(code, s);
    BigMat rows;
    for (int i = 1; i <= code.k; ++i)
        if (!subset_contains(s, i)) rows.emplace_back(code.c[i - 1].begin(), code.c[i - 1].end());
    for (int i = 0; i < code.k; ++i) {
        BigVec e(code.k, 0);
        e[i] = code.modulus.value();
        rows.push_back(std::move(e));
    }
    IntMat basis = to_int64(hnf_big(std::move(rows)));
    // the scaled identity rows force full rank K
    Int det = 1;
    for (int i = 0; i < code.k; ++i) det = checked_mul(det, basis[i][i]);
    return IntegerLattice{std::move(basis), code.modulus.value(), det};
}

IntegerLattice lll_reduce(const IntegerLattice& lat, long delta_num, long delta_den) {
    validate_lattice(lat);
    if (delta_den <= 0 || 4 * delta_num <= delta_den || delta_num > delta_den)
        throw std::invalid_argument("LLL delta must lie in (1/4, 1]");
    cpp_int d = det_big(to_big(lat.basis));
    if (d == 0) throw std::invalid_argument("lattice basis is not full rank");
    BigMat reduced = lll_big(to_big(lat.basis), cpp_rational(delta_num, delta_den));
    return IntegerLattice{to_int64(reduced), lat.scale, to_int64_checked(abs(d))};
}

bool lattice_contains(const IntegerLattice& lat, const IntVec& v) {
    validate_lattice(lat);
    if (v.size() != lat.basis.size())
        throw std::invalid_argument("vector dimension mismatch");
    BigMat h = hnf_big(to_big(lat.basis));
    if (h.size() != lat.basis.size()) throw std::invalid_argument("lattice basis is not full rank");
    BigVec x(v.begin(), v.end());
    for (std::size_t col = 0; col < x.size(); ++col) {
        if (x[col] % h[col][col] != 0) return false;
        cpp_int q = x[col] / h[col][col];
        if (q == 0) continue;
        for (std::size_t j = col; j < x.size(); ++j) x[j] -= q * h[col][j];
    }
    return std::all_of(x.begin(), x.end(), [](const cpp_int& t) { return t == 0; });
}

ShortestVectorReport shortest_vectors(const IntegerLattice& lat, std::size_t witness_cap) {
    validate_lattice(lat);
    if (int(lat.basis.size()) > max_enumeration_dim)
        throw std::invalid_argument("enumeration dimension guard exceeded");
    IntegerLattice red = lll_reduce(lat);
    return *enumerate_minimal(red, witness_cap, false);
}

std::optional<ShortestVectorReport> shortest_outside_scaled_grid(const IntegerLattice& lat,
                                                                 std::size_t witness_cap) {
    validate_lattice(lat);
    if (int(lat.basis.size()) > max_enumeration_dim)
        throw std::invalid_argument("enumeration dimension guard exceeded");
    IntegerLattice red = lll_reduce(lat);
    return enumerate_minimal(red, witness_cap, true);
}

const char* to_string(DistanceMethod m) {
    switch (m) {
        case DistanceMethod::lattice: return "lattice";
        case DistanceMethod::lattice_extended: return "lattice_extended";
        case DistanceMethod::brute_force: return "brute_force";
    }
    return "?";
}

Int coset_min_distance_sq(const IndexCode& code, const SideInfo& side,
                          std::uint64_t pair_budget) {
    const int unknown = code.k - subset_size(side.subset);
    std::uint64_t points = saturating_pow(code.modulus.value(), unknown, pair_budget);
    unsigned __int128 pairs = (unsigned __int128)points * (points - 1) / 2;
    if (points == std::numeric_limits<std::uint64_t>::max() || pairs > pair_budget)
        throw budget_error("per-coset pair enumeration exceeds budget " +
                           std::to_string(pair_budget));
    std::vector<IntVec> pts = subcode_points(code, side, points);
    Int best = -1;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            Int d = 0;
            for (int t = 0; t < code.k; ++t) {
                Int diff = pts[i][t] - pts[j][t];
                d += diff * diff;
            }
            if (best < 0 || d < best) best = d;
        }
    return best;
}

SubsetDistance brute_force_distance(const IndexCode& code, Subset s,
                                    std::uint64_t pair_budget) {
    validate_subset(code, s);
    if (pairwise_work(code, s) > pair_budget)
        throw budget_error("pairwise distance enumeration exceeds budget " +
                           std::to_string(pair_budget));
    std::vector<int> known;
    for (int i = 1; i <= code.k; ++i)
        if (subset_contains(s, i)) known.push_back(i - 1);

    const Int m = code.modulus.value();
    IntVec values(code.k, 0);
    IntVec digits(known.size(), 0);
    Int best = -1;
    for (;;) {
        for (std::size_t d = 0; d < known.size(); ++d)
            values[known[d]] = symmetric_mod(digits[d], code.modulus);
        Int coset = coset_min_distance_sq(code, SideInfo{s, values}, pair_budget);
        if (best < 0 || coset < best) best = coset;
        if (best == 1) break; // squared distances on the integer grid cannot go lower
        int d = int(known.size()) - 1;
        while (d >= 0 && digits[d] == m - 1) digits[d--] = 0;
        if (d < 0) break;
        ++digits[d];
    }
    return SubsetDistance{s, best, DistanceMethod::brute_force};
}

SubsetDistance subset_distance(const IndexCode& code, Subset s, std::uint64_t confirm_budget) {
    validate_subset(code, s);
    IntegerLattice red = lll_reduce(construction_a(code, s));
    ShortestVectorReport rep = *enumerate_minimal(red, 1, false);
    if (rep.any_outside_scaled_grid)
        return SubsetDistance{s, rep.norm_sq, DistanceMethod::lattice};

    // Every shortest vector lies in M Z^K, which only bounds the subcode
    // distance from below; the exact value is the shortest vector outside the
    // scaled grid. A valid code always has one (each generator row reduces to
    // a nonzero representative).
    std::optional<ShortestVectorReport> ext = enumerate_minimal(red, 1, true);
    if (!ext)
        throw invalid_code_error("subcode lattice is contained in the scaled grid");
    if (pairwise_work(code, s) <= confirm_budget) {
        SubsetDistance oracle = brute_force_distance(code, s, confirm_budget);
        if (oracle.d_sq != ext->norm_sq)
            throw std::logic_error("lattice distance disagrees with the pairwise oracle");
    }
    return SubsetDistance{s, ext->norm_sq, DistanceMethod::lattice_extended};
}

} // namespace qamidx
