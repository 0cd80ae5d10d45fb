#include "qamidx/indexcode.hpp"

#include "qamidx/errors.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace qamidx {

Subset full_subset(int k) {
    if (k < 0 || k > 31) throw std::invalid_argument("subset universe size out of range");
    return (Subset(1) << k) - 1;
}

int subset_size(Subset s) { return std::popcount(s); }

bool subset_contains(Subset s, int index) {
    return index >= 1 && index <= 32 && (s >> (index - 1) & 1u);
}

Subset subset_complement(Subset s, int k) { return full_subset(k) & ~s; }

Subset cyclic_shift_subset(Subset s, int k) {
    Subset mask = full_subset(k);
    return ((s << 1) | (s >> (k - 1))) & mask;
}

std::string format_subset(Subset s, int k) {
    std::string out = "{";
    bool first = true;
    for (int i = 1; i <= k; ++i) {
        if (!subset_contains(s, i)) continue;
        if (!first) out += ",";
        out += std::to_string(i);
        first = false;
    }
    out += "}";
    return out;
}

Subset parse_subset(const std::string& text, int k) {
    Subset s = 0;
    std::stringstream in(text);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        // trim blanks and optional braces
        std::string t;
        for (char c : tok)
            if (c != ' ' && c != '{' && c != '}') t += c;
        if (t.empty()) continue;
        int idx;
        try {
            std::size_t pos = 0;
            idx = std::stoi(t, &pos);
            if (pos != t.size()) throw std::invalid_argument(t);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad subset element '" + t + "'");
        }
        if (idx < 1 || idx > k)
            throw std::invalid_argument("subset element " + std::to_string(idx) +
                                        " outside 1.." + std::to_string(k));
        s |= Subset(1) << (idx - 1);
    }
    return s;
}

namespace {

void validate_or_throw(const IndexCode& code) {
    Int d = det_mod(code.c, code.modulus);
    if (!is_unit(d, code.modulus))
        throw invalid_code_error("det(C) = " + std::to_string(d) + " is not a unit of Z_" +
                                 std::to_string(code.modulus.value()) +
                                 "; the encoder is not uniquely decodable");
}

bool detect_circulant(const IntMat& c) {
    const std::size_t k = c.size();
    for (std::size_t i = 1; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            if (c[i][j] != c[0][(j + k - i) % k]) return false;
    return true;
}

} // namespace

IndexCode make_circulant(Modulus m, int k, const IntVec& first_row) {
    if (k < 2) throw std::invalid_argument("need at least 2 messages");
    if (first_row.size() != std::size_t(k))
        throw std::invalid_argument("first row must have K entries");
    IntVec row = vec_mod(first_row, m);
    IntMat c(k, IntVec(k));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) c[i][j] = row[(j - i + k) % k];
    IndexCode code{m, k, std::move(c), true};
    validate_or_throw(code);
    return code;
}

IndexCode make_general(Modulus m, const IntMat& c) {
    const int k = int(c.size());
    if (k < 2) throw std::invalid_argument("need at least 2 messages");
    IntMat reduced(k);
    for (int i = 0; i < k; ++i) {
        if (c[i].size() != std::size_t(k))
            throw std::invalid_argument("generator matrix must be square");
        reduced[i] = vec_mod(c[i], m);
    }
    bool circ = detect_circulant(reduced);
    IndexCode code{m, k, std::move(reduced), circ};
    validate_or_throw(code);
    return code;
}

IntVec encode(const IndexCode& code, const IntVec& w) {
    if (w.size() != std::size_t(code.k))
        throw std::invalid_argument("message tuple must have K entries");
    IntVec x(code.k, 0);
    for (int i = 0; i < code.k; ++i) {
        Int wi = symmetric_mod(w[i], code.modulus);
        if (wi == 0) continue;
        for (int j = 0; j < code.k; ++j)
            x[j] = checked_add(x[j], checked_mul(wi, code.c[i][j]));
    }
    return vec_mod(x, code.modulus);
}

IntMat inverse_matrix(const IndexCode& code) {
    const int k = code.k;
    const Modulus m = code.modulus;
    Int det_inv = inverse_mod(det_mod(code.c, m), m);
    IntMat inv(k, IntVec(k));
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            IntMat minor;
            minor.reserve(k - 1);
            for (int r = 0; r < k; ++r) {
                if (r == i) continue;
                IntVec row;
                row.reserve(k - 1);
                for (int c2 = 0; c2 < k; ++c2)
                    if (c2 != j) row.push_back(code.c[r][c2]);
                minor.push_back(std::move(row));
            }
            Int cof = det_mod(minor, m);
            if ((i + j) % 2 == 1) cof = symmetric_mod(-cof, m);
            inv[j][i] = mul_mod(cof, det_inv, m); // adjugate transposes
        }
    }
    return inv;
}

namespace {

Int nearest_symmetric(double y, Modulus m) {
    // round half toward the smaller value, then clamp into the symmetric set
    double r = std::ceil(y - 0.5);
    if (r < double(m.sym_min())) return m.sym_min();
    if (r > double(m.sym_max())) return m.sym_max();
    return Int(r);
}

IntVec invert_to_message(const IndexCode& code, const IntVec& x) {
    IntMat inv = inverse_matrix(code);
    IntVec w(code.k, 0);
    for (int i = 0; i < code.k; ++i) {
        for (int j = 0; j < code.k; ++j)
            w[j] = checked_add(w[j], checked_mul(x[i], inv[i][j]));
    }
    return vec_mod(w, code.modulus);
}

} // namespace

IntVec decode(const IndexCode& code, const std::vector<double>& y) {
    if (y.size() != std::size_t(code.k))
        throw std::invalid_argument("received vector must have K entries");
    IntVec x(code.k);
    for (int j = 0; j < code.k; ++j) x[j] = nearest_symmetric(y[j], code.modulus);
    return invert_to_message(code, x);
}

namespace {

std::uint64_t checked_pow_count(Int m, int exponent, std::uint64_t cap) {
    std::uint64_t count = 1;
    for (int i = 0; i < exponent; ++i) {
        if (count > cap / std::uint64_t(m))
            throw budget_error("subcode enumeration of M^" + std::to_string(exponent) +
                               " points exceeds cap " + std::to_string(cap));
        count *= std::uint64_t(m);
    }
    if (count > cap)
        throw budget_error("subcode enumeration of " + std::to_string(count) +
                           " points exceeds cap " + std::to_string(cap));
    return count;
}

// Invokes fn(w) for every message tuple consistent with the side information,
// in lexicographic order of the unknown entries (canonical residues 0..M-1,
// lower message index most significant).
template <typename Fn>
void for_each_consistent_message(const IndexCode& code, const SideInfo& side,
                                 std::uint64_t cap, Fn&& fn) {
    if (side.subset != 0 && side.values.size() != std::size_t(code.k))
        throw std::invalid_argument("side information values must have K entries");
    std::vector<int> unknown;
    for (int i = 1; i <= code.k; ++i)
        if (!subset_contains(side.subset, i)) unknown.push_back(i - 1);
    const Int m = code.modulus.value();
    checked_pow_count(m, int(unknown.size()), cap);

    IntVec w(code.k, 0);
    for (int i = 0; i < code.k; ++i)
        if (subset_contains(side.subset, i + 1))
            w[i] = symmetric_mod(side.values[i], code.modulus);

    IntVec digits(unknown.size(), 0);
    for (;;) {
        for (std::size_t d = 0; d < unknown.size(); ++d)
            w[unknown[d]] = symmetric_mod(digits[d], code.modulus);
        fn(w);
        int d = int(unknown.size()) - 1;
        while (d >= 0 && digits[d] == m - 1) digits[d--] = 0;
        if (d < 0) break;
        ++digits[d];
    }
}

} // namespace

std::vector<IntVec> subcode_points(const IndexCode& code, const SideInfo& side,
                                   std::uint64_t cap) {
    std::vector<IntVec> points;
    for_each_consistent_message(code, side, cap,
                                [&](const IntVec& w) { points.push_back(encode(code, w)); });
    return points;
}

IntVec decode(const IndexCode& code, const std::vector<double>& y,
              const SideInfo& side, std::uint64_t cap) {
    if (y.size() != std::size_t(code.k))
        throw std::invalid_argument("received vector must have K entries");
    double best = std::numeric_limits<double>::infinity();
    IntVec best_w;
    for_each_consistent_message(code, side, cap, [&](const IntVec& w) {
        IntVec x = encode(code, w);
        double d = 0;
        for (int j = 0; j < code.k; ++j) {
            double diff = y[j] - double(x[j]);
            d += diff * diff;
        }
        if (d < best) {
            best = d;
            best_w = w;
        }
    });
    return best_w;
}

} // namespace qamidx
