#include "qamidx/modring.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <numeric>
#include <stdexcept>
#include <string>

namespace qamidx {

namespace {
using boost::multiprecision::cpp_int;

[[noreturn]] void overflow(const char* op) {
    throw std::overflow_error(std::string("integer overflow in ") + op);
}
} // namespace

Modulus::Modulus(Int m) : m_(m) {
    if (m < 2) throw std::invalid_argument("modulus must be at least 2");
}

Int checked_add(Int a, Int b) {
    Int r;
    if (__builtin_add_overflow(a, b, &r)) overflow("addition");
    return r;
}

Int checked_sub(Int a, Int b) {
    Int r;
    if (__builtin_sub_overflow(a, b, &r)) overflow("subtraction");
    return r;
}

Int checked_mul(Int a, Int b) {
    Int r;
    if (__builtin_mul_overflow(a, b, &r)) overflow("multiplication");
    return r;
}

Int symmetric_mod(Int a, Modulus m) {
    const Int M = m.value();
    Int r = a % M;
    if (r < 0) r += M;
    if (r > m.sym_max()) r -= M;
    return r;
}

bool in_symmetric_set(Int a, Modulus m) {
    return a >= m.sym_min() && a <= m.sym_max();
}

bool is_unit(Int a, Modulus m) {
    Int r = symmetric_mod(a, m);
    if (r < 0) r += m.value(); // gcd wants a non-negative residue
    return std::gcd(r, m.value()) == 1;
}

Int inverse_mod(Int a, Modulus m) {
    // Extended Euclid on (residue, M).
    const Int M = m.value();
    Int r = symmetric_mod(a, m);
    if (r < 0) r += M;
    Int old_r = r, cur_r = M;
    Int old_s = 1, cur_s = 0;
    while (cur_r != 0) {
        Int q = old_r / cur_r;
        Int tmp = old_r - q * cur_r;
        old_r = cur_r;
        cur_r = tmp;
        tmp = old_s - q * cur_s;
        old_s = cur_s;
        cur_s = tmp;
    }
    if (old_r != 1) throw std::invalid_argument("element is not a unit; no inverse exists");
    return symmetric_mod(old_s, m);
}

Int add_mod(Int a, Int b, Modulus m) {
    return symmetric_mod(checked_add(symmetric_mod(a, m), symmetric_mod(b, m)), m);
}

Int sub_mod(Int a, Int b, Modulus m) {
    return symmetric_mod(checked_sub(symmetric_mod(a, m), symmetric_mod(b, m)), m);
}

Int mul_mod(Int a, Int b, Modulus m) {
    return symmetric_mod(checked_mul(symmetric_mod(a, m), symmetric_mod(b, m)), m);
}

Int det_mod(const IntMat& c, Modulus m) {
    const std::size_t k = c.size();
    if (k == 0) return symmetric_mod(1, m); // empty product convention
    for (const auto& row : c)
        if (row.size() != k) throw std::invalid_argument("determinant requires a square matrix");

    // Bareiss fraction-free elimination: every division is exact, so the
    // running entries stay integers and the final pivot is the determinant.
    std::vector<std::vector<cpp_int>> a(k, std::vector<cpp_int>(k));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) a[i][j] = c[i][j];

    int sign = 1;
    cpp_int prev = 1;
    for (std::size_t col = 0; col < k; ++col) {
        std::size_t pivot = col;
        while (pivot < k && a[pivot][col] == 0) ++pivot;
        if (pivot == k) return symmetric_mod(0, m);
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

    cpp_int det = sign * a[k - 1][k - 1];
    cpp_int r = det % m.value();
    if (r < 0) r += m.value();
    Int small = r.convert_to<Int>();
    return symmetric_mod(small, m);
}

IntVec vec_mod(const IntVec& x, Modulus m) {
    IntVec r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = symmetric_mod(x[i], m);
    return r;
}

namespace {
void require_same_size(const IntVec& a, const IntVec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("vector length mismatch");
}
} // namespace

IntVec vec_add(const IntVec& a, const IntVec& b, Modulus m) {
    require_same_size(a, b);
    IntVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = add_mod(a[i], b[i], m);
    return r;
}

IntVec vec_sub(const IntVec& a, const IntVec& b, Modulus m) {
    require_same_size(a, b);
    IntVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = sub_mod(a[i], b[i], m);
    return r;
}

IntVec scalar_mul(Int s, const IntVec& v, Modulus m) {
    IntVec r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = mul_mod(s, v[i], m);
    return r;
}

Int norm_sq(const IntVec& v) {
    Int acc = 0;
    for (Int x : v) acc = checked_add(acc, checked_mul(x, x));
    return acc;
}

} // namespace qamidx
