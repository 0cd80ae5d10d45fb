#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qamidx/errors.hpp"
#include "qamidx/indexcode.hpp"

#include <algorithm>
#include <random>
#include <set>

using namespace qamidx;

TEST_CASE("subset helpers") {
    CHECK(full_subset(3) == 0b111u);
    CHECK(subset_size(0b101u) == 2);
    CHECK(subset_contains(0b101u, 1));
    CHECK_FALSE(subset_contains(0b101u, 2));
    CHECK(subset_complement(0b101u, 3) == 0b010u);
    CHECK(cyclic_shift_subset(0b101u, 3) == 0b011u); // {1,3} -> {2,1}
    CHECK(cyclic_shift_subset(0b100u, 3) == 0b001u); // {3} wraps to {1}
    CHECK(format_subset(0b101u, 3) == "{1,3}");
    CHECK(format_subset(0u, 3) == "{}");
    CHECK(parse_subset("1,3", 3) == 0b101u);
    CHECK(parse_subset("", 3) == 0u);
    CHECK(parse_subset("{2}", 3) == 0b010u);
    CHECK_THROWS_AS(parse_subset("4", 3), std::invalid_argument);
    CHECK_THROWS_AS(parse_subset("x", 3), std::invalid_argument);
}

static const IndexCode& qam16_code() {
    static IndexCode code = make_circulant(Modulus(4), 2, {1, -2});
    return code;
}

TEST_CASE("circulant construction") {
    const IndexCode& code = qam16_code();
    CHECK(code.c == IntMat{{1, -2}, {-2, 1}});
    CHECK(code.circulant);

    IndexCode c8 = make_circulant(Modulus(8), 2, {1, 2});
    CHECK(c8.c == IntMat{{1, 2}, {2, 1}});

    IndexCode c3 = make_circulant(Modulus(4), 3, {1, -2, -2});
    CHECK(c3.c == IntMat{{1, -2, -2}, {-2, 1, -2}, {-2, -2, 1}});

    for (Int m : {2, 4, 8, 16}) {
        IndexCode id = make_circulant(Modulus(m), 3, {1, 0, 0});
        CHECK(det_mod(id.c, id.modulus) == symmetric_mod(1, id.modulus));
    }

    CHECK_THROWS_AS(make_circulant(Modulus(4), 2, {2, 2}), invalid_code_error);
    CHECK_THROWS_AS(make_circulant(Modulus(4), 2, {1, -2, 0}), std::invalid_argument);
    CHECK_THROWS_AS(make_circulant(Modulus(4), 1, {1}), std::invalid_argument);

    // unreduced first rows are reduced on construction
    IndexCode r = make_circulant(Modulus(4), 2, {5, 2});
    CHECK(r.c == IntMat{{1, -2}, {-2, 1}});
}

TEST_CASE("general construction detects circulant structure") {
    IndexCode a = make_general(Modulus(4), {{1, -2}, {-2, 1}});
    CHECK(a.circulant);
    IndexCode b = make_general(Modulus(4), {{1, 0}, {1, 1}});
    CHECK_FALSE(b.circulant);
    CHECK_THROWS_AS(make_general(Modulus(4), {{2, 0}, {0, 1}}), invalid_code_error);
    CHECK_THROWS_AS(make_general(Modulus(4), {{1, 0, 0}, {0, 1, 0}}), std::invalid_argument);
}

TEST_CASE("encoding fixtures") {
    const IndexCode& code = qam16_code();
    CHECK(encode(code, {1, 0}) == IntVec{1, -2});
    CHECK(encode(code, {0, 0}) == IntVec{0, 0});
    CHECK(encode(code, {1, 1}) == IntVec{-1, -1});
    CHECK(encode(code, {5, 4}) == IntVec{1, -2}); // unreduced message, same residue
    CHECK_THROWS_AS(encode(code, {1, 0, 0}), std::invalid_argument);
}

TEST_CASE("encoding is linear") {
    std::mt19937_64 rng(42);
    IndexCode code = make_circulant(Modulus(8), 3, {1, 2, 0});
    std::uniform_int_distribution<Int> val(-20, 20);
    for (int trial = 0; trial < 200; ++trial) {
        IntVec w1{val(rng), val(rng), val(rng)};
        IntVec w2{val(rng), val(rng), val(rng)};
        IntVec sum = vec_add(w1, w2, code.modulus);
        CHECK(encode(code, sum) == vec_add(encode(code, w1), encode(code, w2), code.modulus));
    }
}

TEST_CASE("valid encoders are bijections on the grid") {
    for (Int m : {2, 4, 8}) {
        IndexCode code = m == 2 ? make_circulant(Modulus(2), 2, {1, 0})
                                : make_circulant(Modulus(m), 2, {1, 2});
        std::set<IntVec> image;
        IntVec w(2);
        for (Int a = 0; a < m; ++a)
            for (Int b = 0; b < m; ++b) {
                w = {a, b};
                image.insert(encode(code, w));
            }
        CHECK(Int(image.size()) == m * m);
        for (const auto& x : image) {
            CHECK(in_symmetric_set(x[0], code.modulus));
            CHECK(in_symmetric_set(x[1], code.modulus));
        }
    }
}

TEST_CASE("inverse matrix multiplies back to the identity") {
    auto check_inverse = [](const IndexCode& code) {
        IntMat inv = inverse_matrix(code);
        for (int i = 0; i < code.k; ++i)
            for (int j = 0; j < code.k; ++j) {
                Int acc = 0;
                for (int t = 0; t < code.k; ++t)
                    acc += code.c[i][t] * inv[t][j];
                CHECK(symmetric_mod(acc, code.modulus) == (i == j ? 1 : 0));
            }
    };
    check_inverse(qam16_code());
    check_inverse(make_circulant(Modulus(8), 3, {1, 2, 0}));
    check_inverse(make_circulant(Modulus(16), 4, {1, -4, -6, -4}));
    check_inverse(make_general(Modulus(9), {{1, 3}, {2, 2}}));

    // the 16-QAM generator matrix is its own inverse
    CHECK(inverse_matrix(qam16_code()) == qam16_code().c);
}

TEST_CASE("decoding without side information") {
    const IndexCode& code = qam16_code();
    CHECK(decode(code, {1.1, -1.9}) == IntVec{1, 0});
    CHECK(decode(code, {-0.4, 0.4}) == IntVec{0, 0});
    // saturation outside the grid
    CHECK(decode(code, {5.0, -9.0}) == decode(code, {1.0, -2.0}));
    // rounding ties go to the smaller coordinate
    CHECK(decode(code, {0.5, 0.5}) == decode(code, {0.0, 0.0}));
    CHECK(decode(code, {-0.5, -0.5}) == decode(code, {-1.0, -1.0}));
    CHECK_THROWS_AS(decode(code, {1.0}), std::invalid_argument);
}

TEST_CASE("decode inverts encode at zero noise") {
    std::mt19937_64 rng(7);
    for (Int m : {2, 4, 5, 8, 9, 16}) {
        for (int k : {2, 3}) {
            IntVec row(k, 0);
            row[0] = 1;
            if (k >= 2) row[1] = symmetric_mod(2, Modulus(m));
            IndexCode code = [&]() {
                try {
                    return make_circulant(Modulus(m), k, row);
                } catch (const invalid_code_error&) {
                    row[1] = 0;
                    return make_circulant(Modulus(m), k, row); // identity always valid
                }
            }();
            std::uniform_int_distribution<Int> val(0, m - 1);
            for (int trial = 0; trial < 50; ++trial) {
                IntVec w(k);
                for (auto& v : w) v = symmetric_mod(val(rng), code.modulus);
                IntVec x = encode(code, w);
                std::vector<double> y(x.begin(), x.end());
                CHECK(decode(code, y) == w);
            }
        }
    }
}

TEST_CASE("expurgated subcode enumeration") {
    const IndexCode& code = qam16_code();

    SideInfo s1{0b01u, {0, 0}};
    std::vector<IntVec> pts1 = subcode_points(code, s1);
    CHECK(pts1 == std::vector<IntVec>{{0, 0}, {-2, 1}, {0, -2}, {-2, -1}});

    SideInfo s2{0b10u, {0, 0}};
    std::vector<IntVec> pts2 = subcode_points(code, s2);
    CHECK(pts2 == std::vector<IntVec>{{0, 0}, {1, -2}, {-2, 0}, {-1, -2}});

    SideInfo none{0u, {}};
    std::vector<IntVec> all = subcode_points(code, none);
    CHECK(all.size() == 16);
    CHECK(std::set<IntVec>(all.begin(), all.end()).size() == 16);

    CHECK_THROWS_AS(subcode_points(code, none, 8), budget_error);
}

TEST_CASE("decoding with side information") {
    const IndexCode& code = qam16_code();
    SideInfo s1{0b01u, {0, 0}};

    CHECK(decode(code, {-0.9, 0.6}, s1) == IntVec{0, 0});
    CHECK(decode(code, {0.0, -1.2}, s1) == IntVec{0, -2});

    // equidistant between (0,0) and (0,-2): first enumerated point wins
    CHECK(decode(code, {0.0, -1.0}, s1) == IntVec{0, 0});

    // zero-noise round trips with consistent side information
    std::mt19937_64 rng(99);
    IndexCode c3 = make_circulant(Modulus(8), 3, {1, 2, 0});
    std::uniform_int_distribution<Int> val(0, 7);
    for (int trial = 0; trial < 100; ++trial) {
        IntVec w{symmetric_mod(val(rng), c3.modulus), symmetric_mod(val(rng), c3.modulus),
                 symmetric_mod(val(rng), c3.modulus)};
        Subset s = Subset(trial % 7); // proper subsets of {1,2,3}
        IntVec x = encode(c3, w);
        std::vector<double> y(x.begin(), x.end());
        CHECK(decode(c3, y, SideInfo{s, w}) == w);
    }
}

TEST_CASE("unit scaling leaves zero-coset subcodes invariant as sets") {
    for (Int m : {2, 4, 8}) {
        Modulus mod(m);
        for (Int a = mod.sym_min(); a <= mod.sym_max(); ++a)
            for (Int b = mod.sym_min(); b <= mod.sym_max(); ++b) {
                IndexCode code = [&]() -> IndexCode {
                    try {
                        return make_circulant(mod, 2, {a, b});
                    } catch (const invalid_code_error&) {
                        return make_circulant(mod, 2, {1, 0});
                    }
                }();
                for (Int u = mod.sym_min(); u <= mod.sym_max(); ++u) {
                    if (!is_unit(u, mod)) continue;
                    IndexCode scaled = make_general(
                        mod, {scalar_mul(u, code.c[0], mod), scalar_mul(u, code.c[1], mod)});
                    for (Subset s : {Subset(0b01), Subset(0b10)}) {
                        SideInfo side{s, {0, 0}};
                        auto p1 = subcode_points(code, side);
                        auto p2 = subcode_points(scaled, side);
                        CHECK(std::set<IntVec>(p1.begin(), p1.end()) ==
                              std::set<IntVec>(p2.begin(), p2.end()));
                    }
                }
            }
    }
}
