#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sinkx/intlattice.hpp"
#include "support.hpp"

using namespace sinkx;
using testsupport::brute_force_membership;
using testsupport::random_matrix;
using testsupport::Rng;

namespace {

IntMatrix from_rows(const std::vector<std::vector<int>>& rows) {
    std::size_t r = rows.size();
    std::size_t c = r ? rows[0].size() : 0;
    IntMatrix m(abstract_labels(r), abstract_labels(c));
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m.at(i, j) = rows[i][j];
    return m;
}

IntVector vec(const std::vector<int>& values) {
    std::vector<Int> v(values.begin(), values.end());
    return IntVector(abstract_labels(values.size()), v);
}

bool divisibility_chain(const IntMatrix& d) {
    std::size_t k = std::min(d.rows(), d.cols());
    for (std::size_t i = 0; i + 1 < k; ++i) {
        if (d.at(i, i) == 0 && d.at(i + 1, i + 1) != 0) return false;
        if (d.at(i, i) != 0 && d.at(i + 1, i + 1) % d.at(i, i) != 0) return false;
    }
    for (std::size_t i = 0; i < d.rows(); ++i)
        for (std::size_t j = 0; j < d.cols(); ++j) {
            if (i != j && d.at(i, j) != 0) return false;
            if (i == j && d.at(i, j) < 0) return false;
        }
    return true;
}

}  // namespace

TEST_CASE("smith normal form of small pinned matrices") {
    auto onebyone = smith_normal_form(from_rows({{2}}));
    CHECK(onebyone.d.at(0, 0) == 2);

    auto id3 = smith_normal_form(IntMatrix::identity(abstract_labels(3)));
    CHECK(id3.d == IntMatrix::identity(abstract_labels(3)));

    auto tall = smith_normal_form(from_rows({{1, 0}, {1, 1}, {0, 1}}));
    CHECK(tall.d.at(0, 0) == 1);
    CHECK(tall.d.at(1, 1) == 1);
    AbelianGroup g = cokernel(from_rows({{1, 0}, {1, 1}, {0, 1}}));
    CHECK(g.free_rank == 1);
    CHECK(g.torsion.empty());
}

TEST_CASE("smith decomposition invariants on random matrices") {
    Rng rng(testsupport::seed_from_env());
    for (int trial = 0; trial < 150; ++trial) {
        std::size_t r = static_cast<std::size_t>(testsupport::rand_int(rng, 1, 6));
        std::size_t c = static_cast<std::size_t>(testsupport::rand_int(rng, 1, 6));
        IntMatrix a = random_matrix(rng, r, c, -9, 9);
        SmithDecomposition snf = smith_normal_form(a);
        REQUIRE(snf.u * a * snf.v == snf.d);
        REQUIRE(abs(determinant(snf.u)) == 1);
        REQUIRE(abs(determinant(snf.v)) == 1);
        REQUIRE(divisibility_chain(snf.d));
    }
}

TEST_CASE("image membership on pinned systems") {
    // invertible system: the solution is unique
    auto x = image_membership(from_rows({{1, 1}, {0, 1}}), vec({1, -1}));
    REQUIRE(x.has_value());
    CHECK(*x == vec({2, -1}));

    // underdetermined system: canonical kernel-reduced representative
    IntMatrix a = from_rows({{0, 1, 0}, {0, -1, 1}, {0, 1, -1}});
    auto y = image_membership(a, vec({0, 1, -1}));
    REQUIRE(y.has_value());
    CHECK(*y == vec({0, 0, 1}));
    auto oracle = brute_force_membership(a, vec({0, 1, -1}), 5);
    REQUIRE(oracle.has_value());
    CHECK(*oracle == vec({0, 0, 1}));

    // parity obstruction
    CHECK_FALSE(image_membership(from_rows({{2}}), vec({1})).has_value());
}

TEST_CASE("membership agrees with the brute-force oracle") {
    Rng rng(testsupport::seed_from_env() + 1);
    for (int trial = 0; trial < 120; ++trial) {
        IntMatrix a = random_matrix(rng, 4, 4, -3, 3);
        IntVector d(abstract_labels(4));
        if (trial % 2 == 0) {
            // force solvability inside the oracle's box
            IntVector x(abstract_labels(4));
            for (std::size_t j = 0; j < 4; ++j) x[j] = testsupport::rand_int(rng, -2, 2);
            d = a.apply(x);
        } else {
            for (std::size_t i = 0; i < 4; ++i) d[i] = testsupport::rand_int(rng, -4, 4);
        }
        auto mine = image_membership(a, d);
        auto oracle = brute_force_membership(a, d, 3);
        if (oracle.has_value()) REQUIRE(mine.has_value());
        if (mine.has_value()) REQUIRE(a.apply(*mine) == d);
    }
}

TEST_CASE("restricted membership") {
    IntMatrix a = from_rows({{0, 1, 0}, {0, -1, 1}, {0, 1, -1}});
    auto x = restricted_membership(a, vec({0, 1, -1}), {"2"});
    REQUIRE(x.has_value());
    CHECK(*x == vec({0, 0, 1}));

    auto none = restricted_membership(from_rows({{1, 1}, {0, 1}}), vec({0, 1}), {"0"});
    CHECK_FALSE(none.has_value());

    Rng rng(testsupport::seed_from_env() + 2);
    for (int trial = 0; trial < 60; ++trial) {
        IntMatrix m = random_matrix(rng, 3, 3, -3, 3);
        IntVector d(abstract_labels(3));
        for (std::size_t i = 0; i < 3; ++i) d[i] = testsupport::rand_int(rng, -3, 3);
        auto full = restricted_membership(m, d, m.col_labels());
        auto plain = image_membership(m, d);
        CHECK(full.has_value() == plain.has_value());
        if (full) CHECK(m.apply(*full) == d);
    }
}

TEST_CASE("kernel basis") {
    CHECK(kernel_basis(from_rows({{1, 0}, {1, 1}})).empty());

    auto basis = kernel_basis(from_rows({{0, 0, 0}, {1, -1, 1}, {0, 1, -1}}));
    REQUIRE(basis.size() == 1);
    CHECK(basis[0] == vec({0, 1, 1}));

    auto zero = kernel_basis(from_rows({{0}}));
    REQUIRE(zero.size() == 1);
    CHECK(zero[0] == vec({1}));

    Rng rng(testsupport::seed_from_env() + 3);
    for (int trial = 0; trial < 80; ++trial) {
        IntMatrix a = random_matrix(rng, 4, 5, -4, 4);
        auto k = kernel_basis(a);
        for (const auto& v : k) CHECK(a.apply(v).is_zero());
        std::size_t rank = 0;
        auto d = smith_normal_form(a).d;
        while (rank < std::min(d.rows(), d.cols()) && d.at(rank, rank) != 0) ++rank;
        CHECK(k.empty() == (rank == a.cols()));
    }
}

TEST_CASE("determinants") {
    CHECK(determinant(from_rows({{1}})) == 1);
    CHECK(determinant(IntMatrix::identity(abstract_labels(4))) == 1);
    CHECK(determinant(from_rows({{1, 1}, {0, 1}})) == 1);
    CHECK(determinant(from_rows({{0, 1}, {1, 0}})) == -1);
    CHECK(determinant(from_rows({{2, 1}, {1, 2}})) == 3);
    CHECK_THROWS_AS(determinant(from_rows({{1, 0}, {0, 1}, {1, 1}})), Error);
}

TEST_CASE("cokernel presentations") {
    AbelianGroup z2 = cokernel(from_rows({{2}}));
    CHECK(z2.free_rank == 0);
    REQUIRE(z2.torsion.size() == 1);
    CHECK(z2.torsion[0] == 2);
    CHECK(z2.to_string() == "Z/2");

    AbelianGroup free2 = cokernel(from_rows({{0, 0}, {0, 0}}));
    CHECK(free2.free_rank == 2);
    CHECK(free2.torsion.empty());
    CHECK(free2.to_string() == "Z^2");
}

TEST_CASE("membership stays solvable within the supported block") {
    // rows/cols 0..1 form a complement block B with det(B - I) != 0 and no
    // edges into the supported part; solutions then live in the support.
    Rng rng(testsupport::seed_from_env() + 4);
    int done = 0;
    while (done < 40) {
        IntMatrix a(abstract_labels(4), abstract_labels(4));
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) {
                bool upper_right = i < 2 && j >= 2;
                a.at(i, j) = upper_right ? 0 : testsupport::rand_int(rng, 0, 2);
            }
        IntMatrix m = a - IntMatrix::identity(abstract_labels(4));
        IntMatrix b_minus(abstract_labels(2), abstract_labels(2));
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) b_minus.at(i, j) = m.at(i, j);
        if (determinant(b_minus) == 0) continue;
        ++done;

        IntVector n(abstract_labels(4));
        n[2] = testsupport::rand_int(rng, -3, 3);
        n[3] = testsupport::rand_int(rng, -3, 3);
        IntVector d = m.apply(n);
        REQUIRE(image_membership(m, d).has_value());
        auto restricted = restricted_membership(m, d, {"2", "3"});
        REQUIRE(restricted.has_value());
        CHECK(m.apply(*restricted) == d);
    }
}
