#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include "femlite/matrix_market.hpp"
#include "femlite/sparse.hpp"
#include "test_util.hpp"

using namespace femlite;

namespace {

// the worked 4x3 example: entries (1,1)=1, (2,2)=2, (4,2)=9, (2,3)=4
Triplets example_triplets() {
    Triplets t(4, 3);
    t.push(0, 0, 1.0);
    t.push(1, 1, 2.0);
    t.push(3, 1, 9.0);
    t.push(1, 2, 4.0);
    return t;
}

Triplets random_triplets(index_t m, index_t n, std::size_t count, std::mt19937& rng) {
    std::uniform_int_distribution<index_t> row(0, m - 1), col(0, n - 1);
    std::uniform_real_distribution<double> val(-2.0, 2.0);
    Triplets t(m, n);
    for (std::size_t k = 0; k < count; ++k) t.push(row(rng), col(rng), val(rng));
    return t;
}

} // namespace

TEST(FromTriplets, WorkedExampleColumnPointers) {
    const CscMatrix a = from_triplets(example_triplets());
    EXPECT_EQ(a.m, 4);
    EXPECT_EQ(a.n, 3);
    EXPECT_EQ(a.col_ptr, (std::vector<index_t>{0, 1, 3, 4})); // one-based [1 2 4 5]
    EXPECT_EQ(a.row_idx, (std::vector<index_t>{0, 1, 3, 1}));
    EXPECT_EQ(a.values, (std::vector<double>{1.0, 2.0, 9.0, 4.0}));
}

TEST(FromTriplets, DuplicatesAreSummed) {
    Triplets t(1, 1);
    t.push(0, 0, 1.0);
    t.push(0, 0, 2.0);
    const CscMatrix a = from_triplets(t);
    EXPECT_EQ(a.nnz(), 1);
    EXPECT_DOUBLE_EQ(a.values[0], 3.0);
}

TEST(FromTriplets, ExactCancellationIsDropped) {
    Triplets t(1, 1);
    t.push(0, 0, 1.0);
    t.push(0, 0, -1.0);
    const CscMatrix a = from_triplets(t);
    EXPECT_EQ(a.nnz(), 0);
    EXPECT_EQ(a.col_ptr, (std::vector<index_t>{0, 0}));
}

TEST(FromTriplets, TinyNonzeroValuesAreKept) {
    Triplets t(2, 2);
    t.push(0, 0, 1e-300);
    t.push(1, 1, 5e-324); // smallest subnormal
    const CscMatrix a = from_triplets(t);
    EXPECT_EQ(a.nnz(), 2);
    EXPECT_EQ(a.values[0], 1e-300);
}

TEST(FromTriplets, IndexAndShapeValidation) {
    Triplets t(2, 2);
    t.push(2, 0, 1.0);
    EXPECT_THROW(from_triplets(t), Error);
    Triplets bad(2, 2);
    bad.i = {0};
    bad.j = {0, 1};
    bad.s = {1.0, 2.0};
    EXPECT_THROW(from_triplets(bad), Error);
}

TEST(Find, WorkedExampleColumnMajorOrder) {
    const Triplets t = find(from_triplets(example_triplets()));
    ASSERT_EQ(t.size(), 4u);
    // one-based sequence (1,1,1), (2,2,2), (4,2,9), (2,3,4)
    EXPECT_EQ(t.i, (std::vector<index_t>{0, 1, 3, 1}));
    EXPECT_EQ(t.j, (std::vector<index_t>{0, 1, 1, 2}));
    EXPECT_EQ(t.s, (std::vector<double>{1.0, 2.0, 9.0, 4.0}));
}

TEST(Find, EmptyAndIdentity) {
    EXPECT_EQ(find(CscMatrix{}).size(), 0u);
    Triplets eye(3, 3);
    for (index_t k = 0; k < 3; ++k) eye.push(k, k, 1.0);
    const Triplets t = find(from_triplets(eye));
    EXPECT_EQ(t.i, (std::vector<index_t>{0, 1, 2}));
    EXPECT_EQ(t.j, (std::vector<index_t>{0, 1, 2}));
}

TEST(Find, RoundTripIsBitExactOnRandomMatrices) {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const CscMatrix a = from_triplets(random_triplets(30, 40, 200, rng));
        EXPECT_EQ(from_triplets(find(a)), a);
    }
}

TEST(FromTriplets, PermutationInvariance) {
    std::mt19937 rng(11);
    const Triplets base = random_triplets(20, 20, 150, rng);
    const CscMatrix a = from_triplets(base);

    std::vector<std::size_t> order(base.size());
    std::iota(order.begin(), order.end(), 0);
    for (int trial = 0; trial < 8; ++trial) {
        std::shuffle(order.begin(), order.end(), rng);
        Triplets shuffled(base.m, base.n);
        for (std::size_t k : order) shuffled.push(base.i[k], base.j[k], base.s[k]);
        const CscMatrix b = from_triplets(shuffled);
        ASSERT_EQ(b.col_ptr, a.col_ptr);
        ASSERT_EQ(b.row_idx, a.row_idx);
        for (std::size_t k = 0; k < a.values.size(); ++k)
            EXPECT_NEAR(b.values[k], a.values[k], 1e-15 * std::abs(a.values[k]));
    }
    // identical input order reproduces the result bitwise
    EXPECT_EQ(from_triplets(base), a);
}

TEST(Matvec, WorkedExample) {
    const CscMatrix a = from_triplets(example_triplets());
    const std::vector<double> y = matvec(a, std::vector<double>{1.0, 1.0, 1.0});
    EXPECT_EQ(y, (std::vector<double>{1.0, 6.0, 0.0, 9.0}));
}

TEST(Matvec, ZeroVectorAndIdentity) {
    const CscMatrix a = from_triplets(example_triplets());
    EXPECT_EQ(matvec(a, std::vector<double>{0, 0, 0}), (std::vector<double>{0, 0, 0, 0}));

    Triplets eye(3, 3);
    for (index_t k = 0; k < 3; ++k) eye.push(k, k, 1.0);
    const std::vector<double> x{1.5, -2.0, 0.25};
    EXPECT_EQ(matvec(from_triplets(eye), x), x);
}

TEST(Matvec, ShapeMismatchRejected) {
    const CscMatrix a = from_triplets(example_triplets());
    EXPECT_THROW(matvec(a, std::vector<double>{1.0, 2.0}), Error);
}

TEST(Matvec, AgreesWithDenseOracle) {
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
        const Triplets t = random_triplets(50, 50, 250, rng); // ~10% fill
        const CscMatrix a = from_triplets(t);
        const DenseMatrix d = to_dense(a);
        std::vector<double> x(50);
        for (double& v : x) v = val(rng);
        const std::vector<double> y = matvec(a, x);
        for (index_t r = 0; r < 50; ++r) {
            double expect = 0.0;
            for (index_t c = 0; c < 50; ++c) expect += d(r, c) * x[std::size_t(c)];
            EXPECT_NEAR(y[std::size_t(r)], expect, 1e-14 * std::max(1.0, std::abs(expect)));
        }
    }
}

TEST(Submatrix, WorkedExampleBlock) {
    const CscMatrix a = from_triplets(example_triplets());
    const std::vector<index_t> rows{1, 3}, cols{1, 2}; // one-based [2,4] x [2,3]
    const DenseMatrix block = to_dense(submatrix(a, rows, cols));
    EXPECT_DOUBLE_EQ(block(0, 0), 2.0);
    EXPECT_DOUBLE_EQ(block(0, 1), 4.0);
    EXPECT_DOUBLE_EQ(block(1, 0), 9.0);
    EXPECT_DOUBLE_EQ(block(1, 1), 0.0);
}

TEST(Submatrix, FullSetsReturnSameMatrix) {
    const CscMatrix a = from_triplets(example_triplets());
    const std::vector<index_t> rows{0, 1, 2, 3}, cols{0, 1, 2};
    EXPECT_EQ(submatrix(a, rows, cols), a);
}

TEST(Submatrix, EmptyRowSet) {
    const CscMatrix a = from_triplets(example_triplets());
    const std::vector<index_t> rows{}, cols{0, 2};
    const CscMatrix s = submatrix(a, rows, cols);
    EXPECT_EQ(s.m, 0);
    EXPECT_EQ(s.n, 2);
    EXPECT_EQ(s.nnz(), 0);
}

TEST(Submatrix, UnsortedOrOutOfRangeRejected) {
    const CscMatrix a = from_triplets(example_triplets());
    const std::vector<index_t> unsorted{2, 1}, dup{1, 1}, big{0, 9}, cols{0};
    EXPECT_THROW(submatrix(a, unsorted, cols), Error);
    EXPECT_THROW(submatrix(a, dup, cols), Error);
    try {
        submatrix(a, big, cols);
        FAIL() << "expected IndexOutOfRange";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::index_out_of_range);
    }
}

TEST(Accumulate, HandExamples) {
    const std::vector<index_t> idx{0, 0, 1};
    const std::vector<double> vals{3.0, 4.0, 5.0};
    EXPECT_EQ(accumulate(idx, vals, 2), (std::vector<double>{7.0, 5.0}));
    EXPECT_EQ(accumulate(std::vector<index_t>{}, std::vector<double>{}, 3),
              (std::vector<double>{0.0, 0.0, 0.0}));
    EXPECT_EQ(accumulate(std::vector<index_t>{2}, std::vector<double>{2.5}, 3),
              (std::vector<double>{0.0, 0.0, 2.5}));
}

TEST(Accumulate, RangeChecked) {
    EXPECT_THROW(accumulate(std::vector<index_t>{3}, std::vector<double>{1.0}, 3), Error);
}

TEST(Storage, CscSavesIntegersOverCoordinate) {
    std::mt19937 rng(17);
    const CscMatrix a = from_triplets(random_triplets(40, 25, 300, rng));
    const index_t nnz = a.nnz();
    EXPECT_EQ(static_cast<index_t>(a.col_ptr.size()), a.n + 1);
    const index_t coordinate_count = 3 * nnz;
    const index_t csc_count = 2 * nnz + a.n + 1;
    EXPECT_EQ(coordinate_count - csc_count, nnz - a.n - 1);
    // distinct nonzero (i,j) pairs is exactly nnz by construction
    const Triplets t = find(a);
    EXPECT_EQ(t.size(), static_cast<std::size_t>(nnz));
}

TEST(MatrixMarket, GoldenFileForWorkedExample) {
    const CscMatrix a = from_triplets(example_triplets());
    std::stringstream out;
    write_matrix_market(a, out);
    const std::string expected = "%%MatrixMarket matrix coordinate real general\n"
                                 "4 3 4\n"
                                 "1 1 1\n"
                                 "2 2 2\n"
                                 "4 2 9\n"
                                 "2 3 4\n";
    EXPECT_EQ(out.str(), expected);
    std::stringstream in(expected);
    EXPECT_EQ(read_matrix_market(in), a);
}

TEST(MatrixMarket, RoundTripRandom) {
    std::mt19937 rng(23);
    const CscMatrix a = from_triplets(random_triplets(15, 12, 60, rng));
    std::stringstream buffer;
    write_matrix_market(a, buffer);
    EXPECT_EQ(read_matrix_market(buffer), a);
}

TEST(MatrixMarket, RejectsWrongHeader) {
    std::stringstream in("%%MatrixMarket matrix array real general\n1 1\n2.0\n");
    EXPECT_THROW(read_matrix_market(in), Error);
}

TEST(MatrixMarket, SkipsCommentsAndSumsDuplicates) {
    std::stringstream in("%%MatrixMarket matrix coordinate real general\n"
                         "% produced elsewhere\n"
                         "% more commentary\n"
                         "2 2 3\n"
                         "1 1 1.5\n"
                         "1 1 2.5\n"
                         "2 2 -1\n");
    const CscMatrix a = read_matrix_market(in);
    EXPECT_EQ(a.nnz(), 2);
    EXPECT_DOUBLE_EQ(a.values[0], 4.0);
    EXPECT_DOUBLE_EQ(a.values[1], -1.0);
}
