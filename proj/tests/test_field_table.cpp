#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "shapelab/field_table.hpp"
#include "shapelab/tabulate.hpp"

using namespace shapelab;

namespace {

std::string read_file(const std::string& path)
{
    std::ifstream is(path);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

std::string fixture() { return read_file(std::string(SHAPELAB_TEST_DATA) + "/fields.csv"); }

FieldTableErrorCode code_of(const std::string& body)
{
    try {
        parse_field_table(std::string(kFieldTableHeader) + "\n" + body + "\n");
    }
    catch (const FieldTableError& e) {
        return e.code;
    }
    ADD_FAILURE() << "no error for: " << body;
    return FieldTableErrorCode::bad_header;
}

const char* kIdentity3 = "1/1;0/1;0/1;0/1;1/1;0/1;0/1;0/1;1/1";

}  // namespace

TEST(FieldTable, ParsesFixture)
{
    const auto recs = parse_field_table(fixture());
    ASSERT_EQ(recs.size(), 4u);
    EXPECT_EQ(recs[0].label, "x3-x-1");
    EXPECT_EQ(recs[2].degree, 5);
    EXPECT_EQ(recs[2].signature, 2);
    EXPECT_EQ(recs[3].disc, BigInt(-2048));
    EXPECT_EQ(recs[1].poly, (std::vector<std::int64_t>{-1, -1, 0, 0, 1}));
    EXPECT_EQ(recs[1].basis[1][1], BigRational(1));
}

TEST(FieldTable, SerializeRoundTrip)
{
    const auto recs = parse_field_table(fixture());
    const auto text = serialize_field_table(recs);
    EXPECT_EQ(parse_field_table(text), recs);
    EXPECT_EQ(text, fixture());
}

TEST(FieldTable, DistinctErrorCodes)
{
    using E = FieldTableErrorCode;
    EXPECT_EQ(code_of(std::string("a,3,1,-23,-1 -1 0 1,1/1;0/x;0/1;0/1;1/1;0/1;0/1;0/1;1/1")), E::malformed_rational);
    EXPECT_EQ(code_of(std::string("a,3,1,-23,-1 -1 0 1,1/1;0/0;0/1;0/1;1/1;0/1;0/1;0/1;1/1")), E::malformed_rational);
    EXPECT_EQ(code_of(std::string("a,4,1,-23,-1 -1 0 1,") + kIdentity3), E::degree_mismatch);
    EXPECT_EQ(code_of(std::string("a,3,1,-23,-1 -1 0 1,1/1;0/1;0/1;0/1;1/1;0/1;0/1;0/1")), E::degree_mismatch);
    EXPECT_EQ(code_of(std::string("a,3,1,-23,-1 -1 0 1,1/1;0/1;0/1;0/1;1/1;0/1;0/1;2/1;0/1")), E::singular_basis);
    EXPECT_EQ(code_of(std::string("a,3,1,-23,-1 -1 0 1,1/1;1/1;0/1;0/1;1/1;0/1;0/1;0/1;1/1")), E::bad_first_row);
    EXPECT_EQ(code_of(std::string("a,3,0,-23,-1 -1 0 1,") + kIdentity3), E::signature_mismatch);
    EXPECT_EQ(code_of(std::string("a,3,1,-23,-1 -1 0 2,") + kIdentity3), E::not_monic);
    EXPECT_EQ(code_of(std::string("a,3,1,-23,-1 -1 0 1")), E::wrong_column_count);
    EXPECT_EQ(code_of(std::string("a,three,1,-23,-1 -1 0 1,") + kIdentity3), E::malformed_integer);
    EXPECT_THROW(parse_field_table("label,deg\n"), FieldTableError);
}

TEST(FieldTable, ErrorCarriesLineAndColumn)
{
    const std::string text = std::string(kFieldTableHeader) + "\n" + "ok,3,1,-23,-1 -1 0 1," + kIdentity3 + "\n"
                             + "bad,3,1,-23,-1 -1 0 1,1/1;0/1;0/1;0/1;1/q;0/1;0/1;0/1;1/1\n";
    try {
        parse_field_table(text);
        FAIL();
    }
    catch (const FieldTableError& e) {
        EXPECT_EQ(e.line, 3u);
        EXPECT_EQ(e.column, 6u);
        EXPECT_NE(std::string(e.what()).find("line 3, column 6"), std::string::npos);
    }
}

TEST(FieldTable, CovolumeGate)
{
    auto recs = parse_field_table(fixture());
    for (const auto& r : recs) EXPECT_LE(shape_of_record(r).covolume_rel_error, 1e-8) << r.label;
    recs[0].disc = -92;
    EXPECT_THROW(shape_of_record(recs[0]), FieldTableError);
    // the index-8 suborder Z + 2 theta Z + 4 theta^2 Z has disc 64 * -23
    const auto sub = parse_field_table(std::string(kFieldTableHeader) + "\n" + "s,3,1,-1472,-1 -1 0 1,1/1;0/1;0/1;0/1;2/1;0/1;0/1;0/1;4/1\n");
    EXPECT_LE(shape_of_record(sub[0]).covolume_rel_error, 1e-8);
}

TEST(FieldTable, CubicShapeMatchesTabulation)
{
    const auto recs = parse_field_table(fixture());
    const auto s = shape_of_record(recs[0]);
    ASSERT_TRUE(s.point.has_value());
    EnumerationTask t;
    t.X = 24;
    const auto classes = enumerate_classes(t);
    ASSERT_EQ(classes.size(), 1u);
    ASSERT_EQ(classes[0].disc, -23);
    EXPECT_NEAR(s.point->x, classes[0].shape.x, 1e-9);
    EXPECT_NEAR(s.point->y, classes[0].shape.y, 1e-9);
    EXPECT_NEAR(static_cast<double>(s.gram.determinant()), 1, 1e-12);
}

TEST(FieldTable, PureQuarticShape)
{
    // x^4 - 2: theta^k has Gram diag(4 sqrt2, 8, 8 sqrt2) under the trace-zero projection
    const auto s = shape_of_record(parse_field_table(fixture())[3]);
    ASSERT_EQ(s.diagonal.size(), 3u);
    EXPECT_NEAR(s.diagonal[0], std::sqrt(2.0) / 2, 1e-12);
    EXPECT_NEAR(s.diagonal[1], 1, 1e-12);
    EXPECT_NEAR(s.diagonal[2], std::sqrt(2.0), 1e-12);
    for (double c : s.cosines) EXPECT_NEAR(c, 0, 1e-12);
    EXPECT_TRUE(d4_symmetry_test(s.gram));
}

TEST(FieldTable, SymmetryTest)
{
    const auto recs = parse_field_table(fixture());
    EXPECT_FALSE(d4_symmetry_test(shape_of_record(recs[1]).gram));
    EXPECT_TRUE(d4_symmetry_test(SymMatrix(3, {1.0L, 0, 0, 0, 1.0L, 0, 0, 0, 1.0L})));
    // a generic rank-3 form has only +-I
    EXPECT_FALSE(d4_symmetry_test(SymMatrix(3, {1.0L, 0.31L, 0.17L, 0.31L, 1.3L, 0.23L, 0.17L, 0.23L, 1.7L})));
    // swapping two equal-norm vectors is an involution
    EXPECT_TRUE(d4_symmetry_test(SymMatrix(3, {1.0L, 0.2L, 0.3L, 0.2L, 1.0L, 0.3L, 0.3L, 0.3L, 1.5L})));
}

TEST(FieldTable, QuinticShapeReduced)
{
    const auto s = shape_of_record(parse_field_table(fixture())[2]);
    ASSERT_EQ(s.gram.rank(), 4);
    EXPECT_NEAR(static_cast<double>(s.gram.determinant()), 1, 1e-10);
    EXPECT_TRUE(std::is_sorted(s.diagonal.begin(), s.diagonal.end()));
    EXPECT_EQ(s.cosines.size(), 6u);
    for (double c : s.cosines) EXPECT_LE(std::abs(c), 0.5 + 1e-12);
}
