#include <algorithm>
#include <string>

#include <gtest/gtest.h>

#include "generators.hpp"

namespace pixhom {
namespace {

using testing::full_cell;
using testing::Rng;

GeometryErrorKind parse_error_kind(const std::string& text) {
  try {
    parse_cell(text);
  } catch (const GeometryError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error for:\n" << text;
  return GeometryErrorKind::MalformedHeader;
}

TEST(ParseCell, FullTwoByTwo) {
  const CellGeometry g = parse_cell("2 2 1.0 1.0\n##\n##\n");
  EXPECT_EQ(g.nx(), 2);
  EXPECT_EQ(g.ny(), 2);
  EXPECT_EQ(g.material_count(), 4);
  EXPECT_DOUBLE_EQ(volume_fraction(g), 1.0);
}

TEST(ParseCell, SingleHoleElement) {
  // Row 0 is the first mask line, so row 1 is the second.
  const CellGeometry g = parse_cell("4 4 1.0 1.0\n####\n#.##\n####\n####\n");
  EXPECT_EQ(g.material_count(), 15);
  EXPECT_FALSE(g.material(1, 1));
  EXPECT_DOUBLE_EQ(volume_fraction(g), 15.0 / 16.0);
}

TEST(ParseCell, FirstMaskLineIsBottomRow) {
  const CellGeometry g = parse_cell("3 2 1.5 1.0\n.##\n###\n");
  EXPECT_FALSE(g.material(0, 0));
  EXPECT_TRUE(g.material(0, 1));
  EXPECT_DOUBLE_EQ(g.l1(), 1.5);
}

TEST(ParseCell, SplitWrappedComponentsAreDisconnected) {
  // Two vertical bars separated by hole columns on both sides.
  EXPECT_EQ(parse_error_kind("4 2 1.0 1.0\n#.#.\n#.#.\n"), GeometryErrorKind::Disconnected);
}

TEST(ParseCell, Diagnostics) {
  EXPECT_EQ(parse_error_kind("2 2 1.0\n##\n##\n"), GeometryErrorKind::MalformedHeader);
  EXPECT_EQ(parse_error_kind("2  2 1.0 1.0\n##\n##\n"), GeometryErrorKind::MalformedHeader);
  EXPECT_EQ(parse_error_kind("x 2 1.0 1.0\n##\n##\n"), GeometryErrorKind::MalformedHeader);
  EXPECT_EQ(parse_error_kind(""), GeometryErrorKind::MalformedHeader);
  EXPECT_EQ(parse_error_kind("1 2 1.0 1.0\n#\n#\n"), GeometryErrorKind::InvalidDimensions);
  EXPECT_EQ(parse_error_kind("2 2 0 1.0\n##\n##\n"), GeometryErrorKind::InvalidDimensions);
  EXPECT_EQ(parse_error_kind("2 2 1.0 1.0\n###\n##\n"), GeometryErrorKind::InconsistentRow);
  EXPECT_EQ(parse_error_kind("2 2 1.0 1.0\n#x\n##\n"), GeometryErrorKind::InvalidCharacter);
  EXPECT_EQ(parse_error_kind("2 2 1.0 1.0\n##\n"), GeometryErrorKind::RowCountMismatch);
  EXPECT_EQ(parse_error_kind("2 2 1.0 1.0\n##\n##\n##\n"), GeometryErrorKind::RowCountMismatch);
  EXPECT_EQ(parse_error_kind("2 2 1.0 1.0\n##\n##"), GeometryErrorKind::MissingFinalNewline);
  EXPECT_EQ(parse_error_kind("2 2 1.0 1.0\n..\n..\n"), GeometryErrorKind::AllHole);
}

TEST(Connectivity, CheckerboardPointContactIsDisconnected) {
  EXPECT_EQ(parse_error_kind("2 2 1.0 1.0\n#.\n.#\n"), GeometryErrorKind::Disconnected);
}

TEST(Connectivity, ParallelStripsAreDisconnected) {
  // One full row: connected on the torus, but the plane sees separate strips.
  EXPECT_EQ(parse_error_kind("3 3 1.0 1.0\n...\n###\n...\n"), GeometryErrorKind::Disconnected);
}

TEST(Connectivity, LatticeThroughTheFacesIsConnected) {
  EXPECT_NO_THROW(parse_cell("4 4 1.0 1.0\n#..#\n####\n#..#\n#..#\n"));
}

TEST(Connectivity, DiagonalStaircaseTouchingOnlyAtCornersIsDisconnected) {
  EXPECT_EQ(parse_error_kind("3 3 1.0 1.0\n..#\n.#.\n#..\n"), GeometryErrorKind::Disconnected);
}

TEST(ReadCellFile, MissingFileIsUnreadable) {
  try {
    read_cell_file("/nonexistent/path.cell");
    FAIL();
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.kind(), GeometryErrorKind::Unreadable);
  }
}

TEST(VolumeFraction, Examples) {
  EXPECT_DOUBLE_EQ(volume_fraction(full_cell(8, 8)), 1.0);
  EXPECT_DOUBLE_EQ(volume_fraction(testing::centered_hole(8, 4)), 0.75);
  EXPECT_DOUBLE_EQ(volume_fraction(parse_cell("4 4 1.0 1.0\n####\n####\n##.#\n####\n")), 0.9375);
}

TEST(TransversalLines, FullCell) {
  const TransversalLines lines = find_transversal_lines(full_cell(4, 4));
  EXPECT_EQ(lines.rows, (std::vector<int>{0, 1, 2, 3}));
  EXPECT_EQ(lines.cols, (std::vector<int>{0, 1, 2, 3}));
  EXPECT_EQ(lines.chosen_row, 1);
  EXPECT_EQ(lines.chosen_col, 1);
  EXPECT_EQ(lines.stencil_row, 1);
}

TEST(TransversalLines, HoleAtOneOne) {
  const TransversalLines lines = find_transversal_lines(parse_cell("4 4 1.0 1.0\n####\n#.##\n####\n####\n"));
  EXPECT_EQ(lines.rows, (std::vector<int>{0, 2, 3}));
  EXPECT_EQ(lines.cols, (std::vector<int>{0, 2, 3}));
  EXPECT_EQ(lines.chosen_row, 2);
  EXPECT_EQ(lines.chosen_col, 2);
  EXPECT_EQ(lines.stencil_row, 3);
  EXPECT_EQ(lines.stencil_col, 3);
}

TEST(TransversalLines, EmptyInOneDirectionOnly) {
  // Every row meets a hole, yet the material still crosses the cell sideways.
  const CellGeometry g = parse_cell("4 4 1.0 1.0\n#.##\n###.\n#.##\n###.\n");
  const TransversalLines lines = find_transversal_lines(g);
  EXPECT_TRUE(lines.rows.empty());
  EXPECT_EQ(lines.cols, (std::vector<int>{0, 2}));
  EXPECT_EQ(lines.chosen_col, 2);
  EXPECT_FALSE(lines.applicable());
}

TEST(TransversalLines, NoLinesWhenEveryRowMeetsAHole) {
  const CellGeometry g = read_cell_file(PIXHOM_DATA_DIR "/no_lines16.cell");
  const TransversalLines lines = find_transversal_lines(g);
  EXPECT_TRUE(lines.rows.empty());
  EXPECT_TRUE(lines.cols.empty());
  EXPECT_FALSE(lines.applicable());
}

TEST(TransversalLines, BlockedStencilFallsBackToFreeLine) {
  const CellGeometry g = read_cell_file(PIXHOM_DATA_DIR "/hole8.cell");
  const TransversalLines lines = find_transversal_lines(g);
  EXPECT_EQ(lines.rows, (std::vector<int>{0, 1, 6, 7}));
  EXPECT_EQ(lines.chosen_row, 1);
  EXPECT_EQ(lines.stencil_row, 0);
  EXPECT_EQ(lines.stencil_col, 0);
}

TEST(SquareSymmetry, Examples) {
  EXPECT_TRUE(is_square_symmetric_geometry(full_cell(6, 6)));
  EXPECT_TRUE(is_square_symmetric_geometry(testing::centered_hole(8, 4)));
  EXPECT_FALSE(is_square_symmetric_geometry(parse_cell("4 4 1.0 1.0\n####\n####\n#.##\n####\n")));
}

TEST(SquareSymmetry, PinwheelIsRotationButNotMirrorSymmetric) {
  const CellGeometry g = parse_cell("4 4 1.0 1.0\n#.##\n###.\n.###\n##.#\n");
  EXPECT_TRUE(is_square_symmetric_geometry(g));
  EXPECT_FALSE(has_square_mirror_symmetry(g));
}

TEST(SquareSymmetry, RectangularCellIsNotTestable) {
  try {
    is_square_symmetric_geometry(full_cell(4, 2));
    FAIL();
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.kind(), GeometryErrorKind::NotRotationTestable);
  }
  EXPECT_THROW(is_square_symmetric_geometry(full_cell(4, 4, 1.0, 2.0)), GeometryError);
}

TEST(FormatLength, CanonicalSpelling) {
  EXPECT_EQ(format_length(1.0), "1.0");
  EXPECT_EQ(format_length(0.25), "0.25");
  EXPECT_EQ(format_length(1e-20), "1e-20");
  EXPECT_EQ(format_length(100.0), "100.0");
}

TEST(Replicate, PreservesPeriodsAndFraction) {
  const CellGeometry g = read_cell_file(PIXHOM_DATA_DIR "/reference_frame32.cell");
  for (int k : {1, 2, 3}) {
    const CellGeometry r = replicate(g, k);
    EXPECT_EQ(r.nx(), 32 * k);
    EXPECT_EQ(r.l1(), g.l1());
    EXPECT_EQ(r.material_count(), g.material_count() * k * k);
    EXPECT_EQ(volume_fraction(r), volume_fraction(g));
  }
}

TEST(ReferenceGeometry, IsFrameWithCentralLines) {
  const CellGeometry g = read_cell_file(PIXHOM_DATA_DIR "/reference_frame32.cell");
  EXPECT_DOUBLE_EQ(volume_fraction(g), 0.75);
  EXPECT_TRUE(has_square_mirror_symmetry(g));
  const TransversalLines lines = find_transversal_lines(g);
  EXPECT_EQ(lines.chosen_row, 15);
  EXPECT_EQ(lines.chosen_col, 15);
  EXPECT_TRUE(lines.stencil_applicable());
}

// Properties over random connected masks.

TEST(GeometryProperties, TextRoundTripIsByteExact) {
  Rng rng;
  for (int trial = 0; trial < 40; ++trial) {
    const int nx = rng.integer(2, 12);
    const int ny = rng.integer(2, 12);
    const CellGeometry g = testing::random_connected_mask(rng, nx, ny, 0.3, rng.uniform(0.1, 5.0), 1.0);
    const std::string text = to_cell_text(g);
    const CellGeometry back = parse_cell(text);
    EXPECT_EQ(back, g);
    EXPECT_EQ(to_cell_text(back), text);
  }
}

TEST(GeometryProperties, VolumeFractionInUnitIntervalAndOneOnlyWhenFull) {
  Rng rng(testing::kSeed + 1);
  for (int trial = 0; trial < 40; ++trial) {
    const CellGeometry g = testing::random_connected_mask(rng, rng.integer(2, 10), rng.integer(2, 10), 0.25);
    const double rho = volume_fraction(g);
    EXPECT_GT(rho, 0.0);
    EXPECT_LE(rho, 1.0);
    const bool full = std::all_of(g.mask().begin(), g.mask().end(), [](auto m) { return m != 0; });
    EXPECT_EQ(rho == 1.0, full);
  }
}

TEST(GeometryProperties, ListedLinesAreFullyMaterialAndComplete) {
  Rng rng(testing::kSeed + 2);
  for (int trial = 0; trial < 40; ++trial) {
    const CellGeometry g = testing::random_connected_mask(rng, rng.integer(2, 10), rng.integer(2, 10), 0.1);
    const TransversalLines lines = find_transversal_lines(g);
    for (int j = 0; j < g.ny(); ++j) {
      bool full = true;
      for (int i = 0; i < g.nx(); ++i) full = full && g.material(i, j);
      EXPECT_EQ(full, std::binary_search(lines.rows.begin(), lines.rows.end(), j));
    }
    for (int i = 0; i < g.nx(); ++i) {
      bool full = true;
      for (int j = 0; j < g.ny(); ++j) full = full && g.material(i, j);
      EXPECT_EQ(full, std::binary_search(lines.cols.begin(), lines.cols.end(), i));
    }
    if (lines.chosen_row) {
      EXPECT_TRUE(std::binary_search(lines.rows.begin(), lines.rows.end(), *lines.chosen_row));
    }
    if (lines.chosen_col) {
      EXPECT_TRUE(std::binary_search(lines.cols.begin(), lines.cols.end(), *lines.chosen_col));
    }
  }
}

TEST(GeometryProperties, RotationMapsRowsToColumns) {
  Rng rng(testing::kSeed + 3);
  for (int trial = 0; trial < 40; ++trial) {
    const CellGeometry g = testing::random_connected_mask(rng, rng.integer(2, 9), rng.integer(2, 9), 0.1);
    const CellGeometry r = rotate90(g);
    const TransversalLines a = find_transversal_lines(g);
    const TransversalLines b = find_transversal_lines(r);
    EXPECT_EQ(b.rows, a.cols);
    std::vector<int> expected_cols;
    for (int j : a.rows) expected_cols.push_back(g.ny() - 1 - j);
    std::sort(expected_cols.begin(), expected_cols.end());
    EXPECT_EQ(b.cols, expected_cols);
    EXPECT_EQ(rotate90(rotate90(rotate90(r))), g);
  }
}

TEST(GeometryProperties, D4GeneratorProducesSymmetricMasks) {
  Rng rng(testing::kSeed + 4);
  for (int trial = 0; trial < 10; ++trial) {
    const CellGeometry g = testing::random_d4_mask(rng, 12, 0.3);
    EXPECT_TRUE(is_square_symmetric_geometry(g));
    EXPECT_TRUE(has_square_mirror_symmetry(g));
  }
}

TEST(GeometryProperties, ShiftAndTransposeKeepConnectivityAndCount) {
  Rng rng(testing::kSeed + 5);
  for (int trial = 0; trial < 30; ++trial) {
    const CellGeometry g = testing::random_connected_mask(rng, rng.integer(2, 9), rng.integer(2, 9), 0.3);
    const CellGeometry s = shift(g, rng.integer(-5, 5), rng.integer(-5, 5));
    EXPECT_EQ(s.material_count(), g.material_count());
    EXPECT_EQ(transpose(transpose(g)), g);
    EXPECT_EQ(transpose(g).nx(), g.ny());
  }
}

}  // namespace
}  // namespace pixhom
