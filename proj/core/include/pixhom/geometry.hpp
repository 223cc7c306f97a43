#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pixhom/errors.hpp"

namespace pixhom {

/**
 * Pixel description of one periodicity cell.
 *
 * The cell [0, l1) x [0, l2) is split into nx x ny equal rectangular
 * elements. Element (i, j) covers column i (x direction) and row j
 * (y direction); row 0 is the bottom of the cell. An element is either
 * material or hole. Construction validates that the periodic extension of
 * the material elements is connected through shared edges.
 */
class CellGeometry {
 public:
  /// `mask` is row-major with index j * nx + i; nonzero means material.
  static CellGeometry create(int nx, int ny, double l1, double l2, std::vector<std::uint8_t> mask);

  int nx() const noexcept { return nx_; }
  int ny() const noexcept { return ny_; }
  double l1() const noexcept { return l1_; }
  double l2() const noexcept { return l2_; }
  double hx() const noexcept { return l1_ / nx_; }
  double hy() const noexcept { return l2_ / ny_; }
  double area() const noexcept { return l1_ * l2_; }

  bool material(int i, int j) const noexcept { return mask_[index(i, j)] != 0; }
  /// Periodic lookup; any integer indices are wrapped into the cell.
  bool material_wrapped(int i, int j) const noexcept;
  int index(int i, int j) const noexcept { return j * nx_ + i; }
  int material_count() const noexcept { return material_count_; }
  const std::vector<std::uint8_t>& mask() const noexcept { return mask_; }

  bool row_is_material(int j) const noexcept;
  bool column_is_material(int i) const noexcept;

  friend bool operator==(const CellGeometry&, const CellGeometry&) = default;

 private:
  CellGeometry(int nx, int ny, double l1, double l2, std::vector<std::uint8_t> mask);

  int nx_;
  int ny_;
  double l1_;
  double l2_;
  std::vector<std::uint8_t> mask_;
  int material_count_;
};

/// Parses the .cell text format. Throws GeometryError.
CellGeometry parse_cell(std::string_view text);
CellGeometry read_cell_file(const std::string& path);

/// Canonical .cell text; parse_cell(to_cell_text(g)) == g.
std::string to_cell_text(const CellGeometry& g);

/// Canonical spelling of a period length: shortest round-trip digits, with a
/// trailing ".0" when that would otherwise read as an integer.
std::string format_length(double value);

double volume_fraction(const CellGeometry& g);

struct TransversalLines {
  std::vector<int> rows;  ///< fully material element rows (horizontal lines)
  std::vector<int> cols;  ///< fully material element columns (vertical lines)
  std::optional<int> chosen_row;
  std::optional<int> chosen_col;
  /// Nearest-center row/column whose two periodic neighbours are also fully
  /// material, so a centered difference across the line stays in material.
  std::optional<int> stencil_row;
  std::optional<int> stencil_col;

  bool applicable() const noexcept { return chosen_row && chosen_col; }
  bool stencil_applicable() const noexcept { return stencil_row && stencil_col; }
};

TransversalLines find_transversal_lines(const CellGeometry& g);

/// True iff the mask is invariant under a quarter turn about the cell
/// center. Requires nx == ny and l1 == l2, otherwise throws
/// GeometryError(NotRotationTestable).
bool is_square_symmetric_geometry(const CellGeometry& g);

/// True iff the mask is invariant under reflection across the vertical and
/// the diagonal mid-lines (the full symmetry group of the square).
bool has_square_mirror_symmetry(const CellGeometry& g);

/// Each element becomes a k x k block; the continuum geometry is unchanged.
CellGeometry replicate(const CellGeometry& g, int k);
/// Quarter turn counter-clockwise about the cell center.
CellGeometry rotate90(const CellGeometry& g);
/// Swaps the x and y axes (and the periods).
CellGeometry transpose(const CellGeometry& g);
/// Cyclic shift: element (i, j) moves to (i + di, j + dj).
CellGeometry shift(const CellGeometry& g, int di, int dj);

}  // namespace pixhom
