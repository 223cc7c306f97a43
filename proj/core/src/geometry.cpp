#include "pixhom/geometry.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>
#include <utility>

namespace pixhom {

const char* to_string(GeometryErrorKind kind) {
  switch (kind) {
    case GeometryErrorKind::MalformedHeader: return "malformed header";
    case GeometryErrorKind::InvalidDimensions: return "invalid dimensions";
    case GeometryErrorKind::InconsistentRow: return "inconsistent row length";
    case GeometryErrorKind::InvalidCharacter: return "invalid mask character";
    case GeometryErrorKind::RowCountMismatch: return "row count mismatch";
    case GeometryErrorKind::MissingFinalNewline: return "missing final newline";
    case GeometryErrorKind::AllHole: return "mask has no material";
    case GeometryErrorKind::Disconnected: return "material is disconnected";
    case GeometryErrorKind::NotRotationTestable: return "not testable by rotation";
    case GeometryErrorKind::Unreadable: return "cannot read geometry";
  }
  return "geometry error";
}

SymmetryError::SymmetryError(double residual, double tolerance)
    : Error("effective tensor is not square symmetric: residual " + std::to_string(residual) +
            " exceeds tolerance " + std::to_string(tolerance)),
      residual_(residual) {}

namespace {

long long gcd_ll(long long a, long long b) { return std::gcd(a < 0 ? -a : a, b < 0 ? -b : b); }

// Connectivity of the periodic extension. A breadth-first search on the
// torus records, for every element, which translate of the cell it was
// reached in. Closing an edge to an already visited element in a different
// translate yields a lattice vector joining two copies of the same element.
// The extension is connected iff the torus graph is connected and those
// vectors generate all of Z^2, i.e. the gcd of their 2x2 minors is 1.
bool periodic_extension_connected(int nx, int ny, const std::vector<std::uint8_t>& mask) {
  const int n = nx * ny;
  int start = -1;
  for (int e = 0; e < n; ++e) {
    if (mask[e]) {
      start = e;
      break;
    }
  }
  if (start < 0) return false;

  std::vector<std::array<int, 2>> lift(n);
  std::vector<std::uint8_t> seen(n, 0);
  std::set<std::pair<int, int>> cycles;
  std::queue<int> queue;
  seen[start] = 1;
  lift[start] = {0, 0};
  queue.push(start);
  int reached = 1;

  constexpr std::array<std::array<int, 2>, 4> steps{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};
  while (!queue.empty()) {
    const int e = queue.front();
    queue.pop();
    const int i = e % nx;
    const int j = e / nx;
    for (const auto& [di, dj] : steps) {
      int ni = i + di;
      int nj = j + dj;
      std::array<int, 2> l = lift[e];
      if (ni < 0) { ni += nx; --l[0]; }
      if (ni >= nx) { ni -= nx; ++l[0]; }
      if (nj < 0) { nj += ny; --l[1]; }
      if (nj >= ny) { nj -= ny; ++l[1]; }
      const int f = nj * nx + ni;
      if (!mask[f]) continue;
      if (!seen[f]) {
        seen[f] = 1;
        lift[f] = l;
        queue.push(f);
        ++reached;
      } else {
        const int dx = l[0] - lift[f][0];
        const int dy = l[1] - lift[f][1];
        if (dx != 0 || dy != 0) cycles.emplace(dx, dy);
      }
    }
  }

  const int material = static_cast<int>(std::count_if(mask.begin(), mask.end(), [](auto m) { return m != 0; }));
  if (reached != material) return false;

  long long index = 0;
  for (auto a = cycles.begin(); a != cycles.end(); ++a) {
    for (auto b = std::next(a); b != cycles.end(); ++b) {
      const long long det = static_cast<long long>(a->first) * b->second -
                            static_cast<long long>(a->second) * b->first;
      index = gcd_ll(index, det);
    }
  }
  return index == 1;
}

int nearest_center(const std::vector<int>& indices, int count) {
  // Distances are compared in half-element units to stay in integers.
  const int center2 = count - 1;
  int best = indices.front();
  for (int idx : indices) {
    if (std::abs(2 * idx - center2) < std::abs(2 * best - center2)) best = idx;
  }
  return best;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) {
      throw GeometryError(GeometryErrorKind::MissingFinalNewline, "last line is not newline-terminated");
    }
    lines.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  return lines;
}

template <typename T>
bool parse_number(std::string_view token, T& out) {
  if (token.empty()) return false;
  const auto* first = token.data();
  const auto* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

}  // namespace

CellGeometry::CellGeometry(int nx, int ny, double l1, double l2, std::vector<std::uint8_t> mask)
    : nx_(nx), ny_(ny), l1_(l1), l2_(l2), mask_(std::move(mask)) {
  for (auto& m : mask_) m = m ? 1 : 0;
  material_count_ = static_cast<int>(std::count(mask_.begin(), mask_.end(), std::uint8_t{1}));
}

CellGeometry CellGeometry::create(int nx, int ny, double l1, double l2, std::vector<std::uint8_t> mask) {
  if (nx < 2 || ny < 2) {
    throw GeometryError(GeometryErrorKind::InvalidDimensions, "nx and ny must be at least 2");
  }
  if (!(l1 > 0.0) || !(l2 > 0.0) || !std::isfinite(l1) || !std::isfinite(l2)) {
    throw GeometryError(GeometryErrorKind::InvalidDimensions, "periods must be positive and finite");
  }
  if (mask.size() != static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny)) {
    throw GeometryError(GeometryErrorKind::InvalidDimensions, "mask size does not match nx * ny");
  }
  if (std::none_of(mask.begin(), mask.end(), [](auto m) { return m != 0; })) {
    throw GeometryError(GeometryErrorKind::AllHole, "at least one material element is required");
  }
  if (!periodic_extension_connected(nx, ny, mask)) {
    throw GeometryError(GeometryErrorKind::Disconnected,
                        "periodic extension of the material is not a single edge-connected component");
  }
  return CellGeometry(nx, ny, l1, l2, std::move(mask));
}

bool CellGeometry::material_wrapped(int i, int j) const noexcept {
  i %= nx_;
  j %= ny_;
  if (i < 0) i += nx_;
  if (j < 0) j += ny_;
  return material(i, j);
}

bool CellGeometry::row_is_material(int j) const noexcept {
  for (int i = 0; i < nx_; ++i) {
    if (!material(i, j)) return false;
  }
  return true;
}

bool CellGeometry::column_is_material(int i) const noexcept {
  for (int j = 0; j < ny_; ++j) {
    if (!material(i, j)) return false;
  }
  return true;
}

CellGeometry parse_cell(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw GeometryError(GeometryErrorKind::MalformedHeader, "empty input");

  std::vector<std::string_view> tokens;
  std::string_view header = lines.front();
  std::size_t pos = 0;
  while (true) {
    const std::size_t sp = header.find(' ', pos);
    tokens.push_back(header.substr(pos, sp == std::string_view::npos ? std::string_view::npos : sp - pos));
    if (sp == std::string_view::npos) break;
    pos = sp + 1;
  }
  int nx = 0;
  int ny = 0;
  double l1 = 0.0;
  double l2 = 0.0;
  if (tokens.size() != 4 || !parse_number(tokens[0], nx) || !parse_number(tokens[1], ny) ||
      !parse_number(tokens[2], l1) || !parse_number(tokens[3], l2)) {
    throw GeometryError(GeometryErrorKind::MalformedHeader,
                        "expected 'nx ny l1 l2' separated by single spaces, got '" + std::string(header) + "'");
  }
  if (nx < 2 || ny < 2 || !(l1 > 0.0) || !(l2 > 0.0) || !std::isfinite(l1) || !std::isfinite(l2)) {
    throw GeometryError(GeometryErrorKind::InvalidDimensions, "need nx, ny >= 2 and positive finite periods");
  }
  if (lines.size() - 1 != static_cast<std::size_t>(ny)) {
    throw GeometryError(GeometryErrorKind::RowCountMismatch,
                        "expected " + std::to_string(ny) + " mask rows, found " + std::to_string(lines.size() - 1));
  }

  std::vector<std::uint8_t> mask(static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    const std::string_view row = lines[static_cast<std::size_t>(j) + 1];
    if (row.size() != static_cast<std::size_t>(nx)) {
      throw GeometryError(GeometryErrorKind::InconsistentRow,
                          "row " + std::to_string(j) + " has " + std::to_string(row.size()) + " characters, expected " +
                              std::to_string(nx));
    }
    for (int i = 0; i < nx; ++i) {
      const char c = row[static_cast<std::size_t>(i)];
      if (c != '#' && c != '.') {
        throw GeometryError(GeometryErrorKind::InvalidCharacter,
                            "row " + std::to_string(j) + " column " + std::to_string(i) + ": '" + std::string(1, c) + "'");
      }
      mask[static_cast<std::size_t>(j) * nx + i] = c == '#' ? 1 : 0;
    }
  }
  return CellGeometry::create(nx, ny, l1, l2, std::move(mask));
}

CellGeometry read_cell_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw GeometryError(GeometryErrorKind::Unreadable, "cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_cell(buffer.str());
}

std::string format_length(double value) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  std::string s(buf.data(), ptr);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string to_cell_text(const CellGeometry& g) {
  std::string out = std::to_string(g.nx()) + ' ' + std::to_string(g.ny()) + ' ' + format_length(g.l1()) + ' ' +
                    format_length(g.l2()) + '\n';
  out.reserve(out.size() + static_cast<std::size_t>(g.nx() + 1) * g.ny());
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) out += g.material(i, j) ? '#' : '.';
    out += '\n';
  }
  return out;
}

double volume_fraction(const CellGeometry& g) {
  return static_cast<double>(g.material_count()) / (static_cast<double>(g.nx()) * g.ny());
}

TransversalLines find_transversal_lines(const CellGeometry& g) {
  TransversalLines lines;
  for (int j = 0; j < g.ny(); ++j) {
    if (g.row_is_material(j)) lines.rows.push_back(j);
  }
  for (int i = 0; i < g.nx(); ++i) {
    if (g.column_is_material(i)) lines.cols.push_back(i);
  }
  if (!lines.rows.empty()) lines.chosen_row = nearest_center(lines.rows, g.ny());
  if (!lines.cols.empty()) lines.chosen_col = nearest_center(lines.cols, g.nx());

  auto with_free_stencil = [](const std::vector<int>& full, int count) {
    std::vector<int> out;
    for (int idx : full) {
      const int below = (idx + count - 1) % count;
      const int above = (idx + 1) % count;
      if (std::binary_search(full.begin(), full.end(), below) && std::binary_search(full.begin(), full.end(), above)) {
        out.push_back(idx);
      }
    }
    return out;
  };
  const auto stencil_rows = with_free_stencil(lines.rows, g.ny());
  const auto stencil_cols = with_free_stencil(lines.cols, g.nx());
  if (!stencil_rows.empty()) lines.stencil_row = nearest_center(stencil_rows, g.ny());
  if (!stencil_cols.empty()) lines.stencil_col = nearest_center(stencil_cols, g.nx());
  return lines;
}

bool is_square_symmetric_geometry(const CellGeometry& g) {
  if (g.nx() != g.ny() || g.l1() != g.l2()) {
    throw GeometryError(GeometryErrorKind::NotRotationTestable, "cell must be square (nx == ny, l1 == l2)");
  }
  const int n = g.nx();
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (g.material(i, j) != g.material(n - 1 - j, i)) return false;
    }
  }
  return true;
}

bool has_square_mirror_symmetry(const CellGeometry& g) {
  if (!is_square_symmetric_geometry(g)) return false;
  const int n = g.nx();
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (g.material(i, j) != g.material(n - 1 - i, j)) return false;
      if (g.material(i, j) != g.material(j, i)) return false;
    }
  }
  return true;
}

CellGeometry replicate(const CellGeometry& g, int k) {
  if (k < 1) throw GeometryError(GeometryErrorKind::InvalidDimensions, "replication factor must be >= 1");
  const int nx = g.nx() * k;
  const int ny = g.ny() * k;
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) mask[static_cast<std::size_t>(j) * nx + i] = g.material(i / k, j / k) ? 1 : 0;
  }
  return CellGeometry::create(nx, ny, g.l1(), g.l2(), std::move(mask));
}

CellGeometry rotate90(const CellGeometry& g) {
  // (x, y) -> (l2 - y, x): new cell has nx' = ny, ny' = nx.
  const int nx = g.ny();
  const int ny = g.nx();
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      const int ni = g.ny() - 1 - j;
      const int nj = i;
      mask[static_cast<std::size_t>(nj) * nx + ni] = g.material(i, j) ? 1 : 0;
    }
  }
  return CellGeometry::create(nx, ny, g.l2(), g.l1(), std::move(mask));
}

CellGeometry transpose(const CellGeometry& g) {
  const int nx = g.ny();
  const int ny = g.nx();
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) mask[static_cast<std::size_t>(i) * nx + j] = g.material(i, j) ? 1 : 0;
  }
  return CellGeometry::create(nx, ny, g.l2(), g.l1(), std::move(mask));
}

CellGeometry shift(const CellGeometry& g, int di, int dj) {
  std::vector<std::uint8_t> mask(g.mask().size());
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      const int ni = ((i + di) % g.nx() + g.nx()) % g.nx();
      const int nj = ((j + dj) % g.ny() + g.ny()) % g.ny();
      mask[static_cast<std::size_t>(nj) * g.nx() + ni] = g.material(i, j) ? 1 : 0;
    }
  }
  return CellGeometry::create(g.nx(), g.ny(), g.l1(), g.l2(), std::move(mask));
}

}  // namespace pixhom
