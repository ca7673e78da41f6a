#include "epsim/field_io.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "epsim/csv.hpp"

namespace epsim {

namespace {

constexpr const char* kMagic = "# epsim field v1";

std::vector<double> split_numbers(const std::string& line, std::size_t expected,
                                  std::size_t line_no) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    double v = 0.0;
    if (!parse_double(tok, v)) {
      throw FieldFormatError("line " + std::to_string(line_no) + ": bad number '" + tok + "'");
    }
    out.push_back(v);
  }
  if (out.size() != expected) {
    throw FieldFormatError("line " + std::to_string(line_no) + ": expected " +
                           std::to_string(expected) + " values");
  }
  return out;
}

}  // namespace

void write_field_csv(std::ostream& os, const SimulationState& state) {
  const Grid& g = state.grid();
  os << kMagic << '\n';
  CsvWriter meta(os, {"dim", "points", "length", "alpha", "time"});
  meta.row({static_cast<double>(g.dim()), static_cast<double>(g.points()), g.length(),
            state.alpha, state.time});
  std::vector<std::string> cols;
  for (int i = 0; i < g.dim(); ++i) cols.push_back("u" + std::to_string(i + 1));
  CsvWriter data(os, cols);
  std::vector<double> row(static_cast<std::size_t>(g.dim()));
  for (std::size_t p = 0; p < g.size(); ++p) {
    for (std::size_t c = 0; c < row.size(); ++c) row[c] = state.velocity[c][p];
    data.row(row);
  }
}

SimulationState read_field_csv(std::istream& is) {
  std::string line;
  std::size_t line_no = 0;
  auto next = [&]() {
    if (!std::getline(is, line)) throw FieldFormatError("unexpected end of field dump");
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
  };

  next();
  if (line != kMagic) throw FieldFormatError("missing '# epsim field v1' header");
  next();
  if (line != "dim,points,length,alpha,time") throw FieldFormatError("bad metadata header");
  next();
  const auto meta = split_numbers(line, 5, line_no);
  const int dim = static_cast<int>(meta[0]);
  const auto points = static_cast<std::size_t>(meta[1]);
  GridPtr grid;
  try {
    grid = Grid::create(dim, points, meta[2]);
  } catch (const std::invalid_argument& e) {
    throw FieldFormatError(std::string("bad grid in field dump: ") + e.what());
  }
  next();  // component header

  std::vector<ScalarField> comps(static_cast<std::size_t>(dim), ScalarField(grid));
  for (std::size_t p = 0; p < grid->size(); ++p) {
    next();
    const auto vals = split_numbers(line, comps.size(), line_no);
    for (std::size_t c = 0; c < comps.size(); ++c) comps[c][p] = vals[c];
  }
  return SimulationState{meta[4], VelocityField(std::move(comps)), meta[3]};
}

}  // namespace epsim
