#include "atflow/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace atflow {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw std::runtime_error(path + ": " + what);
}

Field load_csv(const std::string& path, const GridSpec& grid) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open file");
  Array values(grid.num_nodes());
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (row >= grid.ny) fail(path, "more rows than grid ny = " + std::to_string(grid.ny));
    std::stringstream ss(line);
    std::string item;
    int col = 0;
    while (std::getline(ss, item, ',')) {
      if (col >= grid.nx)
        fail(path, "row " + std::to_string(row) + " has more than nx = " +
                       std::to_string(grid.nx) + " entries");
      try {
        values[grid.node(col, row)] = std::stod(item);
      } catch (const std::exception&) {
        fail(path, "cannot parse '" + item + "' at row " + std::to_string(row));
      }
      ++col;
    }
    if (col != grid.nx)
      fail(path, "row " + std::to_string(row) + " has " + std::to_string(col) +
                     " entries, expected nx = " + std::to_string(grid.nx));
    ++row;
  }
  if (row != grid.ny)
    fail(path, "file has " + std::to_string(row) + " rows, expected ny = " +
                   std::to_string(grid.ny));
  return Field(grid, std::move(values));
}

// Next whitespace-separated token, skipping # comments.
std::string pgm_token(std::istream& in, const std::string& path) {
  std::string tok;
  for (;;) {
    int ch = in.get();
    if (ch == EOF) {
      if (tok.empty()) fail(path, "unexpected end of PGM header");
      return tok;
    }
    if (ch == '#') {
      if (!tok.empty()) return tok;
      while (ch != EOF && ch != '\n') ch = in.get();
      continue;
    }
    if (std::isspace(ch)) {
      if (!tok.empty()) return tok;
      continue;
    }
    tok.push_back(static_cast<char>(ch));
  }
}

Field load_pgm(const std::string& path, const GridSpec& grid) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open file");
  const std::string magic = pgm_token(in, path);
  if (magic != "P2" && magic != "P5") fail(path, "not a P2/P5 PGM file");
  const int width = std::stoi(pgm_token(in, path));
  const int height = std::stoi(pgm_token(in, path));
  const int maxval = std::stoi(pgm_token(in, path));
  if (width != grid.nx || height != grid.ny)
    fail(path, "PGM is " + std::to_string(width) + "x" + std::to_string(height) +
                   ", grid expects " + std::to_string(grid.nx) + "x" +
                   std::to_string(grid.ny));
  if (maxval <= 0 || maxval > 65535) fail(path, "bad PGM maxval");

  Array values(grid.num_nodes());
  if (magic == "P2") {
    for (int j = 0; j < grid.ny; ++j)
      for (int i = 0; i < grid.nx; ++i) {
        const std::string tok = pgm_token(in, path);
        values[grid.node(i, j)] = std::stod(tok) / maxval;
      }
  } else {
    // P5: a single whitespace byte separates the header from the raster.
    const int bytes = maxval < 256 ? 1 : 2;
    std::vector<unsigned char> buf(static_cast<std::size_t>(grid.num_nodes()) * bytes);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (in.gcount() != static_cast<std::streamsize>(buf.size()))
      fail(path, "truncated P5 raster");
    for (int j = 0; j < grid.ny; ++j)
      for (int i = 0; i < grid.nx; ++i) {
        const std::size_t k = static_cast<std::size_t>(j * grid.nx + i) * bytes;
        const unsigned v = bytes == 1
                               ? buf[k]
                               : (static_cast<unsigned>(buf[k]) << 8) | buf[k + 1];
        values[grid.node(i, j)] = static_cast<double>(v) / maxval;
      }
  }
  return Field(grid, std::move(values));
}

}  // namespace

Field load_field(const std::string& path, const std::string& format,
                 const GridSpec& grid) {
  if (format == "csv") return load_csv(path, grid);
  if (format == "pgm") return load_pgm(path, grid);
  throw std::invalid_argument("load_field: unknown format '" + format + "'");
}

void write_snapshot(const Field& f, const std::string& path,
                    const std::string& format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  const GridSpec& g = f.grid;
  if (format == "csv") {
    char buf[64];
    for (int j = 0; j < g.ny; ++j) {
      for (int i = 0; i < g.nx; ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", f(i, j));
        out << (i ? "," : "") << buf;
      }
      out << "\n";
    }
  } else if (format == "pgm") {
    out << "P5\n" << g.nx << " " << g.ny << "\n255\n";
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const double v = std::min(1.0, std::max(0.0, f(i, j)));
        out.put(static_cast<char>(static_cast<unsigned char>(std::lround(v * 255.0))));
      }
  } else {
    throw std::invalid_argument("write_snapshot: unknown format '" + format + "'");
  }
  if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace atflow
