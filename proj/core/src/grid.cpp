#include "whpath/grid.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "whpath/errors.hpp"

namespace whpath {

std::string to_string(const Cell& c) {
  return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")";
}

std::ostream& operator<<(std::ostream& os, const Cell& c) { return os << to_string(c); }

Direction direction_from_int(int value) {
  if (value < 0 || value > 4) throw DomainError("direction value out of range: " + std::to_string(value));
  return static_cast<Direction>(value);
}

Direction direction_between(Cell g1, Cell g2) {
  const int dx = g2.x - g1.x;
  const int dy = g2.y - g1.y;
  if (dx == 0 && dy == 0) return Direction::Stay;
  if (dx == 0 && dy == -1) return Direction::Up;
  if (dx == 1 && dy == 0) return Direction::Right;
  if (dx == 0 && dy == 1) return Direction::Down;
  if (dx == -1 && dy == 0) return Direction::Left;
  throw DomainError("cells " + to_string(g1) + " and " + to_string(g2) + " are not adjacent");
}

GridGraph::GridGraph(int width, int height) : width_(width), height_(height) {
  if (width <= 0 || height <= 0) throw DomainError("grid dimensions must be positive");
  blocked_.assign(static_cast<std::size_t>(width) * height, 0);
}

GridGraph::GridGraph(int width, int height, const std::vector<Cell>& blocked)
    : GridGraph(width, height) {
  for (const Cell& c : blocked) set_blocked(c, true);
}

void GridGraph::set_blocked(Cell c, bool blocked) {
  if (!in_bounds(c)) throw DomainError("cell " + to_string(c) + " out of bounds");
  blocked_[index(c)] = blocked ? 1 : 0;
}

std::vector<Cell> GridGraph::blocked_cells() const {
  std::vector<Cell> out;
  for (int i = 0; i < size(); ++i)
    if (blocked_[i]) out.push_back(cell(i));
  return out;
}

int GridGraph::free_count() const {
  int n = 0;
  for (auto b : blocked_) n += b ? 0 : 1;
  return n;
}

bool GridGraph::has_edge(Cell a, Cell b) const noexcept {
  return is_free(a) && is_free(b) && manhattan(a, b) <= 1;
}

std::vector<Cell> GridGraph::neighbors(Cell v) const {
  if (!is_free(v)) throw DomainError("cell " + to_string(v) + " is blocked or out of bounds");
  std::vector<Cell> out{v};
  for_each_move(v, [&](Cell n, Direction) { out.push_back(n); });
  return out;
}

std::vector<Cell> neighbors(const GridGraph& graph, Cell v) { return graph.neighbors(v); }

GridGraph parse_map(std::istream& in) {
  int width = 0;
  int height = 0;
  if (!(in >> width >> height)) throw DomainError("map: missing '<width> <height>' header");
  GridGraph graph(width, height);
  std::string row;
  std::getline(in, row);
  for (int y = 0; y < height; ++y) {
    if (!std::getline(in, row)) throw DomainError("map: expected " + std::to_string(height) + " rows");
    while (!row.empty() && (row.back() == '\r' || row.back() == ' ' || row.back() == '\t')) row.pop_back();
    if (static_cast<int>(row.size()) < width)
      throw DomainError("map: row " + std::to_string(y) + " shorter than width");
    for (int x = 0; x < width; ++x) {
      switch (row[x]) {
        case '.': break;
        case '@': graph.set_blocked({x, y}, true); break;
        default:
          throw DomainError("map: unexpected character '" + std::string(1, row[x]) + "' at row " +
                            std::to_string(y));
      }
    }
  }
  return graph;
}

GridGraph load_map(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open map file " + path);
  return parse_map(in);
}

std::string format_map(const GridGraph& graph) {
  std::ostringstream out;
  out << graph.width() << ' ' << graph.height() << '\n';
  for (int y = 0; y < graph.height(); ++y) {
    for (int x = 0; x < graph.width(); ++x) out << (graph.is_free({x, y}) ? '.' : '@');
    out << '\n';
  }
  return out.str();
}

}  // namespace whpath
