#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace whpath {

// Grid coordinate. x grows rightward, y grows downward.
struct Cell {
  int x = 0;
  int y = 0;

  friend constexpr bool operator==(const Cell&, const Cell&) = default;
  friend constexpr auto operator<=>(const Cell&, const Cell&) = default;
};

std::string to_string(const Cell& c);
std::ostream& operator<<(std::ostream& os, const Cell& c);

constexpr int manhattan(Cell a, Cell b) {
  return (a.x > b.x ? a.x - b.x : b.x - a.x) + (a.y > b.y ? a.y - b.y : b.y - a.y);
}

// Heading of a robot. The numeric values 1..4 are the ones used in trace
// files; Stay marks a self-loop move.
enum class Direction : std::uint8_t { Stay = 0, Up = 1, Right = 2, Down = 3, Left = 4 };

inline constexpr std::array<Direction, 4> kMoveDirections{Direction::Up, Direction::Right,
                                                          Direction::Down, Direction::Left};

constexpr int to_int(Direction d) { return static_cast<int>(d); }
Direction direction_from_int(int value);

constexpr Cell delta(Direction d) {
  switch (d) {
    case Direction::Up: return {0, -1};
    case Direction::Right: return {1, 0};
    case Direction::Down: return {0, 1};
    case Direction::Left: return {-1, 0};
    case Direction::Stay: break;
  }
  return {0, 0};
}

constexpr Cell step(Cell c, Direction d) {
  const Cell dd = delta(d);
  return {c.x + dd.x, c.y + dd.y};
}

constexpr Direction opposite(Direction d) {
  switch (d) {
    case Direction::Up: return Direction::Down;
    case Direction::Right: return Direction::Left;
    case Direction::Down: return Direction::Up;
    case Direction::Left: return Direction::Right;
    case Direction::Stay: break;
  }
  return Direction::Stay;
}

// True for two moving directions at a right angle.
constexpr bool perpendicular(Direction a, Direction b) {
  if (a == Direction::Stay || b == Direction::Stay) return false;
  return (to_int(a) + to_int(b)) % 2 == 1;
}

// Direction of the move g1 -> g2. Stay for g1 == g2; throws DomainError when
// the two cells are not 4-adjacent.
Direction direction_between(Cell g1, Cell g2);

// Directed grid graph with 4-neighbourhood edges between free cells and a
// self-loop on every free cell.
class GridGraph {
 public:
  GridGraph(int width, int height);
  GridGraph(int width, int height, const std::vector<Cell>& blocked);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int size() const noexcept { return width_ * height_; }

  bool in_bounds(Cell c) const noexcept {
    return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_;
  }
  bool is_free(Cell c) const noexcept { return in_bounds(c) && !blocked_[index(c)]; }
  bool is_blocked(Cell c) const noexcept { return !is_free(c); }

  int index(Cell c) const noexcept { return c.y * width_ + c.x; }
  Cell cell(int idx) const noexcept { return {idx % width_, idx / width_}; }

  void set_blocked(Cell c, bool blocked);
  std::vector<Cell> blocked_cells() const;
  int free_count() const;

  // e(a, b) in E.
  bool has_edge(Cell a, Cell b) const noexcept;

  // v itself plus every free in-bounds 4-neighbour. Throws DomainError on a
  // blocked or out-of-bounds v.
  std::vector<Cell> neighbors(Cell v) const;

  // Invokes fn(next, dir) for each free 4-neighbour of v (self-loop excluded).
  template <typename Fn>
  void for_each_move(Cell v, Fn&& fn) const {
    for (Direction d : kMoveDirections) {
      const Cell n = step(v, d);
      if (is_free(n)) fn(n, d);
    }
  }

  friend bool operator==(const GridGraph&, const GridGraph&) = default;

 private:
  int width_;
  int height_;
  std::vector<std::uint8_t> blocked_;
};

std::vector<Cell> neighbors(const GridGraph& graph, Cell v);

// Map text format: "<width> <height>" then `height` rows of `width`
// characters, '.' free and '@' blocked.
GridGraph parse_map(std::istream& in);
GridGraph load_map(const std::string& path);
std::string format_map(const GridGraph& graph);

}  // namespace whpath

template <>
struct std::hash<whpath::Cell> {
  std::size_t operator()(const whpath::Cell& c) const noexcept {
    return std::hash<long long>{}((static_cast<long long>(c.x) << 32) ^
                                  static_cast<unsigned int>(c.y));
  }
};
