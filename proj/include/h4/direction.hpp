#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "h4/error.hpp"

namespace h4 {

// Declaration order is the canonical order used for tie-breaking and output.
enum class Direction : std::uint8_t { L = 0, R = 1, U = 2, D = 3 };

inline constexpr std::array<Direction, 4> kDirections{Direction::L, Direction::R, Direction::U,
                                                      Direction::D};

constexpr std::size_t index_of(Direction d) { return static_cast<std::size_t>(d); }

constexpr char to_char(Direction d) {
  constexpr std::array<char, 4> names{'L', 'R', 'U', 'D'};
  return names[index_of(d)];
}

constexpr std::optional<Direction> direction_from_char(char c) {
  switch (c) {
    case 'L': return Direction::L;
    case 'R': return Direction::R;
    case 'U': return Direction::U;
    case 'D': return Direction::D;
    default: return std::nullopt;
  }
}

/// A key code: the sequence of directional presses that selects one symbol.
using Code = std::vector<Direction>;

inline std::string to_string(const Code& code) {
  std::string out;
  out.reserve(code.size());
  for (Direction d : code) out.push_back(to_char(d));
  return out;
}

/// Parses a string over [LRUD]. Throws on any other character.
inline Code parse_code(std::string_view text) {
  Code code;
  code.reserve(text.size());
  for (char c : text) {
    auto d = direction_from_char(c);
    if (!d) throw Error("invalid direction character '" + std::string(1, c) + "' in code \"" +
                        std::string(text) + "\"");
    code.push_back(*d);
  }
  return code;
}

}  // namespace h4
