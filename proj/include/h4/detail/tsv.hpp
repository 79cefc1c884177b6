#pragma once

#include <cstddef>
#include <istream>
#include <string>
#include <utility>
#include <vector>

#include "h4/error.hpp"

namespace h4::detail {

struct TsvRow {
  std::size_t line_no;
  std::string key;
  std::string value;
};

// `<key>\t<value>` lines; blank lines and lines starting with '#' are skipped.
inline std::vector<TsvRow> read_tsv(std::istream& in, const std::string& what) {
  std::vector<TsvRow> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == line.size() ||
        line.find('\t', tab + 1) != std::string::npos) {
      throw Error(what + ": malformed line " + std::to_string(line_no) + ": \"" + line + "\"");
    }
    rows.push_back({line_no, line.substr(0, tab), line.substr(tab + 1)});
  }
  return rows;
}

}  // namespace h4::detail
