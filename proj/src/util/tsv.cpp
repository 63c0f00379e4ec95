#include "taskbench/util/tsv.hpp"

#include <fstream>

#include "taskbench/errors.hpp"
#include "taskbench/util/text.hpp"

namespace taskbench {

void for_each_tsv_row(
    const std::string& path,
    const std::function<void(std::size_t, const std::vector<std::string>&)>& fn) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    fn(lineno, split_char(line, '\t'));
  }
}

}  // namespace taskbench
