#pragma once

#include <functional>
#include <string>
#include <vector>

namespace taskbench {

// Stream a TSV file row by row. Blank lines and lines starting with '#' are
// skipped. The callback receives the 1-based line number and the columns.
// Throws DataError if the file cannot be opened.
void for_each_tsv_row(const std::string& path,
                      const std::function<void(std::size_t, const std::vector<std::string>&)>& fn);

}  // namespace taskbench
