#pragma once

#include <cstddef>
#include <memory>
#include <string>

namespace mdl {

/// Location of a syntactic construct in an input file. Line and column are
/// 1-based; a zero line means the span is synthetic (built in memory).
struct SourceSpan {
  std::shared_ptr<const std::string> file;
  int line = 0;
  int column = 0;
  std::size_t byte_begin = 0;
  std::size_t byte_end = 0;

  bool known() const { return line > 0; }

  std::string to_string() const {
    std::string out = file ? *file : std::string("<memory>");
    if (line > 0) {
      out += ':' + std::to_string(line) + ':' + std::to_string(column);
    }
    return out;
  }
};

}  // namespace mdl
