#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "nvcache/workload.hpp"

namespace nvcache {

// One dispatched operation: `<virtual-ts> <thread> <kind> <key>`.
struct TraceRecord {
  double timestamp = 0.0;
  int thread = 0;
  Operation op;
};

struct Trace {
  std::vector<TraceRecord> records;

  // Operations of one thread in dispatch order.
  std::vector<Operation> thread_ops(int thread) const;
  int thread_count() const;
};

class TraceParseError : public std::runtime_error {
 public:
  TraceParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Text format: a "# nvcache-trace v1" header, one record per line, and an
// "end <count>" trailer so a file cut at a line boundary is still detected as
// truncated. Lines starting with '#' are comments.
void write_trace(std::ostream& out, const Trace& trace);
Trace read_trace(std::istream& in);

void save_trace(const std::filesystem::path& path, const Trace& trace);
Trace load_trace(const std::filesystem::path& path);

}  // namespace nvcache
