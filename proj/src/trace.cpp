#include "nvcache/trace.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace nvcache {

namespace {

constexpr std::string_view kHeader = "# nvcache-trace v1";

template <typename T>
bool parse_number(std::string_view token, T& out) {
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc() && ptr == token.data() + token.size();
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

}  // namespace

std::vector<Operation> Trace::thread_ops(int thread) const {
  std::vector<Operation> out;
  for (const auto& r : records) {
    if (r.thread == thread) out.push_back(r.op);
  }
  return out;
}

int Trace::thread_count() const {
  int n = 0;
  for (const auto& r : records) n = std::max(n, r.thread + 1);
  return n;
}

TraceParseError::TraceParseError(std::size_t line, const std::string& what)
    : std::runtime_error("trace line " + std::to_string(line) + ": " + what), line_(line) {}

void write_trace(std::ostream& out, const Trace& trace) {
  out << kHeader << '\n';
  char buf[128];
  for (const auto& r : trace.records) {
    std::snprintf(buf, sizeof(buf), "%.9f %d %s %llu\n", r.timestamp, r.thread,
                  std::string(to_string(r.op.kind)).c_str(),
                  static_cast<unsigned long long>(r.op.key));
    out << buf;
  }
  out << "end " << trace.records.size() << '\n';
}

Trace read_trace(std::istream& in) {
  Trace trace;
  std::string line;
  std::size_t lineno = 0;
  bool ended = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (ended) {
      if (split(line).empty()) continue;
      throw TraceParseError(lineno, "content after end marker");
    }
    if (line.empty() || line[0] == '#') {
      continue;
    }
    const auto tokens = split(line);
    if (tokens.empty()) {
      continue;
    }
    if (tokens[0] == "end") {
      std::size_t count = 0;
      if (tokens.size() != 2 || !parse_number(tokens[1], count)) {
        throw TraceParseError(lineno, "malformed end marker");
      }
      if (count != trace.records.size()) {
        throw TraceParseError(lineno, "end marker expects " + std::to_string(count) +
                                          " records, found " +
                                          std::to_string(trace.records.size()));
      }
      ended = true;
      continue;
    }
    if (tokens.size() != 4) {
      throw TraceParseError(lineno, "expected '<virtual-ts> <thread> <kind> <key>'");
    }
    TraceRecord r;
    if (!parse_number(tokens[0], r.timestamp) || r.timestamp < 0.0) {
      throw TraceParseError(lineno, "bad timestamp '" + std::string(tokens[0]) + "'");
    }
    if (!parse_number(tokens[1], r.thread) || r.thread < 0) {
      throw TraceParseError(lineno, "bad thread '" + std::string(tokens[1]) + "'");
    }
    try {
      r.op.kind = parse_op_kind(tokens[2]);
    } catch (const std::invalid_argument&) {
      throw TraceParseError(lineno, "bad operation kind '" + std::string(tokens[2]) + "'");
    }
    if (!parse_number(tokens[3], r.op.key)) {
      throw TraceParseError(lineno, "bad key '" + std::string(tokens[3]) + "'");
    }
    trace.records.push_back(r);
  }
  if (!ended) {
    throw TraceParseError(lineno + 1, "missing end marker (truncated trace)");
  }
  return trace;
}

void save_trace(const std::filesystem::path& path, const Trace& trace) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write trace " + path.string());
  }
  write_trace(out, trace);
  if (!out) {
    throw std::runtime_error("error writing trace " + path.string());
  }
}

Trace load_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open trace " + path.string());
  }
  return read_trace(in);
}

}  // namespace nvcache
