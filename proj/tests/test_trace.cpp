#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "nvcache/trace.hpp"

using namespace nvcache;

namespace {

Trace sample_trace() {
  Trace t;
  t.records = {{0.0, 0, {OpKind::read, 5}},
               {0.000123456, 1, {OpKind::update, 7}},
               {0.5, 0, {OpKind::insert, 100}},
               {1.25, 1, {OpKind::scan, 3}}};
  return t;
}

std::size_t error_line(const std::string& text) {
  std::istringstream in(text);
  try {
    read_trace(in);
  } catch (const TraceParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST_CASE("trace round trip") {
  const auto t = sample_trace();
  std::stringstream buf;
  write_trace(buf, t);
  const auto back = read_trace(buf);
  REQUIRE(back.records.size() == t.records.size());
  for (std::size_t i = 0; i < t.records.size(); ++i) {
    CHECK(back.records[i].timestamp == doctest::Approx(t.records[i].timestamp).epsilon(1e-9));
    CHECK(back.records[i].thread == t.records[i].thread);
    CHECK(back.records[i].op == t.records[i].op);
  }
  CHECK(back.thread_count() == 2);
  CHECK(back.thread_ops(1) ==
        std::vector<Operation>{{OpKind::update, 7}, {OpKind::scan, 3}});
  CHECK(back.thread_ops(5).empty());
}

TEST_CASE("parse errors report the offending line") {
  const std::string head = "# nvcache-trace v1\n";
  CHECK(error_line(head + "0.1 0 read 1\n0.2 0 fly 2\nend 2\n") == 3);
  CHECK(error_line(head + "0.1 0 read\nend 1\n") == 2);
  CHECK(error_line(head + "abc 0 read 1\nend 1\n") == 2);
  CHECK(error_line(head + "0.1 -1 read 1\nend 1\n") == 2);
  CHECK(error_line(head + "0.1 0 read x\nend 1\n") == 2);
  CHECK(error_line(head + "0.1 0 read 1\nend 3\n") == 3);
  CHECK(error_line(head + "0.1 0 read 1\nend 1\n0.2 0 read 1\n") == 4);
  // Comments are skipped but still counted.
  CHECK(error_line(head + "# note\n0.1 0 bad 1\nend 1\n") == 3);
}

TEST_CASE("truncated traces are rejected") {
  std::stringstream buf;
  write_trace(buf, sample_trace());
  const auto full = buf.str();
  const auto cut = full.substr(0, full.rfind("end"));
  std::istringstream in(cut);
  try {
    read_trace(in);
    FAIL("expected a parse error");
  } catch (const TraceParseError& e) {
    CHECK(std::string(e.what()).find("truncated") != std::string::npos);
  }
  std::istringstream empty("");
  CHECK_THROWS_AS(read_trace(empty), TraceParseError);
}

TEST_CASE("trace files") {
  const auto path = std::filesystem::temp_directory_path() / "nvcache_trace_test.txt";
  save_trace(path, sample_trace());
  CHECK(load_trace(path).records.size() == 4);
  std::filesystem::remove(path);
  CHECK_THROWS(load_trace("/nonexistent/trace.txt"));
}
