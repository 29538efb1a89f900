#include "doctest.h"

#include "pcs/csvio.hpp"
#include "pcs/error.hpp"

#include <cstdio>
#include <filesystem>
#include <string>

namespace fs = std::filesystem;

TEST_CASE("float formatting: 15 significant digits, trailing zeros dropped") {
  CHECK(pcs::io::format_double(0.5) == "0.5");
  CHECK(pcs::io::format_double(1.0) == "1");
  CHECK(pcs::io::format_double(-3.0) == "-3");
  CHECK(pcs::io::format_double(1.0 / 3.0) == "0.333333333333333");
  CHECK(pcs::io::format_double(2.0 / 3.0) == "0.666666666666667");
  CHECK(pcs::io::format_double(0.276393202250021) == "0.276393202250021");
  CHECK(pcs::io::format_double(1.5190237e-05) == "1.5190237e-05");
  CHECK(pcs::io::format_double(12345.678) == "12345.678");
  CHECK(pcs::io::format_double(0.25, 2) == "0.25");
  CHECK(pcs::io::format_double(1.0 / 3.0, 3) == "0.333");
  // Digit counts clamp to a sane range instead of tripping printf.
  CHECK(pcs::io::format_double(1.0 / 3.0, 0) == "0.3");
  CHECK(pcs::io::format_double(1.0 / 3.0, 99) == pcs::io::format_double(1.0 / 3.0, 17));
}

TEST_CASE("csv assembly: header, rows, quoting") {
  pcs::io::csv_table t({"scheme", "n", "l2"});
  CHECK(t.rows() == 0);
  t.add_row({"PC6", "400", "1.5e-05"});
  t.add_row({"needs,quoting", "he said \"hi\"", "line\nbreak"});
  CHECK(t.rows() == 2);
  CHECK(t.str() ==
        "scheme,n,l2\n"
        "PC6,400,1.5e-05\n"
        "\"needs,quoting\",\"he said \"\"hi\"\"\",\"line\nbreak\"\n");
  CHECK_THROWS_AS(t.add_row({"too", "few"}), pcs::error);
}

TEST_CASE("atomic write and read round-trip") {
  const fs::path dir = fs::temp_directory_path() / "pcs_csvio_test";
  fs::create_directories(dir);
  const fs::path file = dir / "table.csv";
  const std::string payload = "a,b\n1,2\n";
  pcs::io::write_file_atomic(file, payload);
  CHECK(pcs::io::read_file(file) == payload);
  // Overwrite must fully replace, and no temp files may linger.
  pcs::io::write_file_atomic(file, "x\n");
  CHECK(pcs::io::read_file(file) == "x\n");
  int entries = 0;
  for (const auto& e : fs::directory_iterator(dir)) {
    ++entries;
    CHECK(e.path().filename() == "table.csv");
  }
  CHECK(entries == 1);
  try {
    (void)pcs::io::read_file(dir / "missing.csv");
    FAIL("expected io error");
  } catch (const pcs::error& e) {
    CHECK(e.code() == pcs::errc::io);
  }
  // A regular file as parent directory defeats both mkdir and the temp open.
  CHECK_THROWS_AS(pcs::io::write_file_atomic(file / "child.csv", "x"), pcs::error);
  fs::remove_all(dir);
}
