#include <doctest.h>

#include <fstream>

#include "rootlevel/config.hpp"
#include "testutil.hpp"

using namespace rootlevel;

namespace {

std::string write_cfg(const testutil::TempDir& tmp, const std::string& text) {
  const auto path = tmp / "test.cfg";
  std::ofstream(path) << text;
  return path.string();
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("parses keys, skips comments and blanks") {
  testutil::TempDir tmp;
  const auto path = write_cfg(tmp,
                              "# header comment\n"
                              "\n"
                              "b = 10\n"
                              "nu=1.5   # trailing comment\n"
                              "out = /tmp/run out\n");
  const auto entries = read_config_file(path);
  REQUIRE(entries.size() == 3);
  CHECK(entries[0].key == "b");
  CHECK(entries[0].value == "10");
  CHECK(entries[0].line == 3);
  CHECK(entries[1].key == "nu");
  CHECK(entries[1].value == "1.5");
  CHECK(entries[2].value == "/tmp/run out");
}

TEST_CASE("malformed line reports path and line number") {
  testutil::TempDir tmp;
  const auto path = write_cfg(tmp, "b = 10\nnot a key value line\n");
  CHECK_THROWS_WITH_AS(read_config_file(path), doctest::Contains(":2"), std::runtime_error);
}

TEST_CASE("missing file is an error") {
  CHECK_THROWS(read_config_file("/nonexistent/x.cfg"));
}

TEST_CASE("typed accessors") {
  const ConfigEntry i{"k", "42", 1};
  CHECK(config_int(i) == 42);
  const ConfigEntry d{"k", "2.5", 1};
  CHECK(config_double(d) == doctest::Approx(2.5));
  CHECK(config_bool(ConfigEntry{"k", "true", 1}));
  CHECK(config_bool(ConfigEntry{"k", "on", 1}));
  CHECK(config_bool(ConfigEntry{"k", "1", 1}));
  CHECK_FALSE(config_bool(ConfigEntry{"k", "false", 1}));
  CHECK_FALSE(config_bool(ConfigEntry{"k", "off", 1}));
  CHECK_FALSE(config_bool(ConfigEntry{"k", "0", 1}));
}

TEST_CASE("bad values name the key and line") {
  const ConfigEntry e{"band", "ten", 7};
  try {
    config_int(e);
    FAIL("expected throw");
  } catch (const std::exception& ex) {
    const std::string msg = ex.what();
    CHECK(msg.find("band") != std::string::npos);
    CHECK(msg.find("7") != std::string::npos);
  }
  CHECK_THROWS(config_bool(ConfigEntry{"k", "maybe", 1}));
}

TEST_CASE("list accessors split on commas") {
  const auto ints = config_int_list(ConfigEntry{"dims", "200, 300,400", 1});
  REQUIRE(ints.size() == 3);
  CHECK(ints[0] == 200);
  CHECK(ints[1] == 300);
  CHECK(ints[2] == 400);
  const auto ds = config_double_list(ConfigEntry{"band", "0.5,1.5", 1});
  REQUIRE(ds.size() == 2);
  CHECK(ds[1] == doctest::Approx(1.5));
  CHECK_THROWS(config_int_list(ConfigEntry{"dims", "1,,2", 1}));
}

}  // TEST_SUITE
