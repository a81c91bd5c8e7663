#include "doctest.h"
#include "hzkv/config.h"

using namespace hzkv;

TEST_CASE("key=value parsing with comments and whitespace") {
  ConfigMap cfg;
  Status st = ConfigMap::ParseString(
      "# device\n"
      "kind = SSD\n"
      "  zone_count=20   # trailing comment\n"
      "\n"
      "name = desk ssd\n",
      &cfg);
  REQUIRE(st.ok());
  std::string s;
  REQUIRE(cfg.GetString("kind", &s).ok());
  CHECK(s == "SSD");
  uint64_t v = 0;
  REQUIRE(cfg.GetU64("zone_count", &v).ok());
  CHECK(v == 20);
  CHECK(cfg.GetOr("name", "") == "desk ssd");
}

TEST_CASE("malformed lines and values carry line diagnostics") {
  ConfigMap cfg;
  Status st = ConfigMap::ParseString("a = 1\nborked line\n", &cfg, "test.cfg");
  CHECK(st.code() == StatusCode::kConfigError);
  CHECK(st.message().find("test.cfg:2") != std::string::npos);

  REQUIRE(ConfigMap::ParseString("n = twelve\n", &cfg, "t2.cfg").ok());
  uint64_t v = 0;
  st = cfg.GetU64("n", &v);
  CHECK(st.code() == StatusCode::kConfigError);
  CHECK(st.message().find("t2.cfg:1") != std::string::npos);
  CHECK(st.message().find("'n'") != std::string::npos);
}

TEST_CASE("missing keys are errors, GetOr falls back") {
  ConfigMap cfg;
  REQUIRE(ConfigMap::ParseString("x = 2\n", &cfg).ok());
  uint64_t v = 0;
  CHECK(cfg.GetU64("y", &v).code() == StatusCode::kConfigError);
  Status err;
  CHECK(cfg.GetOr("y", uint64_t{7}, &err) == 7);
  CHECK(err.ok());
  CHECK(cfg.GetOr("x", uint64_t{7}, &err) == 2);
}
