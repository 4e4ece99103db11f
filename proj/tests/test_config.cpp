#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "ramzi/config.hpp"
#include "ramzi/errors.hpp"

using namespace ramzi;

namespace {

std::string key_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ValidationError& e) {
    return e.key();
  }
  return "";
}

}  // namespace

TEST_CASE("dump and parse round-trip") {
  const std::string a = dump_config(default_config());
  CHECK(dump_config(parse_config(a)) == a);
  CHECK(dump_config(parse_config("{}")) == a);
}

TEST_CASE("shipped default config equals the built-in defaults") {
  const char* root = std::getenv("RAMZI_SOURCE_DIR");
  REQUIRE(root != nullptr);
  const ExperimentConfig c = load_config(std::string(root) + "/configs/default.json");
  CHECK(dump_config(c) == dump_config(default_config()));
}

TEST_CASE("validation errors name the dotted key") {
  CHECK(key_of(R"({"device":{"foo":1}})") == "device.foo");
  CHECK(key_of(R"({"colour":"red"})") == "colour");
  CHECK(key_of(R"({"device":{"q_factor":-3}})") == "device.q_factor");
  CHECK(key_of(R"({"device":{"q_factor":"high"}})") == "device.q_factor");
  CHECK(key_of(R"({"link":{"phase_noise":{"bogus":0}}})") == "link.phase_noise.bogus");
  CHECK(key_of(R"({"device":)") == "<root>");
  CHECK(key_of(R"({"device":{"self_coupling":0.93}})") == "device.round_trip_amplitude");
  CHECK_THROWS_AS(load_config("/nonexistent/ramzi.json"), ValidationError);
}

TEST_CASE("pinned coupling must agree with the quality factor") {
  CHECK(key_of(R"({"device":{"self_coupling":0.5,"round_trip_amplitude":0.5}})") == "device.q_factor");
  const ExperimentConfig c =
      parse_config(R"({"device":{"self_coupling":0.9341112429,"round_trip_amplitude":0.9341112429}})");
  CHECK(c.device.explicit_coupling);
  CHECK(device_model(c).self_coupling == 0.9341112429);
}

TEST_CASE("calibrated device model hits the configured Q") {
  const MrmModel m = device_model(default_config());
  CHECK(loaded_q(m) == doctest::Approx(3500.0).epsilon(1e-6));
  CHECK(m.self_coupling == doctest::Approx(m.round_trip_amplitude).epsilon(1e-12));
}

TEST_CASE("stored bias round-trips and is reused") {
  const ExperimentConfig base = default_config();
  const BiasSolution s = resolve_bias(base);
  const ExperimentConfig stored = parse_config(dump_config(with_bias(base, s)));
  REQUIRE(stored.bias.has_value());
  const BiasSolution r = resolve_bias(stored);
  CHECK(r.heater_top_mw == s.heater_top_mw);
  CHECK(r.heater_bottom_mw == s.heater_bottom_mw);
  CHECK(r.phi_ps == s.phi_ps);
  REQUIRE(r.drive_table.entries.size() == s.drive_table.entries.size());
  for (std::size_t k = 0; k < r.drive_table.entries.size(); ++k) {
    CHECK(r.drive_table.entries[k].v_top == s.drive_table.entries[k].v_top);
    CHECK(r.drive_table.entries[k].v_bottom == s.drive_table.entries[k].v_bottom);
  }
  CHECK(r.achieved_oma_e == doctest::Approx(s.achieved_oma_e).epsilon(1e-12));
  CHECK(key_of(R"({"bias":{"drive_table":[{"v_top":0,"x":1}]}})") == "bias.drive_table[0].x");
}
