#include <string>
#include <vector>

#include "doctest.h"
#include "vanetsim/errors.hpp"
#include "vanetsim/textconfig.hpp"

using namespace vanet;

TEST_CASE("parse_config reads sections, names, comments and blank lines") {
    const std::string text =
        "# leading comment\n"
        "[simulation]\n"
        "name = demo   # trailing comment\n"
        "dt_s = 1\n"
        "\n"
        "[vehicle \"veh_A\"]\n"
        "route = 2\n"
        "apps = BEACON, YIELD\n";
    ConfigFile file = parse_config(text);
    REQUIRE(file.sections.size() == 2);

    const ConfigSection& sim = file.sections[0];
    CHECK(sim.kind == "simulation");
    CHECK(sim.name.empty());
    CHECK(sim.line == 2);
    CHECK(sim.get("name") == "demo");
    CHECK(sim.get_double("dt_s") == 1.0);
    CHECK(sim.label() == "[simulation]");

    const ConfigSection& veh = file.sections[1];
    CHECK(veh.kind == "vehicle");
    CHECK(veh.name == "veh_A");
    CHECK(veh.get_int("route") == 2);
    CHECK(veh.label() == "[vehicle \"veh_A\"]");
    CHECK(split_list(veh.get("apps")) == std::vector<std::string>{"BEACON", "YIELD"});
}

TEST_CASE("lookup helpers: has, get_or, find, all_of") {
    ConfigFile file = parse_config("[a \"one\"]\nx = 1\n[b]\ny = 2\n[a \"two\"]\nx = 3\n");
    REQUIRE(file.sections.size() == 3);
    CHECK(file.find("a") == &file.sections[0]);
    CHECK(file.find("missing") == nullptr);
    CHECK(file.all_of("a").size() == 2);
    CHECK(file.all_of("b").size() == 1);

    const ConfigSection& a1 = file.sections[0];
    CHECK(a1.has("x"));
    CHECK_FALSE(a1.has("z"));
    CHECK(a1.get_or("z", "fallback") == "fallback");
    CHECK(a1.get_double_or("z", 2.5) == 2.5);
    CHECK(a1.get_int_or("z", -7) == -7);
    CHECK(a1.get_int_or("x", -7) == 1);
}

TEST_CASE("numeric getters require the whole token to parse") {
    ConfigFile file = parse_config("[s]\nnum = 1.5\nword = abc\nmix = 12abc\n");
    const ConfigSection& s = file.sections[0];
    CHECK(s.get_double("num") == 1.5);
    CHECK_THROWS_AS(s.get_double("word"), ParseError);
    CHECK_THROWS_AS(s.get_int("num"), ParseError);   // "1.5" is not an integer
    CHECK_THROWS_AS(s.get_int("mix"), ParseError);
    CHECK_THROWS_AS(s.get("absent"), ParseError);
}

TEST_CASE("malformed input is rejected with ParseError") {
    CHECK_THROWS_AS(parse_config("[simulation\n"), ParseError);        // unterminated header
    CHECK_THROWS_AS(parse_config("[vehicle veh]\nx = 1\n"), ParseError);  // unquoted name
    CHECK_THROWS_AS(parse_config("x = 1\n"), ParseError);              // key outside section
    CHECK_THROWS_AS(parse_config("[a]\nx = 1\nx = 2\n"), ParseError);  // duplicate key
    CHECK_THROWS_AS(parse_config("[a]\n= 3\n"), ParseError);           // empty key
    CHECK_THROWS_AS(parse_config("[a]\njust words\n"), ParseError);    // no '='
}

TEST_CASE("split_list splits on commas and whitespace, dropping empties") {
    CHECK(split_list("") == std::vector<std::string>{});
    CHECK(split_list("   ") == std::vector<std::string>{});
    CHECK(split_list("a") == std::vector<std::string>{"a"});
    CHECK(split_list("a b,c ,  d") == std::vector<std::string>{"a", "b", "c", "d"});
    CHECK(split_list(",,a,,b,,") == std::vector<std::string>{"a", "b"});
}
