#include <gtest/gtest.h>

#include <cmath>

#include "symcrit/cli/toml.hpp"

using namespace symcrit;

namespace {

toml::Position error_position(std::string_view text) {
  try {
    toml::parse(text);
  } catch (const toml::ParseError& e) {
    return e.position();
  }
  ADD_FAILURE() << "no parse error for: " << text;
  return {};
}

}  // namespace

TEST(Toml, ScalarsAndTables) {
  const auto root = toml::parse(R"(
# comment
name = "ou"   # trailing
count = 1_000
ratio = -2.5e-3
flag = true
path = 'C:\raw'

[process]
kind = "ou"
lambda = 1

[a.b]
c = 3
)");
  EXPECT_EQ(root.find("name")->as_string(), "ou");
  EXPECT_EQ(std::get<std::int64_t>(root.find("count")->data), 1000);
  EXPECT_DOUBLE_EQ(root.find("ratio")->as_number(), -2.5e-3);
  EXPECT_TRUE(std::get<bool>(root.find("flag")->data));
  EXPECT_EQ(root.find("path")->as_string(), "C:\\raw");
  const auto& process = root.find("process")->as_table();
  EXPECT_EQ(process.keys, (std::vector<std::string>{"kind", "lambda"}));
  EXPECT_EQ(process.find("lambda")->as_number(), 1.0);
  EXPECT_EQ(root.find("a")->as_table().find("b")->as_table().find("c")->as_number(), 3.0);
  EXPECT_EQ(root.find("process")->position.line, 9);
}

TEST(Toml, ArraysInlineTablesAndDottedKeys) {
  const auto root = toml::parse(R"(
grid = [
  -5, 5,   # trailing comma allowed
  101,
]
atoms = [{ at = 1.0, mass = 2 }, { at = -1, mass = 0.5 }]
driver.stable.alpha = 1.5
special = [inf, -inf, "s\t\u00e9"]
)");
  const auto& grid = root.find("grid")->as_array();
  ASSERT_EQ(grid.size(), 3u);
  EXPECT_EQ(grid[1].as_number(), 5.0);
  const auto& atoms = root.find("atoms")->as_array();
  EXPECT_TRUE(atoms[0].as_table().inline_table);
  EXPECT_EQ(atoms[1].as_table().find("mass")->as_number(), 0.5);
  EXPECT_EQ(root.find("driver")->as_table().find("stable")->as_table().find("alpha")->as_number(), 1.5);
  const auto& special = root.find("special")->as_array();
  EXPECT_TRUE(std::isinf(special[0].as_number()));
  EXPECT_LT(special[1].as_number(), 0.0);
  EXPECT_EQ(special[2].as_string(), "s\t\xc3\xa9");
}

TEST(Toml, ErrorsCarryPositions) {
  EXPECT_EQ(error_position("a = 1\nb = \n").line, 2);
  const auto dup = error_position("a = 1\na = 2\n");
  EXPECT_EQ(dup.line, 2);
  EXPECT_EQ(dup.column, 1);
  EXPECT_EQ(error_position("x = \"open\n").line, 1);
  EXPECT_EQ(error_position("[t]\n[t]\n").line, 2);
  EXPECT_EQ(error_position("[[arr]]\n").line, 1);
  EXPECT_EQ(error_position("k = [1, 2\n").line, 2);
  EXPECT_EQ(error_position("k = 1 2\n").column, 7);
  EXPECT_EQ(error_position("k = 01\n").line, 1);
  EXPECT_EQ(error_position("a = 1\na.b = 2\n").line, 2);
}

TEST(Toml, DumpIsSortedAndReparses) {
  const auto root = toml::parse("z = 0.1\na = 1\n[t]\nm = [1.0, 2]\nk = 'v'\n");
  const std::string text = toml::dump(root);
  EXPECT_LT(text.find("a = 1"), text.find("z = 0.1"));
  EXPECT_NE(text.find("[t]"), std::string::npos);
  EXPECT_NE(text.find("m = [1.0, 2]"), std::string::npos);
  EXPECT_EQ(toml::dump(toml::parse(text)), text);
}
