#include <doctest.h>

#include <limits>
#include <sstream>

#include <json.hpp>

#include "effdf/error.hpp"
#include "effdf/io.hpp"

using namespace effdf;

TEST_CASE("csv record splitting") {
  CHECK(io::split_csv_record("a,b,c") == std::vector<std::string>{"a", "b", "c"});
  CHECK(io::split_csv_record("\"x,y\",2") == std::vector<std::string>{"x,y", "2"});
  CHECK(io::split_csv_record("\"say \"\"hi\"\"\",") == std::vector<std::string>{"say \"hi\"", ""});
  CHECK(io::csv_escape("plain") == "plain");
  CHECK(io::csv_escape("a,b") == "\"a,b\"");
  CHECK(io::csv_escape("q\"") == "\"q\"\"\"");
}

TEST_CASE("component CSV") {
  const auto c = io::parse_components_csv("weight,s2,df\n1,4,10\r\n1.2, 1 ,4\n");
  REQUIRE(c.size() == 2);
  CHECK(c[1] == VarianceComponent(1.2, 1.0, 4));

  // Column order follows the header; comments, blank lines and zero weights are skipped.
  const auto d = io::parse_components_csv("# note\ndf,S2,Weight\n\n10,4,1\n3,9,0\n");
  REQUIRE(d.size() == 1);
  CHECK(d[0] == VarianceComponent(1.0, 4.0, 10));

  CHECK_THROWS_WITH_AS(io::parse_components_csv(""), "no components", InputError);
  CHECK_THROWS_WITH_AS(io::parse_components_csv("weight,s2,df\n"), "no components", InputError);
  CHECK_THROWS_WITH_AS(io::parse_components_csv("w,s2,df\n1,1,1\n"), "line 1: header must name columns weight,s2,df",
                       InputError);
  CHECK_THROWS_WITH_AS(io::parse_components_csv("weight,s2,df\n1,1,1\n-1,1,1\n"),
                       "line 3: weight must be positive", InputError);
  CHECK_THROWS_WITH_AS(io::parse_components_csv("weight,s2,df\n1,abc,1\n"), "line 2: s2 is not a number: 'abc'",
                       InputError);
  CHECK_THROWS_WITH_AS(io::parse_components_csv("weight,s2,df\n1,1,2.5\n"), "line 2: df must be a positive integer",
                       InputError);
  CHECK_THROWS_WITH_AS(io::parse_components_csv("weight,s2,df\n1,1\n"), "line 2: expected 3 fields", InputError);
}

TEST_CASE("component JSON") {
  const auto c = io::parse_components_json(R"([{"weight":1,"s2":4,"df":10},{"weight":1.2,"s2":1,"df":4}])");
  REQUIRE(c.size() == 2);
  CHECK(c[0] == VarianceComponent(1.0, 4.0, 10));
  CHECK_THROWS_WITH_AS(io::parse_components_json("[]"), "no components", InputError);
  CHECK_THROWS_AS(io::parse_components_json("{"), InputError);
  CHECK_THROWS_AS(io::parse_components_json(R"({"weight":1})"), InputError);
  CHECK_THROWS_WITH_AS(io::parse_components_json(R"([{"weight":1,"s2":1,"df":1},{"weight":1,"df":1}])"),
                       "element 2: missing numeric 's2'", InputError);

  CHECK(io::parse_components("  [{\"weight\":2,\"s2\":1,\"df\":3}]").size() == 1);
  CHECK(io::parse_components("weight,s2,df\n2,1,3\n").size() == 1);
}

TEST_CASE("component round trip") {
  const std::vector<VarianceComponent> c{{1.0, 4.0, 10}, {1.2, 0.1, 4}, {1e-7, 3.3e8, 1}};
  CHECK(io::parse_components_csv(io::write_components_csv(c)) == c);
  CHECK_THROWS_AS(io::read_component_file("/nonexistent/components.csv"), InputError);
}

TEST_CASE("formats carry the same numbers") {
  const io::Table t{{"name", "n", "x"}, {{std::string("a,b"), 3LL, 0.1}, {std::string("c"), -1LL, 2.0 / 3.0}}};

  std::ostringstream csv, md, js;
  io::render(t, io::Format::Csv, csv);
  io::render(t, io::Format::Markdown, md);
  io::render(t, io::Format::Json, js);

  CHECK(csv.str() == "name,n,x\r\n\"a,b\",3,0.1\r\nc,-1,0.6666666666666666\r\n");
  CHECK(md.str() == "| name | n | x |\n|---|---|---|\n| a,b | 3 | 0.10 |\n| c | -1 | 0.67 |\n");

  const auto doc = nlohmann::json::parse(js.str());
  REQUIRE(doc.size() == 2);
  CHECK(doc[0]["name"] == "a,b");
  CHECK(doc[0]["n"] == 3);
  CHECK(doc[1]["x"].get<double>() == 2.0 / 3.0);

  CHECK(io::parse_format("CSV") == io::Format::Csv);
  CHECK(io::parse_format("md") == io::Format::Markdown);
  CHECK(io::parse_format("json") == io::Format::Json);
  CHECK_THROWS_AS(io::parse_format("xml"), InputError);

  CHECK(io::format_double(0.1) == "0.1");
  CHECK(io::format_double(1e300) == "1e+300");
  CHECK(io::format_double(std::numeric_limits<double>::infinity()) == "inf");
}
