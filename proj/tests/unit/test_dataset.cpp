#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "surprise/dataset.hpp"

using namespace surprise;

namespace {

std::string write_temp(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path);
  out << body;
  return path.string();
}

}  // namespace

TEST_SUITE("dataset") {

TEST_CASE("load_csv reads rows, columns and the response") {
  const auto path = write_temp("ds_basic.csv", "y,x1,x2\n1,0.5,2\n0,1.5,-3\n1,-0.25,0\n");
  const Dataset d = Dataset::load_csv(path, std::optional<std::string>("y"), false);
  CHECK(d.size() == 3);
  CHECK(d.q() == 2);
  CHECK(d.has_response());
  CHECK(d.response(0) == 1.0);
  CHECK(d.response(1) == 0.0);
  CHECK(d.covariate_row(1)(0) == doctest::Approx(1.5));
  CHECK(d.covariate_row(2)(1) == doctest::Approx(0.0));
  CHECK(d.column_names() == std::vector<std::string>{"x1", "x2"});
}

TEST_CASE("standardize stores mean 2 and scale 1 for {1,2,3}") {
  const auto path = write_temp("ds_std.csv", "x1\n1\n2\n3\n");
  const Dataset d = Dataset::load_csv(path, std::nullopt, true);
  CHECK(d.standardized());
  CHECK(d.column_means()(0) == doctest::Approx(2.0));
  CHECK(d.column_scales()(0) == doctest::Approx(1.0));
  CHECK(d.covariate_row(0)(0) == doctest::Approx(-1.0));
  CHECK(d.covariate_row(1)(0) == doctest::Approx(0.0));
  CHECK(d.covariate_row(2)(0) == doctest::Approx(1.0));
}

TEST_CASE("NaN cells are rejected with the cell named") {
  const auto path = write_temp("ds_nan.csv", "y,x1\n1,0.5\n0,NaN\n");
  CHECK_THROWS_WITH_AS(Dataset::load_csv(path, std::optional<std::string>("y"), false),
                       doctest::Contains("column 'x1'"), ParseError);
}

TEST_CASE("non-numeric cells name the column") {
  const auto path = write_temp("ds_bad.csv", "y,x1\n1,apple\n");
  CHECK_THROWS_WITH_AS(Dataset::load_csv(path, std::optional<std::string>("y"), false),
                       doctest::Contains("x1"), ParseError);
}

TEST_CASE("malformed rows name the row") {
  const auto path = write_temp("ds_short.csv", "y,x1,x2\n1,2,3\n1,2\n");
  CHECK_THROWS_WITH_AS(Dataset::load_csv(path, std::optional<std::string>("y"), false),
                       doctest::Contains("row 3"), ParseError);
}

TEST_CASE("empty files and missing cells are errors") {
  const auto empty = write_temp("ds_empty.csv", "");
  CHECK_THROWS_AS(Dataset::load_csv(empty, std::nullopt, false), Error);
  const auto headeronly = write_temp("ds_header.csv", "y,x1\n");
  CHECK_THROWS_WITH_AS(Dataset::load_csv(headeronly, std::nullopt, false),
                       doctest::Contains("empty"), Error);
  const auto hole = write_temp("ds_hole.csv", "y,x1\n1,\n");
  CHECK_THROWS_AS(Dataset::load_csv(hole, std::optional<std::string>("y"), false), ParseError);
}

TEST_CASE("constant columns cannot be standardized") {
  const auto path = write_temp("ds_const.csv", "x1,x2\n1,7\n2,7\n3,7\n");
  CHECK_THROWS_WITH_AS(Dataset::load_csv(path, std::nullopt, true), doctest::Contains("x2"),
                       ContractError);
}

TEST_CASE("unknown response column is an error") {
  const auto path = write_temp("ds_resp.csv", "y,x1\n1,2\n");
  CHECK_THROWS_AS(Dataset::load_csv(path, std::optional<std::string>("label"), false),
                  ParseError);
}

TEST_CASE("augment prepends an exact 1") {
  DataPoint p0{Vector::Zero(2), 1.0};
  const auto z0 = augment(p0).z;
  CHECK(z0.size() == 3);
  CHECK(z0(0) == 1.0);
  CHECK(z0(1) == 0.0);
  CHECK(z0(2) == 0.0);

  DataPoint p1{Vector::Constant(1, 2.5), std::nullopt};
  const auto z1 = augment(p1).z;
  CHECK(z1.size() == 2);
  CHECK(z1(1) == doctest::Approx(2.5));

  DataPoint p5{Vector::Ones(5), std::nullopt};
  CHECK(augment(p5).z.size() == 6);
}

TEST_CASE("round trip: save then load preserves numeric content") {
  const auto path = write_temp("ds_rt1.csv",
                               "y,x1,x2\n1,0.1234567890123,-2.5e-7\n0,31.25,0.333333333333\n");
  const Dataset d1 = Dataset::load_csv(path, std::optional<std::string>("y"), false);
  const auto path2 = (std::filesystem::temp_directory_path() / "ds_rt2.csv").string();
  d1.save_csv(path2);
  const Dataset d2 = Dataset::load_csv(path2, std::optional<std::string>("y"), false);
  REQUIRE(d2.size() == d1.size());
  for (std::size_t i = 0; i < d1.size(); ++i) {
    CHECK(d1.response(i) == d2.response(i));
    for (int j = 0; j < d1.q(); ++j)
      CHECK(d1.covariate_row(i)(j) == d2.covariate_row(i)(j));
  }
}

TEST_CASE("standardize then destandardize recovers the original columns") {
  const auto path = write_temp("ds_destd.csv", "x1,x2\n1,10\n2,20\n3,35\n4,70\n");
  const Dataset raw = Dataset::load_csv(path, std::nullopt, false);
  const Dataset std_d = Dataset::load_csv(path, std::nullopt, true);
  const Dataset back = std_d.destandardized();
  for (std::size_t i = 0; i < raw.size(); ++i)
    for (int j = 0; j < raw.q(); ++j) {
      const double orig = raw.covariate_row(i)(j);
      CHECK(back.covariate_row(i)(j) == doctest::Approx(orig).epsilon(1e-12));
    }
}

TEST_CASE("log offset transform is applied before standardization") {
  const auto path = write_temp("ds_log.csv", "x1\n0\n1\n9\n");
  LoadOptions opt;
  opt.log_offset = 1.0;
  const Dataset d = Dataset::load_csv(path, opt);
  CHECK(d.covariate_row(0)(0) == doctest::Approx(0.0));
  CHECK(d.covariate_row(1)(0) == doctest::Approx(std::log(2.0)));
  CHECK(d.covariate_row(2)(0) == doctest::Approx(std::log(10.0)));

  LoadOptions bad;
  bad.log_offset = -0.5;
  CHECK_THROWS_AS(Dataset::load_csv(path, bad), ContractError);
}

}  // TEST_SUITE
