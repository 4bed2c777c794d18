#include <cmath>
#include <limits>
#include <sstream>

#include <gtest/gtest.h>

#include <dobrushin/report.hpp>

#include "fixtures.hpp"

using namespace dobrushin;

TEST(Report, FormatDouble) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(2.0), "2");
  EXPECT_EQ(format_double(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(std::stod(format_double(std::exp(-2.0))), std::exp(-2.0));
}

TEST(Report, DeterministicJson) {
  Json j;
  j["b"] = 1.0;
  j["a"] = Json::array({1, 2.5, "x"});
  j["nested"] = Json{{"v", std::nan("")}, {"rows", Json::array({Json::array({1.0, 0.5})})}};
  const std::string text = dump_json(j);
  EXPECT_EQ(text,
            "{\n"
            "  \"b\": 1.0,\n"
            "  \"a\": [1, 2.5, \"x\"],\n"
            "  \"nested\": {\n"
            "    \"v\": null,\n"
            "    \"rows\": [\n"
            "      [1.0, 0.5]\n"
            "    ]\n"
            "  }\n"
            "}\n");
  EXPECT_EQ(Json::parse(text)["b"].get<double>(), 1.0);
  EXPECT_TRUE(Json::parse(text)["b"].is_number_float());
}

TEST(Report, CsvQuoting) {
  EXPECT_EQ(csv_field("plain"), "plain");
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
  std::ostringstream os;
  write_csv(os, {"x", "y"}, {{"1", "two\nlines"}});
  EXPECT_EQ(os.str(), "x,y\r\n1,\"two\nlines\"\r\n");
}

TEST(Report, CertificateFields) {
  const auto s = fixture::two_state();
  const auto p = fixture::uniform_projection(2);
  const auto c = *certify_uniform(s, p).certificate;
  const Json j = to_json(c);
  for (const char* key : {"mode", "t0", "q", "C", "alpha", "tau", "n0", "max_phi_norm", "projection",
                          "grid", "measured_curve"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["mode"], "uniform");
  EXPECT_TRUE(j["tau"].is_null());
  EXPECT_FALSE(j.contains("lambda"));
  std::ostringstream os;
  write_curve_csv(os, uniform_curve(s, p, c, 3));
  EXPECT_EQ(os.str().substr(0, os.str().find("\r\n")), "t,measured_norm,envelope_bound");
}
