#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "loggas/evaluate.hpp"
#include "loggas/report.hpp"

using namespace loggas;
using namespace loggas::report;

namespace {

RunReport sample_report() {
  RunReport rep;
  rep.meta = {{"tool", "loggas test"}, {"nodes", "80"}};
  Row a;
  a.s = 20.0;
  a.v = 8.0;
  a.kappa = 0.4;
  a.method = "theorem1";
  a.log_det = -141.43088172345678;
  a.error_bound = 2.0 * std::pow(20.0, -0.25) * std::log(20.0);
  a.regime = "theorem1";
  a.flags = {"outside-region-i"};
  Row b = a;
  b.method = "oracle";
  b.log_det.reset();
  b.error_bound.reset();
  b.regime.clear();
  b.flags = {"error:precision-domain", "max-trustworthy-v=12.835081103667646"};
  b.message = "not serialised";
  Row c = a;
  c.v = std::numeric_limits<double>::infinity();
  c.kappa = c.v / c.s;
  c.method = "gue";
  c.log_det = 0.1 + 0.2;  // awkward binary value
  c.flags.clear();
  rep.rows = {a, b, c};
  return rep;
}

}  // namespace

TEST(Csv, RoundTripIsBitIdentical) {
  const auto rep = sample_report();
  std::stringstream ss;
  write_csv(ss, rep);
  const std::string first = ss.str();
  const auto back = read_csv(ss);
  ASSERT_EQ(back.rows.size(), rep.rows.size());
  for (std::size_t i = 0; i < rep.rows.size(); ++i) EXPECT_TRUE(back.rows[i] == rep.rows[i]) << i;
  EXPECT_EQ(back.meta, rep.meta);
  std::stringstream again;
  write_csv(again, back);
  EXPECT_EQ(again.str(), first);
}

TEST(Csv, HeaderAndCells) {
  std::stringstream ss;
  write_csv(ss, sample_report(), false);
  std::string line;
  std::getline(ss, line);
  EXPECT_EQ(line, "s,v,kappa,method,log_det,error_bound,regime,flags");
  std::getline(ss, line);
  EXPECT_EQ(line.substr(0, 12), "20,8,0.40000");
  std::stringstream bad("s,v\n1,2\n");
  EXPECT_THROW(read_csv(bad), InvalidArgument);
  std::stringstream short_row(std::string(kCsvHeader) + "\n1,2,3\n");
  EXPECT_THROW(read_csv(short_row), InvalidArgument);
  std::stringstream empty("# only=meta\n");
  EXPECT_THROW(read_csv(empty), InvalidArgument);
}

TEST(Numbers, SeventeenDigits) {
  for (double x : {0.1, 1.0 / 3.0, -141.43088172345678, 1e-300, 6.02214076e23}) EXPECT_EQ(parse_number(format_number(x)), x);
  EXPECT_THROW(parse_number("1.0abc"), InvalidArgument);
  EXPECT_THROW(parse_number(""), InvalidArgument);
}

TEST(Json, Schema) {
  const auto j = to_json(sample_report());
  ASSERT_TRUE(j.contains("meta"));
  ASSERT_TRUE(j.contains("rows"));
  EXPECT_EQ(j["rows"].size(), 3u);
  EXPECT_EQ(j["rows"][0]["method"], "theorem1");
  EXPECT_EQ(j["rows"][0]["log_det"].get<double>(), -141.43088172345678);
  EXPECT_TRUE(j["rows"][1]["log_det"].is_null());
  EXPECT_EQ(j["rows"][1]["message"], "not serialised");
  const auto parsed = nlohmann::json::parse(j.dump());
  EXPECT_EQ(parsed["rows"][2]["log_det"].get<double>(), 0.1 + 0.2);
}

TEST(Config, FlatKeyValue) {
  std::stringstream ss("# comment\n\n s = 20\n--kappa=0.4\nmethod = oracle,theorem1\n");
  const auto cfg = parse_config(ss);
  EXPECT_EQ(cfg.at("s"), "20");
  EXPECT_EQ(cfg.at("kappa"), "0.4");
  EXPECT_EQ(cfg.at("method"), "oracle,theorem1");
  std::stringstream bad("just words\n");
  EXPECT_THROW(parse_config(bad), InvalidArgument);
  EXPECT_THROW(load_config("/nonexistent/loggas.cfg"), InvalidArgument);
}

TEST(Table, Aligned) {
  std::stringstream ss;
  write_table(ss, sample_report());
  std::string header;
  std::getline(ss, header);
  EXPECT_EQ(header.rfind("method", 0), 0u);
  EXPECT_NE(ss.str().find("not serialised"), std::string::npos);
}

TEST(Evaluate, RowsAndErrors) {
  const auto b = evaluate::evaluate_method(10.0, 2.0, "bounds");
  ASSERT_EQ(b.size(), 2u);
  EXPECT_EQ(b[0].method, "bounds-lower");
  EXPECT_EQ(b[1].method, "bounds-upper");
  EXPECT_LT(*b[0].log_det, *b[1].log_det);

  const auto e = evaluate::evaluate_method(20.0, 18.0, "oracle");
  ASSERT_EQ(e.size(), 1u);
  EXPECT_TRUE(e[0].is_error());
  EXPECT_FALSE(e[0].log_det.has_value());

  const auto strict = evaluate::evaluate_method(20.0, 8.0, "theorem2");
  EXPECT_TRUE(strict[0].is_error());

  const auto all = evaluate::evaluate_point(10.0, 0.0, {"all"});
  EXPECT_EQ(all.size(), evaluate::all_methods().size() + 1);
  bool saw_na = false;
  for (const auto& r : all) {
    EXPECT_FALSE(r.is_error()) << r.method << " " << r.message;
    saw_na = saw_na || r.is_na();
  }
  EXPECT_TRUE(saw_na);
  EXPECT_EQ(all[0].log_det.value(), 0.0);

  const auto unknown = evaluate::evaluate_method(1.0, 1.0, "nope");
  EXPECT_TRUE(unknown[0].is_error());
}

TEST(Evaluate, RegimeTags) {
  const auto r = evaluate::evaluate_method(8.0, 8.0, "theorem2");
  EXPECT_EQ(r[0].regime, "theorem2");
  EXPECT_EQ(regime_from_name(r[0].regime), Regime::DiagonalTheorem2);
  EXPECT_THROW(regime_from_name("bogus"), InvalidArgument);
}
