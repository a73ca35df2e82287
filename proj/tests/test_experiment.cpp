#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "cogcap/experiment.hpp"
#include "cogcap/numerics.hpp"

namespace cogcap {
namespace {

std::string csv(const Table& t) {
  std::ostringstream os;
  t.write_csv(os);
  return os.str();
}

const std::vector<std::string>* find_row(const Table& t, const std::string& first) {
  for (const auto& r : t.rows) {
    if (!r.empty() && r[0] == first) return &r;
  }
  return nullptr;
}

TEST(Quantities, DecibelParsingBothWays) {
  const auto q = parse_quantity("5dB", "p_avg");
  EXPECT_EQ(q.text, "5dB");
  EXPECT_NEAR(q.linear, 3.16227766016838, 1e-12);
  EXPECT_NEAR(10.0 * std::log10(q.linear), 5.0, 1e-13);
  EXPECT_NEAR(parse_quantity("-10dB", "p_avg").linear, 0.1, 1e-15);
  EXPECT_EQ(parse_quantity("3.16227766016838", "p_avg").linear, 3.16227766016838);
  EXPECT_THROW(parse_quantity("5 decibels", "p_avg"), ConfigError);
  EXPECT_THROW(parse_quantity("", "q_peak"), ConfigError);
}

TEST(Quantities, FormatsTwelveDigits) {
  EXPECT_EQ(format_number(0.148495506775922048), "0.148495506776");
  EXPECT_EQ(format_number(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(format_number(2.0), "2");
}

TEST(Config, EchoRoundTrips) {
  ExperimentConfig c;
  apply_setting(c, "budget=peak");
  apply_setting(c, "p_peak=7.5dB");
  apply_setting(c, "outage=si");
  apply_setting(c, "epsilon=0.24");
  apply_setting(c, "sigma_p_sq=0.3");
  apply_setting(c, "seed=77");
  apply_setting(c, "grid=0.1,0.2,0.4");
  c.validate();
  const ExperimentConfig back = parse_config_text(c.echo());
  EXPECT_EQ(back, c);
  EXPECT_EQ(back.echo(), c.echo());
}

TEST(Config, CommentsAndErrorsNameTheKey) {
  const auto c = parse_config_text("# operating point\nepsilon = 0.1\n\nq_peak=5dB # inline\n");
  EXPECT_DOUBLE_EQ(c.epsilon, 0.1);
  EXPECT_NEAR(c.q_peak.linear, std::pow(10.0, 0.5), 1e-14);
  try {
    ExperimentConfig bad;
    apply_setting(bad, "epsilon=1.5");
    bad.validate();
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "epsilon");
    EXPECT_EQ(std::string(e.what()).rfind("epsilon", 0), 0u);
  }
  ExperimentConfig c2;
  EXPECT_THROW(apply_setting(c2, "no_such_key=1"), ConfigError);
  EXPECT_THROW(apply_setting(c2, "missing_equals"), ConfigError);
  EXPECT_THROW(preset_defaults("fig9"), ConfigError);
}

TEST(Grid, ListsAndRanges) {
  const auto list = expand_grid("0.5,1,2", "grid");
  ASSERT_EQ(list.size(), 3u);
  EXPECT_EQ(list[2].linear, 2.0);
  const auto range = expand_grid("0:1:0.25", "grid");
  ASSERT_EQ(range.size(), 5u);
  EXPECT_NEAR(range[4].linear, 1.0, 1e-15);
  const auto db = expand_grid("-10dB:10dB:10dB", "grid");
  ASSERT_EQ(db.size(), 3u);
  EXPECT_NEAR(db[0].linear, 0.1, 1e-15);
  EXPECT_NEAR(db[2].linear, 10.0, 1e-14);
  EXPECT_EQ(db[1].text, "0dB");
  EXPECT_THROW(expand_grid("1,0.5", "grid"), ConfigError);
  EXPECT_THROW(expand_grid("1,1", "grid"), ConfigError);
  EXPECT_THROW(expand_grid("0:1:-0.1", "grid"), ConfigError);
}

ExperimentConfig preset(const std::string& name) {
  ExperimentConfig c;
  for (const auto& s : preset_defaults(name)) apply_setting(c, s);
  c.validate();
  return c;
}

TEST(Sweeps, Fig2ReportsG) {
  const Table t = experiment::run_sweep("fig2", preset("fig2"));
  ASSERT_EQ(t.header.size(), 3u);
  const auto* row = find_row(t, "1");
  ASSERT_NE(row, nullptr);
  EXPECT_EQ((*row)[2], "0.148495506776");
}

TEST(Sweeps, Fig4CarriesLimitColumns) {
  auto c = preset("fig4");
  apply_setting(c, "grid=0dB,20dB");
  apply_setting(c, "sigma_p_sq_set=0,1");
  const Table t = experiment::run_sweep("fig4", c);
  EXPECT_EQ(t.rows.size(), 4u);
  const auto col = [&](const std::string& name) {
    for (std::size_t i = 0; i < t.header.size(); ++i) {
      if (t.header[i] == name) return i;
    }
    ADD_FAILURE() << "missing column " << name;
    return std::size_t{0};
  };
  const std::size_t sat = col("saturation_limit_npcu");
  const std::size_t free = col("unconstrained_npcu");
  EXPECT_EQ(t.rows[0][sat], "1.18788470551");
  EXPECT_EQ(t.rows[0][free], "0.712928856209");
}

TEST(Sweeps, RegionsFlipR2AtOneMinusInverseE) {
  const Table t = experiment::run_sweep("fig7", preset("fig7"));
  const auto flag = [&](const std::string& e2) {
    for (const auto& r : t.rows) {
      if (r[0] == "0" && r[1] == e2) return r[3];
    }
    return std::string("missing");
  };
  EXPECT_EQ(flag("0.63"), "0");
  EXPECT_EQ(flag("0.64"), "1");
}

TEST(Sweeps, CsvIsDeterministicWithLfEndings) {
  auto c = preset("fig5");
  apply_setting(c, "grid=0,0.5,1");
  const std::string a = csv(experiment::run_sweep("fig5", c));
  const std::string b = csv(experiment::run_sweep("fig5", c));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.find('\r'), std::string::npos);
  EXPECT_EQ(a.back(), '\n');
}

TEST(Verify, OperatingPointPassesAndNegativeControlFails) {
  ExperimentConfig c;
  apply_setting(c, "n=200000");
  std::ostringstream report;
  EXPECT_TRUE(experiment::run_verify(c, report).pass) << report.str();
  apply_setting(c, "p_avg=10");
  apply_setting(c, "cap_scale=2");
  std::ostringstream bad;
  EXPECT_FALSE(experiment::run_verify(c, bad).pass);
  EXPECT_NE(bad.str().find("FAIL"), std::string::npos);
}

TEST(Table1, ClosedFormsAgreeWithQuadrature) {
  const auto out = experiment::run_table1();
  EXPECT_LE(out.max_discrepancy, 1e-6);
  EXPECT_FALSE(out.table.rows.empty());
}

TEST(Eval, ReportsOperatingPointCapacity) {
  ExperimentConfig c;
  apply_setting(c, "budget=peak");
  std::ostringstream report;
  experiment::run_eval(c, report);
  EXPECT_NE(report.str().find("0.596347362323"), std::string::npos) << report.str();
}

}  // namespace
}  // namespace cogcap
