#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "ves/pipeline.hpp"
#include "ves/data_io.hpp"
#include "ves/error.hpp"

namespace {

ves::IngestResult ingest_text(const std::string& text, const ves::IngestConfig& cfg = {}) {
  std::istringstream in(text);
  return ves::ingest(in, cfg);
}

const char* kHeader = "industry_code,state,year,value_added,workers,capital,wages\n";

}  // namespace

TEST(Ingest, WellFormedFile) {
  const auto r = ingest_text(std::string(kHeader) +
                             "274,WB,2016,10.5,3,20,4.5\n"
                             "274,WB,2016,11,4,21,\n"
                             "221,\"Tamil Nadu\",2016,1e2,50,80.25,30\n");
  ASSERT_EQ(r.records.size(), 3u);
  EXPECT_EQ(r.excluded.total(), 0u);
  EXPECT_FALSE(r.records[1].wages.has_value());
  EXPECT_EQ(r.records[2].state, "Tamil Nadu");
  EXPECT_DOUBLE_EQ(r.records[2].value_added, 100.0);
}

TEST(Ingest, ExclusionRules) {
  const auto r = ingest_text(std::string(kHeader) +
                             "274,WB,2016,10,0,20,1\n"
                             "274,WB,2016,\"1,5\",3,20,1\n"
                             "274,WB,2016,-1,3,20,1\n"
                             "274,WB,2016,10,3,0,1\n"
                             "274,WB,2016,10,3,20,-1\n"
                             "274,WB,2016,10,3\n"
                             "274,WB,,10,3,20,1\n"
                             "274,WB,2016,10,3,20,1\n");
  ASSERT_EQ(r.records.size(), 1u);
  EXPECT_EQ(r.excluded.counts.at("nonpositive-workers"), 1u);
  EXPECT_EQ(r.excluded.counts.at("unparseable-numeric"), 1u);
  EXPECT_EQ(r.excluded.counts.at("nonpositive-value-added"), 1u);
  EXPECT_EQ(r.excluded.counts.at("nonpositive-capital"), 1u);
  EXPECT_EQ(r.excluded.counts.at("negative-wages"), 1u);
  EXPECT_EQ(r.excluded.counts.at("malformed-row"), 1u);
  EXPECT_EQ(r.excluded.counts.at("missing-field"), 1u);
}

TEST(Ingest, YearWindowAndDeflator) {
  ves::IngestConfig cfg;
  cfg.year_min = 2016;
  cfg.apply_deflator = true;
  const auto r = ingest_text("industry_code,state,year,value_added,workers,capital,deflator\n"
                             "1,WB,2015,10,1,10,2\n"
                             "1,WB,2016,10,1,10,2\n"
                             "1,WB,2017,10,1,10,0\n",
                             cfg);
  ASSERT_EQ(r.records.size(), 1u);
  EXPECT_DOUBLE_EQ(r.records[0].value_added, 5.0);
  EXPECT_EQ(r.excluded.counts.at("year-out-of-range"), 1u);
  EXPECT_EQ(r.excluded.counts.at("nonpositive-deflator"), 1u);
}

TEST(Ingest, ColumnMapping) {
  ves::IngestConfig cfg;
  cfg.columns.value_added = "GVA";
  cfg.columns.industry_code = "nic";
  const auto r = ingest_text("nic,state,year,GVA,workers,capital\n9,KA,2016,5,1,2\n", cfg);
  ASSERT_EQ(r.records.size(), 1u);
  EXPECT_EQ(r.records[0].industry_code, "9");
}

TEST(Ingest, SchemaAndEmptyErrors) {
  try {
    ingest_text("industry_code,state,year,workers,capital\n");
    FAIL();
  } catch (const ves::Error& e) {
    EXPECT_EQ(e.code(), ves::ErrorCode::schema);
  }
  try {
    ingest_text("");
    FAIL();
  } catch (const ves::Error& e) {
    EXPECT_EQ(e.code(), ves::ErrorCode::empty_input);
  }
}

TEST(Csv, SplitAndQuote) {
  EXPECT_EQ(ves::split_csv_line("a,\"b,c\",\"d\"\"e\",")[1], "b,c");
  EXPECT_EQ(ves::split_csv_line("a,\"b,c\",\"d\"\"e\",")[2], "d\"e");
  EXPECT_EQ(ves::split_csv_line("a,\"b,c\",\"d\"\"e\",").size(), 4u);
  EXPECT_EQ(ves::csv_field("plain"), "plain");
  EXPECT_EQ(ves::csv_field("x,y"), "\"x,y\"");
  EXPECT_EQ(ves::format_double(0.1), "0.1");
}

TEST(Generate, NoiselessMatchesModel) {
  ves::SynthConfig cfg;
  cfg.params = {1.4, 0.3, 2.0, 1.0};
  const auto recs = ves::generate(cfg);
  ASSERT_EQ(recs.size(), 100u);
  for (const auto& r : recs) {
    const double x = r.capital / r.workers;
    EXPECT_GE(x, cfg.x_low * (1 - 1e-12));
    EXPECT_LE(x, cfg.x_high * (1 + 1e-12));
    EXPECT_NEAR(std::log(r.value_added / r.workers), std::log(oracle::ves_intensive(cfg.params, x)), 1e-12);
    ASSERT_TRUE(r.wages);
    const auto fp = ves::factor_prices(cfg.params, x);
    EXPECT_NEAR(*r.wages / r.workers, std::abs(fp.wage), 1e-12 * std::max(1.0, std::abs(fp.wage)));
  }
}

TEST(Generate, SameSeedSameBytes) {
  ves::SynthConfig cfg;
  cfg.noise_sd = 0.05;
  std::ostringstream a, b;
  ves::write_records(a, ves::generate(cfg));
  ves::write_records(b, ves::generate(cfg));
  EXPECT_EQ(a.str(), b.str());
  cfg.seed = 43;
  std::ostringstream c;
  ves::write_records(c, ves::generate(cfg));
  EXPECT_NE(a.str(), c.str());
}

TEST(Generate, NoiseMomentsAndRoundTrip) {
  ves::SynthConfig cfg;
  cfg.n = 100000;
  cfg.noise_sd = 0.05;
  cfg.params = {1, 0.5, 1, 0.2};
  const auto recs = ves::generate(cfg);
  double mean = 0.0;
  for (const auto& r : recs) {
    mean += std::log(r.value_added / r.workers) - std::log(oracle::ves_intensive(cfg.params, r.capital / r.workers));
  }
  mean /= static_cast<double>(recs.size());
  EXPECT_LE(std::abs(mean), 3.0 * cfg.noise_sd / std::sqrt(static_cast<double>(cfg.n)));

  std::stringstream io;
  ves::write_records(io, recs);
  const auto back = ves::ingest(io);
  EXPECT_EQ(back.excluded.total(), 0u);
  EXPECT_TRUE(back.records == recs);
}

TEST(Generate, CountsNegativeWages) {
  ves::SynthConfig cfg;
  cfg.params = {1, 0.5, 1, 3.17};
  ves::SynthDiagnostics diag;
  ves::generate(cfg, &diag);
  EXPECT_EQ(diag.negative_wage_rows, cfg.n);
}

TEST(Generate, InvalidConfig) {
  ves::SynthConfig cfg;
  cfg.params.delta = 1.5;
  EXPECT_THROW(ves::generate(cfg), ves::Error);
  cfg = {};
  cfg.x_low = 5.0;
  EXPECT_THROW(ves::generate(cfg), ves::Error);
}

TEST(Generate, NoisyWageRouteRecovery) {
  int hits = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    ves::SynthConfig cfg;
    cfg.params = {1, 0.5, 1, 0.7};
    cfg.n = 200;
    cfg.noise_sd = 0.05;
    cfg.seed = seed;
    std::vector<ves::Observation> obs;
    for (const auto& r : ves::generate(cfg)) obs.push_back(ves::to_observation(r));
    hits += std::abs(ves::fit_model(ves::ModelSpec::wage_three_var(), obs).coefficients[2].estimate - 0.7) <= 0.1;
  }
  EXPECT_GE(hits, 90);
}
