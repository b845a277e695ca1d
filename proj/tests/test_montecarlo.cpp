#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "ssqec/errors.hpp"
#include "ssqec/montecarlo.hpp"

using namespace ssqec;

namespace {

CampaignSpec small_campaign() {
  CampaignSpec s;
  s.family = "toric";
  s.sizes = {2, 3};
  s.ps = {0.03, 0.08};
  s.cycles = {2};
  s.trials = 60;
  s.min_failures = 0;
  s.seed = 17;
  s.threads = 1;
  return s;
}

std::string csv_of(const ThresholdDataset& d) {
  std::ostringstream os;
  write_csv(os, d);
  return os.str();
}

}  // namespace

TEST(Campaign, ZeroNoiseHasNoFailures) {
  auto s = small_campaign();
  s.ps = {0.0};
  const auto d = run_campaign(s);
  ASSERT_EQ(d.records.size(), 2u);
  for (const auto& r : d.records) {
    EXPECT_EQ(r.trials, 60u);
    EXPECT_EQ(r.failures, 0u);
    EXPECT_EQ(r.p_fail(), 0.0);
    EXPECT_EQ(r.ci95(), 0.0);
  }
}

TEST(Campaign, ThreadCountDoesNotChangeOutput) {
  auto s = small_campaign();
  s.min_failures = 5;
  s.max_trials = 300;
  const auto one = csv_of(run_campaign(s));
  for (std::size_t threads : {2, 3, 8}) {
    s.threads = threads;
    EXPECT_EQ(csv_of(run_campaign(s)), one) << threads << " threads";
  }
}

TEST(Campaign, SplitRunsMergeToTheFullRun) {
  auto full = small_campaign();
  full.trials = 80;
  auto first = full, second = full;
  first.trials = second.trials = 40;
  second.trial_offset = 40;
  const auto merged = merge_datasets(run_campaign(first), run_campaign(second));
  EXPECT_EQ(csv_of(merged), csv_of(run_campaign(full)));
}

TEST(Campaign, StoppingRule) {
  auto s = small_campaign();
  s.sizes = {2};
  s.ps = {0.2};
  s.trials = 10;
  s.min_failures = 3;
  s.max_trials = 1000;
  const auto d = run_campaign(s);
  const auto& r = d.records.at(0);
  EXPECT_GE(r.trials, 10u);
  EXPECT_LE(r.trials, 1000u);
  EXPECT_TRUE(r.failures >= 3 || r.trials == 1000);
  if (r.trials > 10) EXPECT_EQ(r.failures, 3u);
  EXPECT_EQ(r.failures, r.cause_logical + r.cause_metacode + r.cause_unmatchable);
}

TEST(Campaign, FixedAndZeroQRules) {
  auto s = small_campaign();
  s.sizes = {2};
  s.ps = {0.01};
  s.q_rule = QRule::fixed;
  s.q_value = 0.05;
  EXPECT_EQ(run_campaign(s).records.at(0).q, 0.05);
  s.q_rule = QRule::zero;
  EXPECT_EQ(run_campaign(s).records.at(0).q, 0.0);
  s.q_rule = QRule::equal_p;
  EXPECT_EQ(run_campaign(s).records.at(0).q, 0.01);
}

TEST(Campaign, Validation) {
  auto s = small_campaign();
  s.ps = {};
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = small_campaign();
  s.ps = {1.2};
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = small_campaign();
  s.trials = 0;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = small_campaign();
  s.family = "klein";
  EXPECT_ANY_THROW(run_campaign(s));
}

TEST(Merge, EmptyIsIdentity) {
  const auto d = run_campaign(small_campaign());
  EXPECT_EQ(csv_of(merge_datasets(d, ThresholdDataset{})), csv_of(d));
  EXPECT_EQ(csv_of(merge_datasets(ThresholdDataset{}, d)), csv_of(d));
}

TEST(Merge, ConflictingSettingsThrow) {
  auto a = small_campaign(), b = small_campaign();
  b.cycles = {3};
  EXPECT_THROW(merge_datasets(run_campaign(a), run_campaign(b)), std::invalid_argument);
  b = a;
  b.protocol.strategy = Strategy::bposd_x2;
  EXPECT_THROW(merge_datasets(run_campaign(a), run_campaign(b)), std::invalid_argument);
  b = a;
  b.seed = 99;
  b.ps = {0.05};
  const auto m = merge_datasets(run_campaign(a), run_campaign(b));
  EXPECT_EQ(m.records.size(), 6u);
}

TEST(Merge, SumsCounts) {
  ThresholdDataset a, b;
  a.metadata = b.metadata = {{"family", "toric"}};
  a.records = {{3, 0.1, 0.1, 2, 100, 10, 7, 2, 1}};
  b.records = {{3, 0.1, 0.1, 2, 50, 4, 4, 0, 0}, {4, 0.1, 0.1, 2, 10, 1, 1, 0, 0}};
  const auto m = merge_datasets(a, b);
  ASSERT_EQ(m.records.size(), 2u);
  EXPECT_EQ(m.records[0].trials, 150u);
  EXPECT_EQ(m.records[0].failures, 14u);
  EXPECT_EQ(m.records[0].cause_logical, 11u);
  EXPECT_EQ(m.records[0].cause_metacode, 2u);
}

TEST(Record, FailureRateAndInterval) {
  DatasetRecord r;
  r.trials = 400;
  r.failures = 100;
  EXPECT_DOUBLE_EQ(r.p_fail(), 0.25);
  EXPECT_DOUBLE_EQ(r.ci95(), 1.96 * std::sqrt(0.25 * 0.75 / 400));
}

TEST(Csv, RoundTrip) {
  const auto d = run_campaign(small_campaign());
  const auto text = csv_of(d);
  EXPECT_EQ(text.find("L,p,q,N,trials,failures,p_fail,ci95,cause_logical,cause_metacode,cause_unmatchable"),
            text.find('\n', text.find("# metadata")) + 1);
  std::istringstream is(text);
  const auto back = read_csv(is);
  EXPECT_EQ(back.metadata, d.metadata);
  ASSERT_EQ(back.records.size(), d.records.size());
  for (std::size_t i = 0; i < d.records.size(); ++i) {
    EXPECT_EQ(back.records[i].L, d.records[i].L);
    EXPECT_EQ(back.records[i].p, d.records[i].p);
    EXPECT_EQ(back.records[i].failures, d.records[i].failures);
  }
  EXPECT_EQ(csv_of(back), text);

  std::istringstream bad("L,p,q\n1,2,3\n");
  EXPECT_THROW(read_csv(bad), FormatError);
  const std::string path = ::testing::TempDir() + "mc_roundtrip.csv";
  save_csv(path, d);
  EXPECT_EQ(csv_of(load_csv(path)), text);
  EXPECT_THROW(load_csv("/nonexistent/x.csv"), FormatError);
}

TEST(Json, StrictCampaignParsing) {
  const nlohmann::json good = {{"schema_version", 1}, {"family", "surface"}, {"L", {3, 5}}, {"p", {0.01, 0.02}},
                               {"q_rule", "fixed"},   {"q", 0.02},          {"N", 4},         {"trials", 10},
                               {"seed", 5},           {"strategy", "bposd_x2"}};
  const auto s = campaign_from_json(good);
  EXPECT_EQ(s.family, "surface");
  EXPECT_EQ(s.sizes, (std::vector<std::size_t>{3, 5}));
  EXPECT_EQ(s.cycles, (std::vector<std::size_t>{4}));
  EXPECT_EQ(s.q_rule, QRule::fixed);
  EXPECT_EQ(s.protocol.strategy, Strategy::bposd_x2);
  EXPECT_EQ(campaign_from_json(to_json(s)).ps, s.ps);

  auto unknown = good;
  unknown["colour"] = "red";
  EXPECT_THROW(campaign_from_json(unknown), FormatError);
  auto wrong_type = good;
  wrong_type["trials"] = "many";
  try {
    campaign_from_json(wrong_type);
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("trials"), std::string::npos);
  }
  EXPECT_THROW(campaign_from_json(nlohmann::json::array()), FormatError);
  auto bad_rule = good;
  bad_rule["q_rule"] = "half";
  EXPECT_THROW(campaign_from_json(bad_rule), FormatError);
}

TEST(Json, DatasetCarriesSchemaVersion) {
  const auto s = small_campaign();
  const auto j = dataset_to_json(run_campaign(s), &s);
  EXPECT_EQ(j.at("schema_version"), 1);
  EXPECT_EQ(j.at("records").size(), 4u);
  EXPECT_EQ(j.at("seed"), 17);
}
