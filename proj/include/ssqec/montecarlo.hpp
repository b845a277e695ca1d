#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "ssqec/product_code.hpp"
#include "ssqec/single_shot.hpp"

namespace ssqec {

enum class QRule { equal_p, fixed, zero };

struct CampaignSpec {
  /// "toric", "surface" or "table1"; codes are built for each entry of `sizes`.
  /// Ignored when codes are supplied directly to run_campaign.
  std::string family = "toric";
  std::vector<std::size_t> sizes;
  std::vector<double> ps;
  QRule q_rule = QRule::equal_p;
  double q_value = 0.0;
  std::vector<std::size_t> cycles{0};
  /// Every point runs at least `trials`; it then continues until
  /// `min_failures` failures or `max_trials` trials, whichever comes first.
  std::size_t trials = 1000;
  std::size_t min_failures = 25;
  std::size_t max_trials = 0;  // 0 means equal to `trials`
  std::uint64_t seed = 1;
  std::size_t threads = 0;  // 0 means hardware concurrency
  /// Global index of this run's first trial; lets runs be split and merged.
  std::uint64_t trial_offset = 0;
  /// Strategy, decoders and subroutine flag; noise and N are set per point.
  ProtocolConfig protocol;

  void validate() const;
  double q_for(double p) const;
};

/// Strict parse: unknown fields and wrong types throw FormatError naming the field.
CampaignSpec campaign_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CampaignSpec& s);

struct DatasetRecord {
  std::size_t L = 0;
  double p = 0, q = 0;
  std::size_t N = 0;
  std::size_t trials = 0, failures = 0;
  std::size_t cause_logical = 0, cause_metacode = 0, cause_unmatchable = 0;

  double p_fail() const;
  /// 1.96 * sqrt(p_fail (1 - p_fail) / trials).
  double ci95() const;
};

struct ThresholdDataset {
  /// Settings that must agree for two datasets to be merged.
  nlohmann::json metadata;
  std::vector<DatasetRecord> records;
};

/// A labelled code for a campaign; `L` is reported in the L column.
struct LabelledCode {
  std::size_t L;
  const ProductCode* code;
};

ThresholdDataset run_campaign(const CampaignSpec& spec);
ThresholdDataset run_campaign(const CampaignSpec& spec, const std::vector<LabelledCode>& codes);

/// Runs one grid point; trial t uses stream (point key, trial_offset + t).
DatasetRecord run_point(const ProductCode& code, std::size_t L, const CampaignSpec& spec, double p, std::size_t N);

/// Sums counts per (L, p, q, N). Throws std::invalid_argument on metadata conflict.
ThresholdDataset merge_datasets(const ThresholdDataset& a, const ThresholdDataset& b);

/// Campaign settings that define compatibility between datasets.
nlohmann::json campaign_metadata(const CampaignSpec& spec);

void write_csv(std::ostream& os, const ThresholdDataset& d);
ThresholdDataset read_csv(std::istream& is);
void save_csv(const std::string& path, const ThresholdDataset& d);
ThresholdDataset load_csv(const std::string& path);
nlohmann::json dataset_to_json(const ThresholdDataset& d, const CampaignSpec* spec = nullptr);

}  // namespace ssqec
