#include "ssqec/montecarlo.hpp"

#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "ssqec/errors.hpp"

namespace ssqec {

namespace {

constexpr int kSchemaVersion = 1;
const char* const kCsvHeader = "L,p,q,N,trials,failures,p_fail,ci95,cause_logical,cause_metacode,cause_unmatchable";

std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string q_rule_name(QRule r) {
  switch (r) {
    case QRule::equal_p: return "equal";
    case QRule::fixed: return "fixed";
    case QRule::zero: return "zero";
  }
  return "?";
}

std::size_t resolve_threads(std::size_t requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

ProductCode build_family_code(const std::string& family, std::size_t L) {
  if (family == "toric") return build_code(toric_seeds(L));
  if (family == "surface") return build_code(surface_seeds(L));
  if (family == "table1") return build_code(table_seeds(L));
  throw std::invalid_argument("unknown code family '" + family + "'");
}

}  // namespace

// ------------------------------------------------------------------ campaign

void CampaignSpec::validate() const {
  if (trials < 1) throw std::invalid_argument("campaign: trials must be at least 1");
  if (ps.empty()) throw std::invalid_argument("campaign: p grid is empty");
  if (cycles.empty()) throw std::invalid_argument("campaign: N list is empty");
  for (double p : ps) NoiseModel{p, q_for(p)}.validate();
  if (q_rule == QRule::fixed) NoiseModel{0.0, q_value}.validate();
  ProtocolConfig pc = protocol;
  pc.noise = {};
  pc.validate();
}

double CampaignSpec::q_for(double p) const {
  switch (q_rule) {
    case QRule::equal_p: return p;
    case QRule::fixed: return q_value;
    case QRule::zero: return 0.0;
  }
  return 0.0;
}

CampaignSpec campaign_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw FormatError("campaign: top level must be a JSON object");
  CampaignSpec s;
  std::string field;
  try {
    for (const auto& [key, v] : j.items()) {
      field = key;
      if (key == "schema_version") {
        if (v.get<int>() != kSchemaVersion) throw FormatError("unsupported schema_version");
      } else if (key == "family") {
        s.family = v.get<std::string>();
      } else if (key == "L") {
        s.sizes = v.is_array() ? v.get<std::vector<std::size_t>>() : std::vector<std::size_t>{v.get<std::size_t>()};
      } else if (key == "p") {
        s.ps = v.is_array() ? v.get<std::vector<double>>() : std::vector<double>{v.get<double>()};
      } else if (key == "q_rule") {
        const auto r = v.get<std::string>();
        if (r == "equal") s.q_rule = QRule::equal_p;
        else if (r == "fixed") s.q_rule = QRule::fixed;
        else if (r == "zero") s.q_rule = QRule::zero;
        else throw FormatError("expected equal, fixed or zero, got '" + r + "'");
      } else if (key == "q") {
        s.q_value = v.get<double>();
      } else if (key == "N") {
        s.cycles = v.is_array() ? v.get<std::vector<std::size_t>>() : std::vector<std::size_t>{v.get<std::size_t>()};
      } else if (key == "trials") {
        s.trials = v.get<std::size_t>();
      } else if (key == "min_failures") {
        s.min_failures = v.get<std::size_t>();
      } else if (key == "max_trials") {
        s.max_trials = v.get<std::size_t>();
      } else if (key == "seed") {
        s.seed = v.get<std::uint64_t>();
      } else if (key == "threads") {
        s.threads = v.get<std::size_t>();
      } else if (key == "trial_offset") {
        s.trial_offset = v.get<std::uint64_t>();
      } else if (key == "strategy") {
        s.protocol.strategy = strategy_from_string(v.get<std::string>());
      } else if (key == "failure_subroutine") {
        s.protocol.failure_subroutine = v.get<bool>();
      } else if (key == "priors_from_noise") {
        s.protocol.priors_from_noise = v.get<bool>();
      } else if (key == "allow_approx_matching") {
        s.protocol.matching.allow_approx_matching = v.get<bool>();
      } else if (key == "bp_stage1") {
        s.protocol.bp_stage1 = bp_config_from_json(v);
      } else if (key == "osd_stage1") {
        s.protocol.osd_stage1 = osd_config_from_json(v);
      } else if (key == "bp_stage2") {
        s.protocol.bp_stage2 = bp_config_from_json(v);
      } else if (key == "osd_stage2") {
        s.protocol.osd_stage2 = osd_config_from_json(v);
      } else {
        throw FormatError("unknown field");
      }
    }
    field.clear();
    s.validate();
  } catch (const FormatError& e) {
    throw FormatError("campaign" + (field.empty() ? std::string() : " field '" + field + "'") + ": " + e.what());
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("campaign field '" + field + "': " + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError("campaign" + (field.empty() ? std::string() : " field '" + field + "'") + ": " + e.what());
  }
  return s;
}

nlohmann::json campaign_metadata(const CampaignSpec& s) {
  nlohmann::json m = {{"family", s.family},
                      {"strategy", to_string(s.protocol.strategy)},
                      {"failure_subroutine", s.protocol.failure_subroutine},
                      {"q_rule", q_rule_name(s.q_rule)},
                      {"N", s.cycles},
                      {"priors_from_noise", s.protocol.priors_from_noise},
                      {"allow_approx_matching", s.protocol.matching.allow_approx_matching},
                      {"bp_stage1", to_json(s.protocol.bp_stage1)},
                      {"osd_stage1", to_json(s.protocol.osd_stage1)},
                      {"bp_stage2", to_json(s.protocol.bp_stage2)},
                      {"osd_stage2", to_json(s.protocol.osd_stage2)}};
  if (s.q_rule == QRule::fixed) m["q"] = s.q_value;
  return m;
}

nlohmann::json to_json(const CampaignSpec& s) {
  auto j = campaign_metadata(s);
  j["schema_version"] = kSchemaVersion;
  j["L"] = s.sizes;
  j["p"] = s.ps;
  j["trials"] = s.trials;
  j["min_failures"] = s.min_failures;
  j["max_trials"] = s.max_trials;
  j["seed"] = s.seed;
  j["trial_offset"] = s.trial_offset;
  return j;
}

// ------------------------------------------------------------------- records

double DatasetRecord::p_fail() const {
  return trials == 0 ? 0.0 : static_cast<double>(failures) / static_cast<double>(trials);
}

double DatasetRecord::ci95() const {
  if (trials == 0) return 0.0;
  const double pf = p_fail();
  return 1.96 * std::sqrt(pf * (1.0 - pf) / static_cast<double>(trials));
}

// ------------------------------------------------------------------- running

DatasetRecord run_point(const ProductCode& code, std::size_t L, const CampaignSpec& spec, double p, std::size_t N) {
  const double q = spec.q_for(p);
  ProtocolConfig cfg = spec.protocol;
  cfg.noise = {p, q};
  cfg.cycles = N;
  cfg.validate();

  const std::uint64_t key = hash_words({spec.seed, L, std::bit_cast<std::uint64_t>(p), std::bit_cast<std::uint64_t>(q), N});
  const std::size_t min_t = spec.trials;
  const std::size_t max_t = std::max(min_t, spec.max_trials == 0 ? min_t : spec.max_trials);

  constexpr std::uint8_t kPending = 0xff;
  std::vector<std::uint8_t> causes(max_t, kPending);
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> stop_at{max_t};
  std::mutex mu;
  std::size_t prefix = 0, prefix_failures = 0;
  std::exception_ptr error;

  auto worker = [&] {
    try {
      TrialRunner runner(code, cfg);
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= stop_at.load()) break;
        const auto out = runner.run(RngStream(key, {spec.trial_offset + i}));
        std::lock_guard<std::mutex> lock(mu);
        causes[i] = static_cast<std::uint8_t>(out.cause);
        // Decide the stopping point from the completed prefix only, so the
        // result is independent of scheduling.
        while (prefix < stop_at.load() && causes[prefix] != kPending) {
          if (causes[prefix] != static_cast<std::uint8_t>(FailureCause::none)) ++prefix_failures;
          ++prefix;
          if (prefix >= min_t && (prefix_failures >= spec.min_failures || prefix >= max_t)) {
            stop_at.store(prefix);
            break;
          }
        }
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(mu);
      if (!error) error = std::current_exception();
      stop_at.store(0);
    }
  };

  const std::size_t nthreads = std::min(resolve_threads(spec.threads), max_t);
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);

  DatasetRecord rec;
  rec.L = L;
  rec.p = p;
  rec.q = q;
  rec.N = N;
  rec.trials = stop_at.load();
  for (std::size_t i = 0; i < rec.trials; ++i) {
    switch (static_cast<FailureCause>(causes[i])) {
      case FailureCause::logical: ++rec.cause_logical; break;
      case FailureCause::metacode: ++rec.cause_metacode; break;
      case FailureCause::unmatchable: ++rec.cause_unmatchable; break;
      case FailureCause::none: break;
    }
  }
  rec.failures = rec.cause_logical + rec.cause_metacode + rec.cause_unmatchable;
  return rec;
}

ThresholdDataset run_campaign(const CampaignSpec& spec, const std::vector<LabelledCode>& codes) {
  spec.validate();
  ThresholdDataset d;
  d.metadata = campaign_metadata(spec);
  for (const auto& lc : codes) {
    for (std::size_t N : spec.cycles) {
      for (double p : spec.ps) d.records.push_back(run_point(*lc.code, lc.L, spec, p, N));
    }
  }
  return d;
}

ThresholdDataset run_campaign(const CampaignSpec& spec) {
  spec.validate();
  if (spec.sizes.empty()) throw std::invalid_argument("campaign: L list is empty");
  std::vector<ProductCode> owned;
  owned.reserve(spec.sizes.size());
  std::vector<LabelledCode> codes;
  for (std::size_t L : spec.sizes) {
    owned.push_back(build_family_code(spec.family, L));
    codes.push_back({L, &owned.back()});
  }
  return run_campaign(spec, codes);
}

// ------------------------------------------------------------------- merging

ThresholdDataset merge_datasets(const ThresholdDataset& a, const ThresholdDataset& b) {
  const bool a_empty = a.records.empty() && a.metadata.is_null();
  const bool b_empty = b.records.empty() && b.metadata.is_null();
  if (a_empty) return b;
  if (b_empty) return a;
  if (a.metadata != b.metadata) {
    std::string what;
    for (const auto& [key, v] : a.metadata.items()) {
      if (!b.metadata.contains(key) || b.metadata[key] != v) what += (what.empty() ? "" : ", ") + key;
    }
    for (const auto& [key, v] : b.metadata.items()) {
      if (!a.metadata.contains(key)) what += (what.empty() ? "" : ", ") + key;
    }
    throw std::invalid_argument("merge: conflicting metadata (" + what + ")");
  }
  ThresholdDataset out = a;
  using Key = std::tuple<std::size_t, std::uint64_t, std::uint64_t, std::size_t>;
  auto key_of = [](const DatasetRecord& r) {
    return Key{r.L, std::bit_cast<std::uint64_t>(r.p), std::bit_cast<std::uint64_t>(r.q), r.N};
  };
  std::map<Key, std::size_t> index;
  for (std::size_t i = 0; i < out.records.size(); ++i) {
    if (!index.emplace(key_of(out.records[i]), i).second) throw std::invalid_argument("merge: duplicate grid point");
  }
  for (const auto& r : b.records) {
    auto it = index.find(key_of(r));
    if (it == index.end()) {
      index.emplace(key_of(r), out.records.size());
      out.records.push_back(r);
      continue;
    }
    auto& t = out.records[it->second];
    t.trials += r.trials;
    t.failures += r.failures;
    t.cause_logical += r.cause_logical;
    t.cause_metacode += r.cause_metacode;
    t.cause_unmatchable += r.cause_unmatchable;
  }
  return out;
}

// ----------------------------------------------------------------------- I/O

void write_csv(std::ostream& os, const ThresholdDataset& d) {
  os << "# schema_version: " << kSchemaVersion << '\n';
  os << "# metadata: " << d.metadata.dump() << '\n';
  os << kCsvHeader << '\n';
  for (const auto& r : d.records) {
    os << r.L << ',' << fmt_double(r.p) << ',' << fmt_double(r.q) << ',' << r.N << ',' << r.trials << ','
       << r.failures << ',' << fmt_double(r.p_fail()) << ',' << fmt_double(r.ci95()) << ',' << r.cause_logical << ','
       << r.cause_metacode << ',' << r.cause_unmatchable << '\n';
  }
}

ThresholdDataset read_csv(std::istream& is) {
  ThresholdDataset d;
  std::string line;
  bool header = false;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string tag = "# metadata: ";
      if (line.rfind(tag, 0) == 0) {
        try {
          d.metadata = nlohmann::json::parse(line.substr(tag.size()));
        } catch (const nlohmann::json::exception& e) {
          throw FormatError("csv line " + std::to_string(lineno) + ": bad metadata: " + e.what());
        }
      }
      continue;
    }
    if (!header) {
      if (line != kCsvHeader) throw FormatError("csv line " + std::to_string(lineno) + ": unexpected header");
      header = true;
      continue;
    }
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 11) throw FormatError("csv line " + std::to_string(lineno) + ": expected 11 fields");
    DatasetRecord r;
    try {
      r.L = std::stoul(f[0]);
      r.p = std::stod(f[1]);
      r.q = std::stod(f[2]);
      r.N = std::stoul(f[3]);
      r.trials = std::stoul(f[4]);
      r.failures = std::stoul(f[5]);
      r.cause_logical = std::stoul(f[8]);
      r.cause_metacode = std::stoul(f[9]);
      r.cause_unmatchable = std::stoul(f[10]);
    } catch (const std::exception&) {
      throw FormatError("csv line " + std::to_string(lineno) + ": malformed number");
    }
    if (r.failures > r.trials) throw FormatError("csv line " + std::to_string(lineno) + ": failures exceed trials");
    d.records.push_back(r);
  }
  if (!header) throw FormatError("csv: missing header line");
  return d;
}

void save_csv(const std::string& path, const ThresholdDataset& d) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw FormatError("cannot open " + path + " for writing");
  write_csv(os, d);
}

ThresholdDataset load_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw FormatError("cannot open " + path);
  return read_csv(is);
}

nlohmann::json dataset_to_json(const ThresholdDataset& d, const CampaignSpec* spec) {
  nlohmann::json recs = nlohmann::json::array();
  for (const auto& r : d.records) {
    recs.push_back({{"L", r.L},
                    {"p", r.p},
                    {"q", r.q},
                    {"N", r.N},
                    {"trials", r.trials},
                    {"failures", r.failures},
                    {"p_fail", r.p_fail()},
                    {"ci95", r.ci95()},
                    {"cause_logical", r.cause_logical},
                    {"cause_metacode", r.cause_metacode},
                    {"cause_unmatchable", r.cause_unmatchable}});
  }
  nlohmann::json j = {{"schema_version", kSchemaVersion}, {"metadata", d.metadata}, {"records", recs}};
  if (spec) {
    j["seed"] = spec->seed;
    j["campaign"] = to_json(*spec);
  }
  return j;
}

}  // namespace ssqec
