#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "ssqec/confinement.hpp"
#include "ssqec/errors.hpp"
#include "ssqec/fitting.hpp"
#include "ssqec/lattice.hpp"
#include "ssqec/montecarlo.hpp"
#include "ssqec/product_code.hpp"

using namespace ssqec;

namespace {

void write_json(const std::string& path, const nlohmann::json& j) {
  std::ofstream os(path);
  if (!os) throw FormatError("cannot open '" + path + "' for writing");
  os << j.dump(2) << "\n";
  if (!os) throw FormatError("write to '" + path + "' failed");
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw FormatError("cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(is);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(path + ": " + e.what());
  }
}

std::string describe(const ProductCode& c) {
  const auto& p = c.params;
  return "[[" + std::to_string(p.n) + ", " + std::to_string(p.k) + ", " + p.dx.to_string() + ", " + p.dz.to_string() +
         "]] d_ss=" + p.dss.to_string() + " k_m=" + std::to_string(p.km);
}

struct Options {
  std::string seeds, out, code, config, in, kind = "threshold", f = "cubic";
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::size_t threads = 0, t = 0, bootstrap = 1000, limit = kDefaultEnumerationLimit;
  std::optional<std::size_t> N;
  bool weighted = false, pauli = false, even_l = false;
  std::optional<double> pth;
  std::string json_out;
};

int build_code_cmd(const Options& o) {
  const ProductCode code = build_code(resolve_seeds(o.seeds));
  write_json(o.out, code_to_json(code));
  std::cout << describe(code) << "\n";
  return 0;
}

int simulate_cmd(const Options& o) {
  const ProductCode code = load_code(o.code);
  CampaignSpec spec = campaign_from_json(read_json(o.config));
  if (o.seed_set) spec.seed = o.seed;
  if (o.threads > 0) spec.threads = o.threads;
  std::size_t label = 0;
  if (spec.sizes.size() == 1) {
    label = spec.sizes[0];
  } else if (spec.sizes.empty()) {
    if (code.params.dz.is_finite()) label = code.params.dz.value();
  } else {
    throw FormatError("campaign field 'L': simulate takes one code, so at most one L label");
  }
  spec.sizes = {label};
  const ThresholdDataset d = run_campaign(spec, {{label, &code}});
  save_csv(o.out, d);
  if (!o.json_out.empty()) write_json(o.json_out, dataset_to_json(d, &spec));
  return 0;
}

ThresholdFitConfig threshold_config(const Options& o) {
  ThresholdFitConfig cfg;
  cfg.ci_weighted = o.weighted;
  cfg.bootstrap = o.bootstrap;
  if (o.seed_set) cfg.seed = o.seed;
  return cfg;
}

int fit_cmd(const Options& o) {
  const ThresholdDataset d = load_csv(o.in);
  FitResult r;
  if (o.kind == "threshold") {
    r = fit_threshold(d, threshold_config(o), o.N);
  } else if (o.kind == "sustainable") {
    std::set<std::size_t> ns;
    for (const auto& rec : d.records) ns.insert(rec.N);
    std::vector<std::pair<double, double>> pth;
    nlohmann::json per_n = nlohmann::json::object();
    for (std::size_t n : ns) {
      const FitResult t = fit_threshold(d, threshold_config(o), n);
      pth.push_back({static_cast<double>(n), t.value("p_th")});
      per_n[std::to_string(n)] = to_json(t);
    }
    SustainableFitConfig cfg;
    cfg.bootstrap = o.bootstrap;
    if (o.seed_set) cfg.seed = o.seed;
    r = fit_sustainable(pth, cfg);
    auto j = to_json(r);
    j["threshold_fits"] = per_n;
    write_json(o.out, j);
    return 0;
  } else if (o.kind == "scaling") {
    if (!o.pth) throw FormatError("fit --kind scaling needs --pth");
    ScalingFitConfig cfg;
    cfg.p_th = *o.pth;
    cfg.odd_l_only = !o.even_l;
    r = fit_scaling(d, cfg, o.N);
  } else {
    throw FormatError("unknown fit kind '" + o.kind + "'");
  }
  write_json(o.out, to_json(r));
  return 0;
}

int confinement_cmd(const Options& o) {
  const ProductCode code = load_code(o.code);
  const auto report = check_confinement(code, o.t, ConfinementFunction::parse(o.f), !o.pauli, o.limit);
  write_json(o.out, to_json(report));
  std::cout << "verified: " << (report.verified ? "true" : "false") << "\n";
  return 0;
}

int lattice_cmd(const Options& o) {
  const ProductCode code = load_code(o.code);
  write_json(o.out, lattice_to_json(embed(code)));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"3D product code construction, single-shot simulation and analysis"};
  app.require_subcommand(1);
  Options o;

  auto* build = app.add_subcommand("build-code", "Build a product code from three seed matrices");
  build->add_option("--seeds", o.seeds, "builtin:toric:L, builtin:surface:L, builtin:table1:i, or a JSON file")
      ->required();
  build->add_option("--out", o.out, "Output code JSON")->required();

  auto* sim = app.add_subcommand("simulate", "Run a Monte Carlo campaign on one code");
  sim->add_option("--code", o.code, "Code JSON")->required()->check(CLI::ExistingFile);
  sim->add_option("--config", o.config, "Campaign JSON")->required()->check(CLI::ExistingFile);
  sim->add_option("--out", o.out, "Output CSV")->required();
  sim->add_option("--json", o.json_out, "Also write a JSON mirror with metadata and seed");
  auto* sim_seed = sim->add_option("--seed", o.seed, "Master seed (overrides the config)");
  sim->add_option("--threads", o.threads, "Worker threads (default: all cores)");

  auto* fit = app.add_subcommand("fit", "Fit a campaign CSV");
  fit->add_option("--kind", o.kind, "threshold, sustainable or scaling")
      ->check(CLI::IsMember({"threshold", "sustainable", "scaling"}));
  fit->add_option("--in", o.in, "Campaign CSV")->required()->check(CLI::ExistingFile);
  fit->add_option("--out", o.out, "Output JSON")->required();
  fit->add_option("--N", o.N, "Use only records with this cycle count");
  fit->add_flag("--weighted", o.weighted, "Weight threshold residuals by the 95% CI");
  fit->add_option("--pth", o.pth, "Threshold for the scaling fit");
  fit->add_flag("--even-l", o.even_l, "Keep even L in the scaling fit");
  fit->add_option("--bootstrap", o.bootstrap, "Bootstrap resamples for standard errors");
  auto* fit_seed = fit->add_option("--seed", o.seed, "Bootstrap seed");

  auto* conf = app.add_subcommand("confinement-check", "Exhaustive confinement check");
  conf->add_option("--code", o.code, "Code JSON")->required()->check(CLI::ExistingFile);
  conf->add_option("--t", o.t, "Largest error weight")->required();
  conf->add_option("--f", o.f, "cubic, quadratic, zero or linear:K");
  conf->add_option("--out", o.out, "Output JSON")->required();
  conf->add_flag("--pauli", o.pauli, "Full Pauli errors instead of Z errors");
  conf->add_option("--limit", o.limit, "Maximum number of enumerated errors");

  auto* lat = app.add_subcommand("lattice-export", "Export lattice coordinates");
  lat->add_option("--code", o.code, "Code JSON")->required()->check(CLI::ExistingFile);
  lat->add_option("--out", o.out, "Output JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }
  o.seed_set = sim_seed->count() > 0 || fit_seed->count() > 0;

  try {
    if (*build) return build_code_cmd(o);
    if (*sim) return simulate_cmd(o);
    if (*fit) return fit_cmd(o);
    if (*conf) return confinement_cmd(o);
    if (*lat) return lattice_cmd(o);
  } catch (const ConsistencyError& e) {
    std::cerr << "internal consistency error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
