#include "dmkt/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dmkt/errors.hpp"
#include "dmkt/license.hpp"
#include "dmkt/pricing.hpp"
#include "dmkt/replay.hpp"
#include "dmkt/risk.hpp"
#include "dmkt/sim/config.hpp"
#include "dmkt/sim/metrics.hpp"
#include "dmkt/sim/scenario.hpp"

namespace dmkt::cli {

namespace {

namespace fs = std::filesystem;

std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string read_file(const std::string& path, const std::string& flag) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(flag, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("--out", "cannot write " + path.string());
  out << content;
}

struct RiskArgs {
  int distortion = 0;
  int revelation = 0;
  int intrusion = 0;
};

void print_risk(const RiskAssessment& a, bool json, std::ostream& out) {
  if (json) {
    Record r;
    r["distortion"] = a.impacts.distortion;
    r["revelation"] = a.impacts.revelation;
    r["intrusion"] = a.impacts.intrusion;
    r["raw_score"] = a.raw_score;
    r["max_score"] = kMaxRawRisk;
    r["normalized"] = a.normalized;
    r["band"] = to_string(a.band);
    out << r.dump() << "\n";
    return;
  }
  out << "raw score   " << a.raw_score << "/" << kMaxRawRisk << "\n";
  out << "normalized  " << fixed(a.normalized) << " (" << fixed(100.0 * a.normalized, 1)
      << "%)\n";
  out << "band        " << to_string(a.band) << "\n";
}

struct PriceArgs {
  RiskArgs impacts;
  std::optional<double> risk;
  double base_unit_value = 1.0;
  long quantity = 1;
  double noise = 0.0;
  bool exclusive = false;
  bool resale = false;
  Tick lifespan_ticks = 0;
  bool perpetual = false;
  std::optional<double> demand;
  int open_specs = 0;
  int active_listings = 0;
  std::optional<double> ask;
  std::optional<double> buyer_reputation;
  PricingParams params;
};

void run_price(const PriceArgs& a, bool json, std::ostream& out) {
  validate(a.params);
  RiskAssessment risk;
  if (a.risk) {
    risk.band = risk_band(*a.risk);
    risk.normalized = *a.risk;
    risk.raw_score = static_cast<int>(std::lround(*a.risk * kMaxRawRisk));
  } else {
    risk = assess_risk({a.impacts.distortion, a.impacts.revelation, a.impacts.intrusion});
  }
  License terms;
  terms.exclusive = a.exclusive;
  terms.resale_allowed = a.resale;
  terms.lifespan = a.perpetual ? Lifespan::perpetual() : Lifespan::of_ticks(a.lifespan_ticks);
  const double demand =
      a.demand ? *a.demand : demand_index(a.open_specs, a.active_listings, a.params);
  const PriceQuote q =
      recommend_price(a.base_unit_value, a.quantity, risk, a.noise, terms, demand, a.params);

  std::optional<double> listing;
  std::optional<double> effective;
  if (a.ask) listing = enforced_listing_price(*a.ask, a.noise, a.params);
  if (a.buyer_reputation) {
    if (*a.buyer_reputation < 0.0 || *a.buyer_reputation > 1.0) {
      throw MarketError(ErrorCode::InvalidPricingInput, "buyer reputation outside [0,1]");
    }
    effective = buyer_effective_price(listing ? *listing : q.recommended, *a.buyer_reputation,
                                      a.params);
  }

  if (json) {
    Record r = to_record(q);
    r["pre_discount_ask"] = q.factors.pre_discount();
    if (listing) r["listing_price"] = *listing;
    if (effective) r["buyer_effective_price"] = *effective;
    out << r.dump() << "\n";
    return;
  }
  const PriceFactors& f = q.factors;
  out << "recommended       " << fixed(q.recommended) << "\n";
  out << "factors\n";
  out << "  volume          " << fixed(f.volume) << "\n";
  out << "  risk            " << fixed(f.risk) << "\n";
  out << "  noise           " << fixed(f.noise) << "\n";
  out << "  exclusivity     " << fixed(f.exclusivity) << "\n";
  out << "  resale          " << fixed(f.resale) << "\n";
  out << "  lifespan        " << fixed(f.lifespan) << "\n";
  out << "  demand          " << fixed(f.demand) << "\n";
  out << "  product         " << fixed(f.product()) << "\n";
  out << "pre-discount ask  " << fixed(f.pre_discount()) << "\n";
  if (listing) out << "listing price     " << fixed(*listing) << "\n";
  if (effective) out << "buyer pays        " << fixed(*effective) << "\n";
}

struct LicenseArgs {
  std::string file;
  std::string purpose;
  Tick tick = 0;
  std::string actor;
};

void run_license_check(const LicenseArgs& a, bool json, std::ostream& out) {
  Record doc;
  try {
    doc = Record::parse(read_file(a.file, "--license"));
  } catch (const nlohmann::json::exception& e) {
    throw MarketError(ErrorCode::InvalidLicense, std::string("unreadable license: ") + e.what());
  }
  const License lic = license_from_record(doc);
  validate_license(lic);
  const auto purpose = purpose_from_string(a.purpose);
  if (!purpose) throw ConfigError("--purpose", "unknown purpose '" + a.purpose + "'");
  const MemberId actor = a.actor.empty() ? lic.buyer_id : a.actor;
  const ComplianceVerdict v = check_action(lic, actor, *purpose, a.tick);
  if (json) {
    Record r;
    r["license"] = lic.license_id;
    r["actor"] = actor;
    r["purpose"] = to_string(*purpose);
    r["tick"] = a.tick;
    r["compliant"] = v.is_compliant();
    r["violation"] = v.violation ? Record(to_string(*v.violation)) : Record(nullptr);
    out << r.dump() << "\n";
    return;
  }
  out << to_string(v) << "\n";
}

void print_metrics(const sim::ScenarioMetrics& m, bool json, std::ostream& out) {
  out << (json ? sim::metrics_json(m) : sim::metrics_text(m));
}

struct SimulateArgs {
  std::string config;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
};

void run_simulate(const SimulateArgs& a, bool json, std::ostream& out) {
  sim::ScenarioConfig config = sim::parse_config_text(read_file(a.config, "--config"));
  if (a.seed) config.seed = *a.seed;
  const sim::ScenarioResult result = sim::run_scenario(config);

  std::error_code ec;
  fs::create_directories(a.out_dir, ec);
  if (ec) throw ConfigError("--out", "cannot create " + a.out_dir + ": " + ec.message());
  const fs::path dir(a.out_dir);
  write_file(dir / "ledger.jsonl", result.ledger().to_jsonl());
  write_file(dir / "metrics.json", sim::metrics_json(result.metrics));
  write_file(dir / "trajectories.csv", sim::trajectories_csv(result.metrics));
  print_metrics(result.metrics, json, out);
}

void run_report(const std::string& path, bool json, std::ostream& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("--ledger", "cannot read " + path);
  const EventLedger ledger = EventLedger::read_jsonl(in);
  // Structural check: every transaction must replay through the state machine.
  replay(ledger, ReputationParams{});
  print_metrics(sim::compute_metrics(ledger), json, out);
}

}  // namespace

int execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Personal data marketplace toolkit", "dmkt"};
  app.require_subcommand(1, 1);
  std::string format = "text";
  app.add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();

  RiskArgs risk_args;
  auto* risk_cmd = app.add_subcommand("assess-risk", "Score a harm impact vector");
  risk_cmd->add_option("--distortion", risk_args.distortion)->required();
  risk_cmd->add_option("--revelation", risk_args.revelation)->required();
  risk_cmd->add_option("--intrusion", risk_args.intrusion)->required();

  PriceArgs price_args;
  auto* price_cmd = app.add_subcommand("price", "Recommend a price with its factor audit");
  price_cmd->add_option("--base-unit-value", price_args.base_unit_value)->capture_default_str();
  price_cmd->add_option("--quantity", price_args.quantity)->required();
  auto* risk_opt = price_cmd->add_option("--risk", price_args.risk, "Normalized risk in [0,1]");
  price_cmd->add_option("--distortion", price_args.impacts.distortion)->excludes(risk_opt);
  price_cmd->add_option("--revelation", price_args.impacts.revelation)->excludes(risk_opt);
  price_cmd->add_option("--intrusion", price_args.impacts.intrusion)->excludes(risk_opt);
  price_cmd->add_option("--noise", price_args.noise)->capture_default_str();
  price_cmd->add_flag("--exclusive", price_args.exclusive);
  price_cmd->add_flag("--resale", price_args.resale);
  auto* ticks_opt = price_cmd->add_option("--lifespan-ticks", price_args.lifespan_ticks);
  price_cmd->add_flag("--perpetual", price_args.perpetual)->excludes(ticks_opt);
  auto* demand_opt = price_cmd->add_option("--demand", price_args.demand);
  price_cmd->add_option("--open-specs", price_args.open_specs)->excludes(demand_opt);
  price_cmd->add_option("--active-listings", price_args.active_listings)->excludes(demand_opt);
  price_cmd->add_option("--ask", price_args.ask, "Seller ask; prints the enforced listing price");
  price_cmd->add_option("--buyer-reputation", price_args.buyer_reputation);
  price_cmd->add_option("--alpha", price_args.params.alpha)->capture_default_str();
  price_cmd->add_option("--beta", price_args.params.beta)->capture_default_str();
  price_cmd->add_option("--gamma", price_args.params.gamma)->capture_default_str();

  LicenseArgs license_args;
  auto* license_cmd = app.add_subcommand("license-check", "Check an action against a license");
  license_cmd->add_option("--license", license_args.file, "License JSON file")->required();
  license_cmd->add_option("--purpose", license_args.purpose)->required();
  license_cmd->add_option("--tick", license_args.tick)->required();
  license_cmd->add_option("--actor", license_args.actor, "Defaults to the license buyer");

  SimulateArgs sim_args;
  auto* sim_cmd = app.add_subcommand("simulate", "Run a scenario");
  sim_cmd->add_option("--config", sim_args.config)->required();
  sim_cmd->add_option("--out", sim_args.out_dir)->required();
  sim_cmd->add_option("--seed", sim_args.seed, "Overrides the config seed");

  std::string ledger_path;
  auto* report_cmd = app.add_subcommand("report", "Recompute metrics from a ledger export");
  report_cmd->add_option("--ledger", ledger_path)->required();

  auto* table_cmd =
      app.add_subcommand("transitions", "Print the transaction transition table as JSON lines");

  // Accept --format after the subcommand as well.
  for (auto* sub : {risk_cmd, price_cmd, license_cmd, sim_cmd, report_cmd, table_cmd}) {
    sub->fallthrough();
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    err << "run with --help for usage\n";
    return kExitUsage;
  }

  const bool json = format == "json";
  try {
    if (risk_cmd->parsed()) {
      print_risk(assess_risk({risk_args.distortion, risk_args.revelation, risk_args.intrusion}),
                 json, out);
    } else if (price_cmd->parsed()) {
      run_price(price_args, json, out);
    } else if (license_cmd->parsed()) {
      run_license_check(license_args, json, out);
    } else if (sim_cmd->parsed()) {
      run_simulate(sim_args, json, out);
    } else if (report_cmd->parsed()) {
      run_report(ledger_path, json, out);
    } else if (table_cmd->parsed()) {
      out << transition_table_jsonl();
    }
  } catch (const MarketError& e) {
    err << e.what() << "\n";
    return kExitDomain;
  }
  return kExitOk;
}

}  // namespace dmkt::cli
