#include "dmkt/sim/config.hpp"

#include <set>

#include "dmkt/errors.hpp"

namespace dmkt::sim {

std::string_view to_string(Archetype a) noexcept {
  switch (a) {
    case Archetype::HonestSeller: return "HonestSeller";
    case Archetype::JunkSeller: return "JunkSeller";
    case Archetype::HonestBuyer: return "HonestBuyer";
    case Archetype::AdversaryBuyer: return "AdversaryBuyer";
    case Archetype::SubsampleFarmer: return "SubsampleFarmer";
  }
  return "HonestSeller";
}

std::string_view slug(Archetype a) noexcept {
  switch (a) {
    case Archetype::HonestSeller: return "honest-seller";
    case Archetype::JunkSeller: return "junk-seller";
    case Archetype::HonestBuyer: return "honest-buyer";
    case Archetype::AdversaryBuyer: return "adversary-buyer";
    case Archetype::SubsampleFarmer: return "subsample-farmer";
  }
  return "honest-seller";
}

std::optional<Archetype> archetype_from_string(std::string_view s) noexcept {
  for (Archetype a : {Archetype::HonestSeller, Archetype::JunkSeller, Archetype::HonestBuyer,
                      Archetype::AdversaryBuyer, Archetype::SubsampleFarmer}) {
    if (to_string(a) == s) return a;
  }
  return std::nullopt;
}

AgentParams default_params(Archetype a) {
  AgentParams p;
  switch (a) {
    case Archetype::JunkSeller:
      // Undercuts every honest listing so buyers keep finding it.
      p.ask_multiplier = 0.4;
      p.noise_level = 0.5;
      break;
    case Archetype::AdversaryBuyer:
      p.noise_tolerance = 0.0;
      break;
    case Archetype::SubsampleFarmer:
      p.reject_probability = 1.0;
      break;
    default:
      break;
  }
  return p;
}

std::map<std::string, HarmImpactVector> default_risk_categories() {
  return {
      {"activity/walking", {4, 5, 2}},
      {"health/heart_rate", {3, 5, 4}},
      {"home/energy_use", {2, 3, 3}},
  };
}

namespace {

using nlohmann::json;

// Walks one JSON object, remembering which keys were consumed so leftovers
// can be reported as unknown fields.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(path_.empty() ? "$" : path_, "expected an object");
  }

  std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json* find(const std::string& key) {
    seen_.insert(key);
    auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  const json& require(const std::string& key) {
    const json* v = find(key);
    if (!v) throw ConfigError(at(key), "missing required field");
    return *v;
  }

  template <typename T>
  void read(const std::string& key, T& out) {
    if (const json* v = find(key)) out = convert<T>(*v, at(key));
  }

  void read_optional_tick(const std::string& key, std::optional<Tick>& out) {
    if (const json* v = find(key)) {
      out = v->is_null() ? std::nullopt : std::optional<Tick>(convert<Tick>(*v, at(key)));
    }
  }

  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!seen_.count(it.key())) throw ConfigError(at(it.key()), "unknown field");
    }
  }

  template <typename T>
  static T convert(const json& v, const std::string& path) {
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ConfigError(path, "expected a boolean");
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) throw ConfigError(path, "expected an integer");
      if constexpr (std::is_unsigned_v<T>) {
        if (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0) {
          throw ConfigError(path, "expected a non-negative integer");
        }
      }
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw ConfigError(path, "expected a number");
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw ConfigError(path, "expected a string");
    }
    return v.get<T>();
  }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

void parse_pricing(const json& doc, const std::string& path, PricingParams& p) {
  ObjectReader r(doc, path);
  r.read("alpha", p.alpha);
  r.read("beta", p.beta);
  r.read("gamma", p.gamma);
  r.read("rep_threshold", p.rep_threshold);
  r.read("exclusivity_mult", p.exclusivity_mult);
  r.read("resale_mult", p.resale_mult);
  r.read("lifespan_half_gain", p.lifespan_half_gain);
  r.read("lifespan_cap_years", p.lifespan_cap_years);
  if (const json* b = r.find("demand_bounds")) {
    const auto bp = r.at("demand_bounds");
    if (!b->is_array() || b->size() != 2) throw ConfigError(bp, "expected [min, max]");
    p.demand_min = ObjectReader::convert<double>((*b)[0], bp + "[0]");
    p.demand_max = ObjectReader::convert<double>((*b)[1], bp + "[1]");
  }
  r.finish();
}

void parse_reputation(const json& doc, const std::string& path, ReputationParams& p) {
  ObjectReader r(doc, path);
  r.read("base", p.base);
  r.read("smoothing", p.smoothing);
  r.read("expulsion_threshold", p.expulsion_threshold);
  r.read("unjustified_reject_limit", p.unjustified_reject_limit);
  r.finish();
}

void parse_subsample(const json& doc, const std::string& path, SubsamplePolicy& p) {
  ObjectReader r(doc, path);
  r.read("fraction", p.fraction);
  r.read("min_points", p.min_points);
  r.read("cap_per_window", p.cap_per_window);
  r.read("window_ticks", p.window_ticks);
  r.finish();
}

HarmImpactVector parse_impacts(const json& doc, const std::string& path) {
  ObjectReader r(doc, path);
  HarmImpactVector v;
  v.distortion = ObjectReader::convert<int>(r.require("distortion"), r.at("distortion"));
  v.revelation = ObjectReader::convert<int>(r.require("revelation"), r.at("revelation"));
  v.intrusion = ObjectReader::convert<int>(r.require("intrusion"), r.at("intrusion"));
  r.finish();
  for (auto [name, level] : {std::pair{"distortion", v.distortion},
                             std::pair{"revelation", v.revelation},
                             std::pair{"intrusion", v.intrusion}}) {
    if (level < 0 || level > kMaxImpact) throw ConfigError(r.at(name), "impact must lie in [0,5]");
  }
  return v;
}

void parse_agent_params(const json& doc, const std::string& path, AgentParams& p) {
  ObjectReader r(doc, path);
  r.read("category", p.category);
  r.read("ask_multiplier", p.ask_multiplier);
  r.read("noise_level", p.noise_level);
  r.read("base_unit_value", p.base_unit_value);
  r.read("points_per_listing", p.points_per_listing);
  r.read("exclusive", p.exclusive);
  r.read_optional_tick("lifespan_ticks", p.lifespan_ticks);
  r.read("resale_allowed", p.resale_allowed);
  r.read("delivery_refusal_prob", p.delivery_refusal_prob);
  r.read("budget_per_point", p.budget_per_point);
  r.read("noise_tolerance", p.noise_tolerance);
  r.read("min_seller_reputation", p.min_seller_reputation);
  r.read("min_lifespan_ticks", p.min_lifespan_ticks);
  r.read("exclusive_required", p.exclusive_required);
  r.read("require_subsample", p.require_subsample);
  r.read("reject_probability", p.reject_probability);
  r.read("funding_refusal_prob", p.funding_refusal_prob);
  if (const json* v = r.find("usage_purpose")) {
    const auto name = ObjectReader::convert<std::string>(*v, r.at("usage_purpose"));
    const auto purpose = purpose_from_string(name);
    if (!purpose) throw ConfigError(r.at("usage_purpose"), "unknown purpose '" + name + "'");
    p.usage_purpose = *purpose;
  }
  r.read("cooldown_ticks", p.cooldown_ticks);
  r.finish();
}

bool unit(double x) { return x >= 0.0 && x <= 1.0; }

void check(bool ok, const std::string& path, const char* what) {
  if (!ok) throw ConfigError(path, what);
}

void validate_agent(const AgentGroup& g, const std::string& path,
                    const std::map<std::string, HarmImpactVector>& categories) {
  const std::string pp = path + ".parameters.";
  const AgentParams& p = g.params;
  check(g.count >= 0, path + ".count", "must be >= 0");
  check(categories.count(p.category) > 0, pp + "category", "not in params.risk_categories");
  if (is_seller(g.archetype)) {
    check(p.ask_multiplier > 0.0, pp + "ask_multiplier", "must be > 0");
    check(unit(p.noise_level), pp + "noise_level", "must lie in [0,1]");
    check(p.base_unit_value > 0.0, pp + "base_unit_value", "must be > 0");
    check(p.points_per_listing >= 1, pp + "points_per_listing", "must be >= 1");
    check(!p.lifespan_ticks || *p.lifespan_ticks > 0, pp + "lifespan_ticks", "must be > 0 or null");
    check(unit(p.delivery_refusal_prob), pp + "delivery_refusal_prob", "must lie in [0,1]");
  } else {
    check(p.budget_per_point > 0.0, pp + "budget_per_point", "must be > 0");
    check(unit(p.noise_tolerance), pp + "noise_tolerance", "must lie in [0,1]");
    check(unit(p.min_seller_reputation), pp + "min_seller_reputation", "must lie in [0,1]");
    check(p.min_lifespan_ticks >= 0, pp + "min_lifespan_ticks", "must be >= 0");
    check(unit(p.reject_probability), pp + "reject_probability", "must lie in [0,1]");
    check(unit(p.funding_refusal_prob), pp + "funding_refusal_prob", "must lie in [0,1]");
    check(p.cooldown_ticks >= 0, pp + "cooldown_ticks", "must be >= 0");
    if (g.archetype == Archetype::AdversaryBuyer) {
      check(p.noise_tolerance == 0.0, pp + "noise_tolerance", "adversaries only buy noise-free data");
    }
    if (g.archetype == Archetype::HonestBuyer) {
      check(p.reject_probability == 0.0, pp + "reject_probability", "honest buyers judge by validation");
    }
    if (g.archetype == Archetype::SubsampleFarmer) {
      check(p.reject_probability > 0.0, pp + "reject_probability", "must be > 0 for a farmer");
    }
  }
}

}  // namespace

void validate(const ScenarioConfig& c) {
  check(c.ticks >= 1, "ticks", "must be >= 1");
  check(!c.agents.empty(), "agents", "must list at least one seller and one buyer archetype");
  bool seller = false;
  bool buyer = false;
  for (std::size_t i = 0; i < c.agents.size(); ++i) {
    const auto& g = c.agents[i];
    (is_seller(g.archetype) ? seller : buyer) = true;
    validate_agent(g, "agents[" + std::to_string(i) + "]", c.risk_categories);
  }
  check(seller, "agents", "needs a seller archetype");
  check(buyer, "agents", "needs a buyer archetype");
  validate(c.market.pricing);
  validate(c.market.reputation);
  validate(c.market.subsample);
}

ScenarioConfig parse_config(const nlohmann::json& doc) {
  ScenarioConfig c;
  c.risk_categories = default_risk_categories();
  ObjectReader root(doc, "");
  c.seed = ObjectReader::convert<std::uint64_t>(root.require("seed"), "seed");
  c.ticks = ObjectReader::convert<Tick>(root.require("ticks"), "ticks");

  const json& agents = root.require("agents");
  if (!agents.is_array()) throw ConfigError("agents", "expected an array");
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const std::string path = "agents[" + std::to_string(i) + "]";
    ObjectReader r(agents[i], path);
    const auto name = ObjectReader::convert<std::string>(r.require("archetype"), r.at("archetype"));
    const auto archetype = archetype_from_string(name);
    if (!archetype) throw ConfigError(r.at("archetype"), "unknown archetype '" + name + "'");
    AgentGroup g;
    g.archetype = *archetype;
    g.count = ObjectReader::convert<int>(r.require("count"), r.at("count"));
    g.params = default_params(g.archetype);
    if (const json* p = r.find("parameters")) parse_agent_params(*p, r.at("parameters"), g.params);
    r.finish();
    c.agents.push_back(std::move(g));
  }

  if (const json* params = root.find("params")) {
    ObjectReader r(*params, "params");
    if (const json* v = r.find("pricing")) parse_pricing(*v, "params.pricing", c.market.pricing);
    if (const json* v = r.find("reputation")) {
      parse_reputation(*v, "params.reputation", c.market.reputation);
    }
    if (const json* v = r.find("subsample")) {
      parse_subsample(*v, "params.subsample", c.market.subsample);
    }
    if (const json* v = r.find("risk_categories")) {
      ObjectReader cats(*v, "params.risk_categories");
      for (auto it = v->begin(); it != v->end(); ++it) {
        cats.find(it.key());
        c.risk_categories[it.key()] = parse_impacts(it.value(), cats.at(it.key()));
      }
    }
    r.finish();
  }
  root.finish();
  validate(c);
  return c;
}

ScenarioConfig parse_config_text(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("$", std::string("not a JSON document: ") + e.what());
  }
  return parse_config(doc);
}

}  // namespace dmkt::sim
