#include "dmkt/sim/agents.hpp"

#include <map>

#include "dmkt/errors.hpp"

namespace dmkt::sim {

namespace {

struct FieldModel {
  const char* name;
  double mean;
  double std;
};

std::vector<FieldModel> field_models(const std::string& category) {
  static const std::map<std::string, std::vector<FieldModel>> known = {
      {"activity/walking", {{"steps", 5000.0, 1500.0}, {"distance_km", 3.5, 1.0}}},
      {"health/heart_rate", {{"bpm", 72.0, 9.0}}},
      {"home/energy_use", {{"kwh", 12.0, 4.0}}},
  };
  auto it = known.find(category);
  if (it != known.end()) return it->second;
  return {{"value", 100.0, 15.0}};
}

// Same shape and timestamps, values nowhere near what the descriptor says.
DataSet forge_payload(const DataSet& shown, Rng& rng) {
  const auto models = field_models(shown.category());
  Eigen::MatrixXd v(shown.size(), shown.field_count());
  for (Eigen::Index i = 0; i < v.rows(); ++i) {
    for (Eigen::Index j = 0; j < v.cols(); ++j) {
      const FieldModel& m = models[static_cast<std::size_t>(j)];
      v(i, j) = m.mean + 6.0 * m.std + rng.uniform(-m.std, m.std);
    }
  }
  return shown.with_values(std::move(v));
}

License license_terms(const Agent& a) {
  License l;
  l.exclusive = a.params.exclusive;
  l.lifespan = a.params.lifespan_ticks ? Lifespan::of_ticks(*a.params.lifespan_ticks)
                                       : Lifespan::perpetual();
  l.permitted_uses = {Purpose::ProductOptimization, Purpose::MarketingAnalytics,
                      Purpose::ResearchAggregate};
  if (a.params.resale_allowed) l.permitted_uses.push_back(Purpose::Resale);
  l.resale_allowed = a.params.resale_allowed;
  return l;
}

bool has_active_listing(const Agent& a, const Marketplace& view) {
  for (const auto& [id, l] : view.listings()) {
    if (l.seller_id == a.id && l.status == ListingStatus::Active &&
        l.descriptor.category == a.params.category) {
      return true;
    }
  }
  return false;
}

bool exclusive_license_running(const Agent& a, const Marketplace& view, Tick tick) {
  for (const License& l : view.licenses()) {
    if (l.seller_id == a.id && l.category == a.params.category && is_active(l, tick)) return true;
  }
  return false;
}

void seller_step(Agent& a, const Marketplace& view, Tick tick, std::vector<Intent>& out) {
  for (const auto& [id, t] : view.transactions()) {
    if (t.seller_id != a.id || t.state != TxnState::EscrowFunded) continue;
    if (a.rng.bernoulli(a.params.delivery_refusal_prob)) {
      out.push_back(intent::Advance{id, TxnEventKind::SellerRefusesDelivery});
    } else {
      out.push_back(intent::Deliver{id});
    }
  }

  if (has_active_listing(a, view)) return;
  if (a.params.exclusive && exclusive_license_running(a, view, tick)) return;

  SellSpec spec;
  spec.seller_id = a.id;
  spec.dataset = generate_dataset(a, tick);
  spec.impacts = a.impacts;
  spec.noise_level = a.params.noise_level;
  spec.noise_seed = a.rng.next_u64();
  spec.base_unit_value = a.params.base_unit_value;
  spec.license_terms = license_terms(a);
  const PriceQuote q = view.quote(spec);
  spec.ask_per_point = a.params.ask_multiplier * q.factors.pre_discount() /
                       static_cast<double>(spec.dataset.size());
  if (a.archetype == Archetype::JunkSeller) spec.substitute_payload = forge_payload(spec.dataset, a.rng);
  out.push_back(intent::List{std::move(spec)});
}

void buyer_step(Agent& a, const Marketplace& view, Tick tick, std::vector<Intent>& out) {
  const bool suspended = view.reputation().privilege(a.id) == SubsamplePrivilege::Suspended;

  if (a.current_txn) {
    const TxnId id = *a.current_txn;
    const Transaction& t = view.transaction(id);
    switch (t.state) {
      case TxnState::Matched:
        out.push_back(intent::Advance{id, TxnEventKind::BuyerAcceptsPrice});
        return;
      case TxnState::PriceAccepted:
        if (a.params.require_subsample && !suspended) {
          out.push_back(intent::RequestSubsample{id});
        } else {
          out.push_back(intent::Advance{id, TxnEventKind::WaiveSubsample});
        }
        return;
      case TxnState::SubsampleIssued: {
        const Listing& l = view.listing(t.listing_id);
        const auto& sample = view.issued_subsample(id);
        const bool pass = validate_subsample(*sample, l.descriptor, l.noise_level).pass;
        if (!pass || a.rng.bernoulli(a.params.reject_probability)) {
          out.push_back(intent::RejectSubsample{id});
        } else {
          out.push_back(intent::Advance{id, TxnEventKind::AcceptSubsample});
        }
        return;
      }
      case TxnState::SubsampleAccepted:
      case TxnState::SubsampleWaived:
        if (a.rng.bernoulli(a.params.funding_refusal_prob)) {
          out.push_back(intent::Advance{id, TxnEventKind::BuyerRefusesFunding});
        } else {
          out.push_back(intent::Advance{id, TxnEventKind::FundEscrow});
        }
        return;
      case TxnState::EscrowFunded:
      case TxnState::DataDelivered:
        return;  // waiting on the seller or the orchestrator
      case TxnState::Settled:
        out.push_back(intent::Use{"lic-" + id, a.params.usage_purpose});
        [[fallthrough]];
      case TxnState::Aborted:
        a.current_txn.reset();
        a.idle_until = tick + a.params.cooldown_ticks;
        return;
    }
  }

  if (tick < a.idle_until) return;
  // A farmer without subsampling has nothing left to farm.
  if (suspended && a.archetype == Archetype::SubsampleFarmer) return;
  if (a.params.require_subsample && !suspended &&
      view.subsample_quota_left(a.id, a.params.category, tick) == 0) {
    return;
  }

  BuySpec spec;
  spec.buyer_id = a.id;
  spec.category = a.params.category;
  spec.max_price_per_point = a.params.budget_per_point;
  spec.max_noise_tolerance = a.params.noise_tolerance;
  spec.min_seller_reputation = a.params.min_seller_reputation;
  spec.required_terms.min_lifespan_ticks = a.params.min_lifespan_ticks;
  spec.required_terms.exclusivity_required = a.params.exclusive_required;
  spec.required_terms.purposes = {a.params.usage_purpose};
  spec.subsample_policy = a.params.require_subsample ? SubsampleChoice::Require : SubsampleChoice::Waive;
  out.push_back(intent::Search{std::move(spec)});
}

}  // namespace

std::vector<Agent> make_agents(const ScenarioConfig& config) {
  std::vector<Agent> agents;
  std::map<Archetype, int> next_index;
  for (const AgentGroup& g : config.agents) {
    for (int i = 0; i < g.count; ++i) {
      Agent a;
      a.archetype = g.archetype;
      a.id = std::string(slug(g.archetype)) + "-" + std::to_string(next_index[g.archetype]++);
      a.params = g.params;
      a.impacts = config.risk_categories.at(g.params.category);
      a.rng = Rng(derive_seed(config.seed, label_salt(a.id)));
      agents.push_back(std::move(a));
    }
  }
  return agents;
}

DataSet generate_dataset(Agent& a, Tick tick) {
  const auto models = field_models(a.params.category);
  const Eigen::Index n = a.params.points_per_listing;
  std::vector<std::string> names;
  for (const auto& m : models) names.emplace_back(m.name);
  std::vector<Tick> ts(static_cast<std::size_t>(n));
  Eigen::MatrixXd v(n, static_cast<Eigen::Index>(models.size()));
  for (Eigen::Index i = 0; i < n; ++i) {
    ts[static_cast<std::size_t>(i)] = tick * n + i;
    for (std::size_t j = 0; j < models.size(); ++j) {
      v(i, static_cast<Eigen::Index>(j)) = a.rng.normal(models[j].mean, models[j].std);
    }
  }
  return DataSet(a.params.category, Provenance::ByproductOfActivity, std::move(names),
                 std::move(ts), std::move(v));
}

std::vector<Intent> step_agent(Agent& agent, const Marketplace& view, Tick tick) {
  std::vector<Intent> out;
  if (view.member(agent.id).expelled) return out;
  if (is_seller(agent.archetype)) {
    seller_step(agent, view, tick, out);
  } else {
    buyer_step(agent, view, tick, out);
  }
  return out;
}

namespace {

struct Executor {
  Agent& agent;
  Marketplace& market;
  Tick tick;

  void operator()(const intent::List& i) {
    market.generate_product(i.spec, tick);
    ++agent.listings_made;
  }
  void operator()(const intent::Search& i) {
    const auto found = market.market_search(i.spec, tick);
    if (found.empty()) {
      agent.idle_until = tick + agent.params.cooldown_ticks;
      return;
    }
    const Listing& l = market.listing(found.front());
    market.identify(agent.id, tick, l.seller_id);
    agent.current_txn = market.match(agent.id, l.listing_id, tick).txn_id;
  }
  void operator()(const intent::Advance& i) { market.advance(i.txn, i.event, tick); }
  void operator()(const intent::RequestSubsample& i) { market.issue_subsample(i.txn, tick); }
  void operator()(const intent::RejectSubsample& i) { market.reject_subsample(i.txn, tick); }
  void operator()(const intent::Deliver& i) { market.deliver(i.txn, tick); }
  void operator()(const intent::Use& i) {
    market.report_use(agent.id, i.license, i.purpose, tick);
  }
};

}  // namespace

void execute(Agent& agent, const Intent& intent, Marketplace& market, Tick tick) {
  try {
    std::visit(Executor{agent, market, tick}, intent);
  } catch (const MarketError& e) {
    switch (e.code()) {
      case ErrorCode::ExclusivityConflict:
      case ErrorCode::IllegalTransition:
      case ErrorCode::SubsampleQuotaExceeded:
      case ErrorCode::SubsamplingSuspendedError:
      case ErrorCode::AccessDenied:
      case ErrorCode::UnknownListing:
        break;
      default:
        throw;
    }
  }
}

}  // namespace dmkt::sim
