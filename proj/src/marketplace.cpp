#include "dmkt/marketplace.hpp"

#include <algorithm>
#include <cstdio>
#include <tuple>

#include "dmkt/core/random.hpp"
#include "dmkt/errors.hpp"
#include "dmkt/privacy.hpp"

namespace dmkt {

std::string_view to_string(ListingStatus s) noexcept {
  switch (s) {
    case ListingStatus::Active: return "Active";
    case ListingStatus::Withdrawn: return "Withdrawn";
    case ListingStatus::Sold: return "Sold";
  }
  return "Active";
}

namespace {

std::string numbered(char prefix, std::uint64_t n) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%c%06llu", prefix, static_cast<unsigned long long>(n));
  return buf;
}

Record roles_record(RoleSet roles) {
  Record r = Record::array();
  if (roles.has(Role::Seller)) r.push_back("Seller");
  if (roles.has(Role::Buyer)) r.push_back("Buyer");
  return r;
}

Record descriptor_record(const DataDescriptor& d) {
  Record r;
  r["category"] = d.category;
  r["count"] = d.count;
  r["time_range"] = Record::array({d.first_tick, d.last_tick});
  Record fields = Record::array();
  for (const auto& f : d.fields) {
    Record fr;
    fr["name"] = f.name;
    fr["min"] = f.min;
    fr["max"] = f.max;
    fr["mean"] = f.mean;
    fr["std"] = f.std;
    fields.push_back(std::move(fr));
  }
  r["fields"] = std::move(fields);
  r["declared_noise_level"] = d.declared_noise_level;
  return r;
}

Record risk_record(const RiskAssessment& a) {
  Record r;
  r["distortion"] = a.impacts.distortion;
  r["revelation"] = a.impacts.revelation;
  r["intrusion"] = a.impacts.intrusion;
  r["raw_score"] = a.raw_score;
  r["normalized"] = a.normalized;
  r["band"] = to_string(a.band);
  return r;
}

bool satisfies(const License& offered, const LicenseRequirements& req) {
  if (req.exclusivity_required && !offered.exclusive) return false;
  if (!offered.lifespan.is_perpetual() && *offered.lifespan.ticks < req.min_lifespan_ticks) {
    return false;
  }
  return std::all_of(req.purposes.begin(), req.purposes.end(),
                     [&](Purpose p) { return offered.permits(p); });
}

}  // namespace

Marketplace::Marketplace(MarketConfig config)
    : config_(std::move(config)), reputation_(config_.reputation) {
  validate(config_.pricing);
  validate(config_.subsample);
}

void Marketplace::register_member(const MemberId& id, RoleSet roles, Tick tick,
                                  const std::string& archetype) {
  if (id.empty() || id == ReputationLedger::kOrchestrator || members_.count(id)) {
    throw ConfigError("member_id", "'" + id + "' is empty, reserved or already registered");
  }
  if (roles.empty()) throw ConfigError("roles", "member " + id + " needs at least one role");
  members_[id] = {roles, tick};
  if (!archetype.empty()) archetypes_[id] = archetype;
  reputation_.add_member(id);

  Record p;
  p["member"] = id;
  p["registered"] = true;
  p["roles"] = roles_record(roles);
  p["archetype"] = archetype;
  p["reputation"] = reputation_.reputation_of(id);
  p["subsample_privilege"] = to_string(SubsamplePrivilege::Active);
  ledger_.append(EventKind::Identified, std::move(p), tick);
}

Member Marketplace::member(const MemberId& id) const {
  auto it = members_.find(id);
  if (it == members_.end()) throw MarketError(ErrorCode::UnknownMember, id);
  Member m;
  m.member_id = id;
  m.roles = it->second.roles;
  m.joined_at = it->second.joined_at;
  m.subsample_privilege = reputation_.privilege(id);
  m.expelled = reputation_.is_expelled(id);
  return m;
}

void Marketplace::require_active(const MemberId& id) const {
  if (!members_.count(id)) throw MarketError(ErrorCode::UnknownMember, id);
  if (reputation_.is_expelled(id)) throw MarketError(ErrorCode::AccessDenied, id + " is expelled");
}

Session Marketplace::identify(const MemberId& id, Tick tick,
                              const std::optional<MemberId>& counterparty) {
  require_active(id);
  Session s;
  s.member_id = id;
  s.reputation = reputation_.reputation_of(id);
  s.privilege = reputation_.privilege(id);
  s.waiver_only = s.privilege == SubsamplePrivilege::Suspended;
  if (counterparty) s.counterparty_reputation = reputation_.reputation_of(*counterparty);

  Record p;
  p["member"] = id;
  p["reputation"] = s.reputation;
  p["subsample_privilege"] = to_string(s.privilege);
  if (counterparty) {
    p["counterparty"] = *counterparty;
    p["counterparty_reputation"] = *s.counterparty_reputation;
  }
  ledger_.append(EventKind::Identified, std::move(p), tick);
  return s;
}

std::string Marketplace::quota_key(const MemberId& buyer, const std::string& category,
                                   Tick tick) const {
  return buyer + "|" + category + "|" + std::to_string(tick / config_.subsample.window_ticks);
}

int Marketplace::subsample_quota_left(const MemberId& buyer, const std::string& category,
                                      Tick tick) const {
  auto it = subsample_requests_.find(quota_key(buyer, category, tick));
  const int used = it == subsample_requests_.end() ? 0 : it->second;
  return std::max(0, config_.subsample.cap_per_window - used);
}

int Marketplace::open_buy_specs(const std::string& category) const {
  return static_cast<int>(std::count_if(open_specs_.begin(), open_specs_.end(),
                                        [&](const auto& kv) { return kv.second == category; }));
}

int Marketplace::active_listings(const std::string& category) const {
  return static_cast<int>(std::count_if(listings_.begin(), listings_.end(), [&](const auto& kv) {
    return kv.second.status == ListingStatus::Active && kv.second.descriptor.category == category;
  }));
}

void Marketplace::begin_tick(Tick tick) {
  if (demand_tick_ && tick <= *demand_tick_) return;
  demand_tick_ = tick;
  demand_counts_.clear();
  for (const auto& [buyer, category] : open_specs_) ++demand_counts_[category].first;
  for (const auto& [id, l] : listings_) {
    if (l.status == ListingStatus::Active) ++demand_counts_[l.descriptor.category].second;
  }
}

double Marketplace::demand(const std::string& category) const {
  auto it = demand_counts_.find(category);
  if (it == demand_counts_.end()) return demand_index(0, 0, config_.pricing);
  return demand_index(it->second.first, it->second.second, config_.pricing);
}

PriceQuote Marketplace::quote(const SellSpec& spec) const {
  const RiskAssessment risk = assess_risk(spec.impacts);
  return recommend_price(spec.base_unit_value, static_cast<long>(spec.dataset.size()), risk,
                         spec.noise_level, spec.license_terms, demand(spec.dataset.category()),
                         config_.pricing);
}

void Marketplace::check_exclusivity(const SellSpec& spec, Tick tick) const {
  const std::string& category = spec.dataset.category();
  if (!check_seller_double_sale(licenses_, spec.seller_id, category, tick).is_compliant()) {
    throw MarketError(ErrorCode::ExclusivityConflict,
                      spec.seller_id + " holds an active exclusive license on " + category);
  }
  for (const auto& [id, l] : listings_) {
    if (l.status != ListingStatus::Active || l.seller_id != spec.seller_id ||
        l.descriptor.category != category) {
      continue;
    }
    if (l.license_template.exclusive || spec.license_terms.exclusive) {
      throw MarketError(ErrorCode::ExclusivityConflict,
                        "listing " + id + " already offers " + category);
    }
  }
  if (spec.license_terms.exclusive) {
    for (const License& l : licenses_) {
      if (l.seller_id == spec.seller_id && l.category == category && is_active(l, tick)) {
        throw MarketError(ErrorCode::ExclusivityConflict,
                          "license " + l.license_id + " still grants access to " + category);
      }
    }
  }
}

const Listing& Marketplace::generate_product(const SellSpec& spec, Tick tick) {
  begin_tick(tick);
  require_active(spec.seller_id);
  if (!members_.at(spec.seller_id).roles.has(Role::Seller)) {
    throw MarketError(ErrorCode::AccessDenied, spec.seller_id + " is not a seller");
  }
  if (spec.dataset.empty()) throw MarketError(ErrorCode::EmptyDataset, "nothing to list");
  if (!is_listable(spec.dataset.provenance())) {
    throw MarketError(ErrorCode::UnlistableProvenance,
                      std::string(to_string(spec.dataset.provenance())) + " data is not listable");
  }
  check_exclusivity(spec, tick);

  License terms = spec.license_terms;
  terms.seller_id = spec.seller_id;
  terms.buyer_id.clear();
  terms.category = spec.dataset.category();
  terms.granted_at.reset();
  validate_license(terms);

  // Risk assessment, risk modification, licensing, pricing.
  const RiskAssessment risk = assess_risk(spec.impacts);
  DataSet noised = inject_noise(spec.dataset, {spec.noise_level, spec.noise_seed});
  PriceQuote q = quote(spec);
  const double total_ask = spec.ask_per_point * static_cast<double>(spec.dataset.size());
  const double price = enforced_listing_price(total_ask, spec.noise_level, config_.pricing);

  Listing l;
  l.listing_id = numbered('L', next_listing_++);
  l.seller_id = spec.seller_id;
  l.descriptor = describe_dataset(noised, spec.noise_level);
  l.risk = risk;
  l.noised_data = spec.substitute_payload ? *spec.substitute_payload : std::move(noised);
  l.license_template = terms;
  l.quote = q;
  l.seller_ask = total_ask;
  l.listing_price = price;
  l.noise_level = spec.noise_level;
  l.listed_at = tick;

  Record p;
  p["listing"] = l.listing_id;
  p["seller"] = l.seller_id;
  p["category"] = l.descriptor.category;
  p["provenance"] = to_string(spec.dataset.provenance());
  p["noise_level"] = l.noise_level;
  p["seller_ask"] = l.seller_ask;
  p["listing_price"] = l.listing_price;
  p["descriptor"] = descriptor_record(l.descriptor);
  p["risk"] = risk_record(risk);
  p["quote"] = to_record(q);
  p["license"] = to_record(terms);
  ledger_.append(EventKind::Listed, std::move(p), tick);

  const ListingId id = l.listing_id;
  return listings_.emplace(id, std::move(l)).first->second;
}

std::vector<ListingId> Marketplace::market_search(const BuySpec& spec, Tick tick) {
  begin_tick(tick);
  require_active(spec.buyer_id);
  const double buyer_rep = reputation_.reputation_of(spec.buyer_id);

  auto in_flight = [&](const ListingId& id) {
    return std::any_of(txns_.begin(), txns_.end(), [&](const auto& kv) {
      return kv.second.listing_id == id && !is_terminal(kv.second.state);
    });
  };

  struct Candidate {
    double unit_price;
    Tick listed_at;
    ListingId id;
  };
  std::vector<Candidate> found;
  for (const auto& [id, l] : listings_) {
    if (l.status != ListingStatus::Active || l.descriptor.category != spec.category) continue;
    if (l.seller_id == spec.buyer_id || reputation_.is_expelled(l.seller_id)) continue;
    const double unit =
        buyer_effective_price(l.listing_price, buyer_rep, config_.pricing) /
        static_cast<double>(l.descriptor.count);
    if (unit > spec.max_price_per_point) continue;
    if (l.noise_level > spec.max_noise_tolerance) continue;
    if (reputation_.reputation_of(l.seller_id) < spec.min_seller_reputation) continue;
    if (!satisfies(l.license_template, spec.required_terms)) continue;
    if (l.license_template.exclusive && in_flight(id)) continue;
    found.push_back({unit, l.listed_at, id});
  }
  std::sort(found.begin(), found.end(), [](const Candidate& a, const Candidate& b) {
    return std::tie(a.unit_price, a.listed_at, a.id) < std::tie(b.unit_price, b.listed_at, b.id);
  });

  open_specs_[spec.buyer_id] = spec.category;

  Record p;
  p["buyer"] = spec.buyer_id;
  p["category"] = spec.category;
  p["max_price_per_point"] = spec.max_price_per_point;
  p["max_noise_tolerance"] = spec.max_noise_tolerance;
  p["min_seller_reputation"] = spec.min_seller_reputation;
  p["results"] = found.size();
  ledger_.append(EventKind::SearchIssued, std::move(p), tick);

  std::vector<ListingId> out;
  out.reserve(found.size());
  for (auto& c : found) out.push_back(std::move(c.id));
  return out;
}

const Transaction& Marketplace::match(const MemberId& buyer, const ListingId& listing_id,
                                      Tick tick) {
  require_active(buyer);
  if (!members_.at(buyer).roles.has(Role::Buyer)) {
    throw MarketError(ErrorCode::AccessDenied, buyer + " is not a buyer");
  }
  const Listing& l = listing(listing_id);
  if (l.status != ListingStatus::Active) {
    throw MarketError(ErrorCode::UnknownListing, listing_id + " is not active");
  }
  require_active(l.seller_id);
  if (l.seller_id == buyer) throw MarketError(ErrorCode::SelfTransaction, buyer);
  if (l.license_template.exclusive) {
    for (const auto& [id, t] : txns_) {
      if (t.listing_id == listing_id && !is_terminal(t.state)) {
        throw MarketError(ErrorCode::ExclusivityConflict,
                          "exclusive listing " + listing_id + " is reserved by " + id);
      }
    }
  }

  Transaction t;
  t.txn_id = numbered('T', next_txn_++);
  t.buyer_id = buyer;
  t.seller_id = l.seller_id;
  t.listing_id = listing_id;
  t.price = Money::from_units(
      buyer_effective_price(l.listing_price, reputation_.reputation_of(buyer), config_.pricing));

  Record p;
  p["txn"] = t.txn_id;
  p["buyer"] = t.buyer_id;
  p["seller"] = t.seller_id;
  p["listing"] = listing_id;
  p["listing_price"] = l.listing_price;
  p["price_micros"] = t.price.micros();
  ledger_.append(EventKind::Matched, std::move(p), tick);

  const TxnId id = t.txn_id;
  extras_[id];
  return txns_.emplace(id, std::move(t)).first->second;
}

void Marketplace::apply(Transaction& txn, TxnEventKind event, Tick tick, Record extra) {
  const Transaction before = txn;
  txn = dmkt::advance(txn, event);
  if (event == TxnEventKind::FundEscrow) flows_.buyer_spend += txn.escrow_balance;
  flows_.seller_receipts += txn.released - before.released;
  flows_.refunds += txn.refunded - before.refunded;

  auto base = [&] {
    Record p;
    p["txn"] = txn.txn_id;
    p["buyer"] = txn.buyer_id;
    p["seller"] = txn.seller_id;
    return p;
  };
  auto emit = [&](EventKind kind, Record p) {
    if (extra.is_object()) {
      for (auto it = extra.begin(); it != extra.end(); ++it) p[it.key()] = it.value();
    }
    ledger_.append(kind, std::move(p), tick);
  };

  switch (event) {
    case TxnEventKind::BuyerAcceptsPrice: {
      Record p = base();
      p["consent_count"] = txn.consent_count;
      emit(EventKind::PriceAccepted, std::move(p));
      break;
    }
    case TxnEventKind::BuyerRejectsPrice:
      emit(EventKind::PriceRejected, base());
      break;
    case TxnEventKind::RequestSubsample:
      emit(EventKind::SubsampleRequested, base());
      break;
    case TxnEventKind::WaiveSubsample: {
      Record p = base();
      p["consent_count"] = txn.consent_count;
      emit(EventKind::SubsampleWaived, std::move(p));
      break;
    }
    case TxnEventKind::AcceptSubsample: {
      Record p = base();
      p["consent_count"] = txn.consent_count;
      emit(EventKind::SubsampleAccepted, std::move(p));
      break;
    }
    case TxnEventKind::RejectSubsample:
      emit(EventKind::SubsampleRejected, base());
      break;
    case TxnEventKind::FundEscrow: {
      Record p = base();
      p["amount_micros"] = txn.escrow_balance.micros();
      emit(EventKind::EscrowFunded, std::move(p));
      break;
    }
    case TxnEventKind::DeliverData:
      emit(EventKind::DataDelivered, base());
      break;
    case TxnEventKind::ReleaseEscrow:
      emit(EventKind::Settled, base());
      break;
    case TxnEventKind::SellerRefusesDelivery:
    case TxnEventKind::BuyerRefusesFunding:
    case TxnEventKind::CounterpartyExpelled:
      break;
  }

  if (txn.state == TxnState::Aborted) {
    Record p = base();
    p["listing"] = txn.listing_id;
    p["reason"] = to_string(txn.abort_reason);
    p["refund_micros"] = txn.refunded.micros();
    ledger_.append(EventKind::Aborted, std::move(p), tick);
  }

  // Refusals must show up in the transgressor's reputation.
  if (event == TxnEventKind::SellerRefusesDelivery) {
    reputation_.record_violation(ledger_, txn.seller_id, txn.buyer_id, tick);
  } else if (event == TxnEventKind::BuyerRefusesFunding) {
    reputation_.record_violation(ledger_, txn.buyer_id, txn.seller_id, tick);
  }
}

void Marketplace::enforce_expulsions(Tick tick) {
  for (const auto& [id, rec] : members_) {
    if (!reputation_.is_expelled(id) || expulsions_enforced_.count(id)) continue;
    expulsions_enforced_.insert(id);
    open_specs_.erase(id);
    for (auto& [lid, l] : listings_) {
      if (l.seller_id == id && l.status == ListingStatus::Active) l.status = ListingStatus::Withdrawn;
    }
    for (auto& [tid, t] : txns_) {
      if ((t.buyer_id == id || t.seller_id == id) &&
          find_transition(t.state, TxnEventKind::CounterpartyExpelled)) {
        apply(t, TxnEventKind::CounterpartyExpelled, tick);
      }
    }
  }
}

const Transaction& Marketplace::advance(const TxnId& id, TxnEventKind event, Tick tick) {
  switch (event) {
    case TxnEventKind::RequestSubsample:
      issue_subsample(id, tick);
      return transaction(id);
    case TxnEventKind::RejectSubsample:
      return reject_subsample(id, tick);
    case TxnEventKind::DeliverData:
      deliver(id, tick);
      return transaction(id);
    case TxnEventKind::ReleaseEscrow:
      settle_exchange(id, tick);
      return transaction(id);
    default:
      break;
  }
  Transaction& t = txn_mut(id);
  apply(t, event, tick);
  enforce_expulsions(tick);
  return t;
}

const Subsample& Marketplace::issue_subsample(const TxnId& id, Tick tick) {
  Transaction& t = txn_mut(id);
  if (!find_transition(t.state, TxnEventKind::RequestSubsample)) {
    throw MarketError(ErrorCode::IllegalTransition,
                      "RequestSubsample in state " + std::string(to_string(t.state)));
  }
  if (reputation_.privilege(t.buyer_id) == SubsamplePrivilege::Suspended) {
    throw MarketError(ErrorCode::SubsamplingSuspendedError, t.buyer_id);
  }
  const Listing& l = listing(t.listing_id);
  const std::string key = quota_key(t.buyer_id, l.descriptor.category, tick);
  int& used = subsample_requests_[key];
  if (used >= config_.subsample.cap_per_window) {
    throw MarketError(ErrorCode::SubsampleQuotaExceeded, key);
  }
  ++used;

  Subsample s = draw_subsample(l.noised_data, config_.subsample,
                               derive_seed(config_.seed, label_salt("subsample:" + id)));
  Record extra;
  extra["listing"] = t.listing_id;
  extra["points"] = s.points.size();
  Record stats = Record::array();
  for (const auto& f : s.stats) {
    Record fr;
    fr["name"] = f.name;
    fr["min"] = f.min;
    fr["max"] = f.max;
    fr["mean"] = f.mean;
    fr["std"] = f.std;
    stats.push_back(std::move(fr));
  }
  extra["stats"] = std::move(stats);
  apply(t, TxnEventKind::RequestSubsample, tick, std::move(extra));
  auto& slot = extras_[id].subsample;
  slot = std::move(s);
  return *slot;
}

const Transaction& Marketplace::reject_subsample(const TxnId& id, Tick tick) {
  Transaction& t = txn_mut(id);
  if (!find_transition(t.state, TxnEventKind::RejectSubsample)) {
    throw MarketError(ErrorCode::IllegalTransition,
                      "RejectSubsample in state " + std::string(to_string(t.state)));
  }
  const Listing& l = listing(t.listing_id);
  const auto& sample = extras_.at(id).subsample;
  const SubsampleVerdict verdict = validate_subsample(*sample, l.descriptor, l.noise_level);
  const bool justified = !verdict.pass;

  Record extra;
  extra["justified"] = justified;
  extra["reason"] = verdict.reason;
  apply(t, TxnEventKind::RejectSubsample, tick, std::move(extra));
  reputation_.note_subsample_reject(ledger_, t.buyer_id, justified, tick);
  // Data not as described.
  if (justified) reputation_.record_violation(ledger_, t.seller_id, t.buyer_id, tick);
  enforce_expulsions(tick);
  return t;
}

DataSet Marketplace::deliver(const TxnId& id, Tick tick) {
  Transaction& t = txn_mut(id);
  const Listing& l = listing(t.listing_id);
  Record extra;
  extra["points"] = l.noised_data.size();
  apply(t, TxnEventKind::DeliverData, tick, std::move(extra));
  return l.noised_data;
}

const License& Marketplace::settle_exchange(const TxnId& id, Tick tick) {
  Transaction& t = txn_mut(id);
  if (t.state != TxnState::DataDelivered) {
    throw MarketError(ErrorCode::IllegalTransition,
                      "settlement in state " + std::string(to_string(t.state)));
  }
  Listing& l = listing_mut(t.listing_id);

  License granted = l.license_template;
  granted.license_id = "lic-" + t.txn_id;
  granted.buyer_id = t.buyer_id;
  granted.seller_id = t.seller_id;
  granted.granted_at = tick;

  const auto points = l.descriptor.count;
  Record extra;
  extra["listing"] = l.listing_id;
  extra["category"] = l.descriptor.category;
  extra["points"] = points;
  extra["noise_level"] = l.noise_level;
  extra["listing_price"] = l.listing_price;
  extra["price_micros"] = t.escrow_balance.micros();
  extra["unit_price"] = t.escrow_balance.units() / static_cast<double>(points);
  extra["license"] = to_record(granted);
  apply(t, TxnEventKind::ReleaseEscrow, tick, std::move(extra));

  if (granted.exclusive) l.status = ListingStatus::Sold;
  open_specs_.erase(t.buyer_id);
  licenses_.push_back(std::move(granted));
  reputation_.record_outcome(ledger_, t.buyer_id, t.seller_id, OutcomeSign::Success, tick);
  enforce_expulsions(tick);
  return licenses_.back();
}

ComplianceVerdict Marketplace::report_use(const MemberId& actor, const LicenseId& license_id,
                                          Purpose purpose, Tick tick) {
  const License& lic = license(license_id);
  const ComplianceVerdict v = check_action(lic, actor, purpose, tick);
  if (!v.is_compliant()) {
    const MemberId counterparty = actor == lic.buyer_id ? lic.seller_id : lic.buyer_id;
    Record p;
    p["license"] = license_id;
    p["actor"] = actor;
    p["purpose"] = to_string(purpose);
    p["violation"] = to_string(*v.violation);
    ledger_.append(EventKind::LicenseViolationReported, std::move(p), tick);
    reputation_.record_violation(ledger_, actor, counterparty, tick);
    enforce_expulsions(tick);
  }
  return v;
}

const Listing& Marketplace::listing(const ListingId& id) const {
  auto it = listings_.find(id);
  if (it == listings_.end()) throw MarketError(ErrorCode::UnknownListing, id);
  return it->second;
}

Listing& Marketplace::listing_mut(const ListingId& id) {
  auto it = listings_.find(id);
  if (it == listings_.end()) throw MarketError(ErrorCode::UnknownListing, id);
  return it->second;
}

const Transaction& Marketplace::transaction(const TxnId& id) const {
  auto it = txns_.find(id);
  if (it == txns_.end()) throw MarketError(ErrorCode::UnknownTransaction, id);
  return it->second;
}

Transaction& Marketplace::txn_mut(const TxnId& id) {
  auto it = txns_.find(id);
  if (it == txns_.end()) throw MarketError(ErrorCode::UnknownTransaction, id);
  return it->second;
}

const std::optional<Subsample>& Marketplace::issued_subsample(const TxnId& id) const {
  auto it = extras_.find(id);
  if (it == extras_.end()) throw MarketError(ErrorCode::UnknownTransaction, id);
  return it->second.subsample;
}

const License& Marketplace::license(const LicenseId& id) const {
  for (const auto& l : licenses_) {
    if (l.license_id == id) return l;
  }
  throw MarketError(ErrorCode::InvalidLicense, "no license " + id);
}

EscrowTotals Marketplace::escrow_totals() const {
  EscrowTotals t = flows_;
  for (const auto& [id, txn] : txns_) t.held += txn.escrow_balance;
  return t;
}

}  // namespace dmkt
