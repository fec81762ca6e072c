#include <gtest/gtest.h>

#include <functional>
#include <set>

#include "dmkt/core/random.hpp"
#include "dmkt/errors.hpp"
#include "dmkt/marketplace.hpp"
#include "dmkt/replay.hpp"

using namespace dmkt;
using E = TxnEventKind;

namespace {

DataSet walking(Eigen::Index n, std::uint64_t seed,
                Provenance prov = Provenance::ByproductOfActivity) {
  Rng r(seed);
  Eigen::MatrixXd v(n, 2);
  std::vector<Tick> ts(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    v(i, 0) = r.normal(5000, 1500);
    v(i, 1) = r.normal(3.5, 1.0);
    ts[static_cast<std::size_t>(i)] = i;
  }
  return DataSet("activity/walking", prov, {"steps", "distance_km"}, ts, v);
}

License terms(bool exclusive, std::optional<Tick> life) {
  License l;
  l.exclusive = exclusive;
  l.lifespan.ticks = life;
  l.permitted_uses = {Purpose::ProductOptimization, Purpose::ResearchAggregate};
  return l;
}

SellSpec spec_for(const MemberId& seller, double noise, bool exclusive, std::optional<Tick> life,
                  std::uint64_t seed = 1, Eigen::Index n = 1000) {
  SellSpec s;
  s.seller_id = seller;
  s.dataset = walking(n, seed);
  s.impacts = {4, 5, 2};
  s.noise_level = noise;
  s.noise_seed = seed + 100;
  s.license_terms = terms(exclusive, life);
  s.ask_per_point = 1.0;
  return s;
}

BuySpec buy(const MemberId& buyer, double max_unit = 100.0, double tolerance = 1.0) {
  BuySpec b;
  b.buyer_id = buyer;
  b.category = "activity/walking";
  b.max_price_per_point = max_unit;
  b.max_noise_tolerance = tolerance;
  return b;
}

Marketplace market_with(std::initializer_list<const char*> sellers,
                        std::initializer_list<const char*> buyers, double expel_below = 0.2) {
  MarketConfig cfg;
  cfg.reputation.expulsion_threshold = expel_below;
  cfg.seed = 5;
  Marketplace m(cfg);
  for (const char* s : sellers) m.register_member(s, {Role::Seller}, 0, "HonestSeller");
  for (const char* b : buyers) m.register_member(b, {Role::Buyer}, 0, "HonestBuyer");
  return m;
}

// Drives a transaction from Matched to DataDelivered with a waived subsample.
TxnId buy_and_deliver(Marketplace& m, const MemberId& buyer, const ListingId& l, Tick t) {
  const TxnId id = m.match(buyer, l, t).txn_id;
  m.advance(id, E::BuyerAcceptsPrice, t);
  m.advance(id, E::WaiveSubsample, t);
  m.advance(id, E::FundEscrow, t);
  m.deliver(id, t);
  return id;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const MarketError& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected a MarketError";
  return ErrorCode::MalformedLedger;
}

void collect_numbers(const Record& r, std::vector<double>& out) {
  if (r.is_number()) {
    out.push_back(r.get<double>());
  } else if (r.is_structured()) {
    for (const auto& child : r) collect_numbers(child, out);
  }
}

}  // namespace

TEST(Identify, FreshMember) {
  Marketplace m = market_with({"s"}, {"b"});
  const Session s = m.identify("b", 1, std::string("s"));
  EXPECT_EQ(s.reputation, 0.5);
  EXPECT_EQ(s.privilege, SubsamplePrivilege::Active);
  EXPECT_FALSE(s.waiver_only);
  EXPECT_EQ(s.counterparty_reputation, 0.5);
  EXPECT_EQ(m.ledger().events().back().kind, EventKind::Identified);
  EXPECT_EQ(code_of([&] { m.identify("ghost", 1); }), ErrorCode::UnknownMember);
}

TEST(Identify, RegistrationRules) {
  Marketplace m = market_with({"s"}, {});
  EXPECT_THROW(m.register_member("s", {Role::Buyer}, 0), ConfigError);
  EXPECT_THROW(m.register_member("x", {}, 0), ConfigError);
  EXPECT_THROW(m.register_member(ReputationLedger::kOrchestrator, {Role::Buyer}, 0), ConfigError);
}

TEST(Monitor, RefusalsCostReputationUntilExpulsion) {
  Marketplace m = market_with({"s"}, {"b"});
  const ListingId l = m.generate_product(spec_for("s", 0.0, false, 30), 0).listing_id;
  int refusals = 0;
  while (!m.member("s").expelled) {
    const TxnId id = m.match("b", l, refusals).txn_id;
    m.advance(id, E::BuyerAcceptsPrice, refusals);
    m.advance(id, E::WaiveSubsample, refusals);
    m.advance(id, E::FundEscrow, refusals);
    m.advance(id, E::SellerRefusesDelivery, refusals);
    EXPECT_EQ(m.transaction(id).refunded, m.transaction(id).price);
    ++refusals;
    ASSERT_LT(refusals, 50);
  }
  EXPECT_EQ(refusals, 5);
  EXPECT_EQ(code_of([&] { m.identify("s", 9); }), ErrorCode::AccessDenied);
  EXPECT_EQ(m.listing(l).status, ListingStatus::Withdrawn);
  EXPECT_TRUE(m.market_search(buy("b"), 9).empty());

  // Each refusal abort is followed by exactly one violation edge against the seller.
  const auto& ev = m.ledger().events();
  for (std::size_t i = 0; i < ev.size(); ++i) {
    if (ev[i].kind != EventKind::Aborted) continue;
    ASSERT_EQ(ev[i].payload.at("reason"), "DeliveryRefused");
    int edges = 0;
    for (std::size_t j = i + 1; j < ev.size() && ev[j].kind != EventKind::Matched; ++j) {
      if (ev[j].kind == EventKind::ReputationUpdated) {
        ++edges;
        EXPECT_EQ(ev[j].payload.at("member"), "s");
        EXPECT_EQ(ev[j].payload.at("sign"), -1);
      }
    }
    EXPECT_EQ(edges, 1);
  }
  const EscrowTotals totals = m.escrow_totals();
  EXPECT_EQ(totals.buyer_spend, totals.refunds);
  EXPECT_EQ(totals.seller_receipts.micros(), 0);
}

TEST(Monitor, FundingRefusalHitsBuyer) {
  Marketplace m = market_with({"s"}, {"b"});
  const ListingId l = m.generate_product(spec_for("s", 0.0, false, 30), 0).listing_id;
  const TxnId id = m.match("b", l, 1).txn_id;
  m.advance(id, E::BuyerAcceptsPrice, 1);
  m.advance(id, E::WaiveSubsample, 1);
  m.advance(id, E::BuyerRefusesFunding, 1);
  EXPECT_LT(m.reputation().reputation_of("b"), 0.5);
  EXPECT_EQ(m.reputation().reputation_of("s"), 0.5);
}

TEST(Product, WalkingListing) {
  Marketplace m = market_with({"s"}, {});
  SellSpec spec = spec_for("s", 0.25, true, 90);
  const PriceQuote q = m.quote(spec);
  spec.ask_per_point = q.factors.pre_discount() / 1000.0;
  const Listing& l = m.generate_product(spec, 0);
  EXPECT_NEAR(l.listing_price, 2246.575, 1e-3);
  EXPECT_NEAR(l.listing_price, q.recommended, 1e-9);
  EXPECT_EQ(l.risk.raw_score, 20);
  EXPECT_EQ(l.descriptor.count, 1000);
  EXPECT_EQ(l.license_template.category, "activity/walking");
  EXPECT_FALSE(l.license_template.granted_at.has_value());
  const auto& listed = m.ledger().events().back();
  EXPECT_EQ(listed.kind, EventKind::Listed);
  EXPECT_NEAR(listed.payload.at("quote").at("recommended").get<double>(), q.recommended, 1e-9);
}

TEST(Product, OverpricedAskStands) {
  Marketplace m = market_with({"s"}, {});
  SellSpec spec = spec_for("s", 0.25, false, 90);
  const PriceQuote q = m.quote(spec);
  spec.ask_per_point = 10.0 * q.factors.pre_discount() / 1000.0;
  EXPECT_NEAR(m.generate_product(spec, 0).listing_price, 10.0 * q.recommended, 1e-6);
}

TEST(Product, ProvenanceRule) {
  Marketplace m = market_with({"s"}, {});
  SellSpec spec = spec_for("s", 0.0, false, 30);
  spec.dataset = walking(20, 1, Provenance::DerivedMetadata);
  EXPECT_EQ(code_of([&] { m.generate_product(spec, 0); }), ErrorCode::UnlistableProvenance);
  spec.dataset = walking(20, 1, Provenance::DirectlyProvided);
  EXPECT_NO_THROW(m.generate_product(spec, 0));
}

TEST(Product, ExclusiveLicenseBlocksFurtherSales) {
  Marketplace m = market_with({"s"}, {"b"});
  const ListingId l = m.generate_product(spec_for("s", 0.0, true, 30), 0).listing_id;
  EXPECT_EQ(code_of([&] { m.generate_product(spec_for("s", 0.0, true, 30, 2), 0); }),
            ErrorCode::ExclusivityConflict);
  EXPECT_EQ(code_of([&] { m.generate_product(spec_for("s", 0.0, false, 30, 2), 0); }),
            ErrorCode::ExclusivityConflict);

  const TxnId id = buy_and_deliver(m, "b", l, 1);
  m.settle_exchange(id, 2);
  EXPECT_EQ(m.listing(l).status, ListingStatus::Sold);
  EXPECT_TRUE(m.market_search(buy("b"), 3).empty());
  EXPECT_EQ(code_of([&] { m.match("b", l, 3); }), ErrorCode::UnknownListing);
  // The exclusive license runs 2..32.
  EXPECT_EQ(code_of([&] { m.generate_product(spec_for("s", 0.0, true, 30, 3), 31); }),
            ErrorCode::ExclusivityConflict);
  EXPECT_EQ(code_of([&] { m.generate_product(spec_for("s", 0.0, false, 30, 3), 31); }),
            ErrorCode::ExclusivityConflict);
  EXPECT_NO_THROW(m.generate_product(spec_for("s", 0.0, true, 30, 3), 32));
}

TEST(Product, ExclusiveListingReservedWhileInFlight) {
  Marketplace m = market_with({"s"}, {"b1", "b2"});
  const ListingId l = m.generate_product(spec_for("s", 0.0, true, 30), 0).listing_id;
  m.match("b1", l, 1);
  EXPECT_TRUE(m.market_search(buy("b2"), 1).empty());
  EXPECT_EQ(code_of([&] { m.match("b2", l, 1); }), ErrorCode::ExclusivityConflict);
}

TEST(Settlement, NonExclusiveStaysActive) {
  Marketplace m = market_with({"s"}, {"b1", "b2"});
  const ListingId l = m.generate_product(spec_for("s", 0.0, false, 30), 0).listing_id;
  const TxnId first = buy_and_deliver(m, "b1", l, 1);
  const License& lic = m.settle_exchange(first, 1);
  EXPECT_EQ(lic.granted_at, 1);
  EXPECT_EQ(lic.buyer_id, "b1");
  EXPECT_EQ(m.listing(l).status, ListingStatus::Active);
  const TxnId second = buy_and_deliver(m, "b2", l, 2);
  m.settle_exchange(second, 2);
  EXPECT_EQ(m.licenses().size(), 2u);
  EXPECT_GT(m.reputation().reputation_of("s"), m.reputation().reputation_of("b2"));
  const EscrowTotals t = m.escrow_totals();
  EXPECT_EQ(t.buyer_spend, t.seller_receipts);
  EXPECT_EQ(t.held.micros(), 0);
}

TEST(Settlement, RequiresDelivery) {
  Marketplace m = market_with({"s"}, {"b"});
  const ListingId l = m.generate_product(spec_for("s", 0.0, false, 30), 0).listing_id;
  const TxnId id = m.match("b", l, 1).txn_id;
  m.advance(id, E::BuyerAcceptsPrice, 1);
  m.advance(id, E::WaiveSubsample, 1);
  m.advance(id, E::FundEscrow, 1);
  EXPECT_EQ(code_of([&] { m.settle_exchange(id, 1); }), ErrorCode::IllegalTransition);
  EXPECT_EQ(m.escrow_totals().held, m.transaction(id).price);
}

TEST(Settlement, LowReputationBuyerPaysPremium) {
  Marketplace m = market_with({"s", "s2"}, {"b"});
  const ListingId l = m.generate_product(spec_for("s", 0.0, false, 30), 0).listing_id;
  const ListingId l2 = m.generate_product(spec_for("s2", 0.0, false, 30), 0).listing_id;
  // Two funding refusals push b under the premium threshold.
  for (int i = 0; i < 2; ++i) {
    const TxnId id = m.match("b", l2, 1).txn_id;
    m.advance(id, E::BuyerAcceptsPrice, 1);
    m.advance(id, E::WaiveSubsample, 1);
    m.advance(id, E::BuyerRefusesFunding, 1);
  }
  const double rep = m.reputation().reputation_of("b");
  ASSERT_LT(rep, 0.5);
  const Transaction& t = m.match("b", l, 2);
  const double want = m.listing(l).listing_price * (1.0 + 2.0 * (0.5 - rep));
  EXPECT_EQ(t.price, Money::from_units(want));
}

TEST(Search, FiltersAndOrder) {
  Marketplace m = market_with({"a", "b", "c", "d"}, {"x"});
  SellSpec cheap = spec_for("a", 0.0, false, 30);
  cheap.ask_per_point = 0.5;
  const ListingId la = m.generate_product(cheap, 0).listing_id;
  const ListingId lc = m.generate_product(spec_for("c", 0.0, false, 30), 0).listing_id;
  const ListingId ld = m.generate_product(spec_for("d", 0.5, false, 30), 0).listing_id;
  const ListingId lb = m.generate_product(spec_for("b", 0.0, false, 30), 1).listing_id;
  // d has the lowest price after its noise discount.
  EXPECT_EQ(m.market_search(buy("x"), 2), (std::vector<ListingId>{la, ld, lc, lb}));
  EXPECT_EQ(m.market_search(buy("x", 100.0, 0.25), 2), (std::vector<ListingId>{la, lc, lb}));
  EXPECT_EQ(m.market_search(buy("x", 0.75, 0.25), 2), (std::vector<ListingId>{la}));
  BuySpec other = buy("x");
  other.category = "health/heart_rate";
  EXPECT_TRUE(m.market_search(other, 2).empty());
  BuySpec strict = buy("x");
  strict.required_terms.exclusivity_required = true;
  EXPECT_TRUE(m.market_search(strict, 2).empty());
  strict = buy("x");
  strict.required_terms.min_lifespan_ticks = 31;
  EXPECT_TRUE(m.market_search(strict, 2).empty());
  strict = buy("x");
  strict.required_terms.purposes = {Purpose::MarketingAnalytics};
  EXPECT_TRUE(m.market_search(strict, 2).empty());
  strict = buy("x");
  strict.min_seller_reputation = 0.6;
  EXPECT_TRUE(m.market_search(strict, 2).empty());
  EXPECT_EQ(m.open_buy_specs("activity/walking"), 1);
}

TEST(Search, EqualPriceTieBreaks) {
  Marketplace m = market_with({"s1", "s2", "s3"}, {"x"});
  const ListingId older = m.generate_product(spec_for("s1", 0.0, false, 30), 4).listing_id;
  const ListingId newer = m.generate_product(spec_for("s2", 0.0, false, 30), 5).listing_id;
  const ListingId twin = m.generate_product(spec_for("s3", 0.0, false, 30), 5).listing_id;
  // Same price; age first, then lexicographic id.
  EXPECT_EQ(m.market_search(buy("x"), 5), (std::vector<ListingId>{older, newer, twin}));
}

TEST(Search, DemandSnapshotIsFrozenWithinTick) {
  Marketplace m = market_with({"s1", "s2"}, {"x"});
  const double first = m.generate_product(spec_for("s1", 0.0, false, 30), 0).quote.factors.demand;
  const double second = m.generate_product(spec_for("s2", 0.0, false, 30, 2), 0).quote.factors.demand;
  EXPECT_EQ(first, second);
  m.begin_tick(1);
  EXPECT_EQ(m.demand("activity/walking"), demand_index(0, 2, PricingParams{}));
}

TEST(Subsampling, QuotaAndSuspension) {
  // Low expulsion bar so the suspended farmer stays a member.
  Marketplace m = market_with({"s"}, {"farmer"}, 0.05);
  const ListingId l = m.generate_product(spec_for("s", 0.0, false, 30), 0).listing_id;
  auto request = [&](Tick t) {
    const TxnId id = m.match("farmer", l, t).txn_id;
    m.advance(id, E::BuyerAcceptsPrice, t);
    m.issue_subsample(id, t);
    return id;
  };
  for (int i = 0; i < 3; ++i) m.reject_subsample(request(10), 10);
  EXPECT_EQ(m.subsample_quota_left("farmer", "activity/walking", 10), 0);
  const TxnId blocked = m.match("farmer", l, 10).txn_id;
  m.advance(blocked, E::BuyerAcceptsPrice, 10);
  EXPECT_EQ(code_of([&] { m.issue_subsample(blocked, 10); }), ErrorCode::SubsampleQuotaExceeded);
  m.advance(blocked, E::WaiveSubsample, 10);
  m.advance(blocked, E::FundEscrow, 10);
  m.deliver(blocked, 10);
  m.settle_exchange(blocked, 10);

  // Next window.
  EXPECT_EQ(m.subsample_quota_left("farmer", "activity/walking", 100), 3);
  m.reject_subsample(request(100), 100);
  EXPECT_EQ(m.reputation().privilege("farmer"), SubsamplePrivilege::Active);
  m.reject_subsample(request(100), 100);
  EXPECT_EQ(m.reputation().privilege("farmer"), SubsamplePrivilege::Suspended);
  EXPECT_EQ(m.reputation().unjustified_rejects("farmer"), 5);
  EXPECT_TRUE(m.identify("farmer", 101).waiver_only);
  const TxnId after = m.match("farmer", l, 101).txn_id;
  m.advance(after, E::BuyerAcceptsPrice, 101);
  EXPECT_EQ(code_of([&] { m.issue_subsample(after, 101); }), ErrorCode::SubsamplingSuspendedError);
  EXPECT_NO_THROW(m.advance(after, E::WaiveSubsample, 101));
}

TEST(Subsampling, JunkPayloadRejectIsJustified) {
  Marketplace m = market_with({"junk"}, {"b"});
  SellSpec spec = spec_for("junk", 0.5, false, 30);
  Eigen::MatrixXd forged = spec.dataset.values().array() + 1e4;
  spec.substitute_payload = spec.dataset.with_values(forged);
  const ListingId l = m.generate_product(spec, 0).listing_id;
  const TxnId id = m.match("b", l, 1).txn_id;
  m.advance(id, E::BuyerAcceptsPrice, 1);
  m.issue_subsample(id, 1);
  m.reject_subsample(id, 1);
  EXPECT_EQ(m.reputation().unjustified_rejects("b"), 0);
  EXPECT_EQ(m.reputation().reputation_of("b"), 0.5);
  EXPECT_LT(m.reputation().reputation_of("junk"), 0.5);
  bool justified = false;
  for (const auto& e : m.ledger().events()) {
    if (e.kind == EventKind::SubsampleRejected) justified = e.payload.at("justified").get<bool>();
  }
  EXPECT_TRUE(justified);
}

TEST(Privacy, RawValuesNeverLeaveTheSeller) {
  Marketplace m = market_with({"s"}, {"b"});
  const SellSpec spec = spec_for("s", 0.3, false, 30, 4, 200);
  const ListingId l = m.generate_product(spec, 0).listing_id;
  const TxnId id = m.match("b", l, 1).txn_id;
  m.advance(id, E::BuyerAcceptsPrice, 1);
  const Subsample& sub = m.issue_subsample(id, 1);
  m.advance(id, E::AcceptSubsample, 1);
  m.advance(id, E::FundEscrow, 1);
  const DataSet delivered = m.deliver(id, 1);
  m.settle_exchange(id, 1);

  const Eigen::MatrixXd& raw = spec.dataset.values();
  std::set<double> raw_values(raw.data(), raw.data() + raw.size());
  for (Eigen::Index i = 0; i < delivered.values().size(); ++i) {
    EXPECT_FALSE(raw_values.count(delivered.values()(i)));
  }
  for (Eigen::Index i = 0; i < sub.points.values().size(); ++i) {
    EXPECT_FALSE(raw_values.count(sub.points.values()(i)));
  }
  std::vector<double> logged;
  for (const auto& e : m.ledger().events()) collect_numbers(e.payload, logged);
  for (double v : logged) EXPECT_FALSE(raw_values.count(v)) << v;
  const auto raw_desc = describe_dataset(spec.dataset, 0.3);
  for (const auto& f : raw_desc.fields) {
    for (double v : {f.mean, f.std, f.min, f.max}) EXPECT_FALSE(std::count(logged.begin(), logged.end(), v));
  }
}

TEST(Replay, SnapshotMatchesLedgerFold) {
  Marketplace m = market_with({"s1", "s2"}, {"b1", "b2", "b3"});
  const ListingId ex = m.generate_product(spec_for("s1", 0.0, true, 20), 0).listing_id;
  const ListingId open = m.generate_product(spec_for("s2", 0.5, false, 20), 0).listing_id;
  m.settle_exchange(buy_and_deliver(m, "b1", ex, 1), 1);
  m.settle_exchange(buy_and_deliver(m, "b2", open, 2), 2);
  const TxnId refused = m.match("b3", open, 3).txn_id;
  m.advance(refused, E::BuyerAcceptsPrice, 3);
  m.issue_subsample(refused, 3);
  m.reject_subsample(refused, 3);
  m.report_use("b1", "lic-T000001", Purpose::Resale, 4);
  const TxnId open_txn = m.match("b3", open, 5).txn_id;
  m.advance(open_txn, E::BuyerAcceptsPrice, 5);
  m.advance(open_txn, E::WaiveSubsample, 5);
  m.advance(open_txn, E::FundEscrow, 5);
  m.report_use("b1", "lic-T000001", Purpose::ProductOptimization, 30);

  const MarketSnapshot live = snapshot(m);
  const MarketSnapshot folded = replay(m.ledger(), m.config().reputation);
  EXPECT_EQ(live.members, folded.members);
  EXPECT_EQ(live.listings, folded.listings);
  EXPECT_EQ(live.transactions, folded.transactions);
  EXPECT_EQ(live.licenses, folded.licenses);
  EXPECT_EQ(live.escrow, folded.escrow);
  EXPECT_TRUE(live == folded);
  EXPECT_EQ(live.escrow.held, m.transaction(open_txn).price);
}

TEST(Replay, RejectsTamperedLedger) {
  Marketplace m = market_with({"s"}, {"b"});
  const ListingId l = m.generate_product(spec_for("s", 0.0, false, 20), 0).listing_id;
  buy_and_deliver(m, "b", l, 1);
  EventLedger bad;
  for (const auto& e : m.ledger().events()) {
    if (e.kind == EventKind::PriceAccepted) continue;
    bad.append(e.kind, e.payload, e.tick);
  }
  EXPECT_EQ(code_of([&] { replay(bad, ReputationParams{}); }), ErrorCode::MalformedLedger);
}

TEST(Usage, ViolationsAreReported) {
  Marketplace m = market_with({"s"}, {"b"});
  const ListingId l = m.generate_product(spec_for("s", 0.0, false, 10), 0).listing_id;
  m.settle_exchange(buy_and_deliver(m, "b", l, 1), 1);
  EXPECT_TRUE(m.report_use("b", "lic-T000001", Purpose::ResearchAggregate, 5).is_compliant());
  const double before = m.reputation().reputation_of("b");
  EXPECT_EQ(m.report_use("b", "lic-T000001", Purpose::ResearchAggregate, 11),
            ComplianceVerdict::violated(ViolationKind::Expired));
  EXPECT_LT(m.reputation().reputation_of("b"), before);
  EXPECT_EQ(m.ledger().events()[m.ledger().size() - 2].kind, EventKind::LicenseViolationReported);
}
