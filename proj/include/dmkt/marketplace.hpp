#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dmkt/core/dataset.hpp"
#include "dmkt/core/event_ledger.hpp"
#include "dmkt/license.hpp"
#include "dmkt/pricing.hpp"
#include "dmkt/reputation.hpp"
#include "dmkt/risk.hpp"
#include "dmkt/subsample.hpp"
#include "dmkt/transaction.hpp"

namespace dmkt {

struct LicenseRequirements {
  Tick min_lifespan_ticks = 0;  // perpetual satisfies any minimum
  bool exclusivity_required = false;
  std::vector<Purpose> purposes;
};

enum class SubsampleChoice { Require, Waive };

struct BuySpec {
  MemberId buyer_id;
  std::string category;
  double max_price_per_point = 0.0;
  double max_noise_tolerance = 1.0;
  double min_seller_reputation = 0.0;
  LicenseRequirements required_terms;
  SubsampleChoice subsample_policy = SubsampleChoice::Require;
};

struct SellSpec {
  MemberId seller_id;
  DataSet dataset;  // raw; never leaves the seller boundary
  HarmImpactVector impacts;
  double noise_level = 0.0;
  std::uint64_t noise_seed = 0;
  double base_unit_value = 1.0;  // input to the recommendation
  double ask_per_point = 0.0;
  License license_terms;  // template: buyer and grant time unset
  // What the seller actually hands over, when it differs from the noised
  // dataset the descriptor was computed from (fraudulent sellers).
  std::optional<DataSet> substitute_payload;
};

enum class ListingStatus { Active, Withdrawn, Sold };
std::string_view to_string(ListingStatus s) noexcept;

struct Listing {
  ListingId listing_id;
  MemberId seller_id;
  DataDescriptor descriptor;
  RiskAssessment risk;
  DataSet noised_data;  // private to the seller side; subsamples and delivery draw from it
  License license_template;
  PriceQuote quote;
  double seller_ask = 0.0;
  double listing_price = 0.0;
  double noise_level = 0.0;
  Tick listed_at = 0;
  ListingStatus status = ListingStatus::Active;

  double price_per_point() const { return listing_price / static_cast<double>(descriptor.count); }
};

// What identification hands back to a member.
struct Session {
  MemberId member_id;
  double reputation = 0.0;
  SubsamplePrivilege privilege = SubsamplePrivilege::Active;
  bool waiver_only = false;  // subsample privilege suspended
  std::optional<double> counterparty_reputation;
};

struct MarketConfig {
  PricingParams pricing;
  ReputationParams reputation;
  SubsamplePolicy subsample;
  std::uint64_t seed = 0;
};

// Money that has moved through escrow. Conservation:
// buyer_spend == seller_receipts + refunds + held.
struct EscrowTotals {
  Money buyer_spend;
  Money seller_receipts;
  Money refunds;
  Money held;

  friend bool operator==(const EscrowTotals&, const EscrowTotals&) = default;
};

// One marketplace instance: the seven transaction functions plus the
// orchestrator monitors (reputation checks, noise discount, subsample
// policing, escrow). Single writer; every state change lands in `ledger()`.
class Marketplace {
 public:
  explicit Marketplace(MarketConfig config);

  const MarketConfig& config() const noexcept { return config_; }
  const EventLedger& ledger() const noexcept { return ledger_; }
  const ReputationLedger& reputation() const noexcept { return reputation_; }

  // Emits an Identified record carrying roles and the archetype label.
  // Throws ConfigError when the id is taken or roles are empty.
  void register_member(const MemberId& id, RoleSet roles, Tick tick,
                       const std::string& archetype = {});

  Member member(const MemberId& id) const;
  bool has_member(const MemberId& id) const { return members_.count(id) > 0; }

  // Function 1. Throws UnknownMember, AccessDenied.
  Session identify(const MemberId& id, Tick tick,
                   const std::optional<MemberId>& counterparty = std::nullopt);

  // Freezes the open-spec and listing counts that pricing reads for the
  // rest of this tick. generate_product and market_search call it on the
  // first action of a newer tick.
  void begin_tick(Tick tick);

  // Demand index from the counts frozen at the start of the tick.
  double demand(const std::string& category) const;

  // Recommendation the seller sees before choosing an ask.
  PriceQuote quote(const SellSpec& spec) const;

  // Function 4: risk assessment, noise, licensing, pricing, listing.
  // Throws UnlistableProvenance, ExclusivityConflict, AccessDenied,
  // InvalidLicense, InvalidAsk, InvalidNoiseLevel.
  const Listing& generate_product(const SellSpec& spec, Tick tick);

  // Functions 2 and 3: records the spec as open demand and returns matching
  // listings by ascending effective price per point, then age, then id.
  std::vector<ListingId> market_search(const BuySpec& spec, Tick tick);

  // Function 5. Price is fixed here at the buyer-effective level.
  const Transaction& match(const MemberId& buyer, const ListingId& listing, Tick tick);

  // Applies a transaction event with its monitor side effects. Use
  // issue_subsample / reject_subsample / deliver for those steps.
  const Transaction& advance(const TxnId& txn, TxnEventKind event, Tick tick);

  // Function 6. Throws SubsamplingSuspendedError, SubsampleQuotaExceeded.
  const Subsample& issue_subsample(const TxnId& txn, Tick tick);

  // The orchestrator classifies the reject as justified iff the issued
  // subsample fails validation; justified rejects count against the seller.
  const Transaction& reject_subsample(const TxnId& txn, Tick tick);

  // Seller delivers; the buyer receives the payload.
  DataSet deliver(const TxnId& txn, Tick tick);

  // Function 7: releases escrow and grants the license. Throws
  // IllegalTransition unless the data has been delivered.
  const License& settle_exchange(const TxnId& txn, Tick tick);

  // Monitored use of licensed data; violations are reported and cost the
  // user a violation edge.
  ComplianceVerdict report_use(const MemberId& actor, const LicenseId& license, Purpose purpose,
                               Tick tick);

  const Listing& listing(const ListingId& id) const;
  const Transaction& transaction(const TxnId& id) const;
  const std::optional<Subsample>& issued_subsample(const TxnId& id) const;
  const std::map<ListingId, Listing>& listings() const noexcept { return listings_; }
  const std::map<TxnId, Transaction>& transactions() const noexcept { return txns_; }
  const std::vector<License>& licenses() const noexcept { return licenses_; }
  const License& license(const LicenseId& id) const;
  const std::map<MemberId, std::string>& archetypes() const noexcept { return archetypes_; }

  // Subsample requests the buyer may still make in the current window.
  int subsample_quota_left(const MemberId& buyer, const std::string& category, Tick tick) const;

  int open_buy_specs(const std::string& category) const;
  int active_listings(const std::string& category) const;

  EscrowTotals escrow_totals() const;

 private:
  struct MemberRecord {
    RoleSet roles;
    Tick joined_at = 0;
  };
  struct TxnExtras {
    std::optional<Subsample> subsample;
  };

  Transaction& txn_mut(const TxnId& id);
  Listing& listing_mut(const ListingId& id);
  void require_active(const MemberId& id) const;
  void check_exclusivity(const SellSpec& spec, Tick tick) const;
  void apply(Transaction& txn, TxnEventKind event, Tick tick, Record extra = {});
  void enforce_expulsions(Tick tick);
  std::string quota_key(const MemberId& buyer, const std::string& category, Tick tick) const;

  MarketConfig config_;
  EventLedger ledger_;
  ReputationLedger reputation_;
  std::map<MemberId, MemberRecord> members_;
  std::map<MemberId, std::string> archetypes_;
  std::map<ListingId, Listing> listings_;
  std::map<TxnId, Transaction> txns_;
  std::map<TxnId, TxnExtras> extras_;
  std::vector<License> licenses_;
  std::map<MemberId, std::string> open_specs_;  // buyer -> category
  std::map<std::string, int> subsample_requests_;  // "buyer|category|window" -> count
  std::set<MemberId> expulsions_enforced_;
  std::optional<Tick> demand_tick_;
  std::map<std::string, std::pair<int, int>> demand_counts_;  // category -> (specs, listings)
  EscrowTotals flows_;  // held is filled in on read
  std::uint64_t next_listing_ = 1;
  std::uint64_t next_txn_ = 1;
};

}  // namespace dmkt
