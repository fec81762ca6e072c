#pragma once

#include <map>
#include <string>
#include <vector>

#include "dmkt/core/event_ledger.hpp"
#include "dmkt/license.hpp"
#include "dmkt/marketplace.hpp"
#include "dmkt/reputation.hpp"
#include "dmkt/transaction.hpp"

namespace dmkt {

struct MemberSnapshot {
  RoleSet roles;
  std::string archetype;
  bool expelled = false;
  SubsamplePrivilege privilege = SubsamplePrivilege::Active;
  int unjustified_rejects = 0;
  double reputation = 0.0;

  friend bool operator==(const MemberSnapshot&, const MemberSnapshot&) = default;
};

struct ListingSnapshot {
  MemberId seller;
  std::string category;
  ListingStatus status = ListingStatus::Active;
  double listing_price = 0.0;
  double noise_level = 0.0;
  bool exclusive = false;

  friend bool operator==(const ListingSnapshot&, const ListingSnapshot&) = default;
};

// Observable marketplace state; everything here must be recoverable from
// the event ledger alone.
struct MarketSnapshot {
  std::map<MemberId, MemberSnapshot> members;
  std::map<ListingId, ListingSnapshot> listings;
  std::map<TxnId, Transaction> transactions;
  std::vector<License> licenses;
  EscrowTotals escrow;

  friend bool operator==(const MarketSnapshot&, const MarketSnapshot&) = default;
};

MarketSnapshot snapshot(const Marketplace& market);

// Rebuilds state by folding the ledger from seq 1. Transaction states are
// re-derived through `advance`; reputations are recomputed from the edge
// list. Throws MalformedLedger when an event does not fit.
MarketSnapshot replay(const EventLedger& ledger, const ReputationParams& params);

}  // namespace dmkt
