#include "dmkt/replay.hpp"

#include "dmkt/errors.hpp"

namespace dmkt {

MarketSnapshot snapshot(const Marketplace& market) {
  MarketSnapshot s;
  const auto& rep = market.reputation();
  for (const auto& id : rep.nodes()) {
    if (id == ReputationLedger::kOrchestrator) continue;
    const Member m = market.member(id);
    MemberSnapshot ms;
    ms.roles = m.roles;
    auto a = market.archetypes().find(id);
    if (a != market.archetypes().end()) ms.archetype = a->second;
    ms.expelled = m.expelled;
    ms.privilege = m.subsample_privilege;
    ms.unjustified_rejects = rep.unjustified_rejects(id);
    ms.reputation = rep.reputation_of(id);
    s.members.emplace(id, ms);
  }
  for (const auto& [id, l] : market.listings()) {
    s.listings.emplace(id, ListingSnapshot{l.seller_id, l.descriptor.category, l.status,
                                           l.listing_price, l.noise_level,
                                           l.license_template.exclusive});
  }
  s.transactions = market.transactions();
  s.licenses = market.licenses();
  s.escrow = market.escrow_totals();
  return s;
}

namespace {

[[noreturn]] void malformed(const MarketEvent& e, const std::string& what) {
  throw MarketError(ErrorCode::MalformedLedger,
                    "seq " + std::to_string(e.seq) + " (" + std::string(to_string(e.kind)) +
                        "): " + what);
}

std::optional<TxnEventKind> txn_event_for(const MarketEvent& e) {
  switch (e.kind) {
    case EventKind::PriceAccepted: return TxnEventKind::BuyerAcceptsPrice;
    case EventKind::PriceRejected: return TxnEventKind::BuyerRejectsPrice;
    case EventKind::SubsampleRequested: return TxnEventKind::RequestSubsample;
    case EventKind::SubsampleWaived: return TxnEventKind::WaiveSubsample;
    case EventKind::SubsampleAccepted: return TxnEventKind::AcceptSubsample;
    case EventKind::SubsampleRejected: return TxnEventKind::RejectSubsample;
    case EventKind::EscrowFunded: return TxnEventKind::FundEscrow;
    case EventKind::DataDelivered: return TxnEventKind::DeliverData;
    case EventKind::Settled: return TxnEventKind::ReleaseEscrow;
    case EventKind::Aborted: {
      const auto reason = abort_reason_from_string(e.payload.at("reason").get<std::string>());
      if (reason == AbortReason::DeliveryRefused) return TxnEventKind::SellerRefusesDelivery;
      if (reason == AbortReason::FundingRefused) return TxnEventKind::BuyerRefusesFunding;
      if (reason == AbortReason::CounterpartyExpelled) return TxnEventKind::CounterpartyExpelled;
      return std::nullopt;  // already aborted by the preceding rejection
    }
    default:
      return std::nullopt;
  }
}

}  // namespace

MarketSnapshot replay(const EventLedger& ledger, const ReputationParams& params) {
  MarketSnapshot s;
  std::vector<OutcomeEdge> edges;

  for (const MarketEvent& e : ledger.events()) {
    const Record& p = e.payload;
    try {
      switch (e.kind) {
        case EventKind::Identified:
          if (p.value("registered", false)) {
            MemberSnapshot m;
            for (const auto& r : p.at("roles")) {
              const auto name = r.get<std::string>();
              m.roles = m.roles.with(name == "Seller" ? Role::Seller : Role::Buyer);
            }
            m.archetype = p.at("archetype").get<std::string>();
            m.reputation = params.base;
            s.members.emplace(p.at("member").get<std::string>(), m);
          }
          break;
        case EventKind::Listed: {
          ListingSnapshot l;
          l.seller = p.at("seller").get<std::string>();
          l.category = p.at("category").get<std::string>();
          l.listing_price = p.at("listing_price").get<double>();
          l.noise_level = p.at("noise_level").get<double>();
          l.exclusive = p.at("license").at("exclusive").get<bool>();
          s.listings.emplace(p.at("listing").get<std::string>(), l);
          break;
        }
        case EventKind::Matched: {
          Transaction t;
          t.txn_id = p.at("txn").get<std::string>();
          t.buyer_id = p.at("buyer").get<std::string>();
          t.seller_id = p.at("seller").get<std::string>();
          t.listing_id = p.at("listing").get<std::string>();
          t.price = Money::from_micros(p.at("price_micros").get<std::int64_t>());
          s.transactions.emplace(t.txn_id, t);
          break;
        }
        case EventKind::ReputationUpdated:
          edges.push_back({p.at("member").get<std::string>(),
                           p.at("counterparty").get<std::string>(),
                           static_cast<OutcomeSign>(p.at("sign").get<int>()),
                           p.at("partner_rep").get<double>(), e.tick});
          break;
        case EventKind::MemberExpelled: {
          const auto id = p.at("member").get<std::string>();
          s.members.at(id).expelled = true;
          for (auto& [lid, l] : s.listings) {
            if (l.seller == id && l.status == ListingStatus::Active) l.status = ListingStatus::Withdrawn;
          }
          break;
        }
        case EventKind::SubsamplingSuspended:
          s.members.at(p.at("member").get<std::string>()).privilege = SubsamplePrivilege::Suspended;
          break;
        default:
          break;
      }

      if (const auto ev = txn_event_for(e)) {
        auto it = s.transactions.find(p.at("txn").get<std::string>());
        if (it == s.transactions.end()) malformed(e, "unknown transaction");
        Transaction& t = it->second;
        t = advance(t, *ev);
        if (*ev == TxnEventKind::FundEscrow) {
          if (p.at("amount_micros").get<std::int64_t>() != t.escrow_balance.micros()) {
            malformed(e, "escrow amount differs from the matched price");
          }
          s.escrow.buyer_spend += t.escrow_balance;
        }
        if (*ev == TxnEventKind::ReleaseEscrow) {
          s.escrow.seller_receipts += Money::from_micros(p.at("price_micros").get<std::int64_t>());
          License l = license_from_record(p.at("license"));
          if (l.exclusive) s.listings.at(t.listing_id).status = ListingStatus::Sold;
          s.licenses.push_back(std::move(l));
        }
      }
      if (e.kind == EventKind::Aborted) {
        const Transaction& t = s.transactions.at(p.at("txn").get<std::string>());
        const auto refund = Money::from_micros(p.at("refund_micros").get<std::int64_t>());
        if (t.state != TxnState::Aborted || t.refunded != refund) {
          malformed(e, "abort does not match the transaction's escrow");
        }
        s.escrow.refunds += refund;
      }
      if (e.kind == EventKind::SubsampleRejected && !p.at("justified").get<bool>()) {
        ++s.members.at(p.at("buyer").get<std::string>()).unjustified_rejects;
      }
    } catch (const nlohmann::json::exception& ex) {
      malformed(e, ex.what());
    } catch (const std::out_of_range& ex) {
      malformed(e, ex.what());
    } catch (const MarketError& ex) {
      // An event the state machine refuses, e.g. a step that was cut out.
      if (ex.code() == ErrorCode::MalformedLedger) throw;
      malformed(e, ex.what());
    }
  }

  for (auto& [id, m] : s.members) m.reputation = reputation_score(edges, id, params);
  for (const auto& [id, t] : s.transactions) s.escrow.held += t.escrow_balance;
  return s;
}

}  // namespace dmkt
