#include "dmkt/transaction.hpp"

#include <sstream>

#include "dmkt/errors.hpp"

namespace dmkt {

std::string_view to_string(TxnState s) noexcept {
  switch (s) {
    case TxnState::Matched: return "Matched";
    case TxnState::PriceAccepted: return "PriceAccepted";
    case TxnState::SubsampleIssued: return "SubsampleIssued";
    case TxnState::SubsampleAccepted: return "SubsampleAccepted";
    case TxnState::SubsampleWaived: return "SubsampleWaived";
    case TxnState::EscrowFunded: return "EscrowFunded";
    case TxnState::DataDelivered: return "DataDelivered";
    case TxnState::Settled: return "Settled";
    case TxnState::Aborted: return "Aborted";
  }
  return "Matched";
}

std::string_view to_string(AbortReason r) noexcept {
  switch (r) {
    case AbortReason::None: return "None";
    case AbortReason::PriceRejected: return "PriceRejected";
    case AbortReason::SubsampleRejected: return "SubsampleRejected";
    case AbortReason::DeliveryRefused: return "DeliveryRefused";
    case AbortReason::FundingRefused: return "FundingRefused";
    case AbortReason::CounterpartyExpelled: return "CounterpartyExpelled";
  }
  return "None";
}

std::string_view to_string(TxnEventKind k) noexcept {
  switch (k) {
    case TxnEventKind::BuyerAcceptsPrice: return "BuyerAcceptsPrice";
    case TxnEventKind::BuyerRejectsPrice: return "BuyerRejectsPrice";
    case TxnEventKind::RequestSubsample: return "RequestSubsample";
    case TxnEventKind::WaiveSubsample: return "WaiveSubsample";
    case TxnEventKind::AcceptSubsample: return "AcceptSubsample";
    case TxnEventKind::RejectSubsample: return "RejectSubsample";
    case TxnEventKind::FundEscrow: return "FundEscrow";
    case TxnEventKind::DeliverData: return "DeliverData";
    case TxnEventKind::ReleaseEscrow: return "ReleaseEscrow";
    case TxnEventKind::SellerRefusesDelivery: return "SellerRefusesDelivery";
    case TxnEventKind::BuyerRefusesFunding: return "BuyerRefusesFunding";
    case TxnEventKind::CounterpartyExpelled: return "CounterpartyExpelled";
  }
  return "BuyerAcceptsPrice";
}

std::optional<TxnState> txn_state_from_string(std::string_view s) noexcept {
  for (TxnState t : kAllTxnStates) {
    if (to_string(t) == s) return t;
  }
  return std::nullopt;
}

std::optional<AbortReason> abort_reason_from_string(std::string_view s) noexcept {
  for (AbortReason r : {AbortReason::None, AbortReason::PriceRejected,
                        AbortReason::SubsampleRejected, AbortReason::DeliveryRefused,
                        AbortReason::FundingRefused, AbortReason::CounterpartyExpelled}) {
    if (to_string(r) == s) return r;
  }
  return std::nullopt;
}

const std::vector<Transition>& transition_table() {
  using S = TxnState;
  using E = TxnEventKind;
  using R = AbortReason;
  static const std::vector<Transition> table = [] {
    std::vector<Transition> t{
        {S::Matched, E::BuyerAcceptsPrice, S::PriceAccepted, R::None, true},
        {S::Matched, E::BuyerRejectsPrice, S::Aborted, R::PriceRejected},
        {S::PriceAccepted, E::RequestSubsample, S::SubsampleIssued},
        {S::PriceAccepted, E::WaiveSubsample, S::SubsampleWaived, R::None, true},
        {S::SubsampleIssued, E::AcceptSubsample, S::SubsampleAccepted, R::None, true},
        {S::SubsampleIssued, E::RejectSubsample, S::Aborted, R::SubsampleRejected},
        {S::SubsampleAccepted, E::FundEscrow, S::EscrowFunded},
        {S::SubsampleWaived, E::FundEscrow, S::EscrowFunded},
        {S::SubsampleAccepted, E::BuyerRefusesFunding, S::Aborted, R::FundingRefused},
        {S::SubsampleWaived, E::BuyerRefusesFunding, S::Aborted, R::FundingRefused},
        {S::EscrowFunded, E::DeliverData, S::DataDelivered},
        {S::EscrowFunded, E::SellerRefusesDelivery, S::Aborted, R::DeliveryRefused},
        {S::DataDelivered, E::ReleaseEscrow, S::Settled},
    };
    // Delivered data cannot be recalled, so a delivered exchange always settles.
    for (S s : {S::Matched, S::PriceAccepted, S::SubsampleIssued, S::SubsampleAccepted,
                S::SubsampleWaived, S::EscrowFunded}) {
      t.push_back({s, E::CounterpartyExpelled, S::Aborted, R::CounterpartyExpelled});
    }
    return t;
  }();
  return table;
}

std::optional<Transition> find_transition(TxnState from, TxnEventKind event) noexcept {
  for (const auto& t : transition_table()) {
    if (t.from == from && t.event == event) return t;
  }
  return std::nullopt;
}

Transaction advance(Transaction txn, TxnEventKind event) {
  const auto t = find_transition(txn.state, event);
  if (!t) {
    throw MarketError(ErrorCode::IllegalTransition,
                      std::string(to_string(event)) + " in state " +
                          std::string(to_string(txn.state)));
  }
  txn.state = t->to;
  if (t->consent) ++txn.consent_count;
  switch (event) {
    case TxnEventKind::FundEscrow:
      txn.escrow_balance = txn.price;
      break;
    case TxnEventKind::DeliverData:
      txn.delivered = true;
      break;
    case TxnEventKind::ReleaseEscrow:
      txn.released += txn.escrow_balance;
      txn.escrow_balance = Money{};
      break;
    default:
      break;
  }
  if (t->to == TxnState::Aborted) {
    txn.abort_reason = t->reason;
    txn.refunded += txn.escrow_balance;
    txn.escrow_balance = Money{};
  }
  return txn;
}

std::string transition_table_jsonl() {
  std::ostringstream os;
  for (const auto& t : transition_table()) {
    Record r;
    r["from"] = to_string(t.from);
    r["event"] = to_string(t.event);
    r["to"] = to_string(t.to);
    r["reason"] = to_string(t.reason);
    r["consent"] = t.consent;
    os << r.dump() << '\n';
  }
  return os.str();
}

}  // namespace dmkt
