#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dmkt/core/event_ledger.hpp"
#include "dmkt/core/types.hpp"

namespace dmkt {

enum class TxnState {
  Matched,
  PriceAccepted,
  SubsampleIssued,
  SubsampleAccepted,
  SubsampleWaived,
  EscrowFunded,
  DataDelivered,
  Settled,
  Aborted,
};

enum class AbortReason {
  None,
  PriceRejected,
  SubsampleRejected,
  DeliveryRefused,
  FundingRefused,
  CounterpartyExpelled,
};

enum class TxnEventKind {
  BuyerAcceptsPrice,
  BuyerRejectsPrice,
  RequestSubsample,
  WaiveSubsample,
  AcceptSubsample,
  RejectSubsample,
  FundEscrow,
  DeliverData,
  ReleaseEscrow,
  SellerRefusesDelivery,
  BuyerRefusesFunding,
  CounterpartyExpelled,  // orchestrator cancels after an expulsion
};

inline constexpr std::array<TxnEventKind, 12> kAllTxnEvents{
    TxnEventKind::BuyerAcceptsPrice,     TxnEventKind::BuyerRejectsPrice,
    TxnEventKind::RequestSubsample,      TxnEventKind::WaiveSubsample,
    TxnEventKind::AcceptSubsample,       TxnEventKind::RejectSubsample,
    TxnEventKind::FundEscrow,            TxnEventKind::DeliverData,
    TxnEventKind::ReleaseEscrow,         TxnEventKind::SellerRefusesDelivery,
    TxnEventKind::BuyerRefusesFunding,   TxnEventKind::CounterpartyExpelled};

inline constexpr std::array<TxnState, 9> kAllTxnStates{
    TxnState::Matched,           TxnState::PriceAccepted, TxnState::SubsampleIssued,
    TxnState::SubsampleAccepted, TxnState::SubsampleWaived, TxnState::EscrowFunded,
    TxnState::DataDelivered,     TxnState::Settled,       TxnState::Aborted};

std::string_view to_string(TxnState s) noexcept;
std::string_view to_string(AbortReason r) noexcept;
std::string_view to_string(TxnEventKind k) noexcept;
std::optional<TxnState> txn_state_from_string(std::string_view s) noexcept;
std::optional<AbortReason> abort_reason_from_string(std::string_view s) noexcept;

constexpr bool is_terminal(TxnState s) noexcept {
  return s == TxnState::Settled || s == TxnState::Aborted;
}

struct Transaction {
  TxnId txn_id;
  MemberId buyer_id;
  MemberId seller_id;
  ListingId listing_id;
  TxnState state = TxnState::Matched;
  AbortReason abort_reason = AbortReason::None;
  int consent_count = 0;
  Money price;           // buyer-effective price agreed at match
  Money escrow_balance;  // held by the orchestrator
  Money released;        // paid out to the seller
  Money refunded;        // returned to the buyer
  bool delivered = false;

  friend bool operator==(const Transaction&, const Transaction&) = default;
};

struct Transition {
  TxnState from;
  TxnEventKind event;
  TxnState to;
  AbortReason reason = AbortReason::None;
  bool consent = false;  // counts toward the two consents
};

// The complete legal transition table; anything absent is illegal.
const std::vector<Transition>& transition_table();

std::optional<Transition> find_transition(TxnState from, TxnEventKind event) noexcept;

// Applies one event. Escrow bookkeeping: FundEscrow moves `price` into
// escrow, ReleaseEscrow pays it all to the seller, every abort refunds
// whatever is held. Throws IllegalTransition.
Transaction advance(Transaction txn, TxnEventKind event);

// Adjacency list as JSON lines: {"from":..,"event":..,"to":..,"reason":..,"consent":..}.
std::string transition_table_jsonl();

}  // namespace dmkt
