#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dmkt/core/types.hpp"

namespace dmkt {

// Insertion-ordered so exported lines (and their hash) are reproducible.
using Record = nlohmann::ordered_json;

enum class EventKind {
  Identified,
  Listed,
  SearchIssued,
  Matched,
  PriceAccepted,
  PriceRejected,
  SubsampleRequested,
  SubsampleAccepted,
  SubsampleRejected,
  SubsampleWaived,
  EscrowFunded,
  DataDelivered,
  Settled,
  Aborted,
  ReputationUpdated,
  LicenseViolationReported,
  MemberExpelled,
  SubsamplingSuspended,
};

std::string_view to_string(EventKind k) noexcept;
std::optional<EventKind> event_kind_from_string(std::string_view s) noexcept;

struct MarketEvent {
  std::uint64_t seq = 0;
  Tick tick = 0;
  EventKind kind = EventKind::Identified;
  Record payload;

  // One JSON-lines record: seq, tick, kind, payload in that order.
  std::string to_line() const;
  static MarketEvent from_line(std::string_view line);
};

// Append-only, single-writer event log. Readers may take `events()` at any
// point; appended events never change.
class EventLedger {
 public:
  const MarketEvent& append(EventKind kind, Record payload, Tick tick);

  const std::vector<MarketEvent>& events() const noexcept { return events_; }
  std::size_t size() const noexcept { return events_.size(); }
  bool empty() const noexcept { return events_.empty(); }
  std::uint64_t last_seq() const noexcept { return events_.empty() ? 0 : events_.back().seq; }
  Tick last_tick() const noexcept { return events_.empty() ? 0 : events_.back().tick; }

  void write_jsonl(std::ostream& out) const;
  std::string to_jsonl() const;

  // Rebuilds a ledger from an export; re-checks seq and clock ordering.
  static EventLedger read_jsonl(std::istream& in);

  // Lowercase hex SHA-256 of the JSON-lines export.
  std::string hash() const;

 private:
  std::vector<MarketEvent> events_;
};

}  // namespace dmkt
