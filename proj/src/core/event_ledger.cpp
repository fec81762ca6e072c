#include "dmkt/core/event_ledger.hpp"

#include <openssl/evp.h>

#include <array>
#include <istream>
#include <memory>
#include <ostream>
#include <sstream>

#include "dmkt/errors.hpp"

namespace dmkt {

namespace {

constexpr std::array<std::pair<EventKind, std::string_view>, 18> kKindNames{{
    {EventKind::Identified, "Identified"},
    {EventKind::Listed, "Listed"},
    {EventKind::SearchIssued, "SearchIssued"},
    {EventKind::Matched, "Matched"},
    {EventKind::PriceAccepted, "PriceAccepted"},
    {EventKind::PriceRejected, "PriceRejected"},
    {EventKind::SubsampleRequested, "SubsampleRequested"},
    {EventKind::SubsampleAccepted, "SubsampleAccepted"},
    {EventKind::SubsampleRejected, "SubsampleRejected"},
    {EventKind::SubsampleWaived, "SubsampleWaived"},
    {EventKind::EscrowFunded, "EscrowFunded"},
    {EventKind::DataDelivered, "DataDelivered"},
    {EventKind::Settled, "Settled"},
    {EventKind::Aborted, "Aborted"},
    {EventKind::ReputationUpdated, "ReputationUpdated"},
    {EventKind::LicenseViolationReported, "LicenseViolationReported"},
    {EventKind::MemberExpelled, "MemberExpelled"},
    {EventKind::SubsamplingSuspended, "SubsamplingSuspended"},
}};

}  // namespace

std::string_view to_string(EventKind k) noexcept {
  for (const auto& [kind, name] : kKindNames) {
    if (kind == k) return name;
  }
  return "Unknown";
}

std::optional<EventKind> event_kind_from_string(std::string_view s) noexcept {
  for (const auto& [kind, name] : kKindNames) {
    if (name == s) return kind;
  }
  return std::nullopt;
}

std::string MarketEvent::to_line() const {
  Record r;
  r["seq"] = seq;
  r["tick"] = tick;
  r["kind"] = to_string(kind);
  r["payload"] = payload;
  return r.dump();
}

MarketEvent MarketEvent::from_line(std::string_view line) {
  Record r;
  try {
    r = Record::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw MarketError(ErrorCode::MalformedLedger, e.what());
  }
  if (!r.is_object() || !r.contains("seq") || !r.contains("tick") || !r.contains("kind") ||
      !r.contains("payload")) {
    throw MarketError(ErrorCode::MalformedLedger, "event record lacks seq/tick/kind/payload");
  }
  MarketEvent e;
  try {
    e.seq = r.at("seq").get<std::uint64_t>();
    e.tick = r.at("tick").get<Tick>();
    const auto kind = event_kind_from_string(r.at("kind").get<std::string>());
    if (!kind) throw MarketError(ErrorCode::MalformedLedger, "unknown event kind");
    e.kind = *kind;
  } catch (const nlohmann::json::exception& ex) {
    throw MarketError(ErrorCode::MalformedLedger, ex.what());
  }
  e.payload = std::move(r.at("payload"));
  return e;
}

const MarketEvent& EventLedger::append(EventKind kind, Record payload, Tick tick) {
  if (!events_.empty() && tick < events_.back().tick) {
    throw MarketError(ErrorCode::ClockViolation,
                      "tick " + std::to_string(tick) + " precedes last event tick " +
                          std::to_string(events_.back().tick));
  }
  MarketEvent e;
  e.seq = last_seq() + 1;
  e.tick = tick;
  e.kind = kind;
  e.payload = payload.is_null() ? Record::object() : std::move(payload);
  events_.push_back(std::move(e));
  return events_.back();
}

void EventLedger::write_jsonl(std::ostream& out) const {
  for (const auto& e : events_) out << e.to_line() << '\n';
}

std::string EventLedger::to_jsonl() const {
  std::ostringstream os;
  write_jsonl(os);
  return os.str();
}

EventLedger EventLedger::read_jsonl(std::istream& in) {
  EventLedger ledger;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    MarketEvent e = MarketEvent::from_line(line);
    if (e.seq != ledger.last_seq() + 1) {
      throw MarketError(ErrorCode::MalformedLedger,
                        "line " + std::to_string(lineno) + ": seq out of order");
    }
    if (!ledger.empty() && e.tick < ledger.last_tick()) {
      throw MarketError(ErrorCode::ClockViolation, "line " + std::to_string(lineno));
    }
    ledger.events_.push_back(std::move(e));
  }
  return ledger;
}

std::string EventLedger::hash() const {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
  for (const auto& e : events_) {
    const std::string line = e.to_line() + '\n';
    EVP_DigestUpdate(ctx.get(), line.data(), line.size());
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest.data(), &len);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

}  // namespace dmkt
