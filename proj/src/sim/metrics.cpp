#include "dmkt/sim/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "dmkt/reputation.hpp"
#include "dmkt/transaction.hpp"

namespace dmkt::sim {

namespace {

constexpr std::array<const char*, 4> kBandLabels{"[0,0.25)", "[0.25,0.5)", "[0.5,0.75)",
                                                 "[0.75,1]"};

struct Mean {
  double sum = 0.0;
  int n = 0;
  void add(double x) {
    sum += x;
    ++n;
  }
  std::optional<double> value() const {
    return n == 0 ? std::nullopt : std::optional<double>(sum / n);
  }
};

struct TxnTrack {
  std::string buyer;
  std::int64_t held = 0;
};

Record opt(const std::optional<double>& v) { return v ? Record(*v) : Record(nullptr); }
Record opt_tick(const std::optional<Tick>& v) { return v ? Record(*v) : Record(nullptr); }

std::string fmt(const std::optional<double>& v, const char* spec = "%.6f") {
  if (!v) return "none";
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, *v);
  return buf;
}

std::string money(std::int64_t micros) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", static_cast<double>(micros) / 1e6);
  return buf;
}

}  // namespace

int noise_band(double level) noexcept {
  if (level < 0.25) return 0;
  if (level < 0.5) return 1;
  if (level < 0.75) return 2;
  return 3;
}

ScenarioMetrics compute_metrics(const EventLedger& ledger) {
  ScenarioMetrics m;
  for (std::size_t i = 0; i < kBandLabels.size(); ++i) m.noise_bands[i].label = kBandLabels[i];
  for (AbortReason r : {AbortReason::PriceRejected, AbortReason::SubsampleRejected,
                        AbortReason::DeliveryRefused, AbortReason::FundingRefused,
                        AbortReason::CounterpartyExpelled}) {
    m.aborted_by_reason[std::string(to_string(r))] = 0;
  }

  std::map<MemberId, std::string> archetype;
  std::map<TxnId, TxnTrack> txns;
  std::map<MemberId, int> unjustified;
  std::array<Mean, 4> band_price;
  std::map<std::string, Mean> group_price;

  for (const MarketEvent& e : ledger.events()) {
    const Record& p = e.payload;
    switch (e.kind) {
      case EventKind::Identified:
        if (p.value("registered", false)) {
          const auto id = p.at("member").get<std::string>();
          archetype[id] = p.at("archetype").get<std::string>();
          m.trajectories[id].push_back({e.tick, p.at("reputation").get<double>()});
          if (archetype[id] == "JunkSeller") m.junk_expulsions[id] = std::nullopt;
        }
        break;
      case EventKind::Matched:
        txns[p.at("txn").get<std::string>()].buyer = p.at("buyer").get<std::string>();
        break;
      case EventKind::EscrowFunded: {
        const auto amount = p.at("amount_micros").get<std::int64_t>();
        m.buyer_spend_micros += amount;
        txns[p.at("txn").get<std::string>()].held += amount;
        break;
      }
      case EventKind::Settled: {
        ++m.settled_count;
        const auto paid = p.at("price_micros").get<std::int64_t>();
        const auto points = p.at("points").get<std::int64_t>();
        const double unit = p.at("unit_price").get<double>();
        m.seller_receipts_micros += paid;
        txns[p.at("txn").get<std::string>()].held -= paid;
        const int band = noise_band(p.at("noise_level").get<double>());
        ++m.noise_bands[static_cast<std::size_t>(band)].settled;
        band_price[static_cast<std::size_t>(band)].add(unit);
        const auto it = archetype.find(p.at("buyer").get<std::string>());
        const std::string group = it == archetype.end() ? std::string() : it->second;
        BuyerGroupStats& g = m.buyers_by_archetype[group];
        ++g.settled;
        g.points += points;
        g.paid_micros += paid;
        group_price[group].add(unit);
        break;
      }
      case EventKind::Aborted: {
        ++m.aborted_by_reason[p.at("reason").get<std::string>()];
        const auto refund = p.at("refund_micros").get<std::int64_t>();
        m.refunds_micros += refund;
        txns[p.at("txn").get<std::string>()].held -= refund;
        break;
      }
      case EventKind::SubsampleRejected:
        if (!p.at("justified").get<bool>()) ++unjustified[p.at("buyer").get<std::string>()];
        break;
      case EventKind::ReputationUpdated:
        m.trajectories[p.at("member").get<std::string>()].push_back(
            {e.tick, p.at("new").get<double>()});
        break;
      case EventKind::MemberExpelled: {
        const auto id = p.at("member").get<std::string>();
        m.expulsions.push_back({id, e.tick, 0});
        auto j = m.junk_expulsions.find(id);
        if (j != m.junk_expulsions.end() && !j->second) j->second = e.tick;
        break;
      }
      case EventKind::SubsamplingSuspended: {
        const auto id = p.at("member").get<std::string>();
        m.suspensions.push_back({id, e.tick, unjustified[id]});
        break;
      }
      case EventKind::LicenseViolationReported:
        ++m.license_violations;
        break;
      default:
        break;
    }
  }

  m.trajectories.erase(ReputationLedger::kOrchestrator);
  m.event_count = ledger.events().size();
  for (std::size_t i = 0; i < band_price.size(); ++i) {
    m.noise_bands[i].mean_unit_price = band_price[i].value();
  }
  for (auto& [group, g] : m.buyers_by_archetype) {
    g.mean_unit_price = group_price[group].value();
    if (g.points > 0) g.cost_per_point = static_cast<double>(g.paid_micros) / 1e6 / g.points;
  }
  const auto adv = m.buyers_by_archetype.find("AdversaryBuyer");
  const auto honest = m.buyers_by_archetype.find("HonestBuyer");
  if (adv != m.buyers_by_archetype.end() && honest != m.buyers_by_archetype.end() &&
      adv->second.mean_unit_price && honest->second.mean_unit_price) {
    m.adversary_to_honest_price_ratio =
        *adv->second.mean_unit_price / *honest->second.mean_unit_price;
  }
  if (!m.junk_expulsions.empty()) {
    Tick last = 0;
    bool all = true;
    for (const auto& [id, t] : m.junk_expulsions) {
      if (!t) all = false;
      else last = std::max(last, *t);
    }
    if (all) m.junk_expulsion_tick = last;
  }
  // Held balance from per-transaction escrow, not from the running totals.
  for (const auto& [id, t] : txns) m.held_micros += t.held;
  m.currency_conserved =
      m.buyer_spend_micros == m.seller_receipts_micros + m.refunds_micros + m.held_micros &&
      std::all_of(txns.begin(), txns.end(), [](const auto& kv) { return kv.second.held >= 0; });
  m.event_log_hash = ledger.hash();
  return m;
}

Record to_record(const ScenarioMetrics& m) {
  Record r;
  r["event_count"] = m.event_count;
  r["settled_count"] = m.settled_count;
  Record aborted = Record::object();
  for (const auto& [reason, n] : m.aborted_by_reason) aborted[reason] = n;
  r["aborted_by_reason"] = std::move(aborted);

  Record bands = Record::array();
  for (const auto& b : m.noise_bands) {
    Record br;
    br["band"] = b.label;
    br["settled"] = b.settled;
    br["mean_unit_price"] = opt(b.mean_unit_price);
    bands.push_back(std::move(br));
  }
  r["mean_unit_price_by_noise_band"] = std::move(bands);

  Record groups = Record::object();
  for (const auto& [name, g] : m.buyers_by_archetype) {
    Record gr;
    gr["settled"] = g.settled;
    gr["points"] = g.points;
    gr["paid_micros"] = g.paid_micros;
    gr["mean_unit_price"] = opt(g.mean_unit_price);
    gr["cost_per_point"] = opt(g.cost_per_point);
    groups[name] = std::move(gr);
  }
  r["buyers_by_archetype"] = std::move(groups);
  r["adversary_to_honest_price_ratio"] = opt(m.adversary_to_honest_price_ratio);

  Record junk = Record::object();
  for (const auto& [id, t] : m.junk_expulsions) junk[id] = opt_tick(t);
  r["junk_expulsions"] = std::move(junk);
  r["junk_expulsion_tick"] = opt_tick(m.junk_expulsion_tick);

  Record expelled = Record::array();
  for (const auto& e : m.expulsions) {
    Record er;
    er["member"] = e.member;
    er["tick"] = e.tick;
    expelled.push_back(std::move(er));
  }
  r["expulsions"] = std::move(expelled);
  Record suspended = Record::array();
  for (const auto& e : m.suspensions) {
    Record er;
    er["member"] = e.member;
    er["tick"] = e.tick;
    er["unjustified_rejects"] = e.unjustified_rejects;
    suspended.push_back(std::move(er));
  }
  r["subsample_suspensions"] = std::move(suspended);
  r["license_violations"] = m.license_violations;

  Record escrow;
  escrow["buyer_spend_micros"] = m.buyer_spend_micros;
  escrow["seller_receipts_micros"] = m.seller_receipts_micros;
  escrow["refunds_micros"] = m.refunds_micros;
  escrow["held_micros"] = m.held_micros;
  escrow["conserved"] = m.currency_conserved;
  r["escrow"] = std::move(escrow);
  r["event_log_hash"] = m.event_log_hash;
  return r;
}

std::string metrics_json(const ScenarioMetrics& m) { return to_record(m).dump(2) + "\n"; }

std::string metrics_text(const ScenarioMetrics& m) {
  std::ostringstream os;
  os << "events            " << m.event_count << "\n";
  os << "settled           " << m.settled_count << "\n";
  for (const auto& [reason, n] : m.aborted_by_reason) {
    os << "aborted " << reason << std::string(reason.size() < 20 ? 20 - reason.size() : 1, ' ')
       << n << "\n";
  }
  os << "mean unit price by noise band\n";
  for (const auto& b : m.noise_bands) {
    os << "  " << b.label << "  settled " << b.settled << "  mean " << fmt(b.mean_unit_price)
       << "\n";
  }
  for (const auto& [name, g] : m.buyers_by_archetype) {
    os << "buyers " << name << ": settled " << g.settled << ", points " << g.points
       << ", mean unit price " << fmt(g.mean_unit_price) << ", cost per point "
       << fmt(g.cost_per_point) << "\n";
  }
  os << "adversary/honest  " << fmt(m.adversary_to_honest_price_ratio, "%.4f") << "\n";
  for (const auto& [id, t] : m.junk_expulsions) {
    os << "junk " << id << " expelled at " << (t ? std::to_string(*t) : "none") << "\n";
  }
  for (const auto& s : m.suspensions) {
    os << "suspended " << s.member << " at " << s.tick << " after " << s.unjustified_rejects
       << " unjustified rejects\n";
  }
  os << "license violations " << m.license_violations << "\n";
  os << "escrow spend " << money(m.buyer_spend_micros) << " = receipts "
     << money(m.seller_receipts_micros) << " + refunds " << money(m.refunds_micros) << " + held "
     << money(m.held_micros) << (m.currency_conserved ? " (conserved)" : " (NOT conserved)")
     << "\n";
  os << "event log hash    " << m.event_log_hash << "\n";
  return os.str();
}

std::string trajectories_csv(const ScenarioMetrics& m) {
  std::ostringstream os;
  os << "member,tick,reputation\n";
  char buf[32];
  for (const auto& [id, series] : m.trajectories) {
    for (const auto& pt : series) {
      std::snprintf(buf, sizeof buf, "%.9f", pt.reputation);
      os << id << "," << pt.tick << "," << buf << "\n";
    }
  }
  return os.str();
}

}  // namespace dmkt::sim
