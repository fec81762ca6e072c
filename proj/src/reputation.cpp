#include "dmkt/reputation.hpp"

#include <algorithm>

#include "dmkt/errors.hpp"

namespace dmkt {

void validate(const ReputationParams& p) {
  if (!(p.base > 0.0 && p.base < 1.0)) throw ConfigError("params.reputation.base", "must lie in (0,1)");
  if (p.smoothing < 1) throw ConfigError("params.reputation.smoothing", "must be a positive integer");
  if (!(p.expulsion_threshold > 0.0 && p.expulsion_threshold < p.base)) {
    throw ConfigError("params.reputation.expulsion_threshold", "must lie in (0, base)");
  }
  if (p.unjustified_reject_limit < 1) {
    throw ConfigError("params.reputation.unjustified_reject_limit", "must be a positive integer");
  }
}

double reputation_step(double current, int edge_index, OutcomeSign sign, double partner_rep,
                       const ReputationParams& params) {
  const double delta = static_cast<int>(sign) * partner_rep / (edge_index + params.smoothing);
  return std::clamp(current + delta, 0.0, 1.0);
}

double reputation_score(std::span<const OutcomeEdge> edges, const MemberId& member,
                        const ReputationParams& params) {
  double score = params.base;
  int count = 0;
  for (const auto& e : edges) {
    if (e.from != member) continue;
    score = reputation_step(score, ++count, e.sign, e.partner_rep_at_time, params);
  }
  return score;
}

ReputationLedger::ReputationLedger(ReputationParams params) : params_(params) {
  validate(params_);
  nodes_.insert(kOrchestrator);
  standing_[kOrchestrator].score = params_.base;
}

void ReputationLedger::add_member(const MemberId& id) {
  nodes_.insert(id);
  standing_[id].score = params_.base;
}

const ReputationLedger::Standing& ReputationLedger::standing(const MemberId& id) const {
  auto it = standing_.find(id);
  if (it == standing_.end()) throw MarketError(ErrorCode::UnknownMember, id);
  return it->second;
}

ReputationLedger::Standing& ReputationLedger::standing(const MemberId& id) {
  auto it = standing_.find(id);
  if (it == standing_.end()) throw MarketError(ErrorCode::UnknownMember, id);
  return it->second;
}

double ReputationLedger::reputation_of(const MemberId& id) const {
  if (id == kOrchestrator) return params_.base;
  return standing(id).score;
}

void ReputationLedger::insert_edge(EventLedger& events, OutcomeEdge edge) {
  Standing& s = standing(edge.from);
  const double old_score = s.score;
  ++s.edge_count;
  s.score = reputation_step(old_score, s.edge_count, edge.sign, edge.partner_rep_at_time, params_);
  const double new_score = s.score;

  Record p;
  p["member"] = edge.from;
  p["counterparty"] = edge.to;
  p["sign"] = static_cast<int>(edge.sign);
  p["partner_rep"] = edge.partner_rep_at_time;
  p["old"] = old_score;
  p["new"] = new_score;
  events.append(EventKind::ReputationUpdated, std::move(p), edge.tick);

  const Tick tick = edge.tick;
  const MemberId member = edge.from;
  edges_.push_back(std::move(edge));

  if (!s.expelled && new_score < params_.expulsion_threshold) {
    s.expelled = true;
    Record e;
    e["member"] = member;
    e["reputation"] = new_score;
    events.append(EventKind::MemberExpelled, std::move(e), tick);
  }
}

void ReputationLedger::record_outcome(EventLedger& events, const MemberId& a, const MemberId& b,
                                      OutcomeSign sign, Tick tick) {
  if (a == b) throw MarketError(ErrorCode::SelfTransaction, a);
  const double rep_a = reputation_of(a);
  const double rep_b = reputation_of(b);
  insert_edge(events, {a, b, sign, rep_b, tick});
  insert_edge(events, {b, a, sign, rep_a, tick});
}

void ReputationLedger::record_violation(EventLedger& events, const MemberId& transgressor,
                                        const MemberId& counterparty, Tick tick) {
  if (transgressor == counterparty) throw MarketError(ErrorCode::SelfTransaction, transgressor);
  const double partner = reputation_of(counterparty);
  standing(transgressor);
  insert_edge(events, {transgressor, counterparty, OutcomeSign::Violation, partner, tick});
}

SubsamplePrivilege ReputationLedger::note_subsample_reject(EventLedger& events,
                                                           const MemberId& buyer, bool justified,
                                                           Tick tick) {
  Standing& s = standing(buyer);
  if (justified) return s.privilege;

  ++s.unjustified_rejects;
  insert_edge(events, {buyer, kOrchestrator, OutcomeSign::Violation, params_.base, tick});
  if (s.privilege == SubsamplePrivilege::Active &&
      s.unjustified_rejects >= params_.unjustified_reject_limit) {
    s.privilege = SubsamplePrivilege::Suspended;
    Record p;
    p["member"] = buyer;
    p["unjustified_rejects"] = s.unjustified_rejects;
    events.append(EventKind::SubsamplingSuspended, std::move(p), tick);
  }
  return s.privilege;
}

SubsamplePrivilege ReputationLedger::privilege(const MemberId& id) const {
  return standing(id).privilege;
}

int ReputationLedger::unjustified_rejects(const MemberId& id) const {
  return standing(id).unjustified_rejects;
}

bool ReputationLedger::is_expelled(const MemberId& id) const { return standing(id).expelled; }

}  // namespace dmkt
