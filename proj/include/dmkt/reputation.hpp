#pragma once

#include <map>
#include <set>
#include <span>
#include <vector>

#include "dmkt/core/event_ledger.hpp"
#include "dmkt/core/types.hpp"

namespace dmkt {

struct ReputationParams {
  double base = 0.5;
  int smoothing = 5;  // K
  double expulsion_threshold = 0.2;
  int unjustified_reject_limit = 5;
};

// Throws ConfigError naming the offending field.
void validate(const ReputationParams& p);

enum class OutcomeSign : int { Violation = -1, Success = +1 };

// One completed (or failed) interaction as seen from `from`. The partner's
// reputation is frozen at creation.
struct OutcomeEdge {
  MemberId from;
  MemberId to;
  OutcomeSign sign = OutcomeSign::Success;
  double partner_rep_at_time = 0.0;
  Tick tick = 0;

  friend bool operator==(const OutcomeEdge&, const OutcomeEdge&) = default;
};

// One edge applied to a running score: the k-th edge of a member moves it by
// sign * partner_rep / (k + K), clamped to [0,1]. The divisor is fixed when
// the edge is inserted, so a success never lowers a score and a violation
// never raises one.
double reputation_step(double current, int edge_index, OutcomeSign sign, double partner_rep,
                       const ReputationParams& params);

// Folds reputation_step over the edges leaving `member`, in order, from
// base. Pure; used as the replay oracle for ReputationLedger.
double reputation_score(std::span<const OutcomeEdge> edges, const MemberId& member,
                        const ReputationParams& params);

// Members are nodes, outcomes are weighted edges. Also tracks the standing
// derived from the graph: subsample privilege and expulsion.
class ReputationLedger {
 public:
  // Synthetic counterparty for penalties the orchestrator imposes itself.
  static constexpr const char* kOrchestrator = "orchestrator";

  explicit ReputationLedger(ReputationParams params = {});

  const ReputationParams& params() const noexcept { return params_; }

  void add_member(const MemberId& id);
  bool contains(const MemberId& id) const { return nodes_.count(id) > 0; }

  // Throws UnknownMember.
  double reputation_of(const MemberId& id) const;

  // Symmetric edges a->b and b->a, each weighted by the other side's score
  // just before insertion. Emits ReputationUpdated per side and
  // MemberExpelled for anyone pushed under the threshold.
  // Throws SelfTransaction, UnknownMember.
  void record_outcome(EventLedger& events, const MemberId& a, const MemberId& b,
                      OutcomeSign sign, Tick tick);

  // One-sided violation edge against `transgressor` only.
  void record_violation(EventLedger& events, const MemberId& transgressor,
                        const MemberId& counterparty, Tick tick);

  // Unjustified rejects count toward suspension and cost a violation edge
  // against the orchestrator (weight = base). Justified rejects are free.
  SubsamplePrivilege note_subsample_reject(EventLedger& events, const MemberId& buyer,
                                           bool justified, Tick tick);

  SubsamplePrivilege privilege(const MemberId& id) const;
  int unjustified_rejects(const MemberId& id) const;
  bool is_expelled(const MemberId& id) const;

  const std::set<MemberId>& nodes() const noexcept { return nodes_; }
  const std::vector<OutcomeEdge>& edges() const noexcept { return edges_; }

 private:
  struct Standing {
    double score = 0.0;
    int edge_count = 0;
    int unjustified_rejects = 0;
    SubsamplePrivilege privilege = SubsamplePrivilege::Active;
    bool expelled = false;
  };

  const Standing& standing(const MemberId& id) const;
  Standing& standing(const MemberId& id);
  void insert_edge(EventLedger& events, OutcomeEdge edge);

  ReputationParams params_;
  std::set<MemberId> nodes_;
  std::vector<OutcomeEdge> edges_;
  std::map<MemberId, Standing> standing_;
};

}  // namespace dmkt
