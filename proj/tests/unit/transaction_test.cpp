#include <gtest/gtest.h>

#include <deque>
#include <set>

#include "dmkt/core/random.hpp"
#include "dmkt/errors.hpp"
#include "dmkt/privacy.hpp"
#include "dmkt/subsample.hpp"
#include "dmkt/transaction.hpp"
#include "oracles.hpp"

using namespace dmkt;
using E = TxnEventKind;
using S = TxnState;

namespace {

Transaction fresh() {
  Transaction t;
  t.txn_id = "T1";
  t.buyer_id = "b";
  t.seller_id = "s";
  t.listing_id = "L1";
  t.price = Money::from_units(123.456789);
  return t;
}

Transaction run(std::initializer_list<E> events) {
  Transaction t = fresh();
  for (E e : events) t = advance(t, e);
  return t;
}

bool is_consent_event(E e) {
  return e == E::BuyerAcceptsPrice || e == E::AcceptSubsample || e == E::WaiveSubsample;
}

// Every reachable state must satisfy these, given the path that led there.
void check_invariants(const Transaction& t, const std::vector<E>& path) {
  const Money price = fresh().price;
  const bool funded = std::find(path.begin(), path.end(), E::FundEscrow) != path.end();
  const bool delivered = std::find(path.begin(), path.end(), E::DeliverData) != path.end();
  ASSERT_LE(t.consent_count, 2);
  ASSERT_GE(t.escrow_balance.micros(), 0);
  if (t.released.micros() != 0) ASSERT_TRUE(delivered);
  if (funded) {
    ASSERT_EQ((t.escrow_balance + t.released + t.refunded).micros(), price.micros());
  } else {
    ASSERT_EQ(t.escrow_balance.micros() + t.released.micros() + t.refunded.micros(), 0);
  }
  if (t.state == S::Aborted && funded) {
    ASSERT_EQ(t.refunded.micros(), price.micros());
    ASSERT_EQ(t.escrow_balance.micros(), 0);
  }
  if (t.state == S::Settled) {
    ASSERT_EQ(t.consent_count, 2);
    ASSERT_EQ(t.released.micros(), price.micros());
    // Ordered projection: price consent, subsample consent or waiver, funding,
    // delivery, release.
    std::vector<E> consents;
    for (E e : path) {
      if (is_consent_event(e)) consents.push_back(e);
    }
    ASSERT_EQ(consents.size(), 2u);
    ASSERT_EQ(consents[0], E::BuyerAcceptsPrice);
    ASSERT_TRUE(consents[1] == E::AcceptSubsample || consents[1] == E::WaiveSubsample);
    auto pos = [&](E e) { return std::find(path.begin(), path.end(), e) - path.begin(); };
    const auto second = std::find(path.begin(), path.end(), consents[1]) - path.begin();
    ASSERT_LT(pos(E::BuyerAcceptsPrice), second);
    ASSERT_LT(second, pos(E::FundEscrow));
    ASSERT_LT(pos(E::FundEscrow), pos(E::DeliverData));
    ASSERT_LT(pos(E::DeliverData), pos(E::ReleaseEscrow));
    ASSERT_EQ(path.back(), E::ReleaseEscrow);
  }
}

}  // namespace

TEST(Transitions, AcceptPriceIsFirstConsent) {
  const Transaction t = run({E::BuyerAcceptsPrice});
  EXPECT_EQ(t.state, S::PriceAccepted);
  EXPECT_EQ(t.consent_count, 1);
}

TEST(Transitions, FundingBeforeConsentIsIllegal) {
  try {
    run({E::FundEscrow});
    FAIL();
  } catch (const MarketError& e) {
    EXPECT_EQ(e.code(), ErrorCode::IllegalTransition);
  }
}

TEST(Transitions, HappyPathsSettleWithTwoConsents) {
  for (E second : {E::WaiveSubsample, E::RequestSubsample}) {
    Transaction t = run({E::BuyerAcceptsPrice, second});
    if (second == E::RequestSubsample) t = advance(t, E::AcceptSubsample);
    for (E e : {E::FundEscrow, E::DeliverData, E::ReleaseEscrow}) t = advance(t, e);
    EXPECT_EQ(t.state, S::Settled);
    EXPECT_EQ(t.consent_count, 2);
    EXPECT_EQ(t.released, fresh().price);
    EXPECT_EQ(t.escrow_balance.micros(), 0);
  }
}

TEST(Transitions, RefusalsRefundInFull) {
  const Transaction d = run({E::BuyerAcceptsPrice, E::WaiveSubsample, E::FundEscrow,
                             E::SellerRefusesDelivery});
  EXPECT_EQ(d.state, S::Aborted);
  EXPECT_EQ(d.abort_reason, AbortReason::DeliveryRefused);
  EXPECT_EQ(d.refunded, fresh().price);
  const Transaction f = run({E::BuyerAcceptsPrice, E::WaiveSubsample, E::BuyerRefusesFunding});
  EXPECT_EQ(f.abort_reason, AbortReason::FundingRefused);
  EXPECT_EQ(f.refunded.micros(), 0);
  EXPECT_EQ(run({E::BuyerRejectsPrice}).abort_reason, AbortReason::PriceRejected);
  EXPECT_EQ(run({E::BuyerAcceptsPrice, E::RequestSubsample, E::RejectSubsample}).abort_reason,
            AbortReason::SubsampleRejected);
}

TEST(Transitions, DeliveredDataCannotBeCancelled) {
  const Transaction t =
      run({E::BuyerAcceptsPrice, E::WaiveSubsample, E::FundEscrow, E::DeliverData});
  EXPECT_FALSE(find_transition(t.state, E::CounterpartyExpelled).has_value());
  EXPECT_FALSE(find_transition(t.state, E::SellerRefusesDelivery).has_value());
}

TEST(Transitions, TerminalStatesAcceptNothing) {
  for (E e : kAllTxnEvents) {
    EXPECT_FALSE(find_transition(S::Settled, e).has_value());
    EXPECT_FALSE(find_transition(S::Aborted, e).has_value());
  }
}

TEST(ModelCheck, ExhaustiveReachability) {
  // Breadth-first over every legal event sequence; the machine is acyclic.
  std::deque<std::pair<Transaction, std::vector<E>>> queue{{fresh(), {}}};
  std::set<S> reached;
  std::size_t paths = 0;
  std::size_t settled_paths = 0;
  while (!queue.empty()) {
    auto [t, path] = queue.front();
    queue.pop_front();
    reached.insert(t.state);
    check_invariants(t, path);
    ++paths;
    settled_paths += t.state == S::Settled;
    for (E e : kAllTxnEvents) {
      if (!find_transition(t.state, e)) {
        EXPECT_THROW(advance(t, e), MarketError);
        continue;
      }
      auto next = path;
      next.push_back(e);
      ASSERT_LE(next.size(), 8u) << "cycle in the transition table";
      queue.emplace_back(advance(t, e), std::move(next));
    }
  }
  EXPECT_EQ(reached.size(), kAllTxnStates.size());
  EXPECT_EQ(settled_paths, 2u);
  EXPECT_GT(paths, 10u);
}

TEST(ModelCheck, RandomEventFuzz) {
  Rng rng(31337);
  int settled = 0;
  for (int run_no = 0; run_no < 100000; ++run_no) {
    Transaction t = fresh();
    std::vector<E> path;
    const int length = 1 + static_cast<int>(rng.index(12));
    for (int k = 0; k < length; ++k) {
      const E e = kAllTxnEvents[rng.index(kAllTxnEvents.size())];
      try {
        t = advance(t, e);
        path.push_back(e);
      } catch (const MarketError& err) {
        ASSERT_EQ(err.code(), ErrorCode::IllegalTransition);
        ASSERT_FALSE(find_transition(t.state, e).has_value());
      }
      check_invariants(t, path);
    }
    settled += t.state == S::Settled;
  }
  EXPECT_GT(settled, 0);
}

TEST(TransitionTable, PublishedCopyIsCurrent) {
  const std::string published = oracle::slurp(std::string(DMKT_DOCS_DIR) + "/transition_table.jsonl");
  EXPECT_EQ(published, transition_table_jsonl());
  std::size_t lines = std::count(published.begin(), published.end(), '\n');
  EXPECT_EQ(lines, transition_table().size());
}

TEST(TransitionNames, RoundTrip) {
  for (S s : kAllTxnStates) EXPECT_EQ(txn_state_from_string(to_string(s)), s);
  EXPECT_EQ(abort_reason_from_string("CounterpartyExpelled"), AbortReason::CounterpartyExpelled);
}

namespace {

DataSet walking(Eigen::Index n, std::uint64_t seed) {
  Rng r(seed);
  Eigen::MatrixXd v(n, 2);
  std::vector<Tick> ts(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    v(i, 0) = r.normal(5000, 1500);
    v(i, 1) = r.normal(3.5, 1.0);
    ts[static_cast<std::size_t>(i)] = i;
  }
  return DataSet("activity/walking", Provenance::DirectlyProvided, {"steps", "distance_km"}, ts, v);
}

}  // namespace

TEST(Subsample, Sizes) {
  const SubsamplePolicy p;
  EXPECT_EQ(subsample_size(1000, p), 50);
  EXPECT_EQ(subsample_size(8, p), 8);
  EXPECT_EQ(subsample_size(100, p), 10);
  EXPECT_EQ(subsample_size(201, p), 11);
  EXPECT_EQ(subsample_size(1, p), 1);
}

TEST(Subsample, DrawIsDeterministicWithoutReplacement) {
  const DataSet d = walking(1000, 1);
  const Subsample a = draw_subsample(d, SubsamplePolicy{}, 9);
  const Subsample b = draw_subsample(d, SubsamplePolicy{}, 9);
  EXPECT_EQ(a.points, b.points);
  EXPECT_EQ(a.points.size(), 50);
  const auto& ts = a.points.timestamps();
  EXPECT_TRUE(std::adjacent_find(ts.begin(), ts.end(), std::greater_equal<Tick>()) == ts.end());
  for (Eigen::Index i = 0; i < a.points.size(); ++i) {
    const Tick t = ts[static_cast<std::size_t>(i)];
    EXPECT_EQ(a.points.values().row(i), d.values().row(t));
  }
}

TEST(Subsample, HonestSamplesPass) {
  int pass = 0;
  const int trials = 2000;
  for (int s = 0; s < trials; ++s) {
    const double noise = 0.25 * (s % 5);
    const DataSet listed = inject_noise(walking(1000, 100 + s), {noise, 7u + s});
    const DataDescriptor desc = describe_dataset(listed, noise);
    pass += validate_subsample(draw_subsample(listed, SubsamplePolicy{}, s), desc, noise).pass;
  }
  EXPECT_GE(pass, 0.99 * trials);
}

TEST(Subsample, ShiftedJunkFails) {
  const DataSet honest = walking(1000, 3);
  const DataDescriptor desc = describe_dataset(honest, 0.0);
  Rng r(4);
  Eigen::MatrixXd junk(1000, 2);
  for (Eigen::Index i = 0; i < 1000; ++i) {
    for (int f = 0; f < 2; ++f) {
      const auto& fs = desc.fields[static_cast<std::size_t>(f)];
      junk(i, f) = fs.mean + 5.0 * fs.std + r.uniform(-fs.std, fs.std);
    }
  }
  const DataSet payload = honest.with_values(junk);
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto v = validate_subsample(draw_subsample(payload, SubsamplePolicy{}, s), desc, 0.5);
    EXPECT_FALSE(v.pass);
    EXPECT_FALSE(v.reason.empty());
  }
}

TEST(Subsample, PolicyValidation) {
  SubsamplePolicy p;
  p.fraction = 0;
  try {
    validate(p);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.path(), "params.subsample.fraction");
  }
}
