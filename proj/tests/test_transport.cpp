#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <optional>
#include <utility>
#include <vector>

#include "snapsim/engine.hpp"
#include "snapsim/errors.hpp"
#include "snapsim/transport.hpp"

using namespace snapsim;

namespace {

Envelope app_env(MsgId id, ProcessId src, ProcessId dst) {
    AppMessage m;
    m.id = id;
    m.channel = {src, dst};
    return Envelope{std::move(m), nullptr};
}

struct Delivery {
    VirtualTime at;
    MsgId id;
    bool operator==(const Delivery&) const = default;
};

// Two sends on 0->1: m1 at t=0 with latency 5 (raw arrival 5), m2 at t=1 with
// latency 1 (raw arrival 2). FIFO must clamp m2 behind m1; NonFIFO must not.
std::vector<Delivery> run_two_sends(Ordering ord) {
    Scheduler sched;
    Transport tp(2, ord, sched);
    std::vector<Delivery> out;
    sched.set_handler([&](Event& ev) {
        if (ev.kind == EventKind::TimerFire) {
            if (sched.now() == 0.0)
                tp.send(app_env(1, 0, 1), 5.0);
            else
                tp.send(app_env(2, 0, 1), 1.0);
        } else if (ev.kind == EventKind::MessageArrival) {
            tp.accept_arrival(std::move(*ev.payload));
            while (auto env = tp.next_delivery(ev.target)) out.push_back({sched.now(), env->id()});
        }
    });
    sched.schedule({0.0, EventKind::TimerFire, 0, std::nullopt, 0});
    sched.schedule({1.0, EventKind::TimerFire, 0, std::nullopt, 0});
    sched.run_until_quiescent();
    return out;
}

} // namespace

TEST_CASE("fifo clamps a channel's arrivals to be non-decreasing") {
    auto out = run_two_sends(Ordering::Fifo);
    REQUIRE(out.size() == 2);
    CHECK(out[0] == Delivery{5.0, 1}); // m1 first: same clamped time, earlier seq
    CHECK(out[1] == Delivery{5.0, 2});
}

TEST_CASE("non-fifo delivers in raw arrival order") {
    auto out = run_two_sends(Ordering::NonFifo);
    REQUIRE(out.size() == 2);
    CHECK(out[0] == Delivery{2.0, 2}); // m2 overtakes
    CHECK(out[1] == Delivery{5.0, 1});
}

TEST_CASE("send/delivery counters add up") {
    Scheduler sched;
    Transport tp(3, Ordering::NonFifo, sched);
    sched.set_handler([&](Event& ev) {
        tp.accept_arrival(std::move(*ev.payload));
        while (tp.next_delivery(ev.target)) {
        }
    });
    tp.send(app_env(1, 0, 1), 1.0);
    tp.send(app_env(2, 0, 1), 1.0);
    tp.send(app_env(3, 1, 0), 2.0);
    CHECK(tp.sent_count() == 3);
    CHECK(tp.channel_sent({0, 1}) == 2);
    CHECK(tp.channel_sent({1, 0}) == 1);
    CHECK(tp.delivered_count() == 0);
    sched.run_until_quiescent();
    CHECK(tp.delivered_count() == 3);
    CHECK(tp.channel_delivered({0, 1}) == 2);
    CHECK(tp.channel_delivered({1, 0}) == 1);
}

TEST_CASE("send validation") {
    Scheduler sched;
    Transport tp(2, Ordering::Fifo, sched);
    CHECK_THROWS_AS(tp.send(app_env(1, 0, 0), 1.0), BadProcessIdError); // self-channel
    CHECK_THROWS_AS(tp.send(app_env(1, 0, 5), 1.0), BadProcessIdError); // dst out of range
    CHECK_THROWS_AS(tp.send(app_env(1, 0, 1), 0.0), InvalidParametersError);
    CHECK_THROWS_AS(tp.send(app_env(1, 0, 1), -3.0), InvalidParametersError);
}

TEST_CASE("bss deliverability on hand-checked clocks") {
    // Receiver has delivered 2 from p0 and 1 from p1.
    VectorClock local{std::vector<std::uint64_t>{2, 1, 0}};
    // Next-in-sequence from p1, no unmet dependencies: deliverable.
    CHECK(bss_deliverable(VectorClock{std::vector<std::uint64_t>{2, 2, 0}}, 1, local));
    // Depends on a third message from p0 that has not been delivered.
    CHECK(!bss_deliverable(VectorClock{std::vector<std::uint64_t>{3, 2, 0}}, 1, local));
    // Not the next message from its sender (one was skipped).
    CHECK(!bss_deliverable(VectorClock{std::vector<std::uint64_t>{2, 3, 0}}, 1, local));
    // Stale duplicate (already counted) is not deliverable either.
    CHECK(!bss_deliverable(VectorClock{std::vector<std::uint64_t>{2, 1, 0}}, 1, local));

    CHECK_THROWS_AS(bss_deliverable(VectorClock{std::vector<std::uint64_t>{1, 1}}, 0, local),
                    LengthMismatchError);
    CHECK_THROWS_AS(bss_deliverable(local, 7, local), BadProcessIdError);
}

TEST_CASE("causal router holds back a message that causally follows an undelivered one") {
    CausalRouter r(3);
    // p0 multicasts `a` to p1 and p2.
    auto sa = r.stamp(0, {1, 2});
    Envelope a1 = app_env(10, 0, 1);
    a1.stamp = sa;
    Envelope a2 = app_env(11, 0, 2);
    a2.stamp = sa;

    // p1 delivers its copy, then sends `b` to p2; `b` now depends on `a`.
    r.buffer_arrival(a1);
    REQUIRE(r.next_deliverable(1).has_value());
    Envelope b = app_env(12, 1, 2);
    b.stamp = r.stamp(1, {2});
    CHECK(b.stamp->at(0, 2) == 1); // the dependency rides along

    // At p2, `b` arrives first and must wait for `a`.
    r.buffer_arrival(b);
    CHECK(!r.next_deliverable(2).has_value());
    CHECK(r.pending_count() == 1);
    r.buffer_arrival(a2);
    auto drained = r.drain(2);
    REQUIRE(drained.size() == 2);
    CHECK(drained[0].id() == 11);
    CHECK(drained[1].id() == 12);
    CHECK(r.pending_count() == 0);
    CHECK(r.delivered_from(2, 0) == 1);
    CHECK(r.delivered_from(2, 1) == 1);
}

TEST_CASE("group stamps are atomic, per-destination stamps are not") {
    // One stamp for the whole multicast: each copy carries every sibling's
    // count, so anything sent after delivering one copy depends on them all.
    CausalRouter grouped(3);
    auto s = grouped.stamp(0, {1, 2});
    CHECK(s->at(0, 1) == 1);
    CHECK(s->at(0, 2) == 1);

    // Stamping destinations one at a time leaks a window: the copy to p1
    // does not know about the copy to p2.
    CausalRouter sequential(3);
    auto s1 = sequential.stamp(0, {1});
    auto s2 = sequential.stamp(0, {2});
    CHECK(s1->at(0, 2) == 0);
    CHECK(s2->at(0, 1) == 1);
}

TEST_CASE("transport send_group keeps causal broadcasts ahead of their consequences") {
    // p0 multicasts `r` to p1 (slow copy) and p2 (fast copy). p1 reacts by
    // sending `m` to p2 with a latency that beats p1's own copy... of course
    // p1 already has its copy; the race is at p2 between `m` and r's slow
    // copy. With a shared stamp, `m` must queue behind `r` at p2.
    Scheduler sched;
    Transport tp(3, Ordering::Causal, sched);
    std::vector<MsgId> delivered_at_2;
    sched.set_handler([&](Event& ev) {
        tp.accept_arrival(std::move(*ev.payload));
        while (auto env = tp.next_delivery(ev.target)) {
            if (ev.target == 2) delivered_at_2.push_back(env->id());
            if (ev.target == 1 && env->id() == 1) tp.send(app_env(3, 1, 2), 1.0);
        }
    });
    std::vector<std::pair<Envelope, VirtualTime>> copies;
    copies.emplace_back(app_env(1, 0, 1), 2.0);  // to p1, arrives t=2
    copies.emplace_back(app_env(2, 0, 2), 10.0); // to p2, arrives t=10
    tp.send_group(std::move(copies));
    sched.run_until_quiescent();
    // `m` (id 3) reaches p2 at t=3 but may only deliver after `r` (id 2).
    REQUIRE(delivered_at_2.size() == 2);
    CHECK(delivered_at_2[0] == 2);
    CHECK(delivered_at_2[1] == 3);
    CHECK(tp.causal_pending() == 0);
}

TEST_CASE("send_group validation under causal ordering") {
    Scheduler sched;
    Transport tp(3, Ordering::Causal, sched);
    std::vector<std::pair<Envelope, VirtualTime>> mixed;
    mixed.emplace_back(app_env(1, 0, 1), 1.0);
    mixed.emplace_back(app_env(2, 1, 2), 1.0);
    CHECK_THROWS_AS(tp.send_group(std::move(mixed)), BadProcessIdError);

    std::vector<std::pair<Envelope, VirtualTime>> zero_lat;
    zero_lat.emplace_back(app_env(3, 0, 1), 0.0);
    CHECK_THROWS_AS(tp.send_group(std::move(zero_lat)), InvalidParametersError);

    CHECK_THROWS_AS(tp.accept_arrival(app_env(4, 0, 1)), MissingVectorClockError);
}
