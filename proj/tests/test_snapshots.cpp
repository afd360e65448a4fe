#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <vector>

#include "snapsim/errors.hpp"
#include "snapsim/harness.hpp"
#include "snapsim/snapshots.hpp"
#include "support/helpers.hpp"

using namespace snapsim;

namespace {

Envelope app_env(MsgId id, ProcessId src, ProcessId dst, MsgColor color = MsgColor::White,
                 Epoch epoch = Epoch::PreRecord) {
    AppMessage m;
    m.id = id;
    m.channel = {src, dst};
    m.color = color;
    m.epoch = epoch;
    return Envelope{std::move(m), nullptr};
}

Envelope control_env(ControlKind kind, ProcessId src, ProcessId dst) {
    ControlMessage c;
    c.kind = kind;
    c.channel = {src, dst};
    return Envelope{std::move(c), nullptr};
}

} // namespace

// Two processes, worked through on paper: p1's message m (id 7) is in flight
// when p0 initiates at t=0. The marker reaches p1 at t=2, m reaches p0 at
// t=3, and p1's marker closes p0's last channel at t=4.
TEST_CASE("chandy-lamport: two-process run matches the hand computation") {
    ChandyLamportProcess p0(0, 2);
    ChandyLamportProcess p1(1, 2);

    auto init = p0.initiate(0.0, 0, 0);
    REQUIRE(init.control.size() == 1);
    CHECK(init.control[0].kind == ControlKind::Marker);
    CHECK(!init.control[0].to.has_value()); // broadcast
    CHECK(p0.recorded());
    CHECK(!p0.window_complete());

    Envelope mk01 = control_env(ControlKind::Marker, 0, 1);
    REQUIRE(p1.records_on(mk01));
    p1.record(2.0, 1, 0);
    auto echo = p1.on_delivered(mk01, 2.0);
    REQUIRE(echo.control.size() == 1); // p1 relays its own marker wave
    CHECK(p1.window_complete());
    CHECK(p1.window().start == 2.0);
    CHECK(p1.window().end == 2.0);
    CHECK(p1.window().duration() == 0.0);

    Envelope m = app_env(7, 1, 0);
    CHECK(!p0.records_on(m)); // app traffic never triggers a record
    p0.on_delivered(m, 3.0);

    Envelope mk10 = control_env(ControlKind::Marker, 1, 0);
    CHECK(!p0.records_on(mk10));
    auto after = p0.on_delivered(mk10, 4.0);
    CHECK(after.control.empty()); // initiator broadcast already happened
    CHECK(p0.window_complete());
    CHECK(p0.window().start == 0.0);
    CHECK(p0.window().end == 4.0);
    CHECK(p0.window().duration() == 4.0);

    LocalSnapshot s0 = p0.local_snapshot();
    CHECK(s0.channel_states.at(ChannelId{1, 0}) == std::vector<MsgId>{7});
    LocalSnapshot s1 = p1.local_snapshot();
    CHECK(s1.channel_states.at(ChannelId{0, 1}).empty());
    CHECK(s1.sent_count == 1);
    CHECK(s1.record_time == 2.0);
}

TEST_CASE("chandy-lamport: app traffic after the channel closed is not captured") {
    ChandyLamportProcess p0(0, 2);
    p0.initiate(0.0, 0, 0);
    p0.on_delivered(control_env(ControlKind::Marker, 1, 0), 1.0); // closes 1->0
    p0.on_delivered(app_env(9, 1, 0), 2.0);                       // post-marker: not in transit
    CHECK(p0.local_snapshot().channel_states.at(ChannelId{1, 0}).empty());
}

TEST_CASE("chandy-lamport: protocol errors") {
    ChandyLamportProcess p(0, 2);
    p.initiate(0.0, 0, 0);
    CHECK_THROWS_AS(p.record(1.0, 0, 0), AlreadyRecordedError);
    p.on_delivered(control_env(ControlKind::Marker, 1, 0), 1.0);
    CHECK_THROWS_AS(p.on_delivered(control_env(ControlKind::Marker, 1, 0), 2.0), DuplicateMarkerError);
    CHECK_THROWS_AS(p.on_delivered(control_env(ControlKind::SnapshotRequest, 1, 0), 3.0),
                    ConsistencyViolationError);
}

// Lai-Yang on two processes, also worked through on paper. p0 sends one white
// (ws), p1 sends two whites (w1, w2). ws reaches p1 before anyone records, so
// it is not in transit. p0 records at t=1 and sends a red carrying the frozen
// count "one white on 0->1". The red reaches p1 at t=3: p1 records there, and
// since it already saw the one declared white, the channel 0->1 terminates
// immediately (window [3,3]). w1 and w2 land at p0 after its record, so both
// are in transit; no red ever reaches p0, so p0 finalizes at quiescence with
// its window stretched to the last white at t=5.
TEST_CASE("lai-yang: two-process run matches the hand computation") {
    LaiYangProcess p0(0, 2);
    LaiYangProcess p1(1, 2);

    AppMessage ws;
    ws.id = 4;
    ws.channel = {0, 1};
    p0.on_app_send(ws);
    CHECK(ws.color == MsgColor::White);

    AppMessage w1, w2;
    w1.id = 1;
    w1.channel = {1, 0};
    w2.id = 2;
    w2.channel = {1, 0};
    p1.on_app_send(w1);
    p1.on_app_send(w2);

    Envelope ews{ws, nullptr};
    CHECK(!p1.records_on(ews)); // white never triggers
    p1.on_delivered(ews, 0.5);

    auto init = p0.initiate(1.0, 1, 0);
    CHECK(init.control.empty()); // no control plane at all

    AppMessage r;
    r.id = 3;
    r.channel = {0, 1};
    p0.on_app_send(r);
    CHECK(r.color == MsgColor::Red);
    REQUIRE(r.white_sent_counts);
    CHECK(r.white_sent_counts->at(ChannelId{0, 1}) == 1);

    p0.on_delivered(Envelope{w1, nullptr}, 2.0); // in transit: white after record

    Envelope er{r, nullptr};
    REQUIRE(p1.records_on(er));
    p1.record(3.0, 2, 1);
    p1.on_delivered(er, 3.0);
    CHECK(p1.window_complete()); // declared count was already met
    CHECK(p1.window().start == 3.0);
    CHECK(p1.window().end == 3.0);
    CHECK(!p1.window().finalized_at_quiescence);
    CHECK(p1.local_snapshot().channel_states.at(ChannelId{0, 1}).empty());

    p0.on_delivered(Envelope{w2, nullptr}, 5.0);
    CHECK(!p0.window_complete()); // still waiting for a red that never comes
    p0.finalize_at_quiescence(10.0);
    CHECK(p0.window_complete());
    CHECK(p0.window().start == 1.0);
    CHECK(p0.window().end == 5.0); // closed at the last white, not at t=10
    CHECK(p0.window().finalized_at_quiescence);
    CHECK(p0.local_snapshot().channel_states.at(ChannelId{1, 0}) == std::vector<MsgId>{1, 2});
}

TEST_CASE("lai-yang: a silent channel finalizes at the window start") {
    LaiYangProcess p(0, 3);
    p.initiate(4.0, 0, 0);
    p.finalize_at_quiescence(20.0);
    CHECK(p.window().start == 4.0);
    CHECK(p.window().end == 4.0);
    CHECK(p.window().finalized_at_quiescence);
}

TEST_CASE("lai-yang: red without piggybacked counts is a protocol error") {
    LaiYangProcess p(0, 2);
    p.initiate(0.0, 0, 0);
    Envelope red = app_env(5, 1, 0, MsgColor::Red);
    CHECK_THROWS_AS(p.on_delivered(red, 1.0), MissingVectorClockError);
    CHECK_THROWS_AS(p.on_delivered(control_env(ControlKind::Marker, 1, 0), 1.0),
                    ConsistencyViolationError);
}

TEST_CASE("mattern: the threshold test reads the piggybacked clock") {
    MatternProcess p(1, 2, /*initiator*/ 0);
    AppMessage m;
    m.id = 1;
    m.channel = {0, 1};
    m.vc = VectorClock{std::vector<std::uint64_t>{3, 0}};
    CHECK(!p.records_on(Envelope{m, nullptr})); // no threshold installed yet
    p.set_threshold(3);
    CHECK(p.records_on(Envelope{m, nullptr}));
    m.vc = VectorClock{std::vector<std::uint64_t>{2, 5}};
    CHECK(!p.records_on(Envelope{m, nullptr})); // initiator entry below s

    AppMessage bare;
    bare.id = 2;
    bare.channel = {0, 1};
    CHECK_THROWS_AS((void)p.records_on(Envelope{bare, nullptr}), MissingVectorClockError);
}

TEST_CASE("lai-yang and mattern produce identical runs on the same workload") {
    // The coloring rule (red) and the threshold rule (vc[initiator] >= s) draw
    // the same pre/post line, so with the workload pinned by the shared seed
    // the two algorithms must agree run for run.
    for (std::uint64_t seed : {7ULL, 11ULL, 42ULL}) {
        ExperimentConfig ly;
        ly.hosts = 6;
        ly.messages_per_host = 5;
        ly.algorithm = Algorithm::LaiYang;
        ly.seed = seed;
        ExperimentConfig mt = ly;
        mt.algorithm = Algorithm::Mattern;

        RunResult a = run_experiment(ly);
        RunResult b = run_experiment(mt);

        REQUIRE(a.windows.size() == b.windows.size());
        for (std::size_t i = 0; i < a.windows.size(); ++i) {
            CHECK(a.windows[i].start == b.windows[i].start);
            CHECK(a.windows[i].end == b.windows[i].end);
            CHECK(a.windows[i].finalized_at_quiescence == b.windows[i].finalized_at_quiescence);
        }
        CHECK(a.stats.mean == b.stats.mean);
        CHECK(a.stats.stddev == b.stats.stddev);
        REQUIRE(a.snapshot.locals.size() == b.snapshot.locals.size());
        for (std::size_t i = 0; i < a.snapshot.locals.size(); ++i)
            CHECK(a.snapshot.locals[i].channel_states == b.snapshot.locals[i].channel_states);
    }
}

TEST_CASE("ab-av: requests trigger the record, notices close channels") {
    AbAvProcess p0(0, 3);
    auto init = p0.initiate(0.0, 2, 1);
    REQUIRE(init.control.size() == 2);
    CHECK(init.control[0].kind == ControlKind::SnapshotRequest);
    CHECK(init.control[1].kind == ControlKind::RecordedNotice);
    CHECK(!p0.window_complete());

    AbAvProcess p1(1, 3);
    Envelope req = control_env(ControlKind::SnapshotRequest, 0, 1);
    REQUIRE(p1.records_on(req));
    p1.record(1.0, 0, 0);
    auto acts = p1.on_delivered(req, 1.0);
    REQUIRE(acts.control.size() == 1);
    CHECK(acts.control[0].kind == ControlKind::RecordedNotice);

    // A duplicate request is absorbed without a second notice.
    Envelope req2 = control_env(ControlKind::SnapshotRequest, 2, 1);
    CHECK(!p1.records_on(req2));
    CHECK(p1.on_delivered(req2, 1.5).control.empty());

    // Tagging: pre-record before the request, post-record after.
    AbAvProcess p2(2, 3);
    AppMessage before;
    before.channel = {2, 0};
    p2.on_app_send(before);
    CHECK(before.epoch == Epoch::PreRecord);
    p2.record(2.0, 1, 0);
    AppMessage after;
    after.channel = {2, 0};
    p2.on_app_send(after);
    CHECK(after.epoch == Epoch::PostRecord);

    // p1 captures p2's pre-record message, then p2's notice closes 2->1.
    p1.on_delivered(app_env(21, 2, 1, MsgColor::White, Epoch::PreRecord), 2.5);
    CHECK(p1.local_snapshot().channel_states.at(ChannelId{2, 1}) == std::vector<MsgId>{21});
    p1.on_delivered(control_env(ControlKind::RecordedNotice, 2, 1), 3.0);
    CHECK(!p1.window_complete());
    p1.on_delivered(control_env(ControlKind::RecordedNotice, 0, 1), 4.0);
    CHECK(p1.window_complete());
    CHECK(p1.window().start == 1.0);
    CHECK(p1.window().end == 4.0);
}

TEST_CASE("ab-av: causal-delivery violations are loud") {
    AbAvProcess p(0, 3);

    // Post-record traffic must never beat the request here.
    CHECK_THROWS_AS(p.on_delivered(app_env(1, 1, 0, MsgColor::White, Epoch::PostRecord), 1.0),
                    ConsistencyViolationError);

    p.record(1.0, 0, 0);
    p.on_delivered(control_env(ControlKind::RecordedNotice, 1, 0), 2.0);
    // Pre-record traffic must never trail its sender's notice.
    CHECK_THROWS_AS(p.on_delivered(app_env(2, 1, 0, MsgColor::White, Epoch::PreRecord), 3.0),
                    ConsistencyViolationError);
    CHECK_THROWS_AS(p.on_delivered(control_env(ControlKind::RecordedNotice, 1, 0), 4.0),
                    ConsistencyViolationError);
    CHECK_THROWS_AS(p.on_delivered(control_env(ControlKind::Marker, 1, 0), 5.0),
                    ConsistencyViolationError);
}

TEST_CASE("factory dispatches on algorithm") {
    auto cl = make_snapshot_process(Algorithm::ChandyLamport, 0, 3, 0);
    auto ly = make_snapshot_process(Algorithm::LaiYang, 0, 3, 0);
    auto mt = make_snapshot_process(Algorithm::Mattern, 1, 3, 0);
    auto ab = make_snapshot_process(Algorithm::AbAv, 0, 3, 0);
    CHECK(dynamic_cast<ChandyLamportProcess*>(cl.get()));
    CHECK(dynamic_cast<LaiYangProcess*>(ly.get()));
    CHECK(dynamic_cast<MatternProcess*>(mt.get()));
    CHECK(dynamic_cast<AbAvProcess*>(ab.get()));
}

TEST_CASE("chandy-lamport snapshots capture exactly the in-transit messages") {
    // FIFO marker snapshots are exact: the captured channel states must equal
    // the messages whose send precedes the sender's record and whose delivery
    // follows the receiver's record, straight from the run log.
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        ExperimentConfig cfg;
        cfg.hosts = 4;
        cfg.messages_per_host = 6;
        cfg.algorithm = Algorithm::ChandyLamport;
        cfg.seed = seed;
        RunResult res = run_experiment(cfg);
        REQUIRE(res.consistency.ok);
        CHECK(test::snapshot_channel_states(res.snapshot) == test::in_transit_by_channel(res.log));
    }
}
