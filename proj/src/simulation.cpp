#include "snapsim/simulation.hpp"

#include <algorithm>
#include <cassert>

#include "snapsim/errors.hpp"

namespace snapsim {

Simulation::Simulation(const ExperimentConfig& cfg)
    : cfg_(cfg),
      n_(cfg.hosts),
      carries_vc_(cfg.algorithm == Algorithm::Mattern || cfg.effective_ordering() == Ordering::Causal),
      transport_(n_, cfg.effective_ordering(), sched_),
      latency_rng_(cfg.seed, "latency"),
      control_latency_rng_(cfg.seed, "control-latency"),
      interval_rng_(cfg.seed, "intervals"),
      destination_rng_(cfg.seed, "destinations"),
      app_latency_(cfg.latency),
      control_latency_(cfg.latency) {
    cfg_.validate();
    sched_.set_event_cap(cfg_.event_cap);
    sched_.set_handler([this](Event& ev) { handle_event(ev); });

    procs_.reserve(n_);
    for (ProcessId p = 0; p < n_; ++p)
        procs_.push_back(make_snapshot_process(cfg_.algorithm, p, n_, cfg_.initiator));
    if (carries_vc_) clocks_.assign(n_, VectorClock(n_));
    remaining_.assign(n_, cfg_.messages_per_host);
    app_sent_.assign(n_, 0);
    app_received_.assign(n_, 0);

    // Open-loop workload: every process runs its own send timer chain. First
    // gaps are drawn in pid order so the interval stream is reproducible.
    if (n_ >= 2) {
        for (ProcessId p = 0; p < n_; ++p) {
            if (remaining_[p] == 0) continue;
            Event ev;
            ev.at = next_send_gap(cfg_.interval, interval_rng_);
            ev.kind = EventKind::TimerFire;
            ev.target = p;
            sched_.schedule(std::move(ev));
        }
    }

    bool nothing_to_send = n_ < 2 || cfg_.messages_per_host == 0;
    if (cfg_.initiation == InitiationRule::AtTime) {
        Event ev;
        ev.at = cfg_.initiation_time;
        ev.kind = EventKind::SnapshotInitiate;
        ev.target = cfg_.initiator;
        sched_.schedule(std::move(ev));
        initiation_scheduled_ = true;
    } else if (nothing_to_send) {
        // after-first-send can never fire without traffic; initiate at t=0.
        Event ev;
        ev.at = 0.0;
        ev.kind = EventKind::SnapshotInitiate;
        ev.target = cfg_.initiator;
        sched_.schedule(std::move(ev));
        initiation_scheduled_ = true;
    }
}

void Simulation::trace_line(const std::string& line) {
    if (trace_) *trace_ << line << '\n';
}

void Simulation::handle_event(Event& ev) {
    switch (ev.kind) {
        case EventKind::TimerFire: handle_app_send(ev.target); break;
        case EventKind::SnapshotInitiate: handle_initiate(); break;
        case EventKind::MessageArrival:
            assert(ev.payload);
            handle_arrival(std::move(*ev.payload));
            break;
    }
}

void Simulation::handle_app_send(ProcessId p) {
    assert(remaining_[p] > 0);
    VirtualTime now = sched_.now();

    // Fixed draw order per send: destination, latency, next gap.
    std::uint32_t pick = destination_rng_.uniform_below(n_ - 1);
    ProcessId dst = pick < p ? pick : pick + 1;

    AppMessage m;
    m.id = next_msg_id_++;
    m.channel = ChannelId{p, dst};
    m.send_time = now;
    procs_[p]->on_app_send(m);
    if (carries_vc_) {
        clocks_[p] = tick(clocks_[p], p);
        m.vc = clocks_[p];
    }
    ++app_sent_[p];
    log_.send(now, m.channel, m.id, WireKind::App);
    trace_line("SEND t=" + format_time(now) + " ch=" + channel_str(m.channel) + " id=" +
               std::to_string(m.id) + " kind=app");

    VirtualTime lat = app_latency_.sample(latency_rng_);
    transport_.send(Envelope{m, nullptr}, lat);

    --remaining_[p];
    if (app_sent_[p] == 1) {
        ++first_sends_seen_;
        if (!initiation_scheduled_ && cfg_.initiation == InitiationRule::AfterFirstSend &&
            first_sends_seen_ == n_) {
            Event ev;
            ev.at = now;
            ev.kind = EventKind::SnapshotInitiate;
            ev.target = cfg_.initiator;
            sched_.schedule(std::move(ev));
            initiation_scheduled_ = true;
        }
    }
    if (remaining_[p] > 0) {
        Event ev;
        ev.at = now + next_send_gap(cfg_.interval, interval_rng_);
        ev.kind = EventKind::TimerFire;
        ev.target = p;
        sched_.schedule(std::move(ev));
    }
}

void Simulation::handle_initiate() {
    if (initiated_) return;
    initiated_ = true;
    VirtualTime now = sched_.now();
    ProcessId p = cfg_.initiator;

    if (cfg_.algorithm == Algorithm::Mattern) {
        // The initiation is an event: tick, then share the threshold.
        clocks_[p] = tick(clocks_[p], p);
        std::uint64_t s = clocks_[p][cfg_.initiator];
        for (auto& proc : procs_)
            static_cast<MatternProcess*>(proc.get())->set_threshold(s);
    }

    ProcessActions actions = procs_[p]->initiate(now, app_sent_[p], app_received_[p]);
    log_.record(now, p);
    trace_line("RECORD t=" + format_time(now) + " pid=" + std::to_string(p) + " algo=" +
               algorithm_name(cfg_.algorithm));
    execute_actions(p, actions);
}

void Simulation::execute_actions(ProcessId p, const ProcessActions& actions) {
    VirtualTime now = sched_.now();
    for (const ControlOut& out : actions.control) {
        std::vector<ProcessId> dsts;
        if (out.to) {
            dsts.push_back(*out.to);
        } else {
            for (ProcessId d = 0; d < n_; ++d)
                if (d != p) dsts.push_back(d);
        }
        std::vector<std::pair<Envelope, VirtualTime>> copies;
        copies.reserve(dsts.size());
        for (ProcessId d : dsts) {
            ControlMessage cm;
            cm.kind = out.kind;
            cm.id = next_msg_id_++;
            cm.channel = ChannelId{p, d};
            cm.send_time = now;
            if (carries_vc_) {
                clocks_[p] = tick(clocks_[p], p);
                cm.vc = clocks_[p];
            }
            Envelope env{cm, nullptr};
            log_.send(now, cm.channel, cm.id, env.wire());
            trace_line("SEND t=" + format_time(now) + " ch=" + channel_str(cm.channel) + " id=" +
                       std::to_string(cm.id) + " kind=" + wire_name(env.wire()));
            VirtualTime lat = control_latency_.sample(control_latency_rng_);
            copies.emplace_back(std::move(env), lat);
        }
        // One stamped multicast under causal ordering; plain sends otherwise.
        transport_.send_group(std::move(copies));
    }
}

void Simulation::handle_arrival(Envelope env) {
    ProcessId pid = env.channel().dst;
    transport_.accept_arrival(std::move(env));
    while (auto ready = transport_.next_delivery(pid)) process_delivery(std::move(*ready));
}

void Simulation::process_delivery(Envelope env) {
    VirtualTime now = sched_.now();
    ProcessId pid = env.channel().dst;
    SnapshotProcess& proc = *procs_[pid];

    // Record-before-process: a triggering message is not part of the local
    // state it triggers.
    if (proc.records_on(env)) {
        proc.record(now, app_sent_[pid], app_received_[pid]);
        log_.record(now, pid);
        trace_line("RECORD t=" + format_time(now) + " pid=" + std::to_string(pid) + " algo=" +
                   algorithm_name(cfg_.algorithm));
    }

    log_.deliver(now, env.channel(), env.id(), env.wire());
    trace_line("DELIVER t=" + format_time(now) + " ch=" + channel_str(env.channel()) + " id=" +
               std::to_string(env.id()) + " kind=" + wire_name(env.wire()));

    if (env.is_app()) ++app_received_[pid];
    if (carries_vc_ && env.vc()) clocks_[pid] = tick(merge(clocks_[pid], *env.vc()), pid);

    ProcessActions actions = proc.on_delivered(env, now);
    execute_actions(pid, actions);
}

VirtualTime Simulation::run_to_quiescence() {
    quiescence_time_ = sched_.run_until_quiescent();
    quiescent_ = true;
    return quiescence_time_;
}

void Simulation::finalize_at_quiescence() {
    if (!quiescent_ || !sched_.empty())
        throw CalledBeforeQuiescenceError("finalize_at_quiescence before the event queue drained");
    if (finalized_) return;
    finalized_ = true;

    // Message conservation: everything sent must have been delivered.
    if (transport_.sent_count() != transport_.delivered_count() || transport_.causal_pending() != 0)
        throw ConsistencyViolationError(
            "message loss at quiescence: sent " + std::to_string(transport_.sent_count()) + ", delivered " +
            std::to_string(transport_.delivered_count()) + ", buffered " +
            std::to_string(transport_.causal_pending()));

    // Processes the wave never reached record at quiescence with empty
    // channel state (every receipt was pre-record, so the cut stays clean).
    for (ProcessId p = 0; p < n_; ++p) {
        if (procs_[p]->recorded()) continue;
        if (cfg_.algorithm == Algorithm::ChandyLamport || cfg_.algorithm == Algorithm::AbAv)
            throw ConsistencyViolationError("process " + std::to_string(p) +
                                            " never recorded under a control-message algorithm");
        procs_[p]->record(quiescence_time_, app_sent_[p], app_received_[p]);
        log_.record(quiescence_time_, p);
        trace_line("RECORD t=" + format_time(quiescence_time_) + " pid=" + std::to_string(p) + " algo=" +
                   algorithm_name(cfg_.algorithm));
    }
    for (ProcessId p = 0; p < n_; ++p) procs_[p]->finalize_at_quiescence(quiescence_time_);
    for (ProcessId p = 0; p < n_; ++p) {
        if (!procs_[p]->window_complete())
            throw ConsistencyViolationError("window for process " + std::to_string(p) +
                                            " still open after finalization");
    }

    if (trace_) {
        for (ProcessId p = 0; p < n_; ++p) {
            const RecordingWindow& w = procs_[p]->window();
            trace_line("WINDOW pid=" + std::to_string(p) + " start=" + format_time(w.start) + " end=" +
                       format_time(w.end) + " finalized=" + (w.finalized_at_quiescence ? "true" : "false"));
        }
        for (ProcessId p = 0; p < n_; ++p) {
            LocalSnapshot ls = procs_[p]->local_snapshot();
            for (const auto& [ch, ids] : ls.channel_states) {
                std::string line = "CHANNELSTATE ch=" + channel_str(ch) + " msgs=";
                for (std::size_t i = 0; i < ids.size(); ++i) {
                    if (i) line += ',';
                    line += std::to_string(ids[i]);
                }
                trace_line(line);
            }
        }
    }
}

RunResult Simulation::collect() {
    if (!finalized_)
        throw CalledBeforeQuiescenceError("collect before finalize_at_quiescence");
    RunResult out;
    out.snapshot.snapshot_id = 0;
    out.snapshot.locals.reserve(n_);
    out.windows.reserve(n_);
    for (ProcessId p = 0; p < n_; ++p) {
        out.snapshot.locals.push_back(procs_[p]->local_snapshot());
        out.windows.push_back(procs_[p]->window());
    }
    out.stats = duration_stats(out.windows, n_);
    out.log = log_;
    out.quiescence_time = quiescence_time_;
    return out;
}

RunResult Simulation::run() {
    run_to_quiescence();
    finalize_at_quiescence();
    return collect();
}

} // namespace snapsim
