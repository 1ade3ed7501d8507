/*
   Copyright 2026 The burstkit Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <concepts>
#include <cstdint>
#include <ostream>
#include <vector>

#include "burstkit/model.hpp"

namespace burstkit {

template <class State>
struct Event {
    double time = 0.0;
    State before;
    State after;
};

/// Discrete chains hold their state between events.
struct ConstantFlow {};

/// Linear flow dx1 = -g1 x1, dx2 = -g2 x2 + k2 x1 shared by every segment.
struct FlowParams {
    double g1 = 1.0;
    double g2 = 1.0;
    double k2 = 1.0;
};

/// Event-indexed sample path on [0, t_end].
template <class State, class Flow>
struct Trajectory {
    State initial;
    Flow flow;
    std::vector<Event<State>> events;
    double t_end = 0.0;
    /// State at t_end (equal to the last post-jump state for discrete chains).
    State terminal;

    void start(const State& s) { initial = terminal = s; }
    void record(double t, const State& before, const State& after) { events.push_back({t, before, after}); }
    void finish(double t, const State& s) {
        t_end = t;
        terminal = s;
    }
};

using DiscreteTrajectory = Trajectory<DiscreteState, ConstantFlow>;
using ContinuousTrajectory = Trajectory<ContinuousState, FlowParams>;

/// Receives the events of one simulated path; engines call start(), record()
/// per jump and finish() once, in that order.
template <class S, class State>
concept EventSink = requires(S sink, double t, const State& s) {
    sink.start(s);
    sink.record(t, s, s);
    sink.finish(t, s);
};

/// Sinks exposing `bool stop_requested() const` can end a run early.
template <class S>
concept StoppableSink = requires(const S& sink) {
    { sink.stop_requested() } -> std::convertible_to<bool>;
};

template <class S>
bool stop_requested(const S& sink) {
    if constexpr (StoppableSink<S>)
        return sink.stop_requested();
    else
        return false;
}

/// Keeps only the terminal state and the number of events.
template <class State>
struct TerminalSink {
    State terminal;
    double t_end = 0.0;
    std::uint64_t events = 0;

    void start(const State& s) { terminal = s; }
    void record(double, const State&, const State&) { ++events; }
    void finish(double t, const State& s) {
        t_end = t;
        terminal = s;
    }
};

/// Writes (t, X1, X2) rows at event times after a header carrying provenance.
template <class State, class Flow>
void write_csv(std::ostream& os, const Trajectory<State, Flow>& traj, std::uint64_t spec_hash,
               std::uint64_t seed) {
    os << "# spec_hash=" << std::hex << spec_hash << std::dec << " seed=" << seed << '\n';
    os << "t,X1,X2\n";
    os.precision(17);
    os << 0.0 << ',' << traj.initial.x1 << ',' << traj.initial.x2 << '\n';
    for (const auto& e : traj.events) os << e.time << ',' << e.after.x1 << ',' << e.after.x2 << '\n';
}

}  // namespace burstkit
