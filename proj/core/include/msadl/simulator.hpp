#pragma once

#include <compare>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "msadl/behaviour.hpp"
#include "msadl/diagnostic.hpp"
#include "msadl/model.hpp"
#include "msadl/model_set.hpp"
#include "msadl/rng.hpp"
#include "msadl/value.hpp"

namespace msadl {

enum class EventKind { Send, Deliver, ProcessStart, Reply, ReplyDelivered, Spawn, Terminate };

std::string_view to_string(EventKind k);

/// One observable step. `subject` is `Service#instance`; `thread` identifies
/// the parallel branch inside that instance (0 is the root).
struct TraceEvent {
    std::uint64_t step = 0;
    EventKind kind = EventKind::Send;
    std::string subject;
    std::uint32_t thread = 0;
    std::string operation;
    std::optional<std::uint64_t> callId;
    std::optional<std::uint64_t> messageId;
    /// Destination service of a Send, caller subject of a Reply.
    std::string peer;

    friend auto operator<=>(const TraceEvent&, const TraceEvent&) = default;
};

using Trace = std::vector<TraceEvent>;

nlohmann::json to_json(const TraceEvent& e);
/// JSON lines, one event per line.
std::string trace_to_jsonl(const Trace& t);

/// An enabled scheduler choice, in canonical order.
struct Action {
    std::string service;
    std::uint64_t instance = 0;
    std::uint32_t thread = 0;
    EventKind kind = EventKind::Send;
    std::string operation;
};

enum class NetworkStatus { Running, Terminated, Stuck };

struct Message {
    std::uint64_t id = 0;
    std::string service;
    std::string operation;
    ValueTree payload;
    std::optional<std::uint64_t> callId;
};

namespace sim_detail {

/// A Receive (or spawned replica) that consumed a message and has not yet
/// emitted ProcessStart.
struct PendingStart {
    Message message;
    std::string bindVar;
    Box<Term> body;
    std::optional<Expr> reply;
};

/// Reply owed to a suspended caller once the receive body finishes.
struct ReplyTask {
    std::uint64_t callId = 0;
    std::string operation;
    std::optional<Expr> reply;
};

using ContinuationItem = std::variant<Box<Term>, ReplyTask>;

enum class ThreadState { Ready, AwaitingReply, ReplyArrived, PendingStart, Joining, Guard, Done };

struct Thread {
    std::uint32_t id = 0;
    std::optional<std::uint32_t> parent;
    /// Remaining work, next item at the back.
    std::vector<ContinuationItem> continuation;
    ThreadState state = ThreadState::Ready;
    std::uint32_t liveChildren = 0;

    std::uint64_t callId = 0;
    std::string awaitingOperation;
    std::optional<std::string> responseVar;
    ValueTree response;
    std::optional<PendingStart> start;
};

struct Instance {
    std::uint64_t id = 0;
    std::map<std::uint32_t, Thread> threads;
    std::uint32_t nextThread = 1;
    std::map<std::string, ValueTree> variables;
    bool pendingSpawn = false;
    std::string spawnedBy;
};

struct ServiceRuntime {
    const JolieServiceModel* model = nullptr;
    std::size_t unit = 0;
    std::map<std::uint64_t, Instance> instances;
    std::uint64_t nextInstance = 0;
};

}  // namespace sim_detail

/// Simulator configuration and run-time state. Copyable, so schedulers can
/// branch on it; each copy evolves independently.
class NetworkState {
public:
    struct Build;

    /// Builds a network from every Jolie service in `set` (or the named
    /// ones). Each service with a behaviour starts one instance running it.
    /// The state keeps a reference to `set`, which must outlive it.
    static Build create(const ModelSet& set, std::uint64_t seed,
                        const std::vector<std::string>& services = {});

    std::vector<Action> enabled_actions() const;
    NetworkStatus status() const;

    /// Applies the `choice`-th enabled action. Throws DiagnosticError with
    /// TYPE_ERROR, UNBOUND_VARIABLE or ROUTE_UNRESOLVED on run-time faults.
    TraceEvent apply(std::size_t choice);

    std::uint64_t clock() const noexcept { return clock_; }
    std::uint64_t seed() const noexcept { return seed_; }
    Xoshiro256StarStar& rng() noexcept { return rng_; }

    /// Replication guards still waiting for input.
    std::size_t live_guards() const;
    /// Messages queued on a channel and not yet consumed.
    std::size_t queued(const std::string& service, const std::string& op) const;
    std::size_t pending_calls() const noexcept { return pendingCalls_.size(); }
    /// One line per blocked thread with its remaining term.
    std::vector<std::string> blocked_description() const;

private:
    struct Impl;
    friend struct Impl;

    NetworkState(const ModelSet& set, std::uint64_t seed);

    const ModelSet* set_ = nullptr;
    std::map<std::string, sim_detail::ServiceRuntime> services_;
    std::map<std::pair<std::string, std::string>, std::deque<Message>> queues_;
    // callId -> (service, instance, thread) of the suspended caller
    std::map<std::uint64_t, std::tuple<std::string, std::uint64_t, std::uint32_t>> pendingCalls_;
    std::uint64_t clock_ = 0;
    std::uint64_t nextMessage_ = 1;
    std::uint64_t nextCall_ = 1;
    std::uint64_t seed_ = 0;
    Xoshiro256StarStar rng_{0};
};

struct NetworkState::Build {
    std::optional<NetworkState> state;
    std::vector<Diagnostic> diagnostics;
};

struct StepProgress {
    TraceEvent event;
};
struct StepTerminated {};
struct StepStuck {
    std::vector<std::string> remaining;
};

using StepResult = std::variant<StepProgress, StepTerminated, StepStuck>;

/// One small step using the state's seeded generator to pick uniformly among
/// enabled actions.
StepResult step(NetworkState& state);
/// One small step taking the given choice index.
StepResult step(NetworkState& state, std::size_t choice);

enum class RunOutcome { Terminated, Stuck, MaxStepsExceeded, ScheduleExhausted, Failed };

std::string_view to_string(RunOutcome o);

struct RunResult {
    Trace trace;
    RunOutcome outcome = RunOutcome::Terminated;
    /// STUCK_DEADLOCK, MAX_STEPS_EXCEEDED, or the run-time fault.
    std::vector<Diagnostic> diagnostics;
    std::optional<NetworkState> finalState;
};

/// Either a seed for the uniform scheduler or an explicit list of choice indices.
using Schedule = std::variant<std::uint64_t, std::vector<std::size_t>>;

/// Runs until termination, deadlock or `maxSteps` events. Deterministic for
/// a given (network, schedule, maxSteps).
RunResult run(const ModelSet& set, const Schedule& schedule, std::uint64_t maxSteps,
              const std::vector<std::string>& services = {});
RunResult run(NetworkState state, const Schedule& schedule, std::uint64_t maxSteps);

struct InterleavingResult {
    std::set<Trace> traces;
    std::vector<Diagnostic> diagnostics;
};

/// Exhaustive DFS over scheduler choices; every maximal trace of length at
/// most `maxDepth`. DEPTH_EXCEEDED if some path is still running at depth.
InterleavingResult enumerate_interleavings(const NetworkState& start, std::size_t maxDepth);
InterleavingResult enumerate_interleavings(const ModelSet& set, std::size_t maxDepth);

}  // namespace msadl
