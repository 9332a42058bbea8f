#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

#include "msadl/parser.hpp"
#include "msadl/simulator.hpp"

namespace msadl {
namespace {

ModelSet network(std::string_view text) {
    ParseResult r = parse_unit(text, View::Jolie, "net.jsm");
    EXPECT_TRUE(r.ok()) << (r.diagnostics.empty() ? "" : format_diagnostic(r.diagnostics[0]));
    ModelSet set = resolve({*r.unit}).set;
    auto diags = validate(set);
    EXPECT_FALSE(has_errors(diags)) << (diags.empty() ? "" : format_diagnostic(diags[0]));
    return set;
}

const char* kRequestResponse =
    "interface A { requestResponse get(int) -> int oneWay note(int) }\n"
    "service Server { inputPort In { location: \"socket://h:1\" protocol: sodep interfaces: A }\n"
    "  main { get(x)(x); note(y) } }\n"
    "service Client { outputPort S { location: \"socket://h:1\" protocol: sodep interfaces: A }\n"
    "  main { get@S(1)(r); note@S(r) } }\n";

const char* kOneWay =
    "interface A { oneWay note(int) }\n"
    "service Server { inputPort In { location: \"socket://h:1\" protocol: sodep interfaces: A } main { note(y) } }\n"
    "service Client { outputPort S { location: \"socket://h:1\" protocol: sodep interfaces: A }\n"
    "  main { note@S(1); note@S(2) } }\n";

const char* kThreeSends =
    "interface A { oneWay a(int) oneWay b(int) oneWay c(int) }\n"
    "service Sink { inputPort In { location: \"socket://h:1\" protocol: sodep interfaces: A } }\n"
    "service Client { outputPort S { location: \"socket://h:1\" protocol: sodep interfaces: A }\n"
    "  main { a@S(1) | b@S(2) | c@S(3) } }\n";

const char* kReplicated =
    "interface A { oneWay a(int) }\n"
    "service Srv { inputPort In { location: \"socket://h:1\" protocol: sodep interfaces: A } main { replicate a(x) } }\n"
    "service Client { outputPort S { location: \"socket://h:1\" protocol: sodep interfaces: A }\n"
    "  main { a@S(1); a@S(2); a@S(3) } }\n";

const char* kDeadlock =
    "interface A { requestResponse a(int) -> int }\n"
    "service P { inputPort In { location: \"socket://h:1\" protocol: sodep interfaces: A }\n"
    "  outputPort Q { location: \"socket://h:2\" protocol: sodep interfaces: A } main { a@Q(1)(r); a(x)(x) } }\n"
    "service Q { inputPort In { location: \"socket://h:2\" protocol: sodep interfaces: A }\n"
    "  outputPort P { location: \"socket://h:1\" protocol: sodep interfaces: A } main { a@P(1)(r); a(x)(x) } }\n";

// A caller that sent a request-response message must not act on the same
// thread until the matching reply is delivered.
bool blocking_respected(const Trace& t) {
    std::map<std::pair<std::string, std::uint32_t>, std::uint64_t> blocked;
    for (const auto& e : t) {
        auto key = std::make_pair(e.subject, e.thread);
        auto it = blocked.find(key);
        if (it != blocked.end()) {
            if (e.kind != EventKind::ReplyDelivered || e.callId != it->second) return false;
            blocked.erase(it);
            continue;
        }
        if (e.kind == EventKind::Send && e.callId) blocked[key] = *e.callId;
    }
    return true;
}

std::vector<std::string> send_order(const Trace& t) {
    std::vector<std::string> ops;
    for (const auto& e : t) {
        if (e.kind == EventKind::Send) ops.push_back(e.operation);
    }
    return ops;
}

TEST(Simulator, RequestResponseTrace) {
    RunResult r = run(network(kRequestResponse), Schedule{std::uint64_t{1}}, 100);
    EXPECT_EQ(r.outcome, RunOutcome::Terminated);
    std::vector<EventKind> kinds;
    for (const auto& e : r.trace) {
        if (e.subject == "Client#0") kinds.push_back(e.kind);
    }
    EXPECT_EQ(kinds, (std::vector<EventKind>{EventKind::Send, EventKind::ReplyDelivered, EventKind::Send,
                                             EventKind::Terminate}));
    for (std::size_t i = 0; i < r.trace.size(); ++i) EXPECT_EQ(r.trace[i].step, i);
}

TEST(Simulator, RequestResponseBlocksCallerOnEverySeed) {
    ModelSet set = network(kRequestResponse);
    for (std::uint64_t seed = 0; seed < 256; ++seed) {
        RunResult r = run(set, Schedule{seed}, 1000);
        ASSERT_EQ(r.outcome, RunOutcome::Terminated) << seed;
        EXPECT_TRUE(blocking_respected(r.trace)) << seed;
    }
}

TEST(Simulator, BlockingOracleRejectsEarlyAction) {
    Trace t{{0, EventKind::Send, "C#0", 0, "get", 1, 1, "S"}, {1, EventKind::Send, "C#0", 0, "note", {}, 2, "S"}};
    EXPECT_FALSE(blocking_respected(t));
}

TEST(Simulator, OneWayDoesNotBlockSender) {
    ModelSet set = network(kOneWay);
    bool witnessed = false;
    for (std::uint64_t seed = 0; seed < 64 && !witnessed; ++seed) {
        RunResult r = run(set, Schedule{seed}, 100);
        // second send happens before the first message is delivered
        std::size_t firstDeliver = r.trace.size(), secondSend = r.trace.size();
        for (std::size_t i = 0; i < r.trace.size(); ++i) {
            const auto& e = r.trace[i];
            if (e.kind == EventKind::Deliver && e.messageId == 1u && firstDeliver == r.trace.size()) firstDeliver = i;
            if (e.kind == EventKind::Send && e.messageId == 2u) secondSend = i;
        }
        witnessed = secondSend < firstDeliver;
    }
    EXPECT_TRUE(witnessed);
}

TEST(Simulator, ParallelSendsCoverAllPermutations) {
    ModelSet set = network(kThreeSends);
    InterleavingResult all = enumerate_interleavings(set, 64);
    EXPECT_TRUE(all.diagnostics.empty());
    ASSERT_EQ(all.traces.size(), 6u);

    std::vector<std::string> ops{"a", "b", "c"};
    std::set<std::vector<std::string>> oracle;
    do oracle.insert(ops);
    while (std::next_permutation(ops.begin(), ops.end()));
    std::set<std::vector<std::string>> enumerated;
    for (const auto& t : all.traces) enumerated.insert(send_order(t));
    EXPECT_EQ(enumerated, oracle);

    std::set<Trace> sampled;
    for (std::uint64_t seed = 0; seed < 512; ++seed) {
        RunResult r = run(set, Schedule{seed}, 100);
        ASSERT_EQ(r.outcome, RunOutcome::Terminated);
        EXPECT_TRUE(all.traces.count(r.trace)) << seed;
        sampled.insert(r.trace);
    }
    EXPECT_EQ(sampled, all.traces);
}

TEST(Simulator, EnumerationReportsDepthExceeded) {
    InterleavingResult r = enumerate_interleavings(network(kThreeSends), 2);
    ASSERT_FALSE(r.diagnostics.empty());
    EXPECT_EQ(r.diagnostics[0].code, codes::DepthExceeded);
}

TEST(Simulator, ReplicationSpawnsPerMessageAndKeepsGuard) {
    RunResult r = run(network(kReplicated), Schedule{std::uint64_t{3}}, 1000);
    EXPECT_EQ(r.outcome, RunOutcome::Terminated);
    std::set<std::string> spawned;
    for (const auto& e : r.trace) {
        if (e.kind == EventKind::Spawn) {
            spawned.insert(e.subject);
            EXPECT_EQ(e.peer, "Srv#0");
        }
    }
    EXPECT_EQ(spawned.size(), 3u);
    ASSERT_TRUE(r.finalState);
    EXPECT_EQ(r.finalState->live_guards(), 1u);
    EXPECT_EQ(r.finalState->queued("Srv", "a"), 0u);
}

TEST(Simulator, MutualRequestsDeadlock) {
    RunResult r = run(network(kDeadlock), Schedule{std::uint64_t{0}}, 100);
    EXPECT_EQ(r.outcome, RunOutcome::Stuck);
    ASSERT_EQ(r.diagnostics.size(), 1u);
    EXPECT_EQ(r.diagnostics[0].code, codes::StuckDeadlock);
    EXPECT_NE(r.diagnostics[0].message.find("P#0"), std::string::npos);
    EXPECT_NE(r.diagnostics[0].message.find("Q#0"), std::string::npos);
    ASSERT_TRUE(r.finalState);
    EXPECT_EQ(r.finalState->blocked_description().size(), 2u);
}

TEST(Simulator, StepApiMatchesRun) {
    ModelSet set = network(kRequestResponse);
    auto built = NetworkState::create(set, 5);
    ASSERT_TRUE(built.state);
    NetworkState s = *built.state;
    Trace manual;
    while (true) {
        StepResult res = step(s);
        if (auto* p = std::get_if<StepProgress>(&res)) {
            manual.push_back(p->event);
            continue;
        }
        EXPECT_TRUE(std::holds_alternative<StepTerminated>(res));
        break;
    }
    EXPECT_EQ(run(set, Schedule{std::uint64_t{5}}, 100).trace, manual);
}

TEST(Simulator, ExplicitScheduleReplaysChoices) {
    ModelSet set = network(kThreeSends);
    RunResult first = run(set, Schedule{std::vector<std::size_t>{2, 0, 0, 0}}, 100);
    EXPECT_EQ(first.outcome, RunOutcome::Terminated);
    EXPECT_EQ(send_order(first.trace), (std::vector<std::string>{"c", "a", "b"}));
    RunResult bad = run(set, Schedule{std::vector<std::size_t>{7}}, 100);
    EXPECT_EQ(bad.outcome, RunOutcome::Failed);
    ASSERT_FALSE(bad.diagnostics.empty());
    EXPECT_EQ(bad.diagnostics[0].code, codes::ScheduleInvalid);
    RunResult shortList = run(set, Schedule{std::vector<std::size_t>{0}}, 100);
    EXPECT_EQ(shortList.outcome, RunOutcome::ScheduleExhausted);
}

TEST(Simulator, MaxStepsExceeded) {
    ModelSet set = network(
        "interface A { oneWay a(int) } interface B { oneWay b(int) }\n"
        "service X { inputPort In { location: \"socket://h:1\" protocol: sodep interfaces: A }\n"
        "  outputPort Y { location: \"socket://h:2\" protocol: sodep interfaces: B } main { replicate a(v) { b@Y(v) } } }\n"
        "service Y { inputPort In { location: \"socket://h:2\" protocol: sodep interfaces: B }\n"
        "  outputPort X { location: \"socket://h:1\" protocol: sodep interfaces: A } main { a@X(0) | replicate b(v) { a@X(v) } } }\n");
    RunResult r = run(set, Schedule{std::uint64_t{0}}, 50);
    EXPECT_EQ(r.outcome, RunOutcome::MaxStepsExceeded);
    EXPECT_EQ(r.trace.size(), 50u);
    ASSERT_FALSE(r.diagnostics.empty());
    EXPECT_EQ(r.diagnostics[0].code, codes::MaxStepsExceeded);
}

TEST(Simulator, PayloadTypeErrorFails) {
    ModelSet set = network(
        "interface A { oneWay a(int) }\n"
        "service Srv { inputPort In { location: \"socket://h:1\" protocol: sodep interfaces: A } main { a(x) } }\n"
        "service C { outputPort S { location: \"socket://h:1\" protocol: sodep interfaces: A } main { a@S(\"no\") } }\n");
    RunResult r = run(set, Schedule{std::uint64_t{0}}, 100);
    EXPECT_EQ(r.outcome, RunOutcome::Failed);
    ASSERT_FALSE(r.diagnostics.empty());
    EXPECT_EQ(r.diagnostics[0].code, codes::TypeError);
}

TEST(Simulator, SameSeedSameTrace) {
    ModelSet set = network(kReplicated);
    for (std::uint64_t seed = 0; seed < 32; ++seed) {
        RunResult a = run(set, Schedule{seed}, 1000);
        RunResult b = run(set, Schedule{seed}, 1000);
        EXPECT_EQ(a.trace, b.trace);
        EXPECT_EQ(trace_to_jsonl(a.trace), trace_to_jsonl(b.trace));
    }
}

TEST(Simulator, NetworkStateCopiesEvolveIndependently) {
    ModelSet set = network(kThreeSends);
    auto built = NetworkState::create(set, 0);
    NetworkState a = *built.state;
    NetworkState b = a;
    a.apply(0);
    EXPECT_EQ(a.clock(), 1u);
    EXPECT_EQ(b.clock(), 0u);
    EXPECT_EQ(b.enabled_actions().size(), 3u);
    EXPECT_EQ(a.enabled_actions().size(), 2u);
}

}  // namespace
}  // namespace msadl
