#include "msadl/simulator.hpp"

#include <algorithm>
#include <sstream>

#include "msadl/checker.hpp"
#include "msadl/printer.hpp"

namespace msadl {

using sim_detail::ContinuationItem;
using sim_detail::Instance;
using sim_detail::PendingStart;
using sim_detail::ReplyTask;
using sim_detail::ServiceRuntime;
using sim_detail::Thread;
using sim_detail::ThreadState;

std::string_view to_string(EventKind k) {
    switch (k) {
        case EventKind::Send: return "send";
        case EventKind::Deliver: return "deliver";
        case EventKind::ProcessStart: return "process_start";
        case EventKind::Reply: return "reply";
        case EventKind::ReplyDelivered: return "reply_delivered";
        case EventKind::Spawn: return "spawn";
        case EventKind::Terminate: return "terminate";
    }
    return "send";
}

std::string_view to_string(RunOutcome o) {
    switch (o) {
        case RunOutcome::Terminated: return "terminated";
        case RunOutcome::Stuck: return "stuck";
        case RunOutcome::MaxStepsExceeded: return "max_steps_exceeded";
        case RunOutcome::ScheduleExhausted: return "schedule_exhausted";
        case RunOutcome::Failed: return "failed";
    }
    return "failed";
}

nlohmann::json to_json(const TraceEvent& e) {
    nlohmann::json j = {{"step", e.step},
                        {"kind", to_string(e.kind)},
                        {"subject", e.subject},
                        {"thread", e.thread},
                        {"operation", e.operation}};
    if (e.messageId) j["messageId"] = *e.messageId;
    if (e.callId) j["callId"] = *e.callId;
    if (!e.peer.empty()) j["peer"] = e.peer;
    return j;
}

std::string trace_to_jsonl(const Trace& t) {
    std::string out;
    for (const auto& e : t) out += to_json(e).dump() + "\n";
    return out;
}

namespace {

std::string subject_of(const std::string& service, std::uint64_t instance) {
    return service + "#" + std::to_string(instance);
}

[[noreturn]] void fault(std::string_view code, std::string message) {
    throw DiagnosticError(make_error(code, std::move(message)));
}

std::string one_line(const Term& t) {
    std::string s = serialize(t, 0);
    std::string out;
    bool space = false;
    for (char c : s) {
        if (c == '\n' || c == ' ') {
            space = true;
            continue;
        }
        if (space && !out.empty()) out += ' ';
        space = false;
        out += c;
    }
    return out;
}

const Term* top_term(const Thread& t) {
    if (t.continuation.empty()) return nullptr;
    const auto* box = std::get_if<Box<Term>>(&t.continuation.back());
    return box ? &**box : nullptr;
}

}  // namespace

struct NetworkState::Impl {
    // ----- expression evaluation ---------------------------------------------

    static ValueTree eval(const Expr& e, const std::map<std::string, ValueTree>& vars) {
        struct V {
            const std::map<std::string, ValueTree>& vars;
            ValueTree operator()(const LiteralExpr& l) const { return ValueTree{l.value, {}}; }
            ValueTree operator()(const VariableExpr& v) const {
                auto it = vars.find(v.name);
                if (it == vars.end()) fault(codes::UnboundVariable, "variable '" + v.name + "' is not bound");
                return it->second;
            }
            ValueTree operator()(const FieldExpr& f) const {
                ValueTree base = eval(*f.base, vars);
                auto it = base.children.find(f.field);
                if (it == base.children.end() || it->second.empty()) {
                    fault(codes::UnboundVariable, "value has no field '" + f.field + "'");
                }
                return it->second.front();
            }
            ValueTree operator()(const TreeExpr& t) const {
                ValueTree out;
                for (const auto& [name, sub] : t.fields) out.children[name].push_back(eval(*sub, vars));
                return out;
            }
        };
        return std::visit(V{vars}, e.node);
    }

    // ----- model lookups -------------------------------------------------------

    static const JolieOperation* port_operation(const NetworkState& s, const ServiceRuntime& rt, const Port& port,
                                                std::string_view op) {
        for (const auto& name : port.interfaces) {
            if (const Interface* i = s.set_->find_interface(rt.unit, name)) {
                if (const OperationSig* sig = i->find(op)) return std::get_if<JolieOperation>(&sig->shape);
            }
        }
        return nullptr;
    }

    static const JolieOperation* input_operation(const NetworkState& s, const ServiceRuntime& rt, std::string_view op) {
        for (const auto& p : rt.model->ports) {
            if (p.direction != PortDirection::Input) continue;
            if (const auto* j = port_operation(s, rt, p, op)) return j;
        }
        return nullptr;
    }

    static void type_check(const NetworkState& s, const ServiceRuntime& rt, const TypeRef& ref, const ValueTree& v,
                           const std::string& what) {
        const TypeDecl* decl = s.set_->find_type(rt.unit, ref.name);
        if (!decl) fault(codes::RefUnresolved, "type '" + ref.name + "' is not declared");
        CheckReport report = check_value(v, *decl, s.set_->type_lookup(rt.unit));
        if (!report.ok) {
            const Violation& first = report.violations.front();
            fault(codes::TypeError, what + " does not conform to '" + ref.name + "': " +
                                        (first.path.empty() ? std::string("<root>") : first.path) + ": " +
                                        first.detail);
        }
    }

    // ----- thread normalization -------------------------------------------------

    // Runs administrative reductions (Nil, Sequence, Parallel, parking at a
    // replication guard, child completion) until the thread needs an action.
    static void settle(Instance& inst, std::uint32_t threadId) {
        Thread* t = &inst.threads.at(threadId);
        while (t->state == ThreadState::Ready) {
            if (t->continuation.empty()) {
                t->state = ThreadState::Done;
                if (!t->parent) return;
                Thread& parent = inst.threads.at(*t->parent);
                inst.threads.erase(t->id);
                if (--parent.liveChildren > 0) return;
                parent.state = ThreadState::Ready;
                t = &parent;
                continue;
            }
            const auto* box = std::get_if<Box<Term>>(&t->continuation.back());
            if (!box) return;  // ReplyTask: the Reply action is enabled
            Box<Term> term = *box;
            const auto& node = term->node;
            if (std::holds_alternative<Nil>(node)) {
                t->continuation.pop_back();
            } else if (const auto* seq = std::get_if<Sequence>(&node)) {
                t->continuation.pop_back();
                t->continuation.emplace_back(seq->second);
                t->continuation.emplace_back(seq->first);
            } else if (const auto* par = std::get_if<Parallel>(&node)) {
                t->continuation.pop_back();
                t->state = ThreadState::Joining;
                t->liveChildren = 2;
                std::uint32_t parentId = t->id;
                std::uint32_t ids[2] = {inst.nextThread++, inst.nextThread++};
                const Box<Term>* branches[2] = {&par->left, &par->right};
                for (int i = 0; i < 2; ++i) {
                    Thread child;
                    child.id = ids[i];
                    child.parent = parentId;
                    child.continuation.emplace_back(*branches[i]);
                    inst.threads.emplace(child.id, std::move(child));
                }
                for (auto id : ids) {
                    if (inst.threads.count(id)) settle(inst, id);
                }
                return;
            } else if (std::holds_alternative<GuardedReplication>(node)) {
                t->state = ThreadState::Guard;
            } else {
                return;  // Invoke or Receive
            }
        }
    }

    // ----- enabled actions -------------------------------------------------------

    static std::vector<Action> enabled(const NetworkState& s) {
        std::vector<Action> out;
        for (const auto& [name, rt] : s.services_) {
            for (const auto& [iid, inst] : rt.instances) {
                if (inst.pendingSpawn) {
                    const auto& root = inst.threads.at(0);
                    out.push_back({name, iid, 0, EventKind::Spawn, root.start ? root.start->message.operation : ""});
                    continue;
                }
                for (const auto& [tid, t] : inst.threads) {
                    switch (t.state) {
                        case ThreadState::Ready: {
                            if (const Term* top = top_term(t)) {
                                if (const auto* inv = std::get_if<Invoke>(&top->node)) {
                                    out.push_back({name, iid, tid, EventKind::Send, inv->op});
                                } else if (const auto* rcv = std::get_if<Receive>(&top->node)) {
                                    if (s.queued(name, rcv->op) > 0) {
                                        out.push_back({name, iid, tid, EventKind::Deliver, rcv->op});
                                    }
                                }
                            } else if (!t.continuation.empty()) {
                                const auto& task = std::get<ReplyTask>(t.continuation.back());
                                out.push_back({name, iid, tid, EventKind::Reply, task.operation});
                            }
                            break;
                        }
                        case ThreadState::Guard: {
                            const auto& g = std::get<GuardedReplication>(top_term(t)->node);
                            if (s.queued(name, g.op) > 0) out.push_back({name, iid, tid, EventKind::Deliver, g.op});
                            break;
                        }
                        case ThreadState::PendingStart:
                            out.push_back({name, iid, tid, EventKind::ProcessStart, t.start->message.operation});
                            break;
                        case ThreadState::ReplyArrived:
                            out.push_back({name, iid, tid, EventKind::ReplyDelivered, t.awaitingOperation});
                            break;
                        case ThreadState::Done:
                            out.push_back({name, iid, tid, EventKind::Terminate, ""});
                            break;
                        case ThreadState::AwaitingReply:
                        case ThreadState::Joining: break;
                    }
                }
            }
        }
        return out;
    }

    // ----- action application ------------------------------------------------------

    static TraceEvent apply(NetworkState& s, const Action& a) {
        ServiceRuntime& rt = s.services_.at(a.service);
        Instance& inst = rt.instances.at(a.instance);
        TraceEvent ev;
        ev.kind = a.kind;
        ev.subject = subject_of(a.service, a.instance);
        ev.thread = a.thread;
        ev.operation = a.operation;
        switch (a.kind) {
            case EventKind::Send: send(s, rt, inst, a, ev); break;
            case EventKind::Deliver: deliver(s, rt, inst, a, ev); break;
            case EventKind::Spawn: {
                inst.pendingSpawn = false;
                ev.peer = inst.spawnedBy;
                break;
            }
            case EventKind::ProcessStart: {
                Thread& t = inst.threads.at(a.thread);
                PendingStart start = std::move(*t.start);
                t.start.reset();
                ev.messageId = start.message.id;
                ev.callId = start.message.callId;
                inst.variables[start.bindVar] = std::move(start.message.payload);
                if (start.message.callId) {
                    t.continuation.emplace_back(ReplyTask{*start.message.callId, start.message.operation, start.reply});
                }
                t.continuation.emplace_back(start.body);
                t.state = ThreadState::Ready;
                settle(inst, a.thread);
                break;
            }
            case EventKind::Reply: reply(s, rt, inst, a, ev); break;
            case EventKind::ReplyDelivered: {
                Thread& t = inst.threads.at(a.thread);
                ev.callId = t.callId;
                if (t.responseVar) inst.variables[*t.responseVar] = std::move(t.response);
                t.response = ValueTree{};
                t.responseVar.reset();
                t.state = ThreadState::Ready;
                settle(inst, a.thread);
                break;
            }
            case EventKind::Terminate: rt.instances.erase(a.instance); break;
        }
        ev.step = s.clock_++;
        return ev;
    }

    static void send(NetworkState& s, ServiceRuntime& rt, Instance& inst, const Action& a, TraceEvent& ev) {
        Thread& t = inst.threads.at(a.thread);
        const auto& inv = std::get<Invoke>(top_term(t)->node);
        const Port* port = rt.model->find_port(inv.port);
        if (!port || port->direction != PortDirection::Output) {
            fault(codes::RouteUnresolved, "'" + a.service + "' has no output port '" + inv.port + "'");
        }
        const JolieServiceModel* target = s.set_->service_at_location(port->location);
        if (!target || !s.services_.count(target->name)) {
            fault(codes::RouteUnresolved, "no service in the network listens at '" + port->location + "'");
        }
        const JolieOperation* sig = port_operation(s, rt, *port, inv.op);
        if (!sig) fault(codes::RouteUnresolved, "port '" + inv.port + "' does not offer '" + inv.op + "'");
        Message msg;
        msg.id = s.nextMessage_++;
        msg.service = target->name;
        msg.operation = inv.op;
        msg.payload = eval(inv.payload, inst.variables);
        type_check(s, rt, sig->request, msg.payload, "payload of '" + inv.op + "'");
        bool rr = sig->paradigm == Paradigm::RequestResponse;
        if (rr) {
            msg.callId = s.nextCall_++;
            t.state = ThreadState::AwaitingReply;
            t.callId = *msg.callId;
            t.awaitingOperation = inv.op;
            t.responseVar = inv.responseVar;
            s.pendingCalls_[*msg.callId] = {a.service, a.instance, a.thread};
        }
        t.continuation.pop_back();
        ev.messageId = msg.id;
        ev.callId = msg.callId;
        ev.peer = target->name;
        s.queues_[{target->name, inv.op}].push_back(std::move(msg));
        if (!rr) settle(inst, a.thread);
    }

    static void deliver(NetworkState& s, ServiceRuntime& rt, Instance& inst, const Action& a, TraceEvent& ev) {
        Thread& t = inst.threads.at(a.thread);
        auto& queue = s.queues_.at({a.service, a.operation});
        Message msg = std::move(queue.front());
        queue.pop_front();
        ev.messageId = msg.id;
        ev.callId = msg.callId;
        const Term& top = *top_term(t);
        if (const auto* rcv = std::get_if<Receive>(&top.node)) {
            t.start = PendingStart{std::move(msg), rcv->bindVar, rcv->body, rcv->reply};
            t.continuation.pop_back();
            t.state = ThreadState::PendingStart;
            return;
        }
        const auto& g = std::get<GuardedReplication>(top.node);
        Instance replica;
        replica.id = rt.nextInstance++;
        replica.variables = inst.variables;
        replica.pendingSpawn = true;
        replica.spawnedBy = subject_of(a.service, a.instance);
        Thread root;
        root.id = 0;
        root.state = ThreadState::PendingStart;
        root.start = PendingStart{std::move(msg), g.bindVar, g.body, g.reply};
        replica.threads.emplace(0, std::move(root));
        rt.instances.emplace(replica.id, std::move(replica));
    }

    static void reply(NetworkState& s, ServiceRuntime& rt, Instance& inst, const Action& a, TraceEvent& ev) {
        Thread& t = inst.threads.at(a.thread);
        ReplyTask task = std::get<ReplyTask>(t.continuation.back());
        t.continuation.pop_back();
        ValueTree value = task.reply ? eval(*task.reply, inst.variables) : ValueTree{};
        const JolieOperation* sig = input_operation(s, rt, task.operation);
        if (sig && sig->response) type_check(s, rt, *sig->response, value, "reply of '" + task.operation + "'");
        auto it = s.pendingCalls_.find(task.callId);
        if (it == s.pendingCalls_.end()) fault(codes::RouteUnresolved, "no caller waits for call " + std::to_string(task.callId));
        auto [callerService, callerInstance, callerThread] = it->second;
        s.pendingCalls_.erase(it);
        Thread& caller = s.services_.at(callerService).instances.at(callerInstance).threads.at(callerThread);
        caller.state = ThreadState::ReplyArrived;
        caller.response = std::move(value);
        ev.callId = task.callId;
        ev.peer = subject_of(callerService, callerInstance);
        settle(inst, a.thread);
    }
};

NetworkState::NetworkState(const ModelSet& set, std::uint64_t seed) : set_(&set), seed_(seed), rng_(seed) {}

NetworkState::Build NetworkState::create(const ModelSet& set, std::uint64_t seed,
                                         const std::vector<std::string>& services) {
    Build out;
    NetworkState state(set, seed);
    std::set<std::string> wanted(services.begin(), services.end());
    for (const auto& name : wanted) {
        if (!set.find_service(name)) {
            out.diagnostics.push_back(make_error(codes::RefUnresolved, "service '" + name + "' is not declared"));
        }
    }
    if (!out.diagnostics.empty()) return out;
    for (std::size_t u = 0; u < set.size(); ++u) {
        for (const auto& svc : set.unit(u).services) {
            if (!wanted.empty() && !wanted.count(svc.name)) continue;
            ServiceRuntime rt;
            rt.model = &svc;
            rt.unit = u;
            if (svc.behaviour && !is_nil(*svc.behaviour)) {
                Instance inst;
                inst.id = rt.nextInstance++;
                Thread root;
                root.continuation.emplace_back(Box<Term>(*svc.behaviour));
                inst.threads.emplace(0, std::move(root));
                Impl::settle(inst, 0);
                rt.instances.emplace(inst.id, std::move(inst));
            }
            state.services_.emplace(svc.name, std::move(rt));
        }
    }
    out.state = std::move(state);
    return out;
}

std::vector<Action> NetworkState::enabled_actions() const { return Impl::enabled(*this); }

NetworkStatus NetworkState::status() const {
    if (!enabled_actions().empty()) return NetworkStatus::Running;
    for (const auto& [name, rt] : services_) {
        for (const auto& [iid, inst] : rt.instances) {
            for (const auto& [tid, t] : inst.threads) {
                if (t.state != ThreadState::Guard && t.state != ThreadState::Joining) return NetworkStatus::Stuck;
            }
        }
    }
    return NetworkStatus::Terminated;
}

TraceEvent NetworkState::apply(std::size_t choice) {
    std::vector<Action> actions = enabled_actions();
    if (choice >= actions.size()) {
        fault(codes::ScheduleInvalid, "choice " + std::to_string(choice) + " out of range (" +
                                          std::to_string(actions.size()) + " enabled actions)");
    }
    return Impl::apply(*this, actions[choice]);
}

std::size_t NetworkState::live_guards() const {
    std::size_t n = 0;
    for (const auto& [name, rt] : services_) {
        for (const auto& [iid, inst] : rt.instances) {
            for (const auto& [tid, t] : inst.threads) n += t.state == ThreadState::Guard ? 1 : 0;
        }
    }
    return n;
}

std::size_t NetworkState::queued(const std::string& service, const std::string& op) const {
    auto it = queues_.find({service, op});
    return it == queues_.end() ? 0 : it->second.size();
}

std::vector<std::string> NetworkState::blocked_description() const {
    std::vector<std::string> out;
    for (const auto& [name, rt] : services_) {
        for (const auto& [iid, inst] : rt.instances) {
            for (const auto& [tid, t] : inst.threads) {
                std::string who = subject_of(name, iid) + "/" + std::to_string(tid);
                if (t.state == ThreadState::AwaitingReply) {
                    out.push_back(who + ": awaiting reply to '" + t.awaitingOperation + "' (call " +
                                  std::to_string(t.callId) + ")");
                } else if (t.state == ThreadState::Ready) {
                    if (const Term* top = top_term(t)) out.push_back(who + ": blocked at " + one_line(*top));
                }
            }
        }
    }
    return out;
}

StepResult step(NetworkState& state, std::size_t choice) {
    switch (state.status()) {
        case NetworkStatus::Terminated: return StepTerminated{};
        case NetworkStatus::Stuck: return StepStuck{state.blocked_description()};
        case NetworkStatus::Running: break;
    }
    return StepProgress{state.apply(choice)};
}

StepResult step(NetworkState& state) {
    std::size_t n = state.enabled_actions().size();
    if (n == 0) return step(state, 0);
    return step(state, static_cast<std::size_t>(state.rng().below(n)));
}

namespace {

Diagnostic stuck_diagnostic(const NetworkState& s) {
    std::string msg = "no enabled action while instances remain";
    for (const auto& line : s.blocked_description()) msg += "; " + line;
    return make_error(codes::StuckDeadlock, msg);
}

}  // namespace

RunResult run(NetworkState state, const Schedule& schedule, std::uint64_t maxSteps) {
    RunResult r;
    const auto* explicitChoices = std::get_if<std::vector<std::size_t>>(&schedule);
    if (const auto* seed = std::get_if<std::uint64_t>(&schedule)) state.rng() = Xoshiro256StarStar(*seed);
    std::size_t cursor = 0;
    try {
        while (true) {
            NetworkStatus status = state.status();
            if (status == NetworkStatus::Terminated) {
                r.outcome = RunOutcome::Terminated;
                break;
            }
            if (status == NetworkStatus::Stuck) {
                r.outcome = RunOutcome::Stuck;
                r.diagnostics.push_back(stuck_diagnostic(state));
                break;
            }
            if (r.trace.size() >= maxSteps) {
                r.outcome = RunOutcome::MaxStepsExceeded;
                r.diagnostics.push_back(make_error(codes::MaxStepsExceeded,
                                                   "stopped after " + std::to_string(maxSteps) + " steps"));
                break;
            }
            std::size_t choice = 0;
            if (explicitChoices) {
                if (cursor >= explicitChoices->size()) {
                    r.outcome = RunOutcome::ScheduleExhausted;
                    break;
                }
                choice = (*explicitChoices)[cursor++];
            } else {
                choice = static_cast<std::size_t>(state.rng().below(state.enabled_actions().size()));
            }
            r.trace.push_back(state.apply(choice));
        }
    } catch (const DiagnosticError& e) {
        r.outcome = RunOutcome::Failed;
        r.diagnostics.push_back(e.diagnostic());
    }
    r.finalState = std::move(state);
    return r;
}

RunResult run(const ModelSet& set, const Schedule& schedule, std::uint64_t maxSteps,
              const std::vector<std::string>& services) {
    const auto* seed = std::get_if<std::uint64_t>(&schedule);
    auto built = NetworkState::create(set, seed ? *seed : 0, services);
    if (!built.state) {
        RunResult r;
        r.outcome = RunOutcome::Failed;
        r.diagnostics = std::move(built.diagnostics);
        return r;
    }
    return run(std::move(*built.state), schedule, maxSteps);
}

namespace {

void explore(const NetworkState& state, Trace& prefix, std::size_t maxDepth, InterleavingResult& out,
             bool& exceeded) {
    std::size_t n = state.enabled_actions().size();
    if (n == 0) {
        out.traces.insert(prefix);
        return;
    }
    if (prefix.size() >= maxDepth) {
        exceeded = true;
        return;
    }
    for (std::size_t i = 0; i < n; ++i) {
        NetworkState next = state;
        try {
            prefix.push_back(next.apply(i));
        } catch (const DiagnosticError& e) {
            out.diagnostics.push_back(e.diagnostic());
            continue;
        }
        explore(next, prefix, maxDepth, out, exceeded);
        prefix.pop_back();
    }
}

}  // namespace

InterleavingResult enumerate_interleavings(const NetworkState& start, std::size_t maxDepth) {
    InterleavingResult out;
    Trace prefix;
    bool exceeded = false;
    explore(start, prefix, maxDepth, out, exceeded);
    if (exceeded) {
        out.diagnostics.push_back(make_error(codes::DepthExceeded,
                                             "some schedules are still running at depth " + std::to_string(maxDepth)));
    }
    sort_diagnostics(out.diagnostics);
    return out;
}

InterleavingResult enumerate_interleavings(const ModelSet& set, std::size_t maxDepth) {
    auto built = NetworkState::create(set, 0);
    if (!built.state) {
        InterleavingResult out;
        out.diagnostics = std::move(built.diagnostics);
        return out;
    }
    return enumerate_interleavings(*built.state, maxDepth);
}

}  // namespace msadl
