#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "msadl/box.hpp"
#include "msadl/diagnostic.hpp"
#include "msadl/value.hpp"

namespace msadl {

// Expressions in payload and reply positions: literals, variables, field
// projection and tree literals (`{ a: 1, b: x.c }`).
struct Expr;

struct LiteralExpr {
    Scalar value;
    friend bool operator==(const LiteralExpr&, const LiteralExpr&) = default;
};
struct VariableExpr {
    std::string name;
    friend bool operator==(const VariableExpr&, const VariableExpr&) = default;
};
struct FieldExpr {
    Box<Expr> base;
    std::string field;
    friend bool operator==(const FieldExpr&, const FieldExpr&) = default;
};
struct TreeExpr {
    std::vector<std::pair<std::string, Box<Expr>>> fields;
    friend bool operator==(const TreeExpr&, const TreeExpr&) = default;
};

struct Expr {
    std::variant<LiteralExpr, VariableExpr, FieldExpr, TreeExpr> node;
    SourceLocation loc;
    friend bool operator==(const Expr&, const Expr&) = default;
};

Expr literal(Scalar v);
Expr variable(std::string name);
Expr field(Expr base, std::string name);

/// Free variables of an expression.
void collect_variables(const Expr& e, std::set<std::string>& out);

struct Term;

struct Nil {
    friend bool operator==(const Nil&, const Nil&) = default;
};

/// `op@Port(payload)` (one-way) or `op@Port(payload)(var)` (request-response).
struct Invoke {
    std::string port;
    std::string op;
    Expr payload;
    std::optional<std::string> responseVar;
    friend bool operator==(const Invoke&, const Invoke&) = default;
};

/// `op(var) { body }` or `op(var)(reply) { body }`; the reply is evaluated
/// after the body completes.
struct Receive {
    std::string op;
    std::string bindVar;
    Box<Term> body;
    std::optional<Expr> reply;
    friend bool operator==(const Receive&, const Receive&) = default;
};

struct Sequence {
    Box<Term> first;
    Box<Term> second;
    friend bool operator==(const Sequence&, const Sequence&) = default;
};

struct Parallel {
    Box<Term> left;
    Box<Term> right;
    friend bool operator==(const Parallel&, const Parallel&) = default;
};

/// Input-guarded replication `replicate op(var) { body }`: every consumed
/// message spawns a fresh instance of the body; the guard persists.
struct GuardedReplication {
    std::string op;
    std::string bindVar;
    Box<Term> body;
    std::optional<Expr> reply;
    friend bool operator==(const GuardedReplication&, const GuardedReplication&) = default;
};

struct Term {
    std::variant<Nil, Invoke, Receive, Sequence, Parallel, GuardedReplication> node;
    SourceLocation loc;
    friend bool operator==(const Term&, const Term&) = default;
};

using BehaviourTerm = Term;

Term nil_term();
Term sequence(Term first, Term second);
Term parallel(Term left, Term right);
Term invoke(std::string port, std::string op, Expr payload,
            std::optional<std::string> responseVar = std::nullopt);
Term receive(std::string op, std::string var, Term body = nil_term(),
             std::optional<Expr> reply = std::nullopt);
Term replicate(std::string op, std::string var, Term body = nil_term(),
               std::optional<Expr> reply = std::nullopt);

/// Right-nested sugar for n-ary composition; an empty list yields Nil.
Term sequence_of(std::vector<Term> terms);
Term parallel_of(std::vector<Term> terms);

bool is_nil(const Term& t);

/// Calls `fn` on every subterm in pre-order.
template <class Fn>
void visit_terms(const Term& t, Fn&& fn) {
    fn(t);
    std::visit(
        [&](const auto& n) {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, Receive> || std::is_same_v<N, GuardedReplication>) {
                visit_terms(*n.body, fn);
            } else if constexpr (std::is_same_v<N, Sequence>) {
                visit_terms(*n.first, fn);
                visit_terms(*n.second, fn);
            } else if constexpr (std::is_same_v<N, Parallel>) {
                visit_terms(*n.left, fn);
                visit_terms(*n.right, fn);
            }
        },
        t.node);
}

}  // namespace msadl
