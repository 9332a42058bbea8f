#include "msadl/behaviour.hpp"

namespace msadl {

Expr literal(Scalar v) { return Expr{LiteralExpr{std::move(v)}, {}}; }
Expr variable(std::string name) { return Expr{VariableExpr{std::move(name)}, {}}; }
Expr field(Expr base, std::string name) {
    return Expr{FieldExpr{Box<Expr>(std::move(base)), std::move(name)}, {}};
}

void collect_variables(const Expr& e, std::set<std::string>& out) {
    if (const auto* v = std::get_if<VariableExpr>(&e.node)) {
        out.insert(v->name);
    } else if (const auto* f = std::get_if<FieldExpr>(&e.node)) {
        collect_variables(*f->base, out);
    } else if (const auto* t = std::get_if<TreeExpr>(&e.node)) {
        for (const auto& [name, sub] : t->fields) collect_variables(*sub, out);
    }
}

Term nil_term() { return Term{Nil{}, {}}; }

Term sequence(Term first, Term second) {
    return Term{Sequence{Box<Term>(std::move(first)), Box<Term>(std::move(second))}, {}};
}

Term parallel(Term left, Term right) {
    return Term{Parallel{Box<Term>(std::move(left)), Box<Term>(std::move(right))}, {}};
}

Term invoke(std::string port, std::string op, Expr payload, std::optional<std::string> responseVar) {
    return Term{Invoke{std::move(port), std::move(op), std::move(payload), std::move(responseVar)}, {}};
}

Term receive(std::string op, std::string var, Term body, std::optional<Expr> reply) {
    return Term{Receive{std::move(op), std::move(var), Box<Term>(std::move(body)), std::move(reply)}, {}};
}

Term replicate(std::string op, std::string var, Term body, std::optional<Expr> reply) {
    return Term{GuardedReplication{std::move(op), std::move(var), Box<Term>(std::move(body)),
                                   std::move(reply)},
                {}};
}

namespace {

template <class Combine>
Term fold_right(std::vector<Term> terms, Combine combine) {
    if (terms.empty()) return nil_term();
    Term acc = std::move(terms.back());
    for (std::size_t i = terms.size() - 1; i-- > 0;) acc = combine(std::move(terms[i]), std::move(acc));
    return acc;
}

}  // namespace

Term sequence_of(std::vector<Term> terms) { return fold_right(std::move(terms), sequence); }
Term parallel_of(std::vector<Term> terms) { return fold_right(std::move(terms), parallel); }

bool is_nil(const Term& t) { return std::holds_alternative<Nil>(t.node); }

}  // namespace msadl
