#include "generators.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace msadl::testing {

std::int64_t Gen::between(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(rng_.below(static_cast<std::uint64_t>(hi - lo) + 1));
}

std::string Gen::text(std::size_t minLen, std::size_t maxLen, bool exotic) {
    static const std::vector<std::string> plain = {"a", "b", "c", "x", "Y", "Z", "0", "7", "-", " ", "_"};
    static const std::vector<std::string> odd = {"\"", "\\", "\xc3\xa9", "\xe6\x97\xa5", "\n", "\t", "'", "{", "|"};
    std::size_t n = static_cast<std::size_t>(between(static_cast<std::int64_t>(minLen), static_cast<std::int64_t>(maxLen)));
    std::string out;
    for (std::size_t i = 0; i < n; ++i) out += exotic && coin(4) ? pick(odd) : pick(plain);
    return out;
}

const std::vector<std::string>& sample_patterns() {
    static const std::vector<std::string> p = {"[a-z]+", "[0-9]{3}-[0-9]{2}-[0-9]{4}", "(ab|cd)*", "[A-Z][a-z]{0,5}",
                                               "x?y+"};
    return p;
}

namespace {

std::string chars_from(Gen& g, const std::string& alphabet, std::size_t n) {
    std::string out;
    for (std::size_t i = 0; i < n; ++i) out += alphabet[g.below(alphabet.size())];
    return out;
}

const std::string kLower = "abcdefghijklmnopqrstuvwxyz";
const std::string kDigits = "0123456789";

}  // namespace

std::string sample_pattern_match(Gen& g, const std::string& pattern) {
    if (pattern == "[a-z]+") return chars_from(g, kLower, static_cast<std::size_t>(g.between(1, 8)));
    if (pattern == "[0-9]{3}-[0-9]{2}-[0-9]{4}") {
        return chars_from(g, kDigits, 3) + "-" + chars_from(g, kDigits, 2) + "-" + chars_from(g, kDigits, 4);
    }
    if (pattern == "(ab|cd)*") {
        std::string out;
        for (auto n = g.between(0, 4); n > 0; --n) out += g.coin() ? "ab" : "cd";
        return out;
    }
    if (pattern == "[A-Z][a-z]{0,5}") {
        return chars_from(g, "ABCDEFGHIJKLMNOPQRSTUVWXYZ", 1) + chars_from(g, kLower, static_cast<std::size_t>(g.between(0, 5)));
    }
    return std::string(static_cast<std::size_t>(g.between(0, 1)), 'x') + std::string(static_cast<std::size_t>(g.between(1, 4)), 'y');
}

BasicType gen_basic_type(Gen& g, bool allowVoid) {
    static const std::vector<NativeType> scalars = {NativeType::Bool, NativeType::Int, NativeType::Double,
                                                    NativeType::String, NativeType::Char};
    BasicType t;
    t.native = allowVoid && g.coin(6) ? NativeType::Void : g.pick(scalars);
    if (!g.coin(3)) return t;
    switch (t.native) {
        case NativeType::String: {
            auto which = g.below(3);
            if (which == 0) {
                auto lo = static_cast<std::uint64_t>(g.between(0, 4));
                t.refinement = LengthRefinement{lo, lo + static_cast<std::uint64_t>(g.between(0, 4))};
            } else if (which == 1) {
                t.refinement = RegexRefinement{g.pick(sample_patterns())};
            } else {
                std::set<std::string> values;
                for (auto n = g.between(1, 3); n > 0; --n) values.insert(g.text(1, 4));
                t.refinement = EnumRefinement{{values.begin(), values.end()}};
            }
            break;
        }
        case NativeType::Int: {
            auto lo = g.between(-50, 50);
            t.refinement = RangeRefinement{static_cast<double>(lo), static_cast<double>(lo + g.between(0, 100))};
            break;
        }
        case NativeType::Double: {
            double lo = static_cast<double>(g.between(-40, 40)) / 4.0;
            t.refinement = RangeRefinement{lo, lo + static_cast<double>(g.between(0, 40)) / 4.0};
            break;
        }
        default: break;
    }
    return t;
}

namespace {

Cardinality gen_cardinality(Gen& g) {
    static const std::vector<Cardinality> pool = {
        {1, 1}, {1, 1}, {1, 1}, {0, 1}, {0, std::nullopt}, {1, std::nullopt}, {2, 3}};
    return g.pick(pool);
}

TypeBody gen_body(Gen& g, const std::vector<std::string>& known, int depth, bool voidRoot) {
    TypeBody b;
    b.root = voidRoot ? BasicType{} : gen_basic_type(g, false);
    auto count = voidRoot ? g.between(1, 4) : (g.coin(3) ? g.between(1, 2) : 0);
    for (std::int64_t i = 0; i < count; ++i) {
        Node n;
        n.name = "f" + std::to_string(i);
        n.cardinality = gen_cardinality(g);
        if (!known.empty() && g.coin(4)) {
            n.type = TypeRef{g.pick(known), {}};
        } else if (depth > 0 && g.coin(4)) {
            n.type = gen_body(g, known, depth - 1, true);
        } else {
            n.type = TypeBody{gen_basic_type(g, true), {}};
        }
        b.nodes.push_back(std::move(n));
    }
    return b;
}

bool scalar_single(const Node& n) {
    if (!n.cardinality.is_single()) return false;
    const auto* body = std::get_if<TypeBody>(&n.type);
    return body && body->root.native != NativeType::Void;
}

}  // namespace

TypeDecl gen_type_decl(Gen& g, const std::string& name, const std::vector<std::string>& known, int depth) {
    TypeDecl t;
    t.name = name;
    t.body = gen_body(g, known, depth, !g.coin(4));
    if (g.coin(3)) t.doc = g.coin() ? "Generated type." : "Generated type.\nSecond line.";
    std::vector<std::string> candidates;
    for (const auto& n : t.body.nodes) {
        if (scalar_single(n)) candidates.push_back(n.name);
    }
    if (!candidates.empty() && g.coin(3)) {
        std::vector<std::string> identity{candidates.front()};
        if (candidates.size() > 1 && g.coin()) identity.push_back(candidates.back());
        DddAnnotation a;
        std::string list;
        for (std::size_t i = 0; i < identity.size(); ++i) list += (i ? ", " : "") + identity[i];
        a.raw = "@entity { identity = [ " + list + " ] }";
        a.pattern = EntityPattern{identity};
        t.annotations.push_back(std::move(a));
    }
    return t;
}

Scalar gen_scalar(Gen& g, const BasicType& t) {
    switch (t.native) {
        case NativeType::Void: return Unit{};
        case NativeType::Bool: return g.coin();
        case NativeType::Char: return Char{static_cast<char32_t>('a' + g.below(26))};
        case NativeType::Int: {
            if (const auto* r = t.refinement ? std::get_if<RangeRefinement>(&*t.refinement) : nullptr) {
                return g.between(static_cast<std::int64_t>(std::ceil(r->lo)), static_cast<std::int64_t>(std::floor(r->hi)));
            }
            return g.between(-1000, 1000);
        }
        case NativeType::Double: {
            if (const auto* r = t.refinement ? std::get_if<RangeRefinement>(&*t.refinement) : nullptr) {
                return r->lo + (r->hi - r->lo) * static_cast<double>(g.between(0, 8)) / 8.0;
            }
            return static_cast<double>(g.between(-400, 400)) / 8.0;
        }
        case NativeType::String: break;
    }
    if (!t.refinement) return g.text(0, 6, true);
    if (const auto* l = std::get_if<LengthRefinement>(&*t.refinement)) {
        std::string s;
        auto n = g.between(static_cast<std::int64_t>(l->min), static_cast<std::int64_t>(l->max));
        for (std::int64_t i = 0; i < n; ++i) s += g.coin(5) ? "\xc3\xa9" : "q";
        return s;
    }
    if (const auto* r = std::get_if<RegexRefinement>(&*t.refinement)) return sample_pattern_match(g, r->pattern);
    return g.pick(std::get<EnumRefinement>(*t.refinement).values);
}

ValueTree gen_value(Gen& g, const TypeBody& type, const TypeLookup& lookup, int depth) {
    ValueTree v;
    v.root = gen_scalar(g, type.root);
    for (const auto& n : type.nodes) {
        std::uint64_t hi = n.cardinality.max ? *n.cardinality.max : n.cardinality.min + 2;
        if (depth > 3) hi = n.cardinality.min;
        auto count = g.between(static_cast<std::int64_t>(n.cardinality.min), static_cast<std::int64_t>(hi));
        if (count == 0) continue;
        const TypeBody* inner = std::get_if<TypeBody>(&n.type);
        if (!inner) {
            const TypeDecl* d = lookup(std::get<TypeRef>(n.type).name);
            inner = &d->body;
        }
        auto& list = v.children[n.name];
        for (std::int64_t i = 0; i < count; ++i) list.push_back(gen_value(g, *inner, lookup, depth + 1));
    }
    return v;
}

Expr gen_expr(Gen& g, int depth) {
    Expr e;
    switch (g.below(depth > 0 ? 5 : 3)) {
        case 0: {
            switch (g.below(6)) {
                case 0: e.node = LiteralExpr{g.between(-500, 500)}; break;
                case 1: e.node = LiteralExpr{g.coin()}; break;
                case 2: e.node = LiteralExpr{g.text(0, 5, true)}; break;
                case 3: e.node = LiteralExpr{static_cast<double>(g.between(-100, 100)) / 4.0 + 0.125}; break;
                case 4: e.node = LiteralExpr{Unit{}}; break;
                default: e.node = LiteralExpr{Char{static_cast<char32_t>('a' + g.below(26))}}; break;
            }
            break;
        }
        case 1: e.node = VariableExpr{g.fresh("v")}; break;
        case 2: e.node = FieldExpr{Box<Expr>(variable(g.fresh("v"))), g.fresh("f")}; break;
        case 3: e.node = FieldExpr{Box<Expr>(field(variable(g.fresh("v")), "a")), "b"}; break;
        default: {
            TreeExpr t;
            for (auto n = g.between(1, 3); n > 0; --n) t.fields.emplace_back(g.fresh("f"), Box<Expr>(gen_expr(g, depth - 1)));
            e.node = std::move(t);
        }
    }
    return e;
}

Term gen_term(Gen& g, int depth) {
    auto leaf = [&]() -> Term {
        std::optional<std::string> var;
        std::optional<Expr> reply;
        switch (g.below(4)) {
            case 0: return nil_term();
            case 1:
                if (g.coin()) var = g.fresh("r");
                return invoke(g.fresh("P"), g.fresh("op"), gen_expr(g, 1), var);
            case 2:
                if (g.coin()) reply = gen_expr(g, 1);
                return receive(g.fresh("op"), g.fresh("x"), depth > 0 && g.coin() ? gen_term(g, depth - 1) : nil_term(),
                               reply);
            default:
                if (g.coin()) reply = gen_expr(g, 1);
                return replicate(g.fresh("op"), g.fresh("x"),
                                 depth > 0 && g.coin() ? gen_term(g, depth - 1) : nil_term(), reply);
        }
    };
    if (depth <= 0) return leaf();
    switch (g.below(3)) {
        case 0: return leaf();
        case 1: return sequence(gen_term(g, depth - 1), gen_term(g, depth - 1));
        default: return parallel(gen_term(g, depth - 1), gen_term(g, depth - 1));
    }
}

namespace {

std::vector<std::string> gen_types(Gen& g, std::vector<TypeDecl>& out) {
    std::vector<std::string> known;
    for (auto n = g.between(0, 4); n > 0; --n) {
        std::string name = g.fresh("Ty");
        out.push_back(gen_type_decl(g, name, known));
        known.push_back(name);
    }
    return known;
}

std::string gen_type_name(Gen& g, const std::vector<std::string>& known) {
    static const std::vector<std::string> natives = {"void", "string", "int", "bool", "double"};
    return !known.empty() && g.coin() ? g.pick(known) : g.pick(natives);
}

template <class T>
std::vector<T> nonempty_subset(Gen& g, const std::vector<T>& pool) {
    std::vector<T> out;
    for (const auto& x : pool) {
        if (g.coin()) out.push_back(x);
    }
    if (out.empty()) out.push_back(g.pick(pool));
    return out;
}

struct PortOps {
    std::vector<std::pair<std::string, bool>> ops;  // name, request-response
};

PortOps ops_of(const std::vector<Interface>& ifaces, const std::vector<std::string>& names) {
    PortOps p;
    for (const auto& name : names) {
        for (const auto& i : ifaces) {
            if (i.name != name) continue;
            for (const auto& op : i.operations) {
                p.ops.emplace_back(op.name, std::get<JolieOperation>(op.shape).paradigm == Paradigm::RequestResponse);
            }
        }
    }
    return p;
}

struct BehaviourGen {
    Gen& g;
    std::vector<std::pair<std::string, bool>> inputs;
    std::vector<std::pair<std::string, PortOps>> outputs;

    Term leaf(int depth) {
        auto which = g.below(4);
        if (which == 1 && !outputs.empty()) {
            const auto& [port, ops] = g.pick(outputs);
            const auto& [op, rr] = g.pick(ops.ops);
            return invoke(port, op, gen_expr(g, 1), rr ? std::optional<std::string>(g.fresh("r")) : std::nullopt);
        }
        if (which >= 2 && !inputs.empty()) {
            const auto& [op, rr] = g.pick(inputs);
            std::optional<Expr> reply;
            if (rr) reply = gen_expr(g, 1);
            Term body = depth > 0 && g.coin() ? term(depth - 1) : nil_term();
            return which == 2 ? receive(op, g.fresh("x"), std::move(body), std::move(reply))
                              : replicate(op, g.fresh("x"), std::move(body), std::move(reply));
        }
        return nil_term();
    }

    Term term(int depth) {
        if (depth <= 0) return leaf(0);
        switch (g.below(3)) {
            case 0: return leaf(depth);
            case 1: return sequence(term(depth - 1), term(depth - 1));
            default: return parallel(term(depth - 1), term(depth - 1));
        }
    }
};

}  // namespace

SourceUnit gen_jolie_unit(Gen& g, const std::string& path) {
    SourceUnit u;
    u.path = path;
    u.view = View::Jolie;
    std::vector<std::string> known = gen_types(g, u.types);
    for (auto n = g.between(1, 3); n > 0; --n) {
        Interface i;
        i.name = g.fresh("Api");
        if (g.coin(4)) i.doc = "Generated interface.";
        for (auto k = g.between(1, 3); k > 0; --k) {
            OperationSig op;
            op.name = g.fresh("op");
            JolieOperation j;
            j.request = TypeRef{gen_type_name(g, known), {}};
            if (g.coin()) {
                j.paradigm = Paradigm::RequestResponse;
                j.response = TypeRef{gen_type_name(g, known), {}};
            }
            op.shape = j;
            i.operations.push_back(std::move(op));
        }
        u.interfaces.push_back(std::move(i));
    }
    std::vector<std::string> ifaceNames;
    for (const auto& i : u.interfaces) ifaceNames.push_back(i.name);
    static const std::vector<std::string> protocols = {"sodep", "http", "socket"};
    std::vector<std::string> locations;
    auto firstPort = g.between(1000, 9000);
    for (auto n = g.between(0, 3); n > 0; --n) {
        JolieServiceModel s;
        s.name = g.fresh("Svc");
        if (g.coin(4)) s.doc = "Generated service.";
        BehaviourGen bg{g, {}, {}};
        for (auto k = g.between(1, 2); k > 0; --k) {
            Port p;
            p.name = g.fresh("In");
            p.direction = PortDirection::Input;
            p.location = "socket://localhost:" + std::to_string(firstPort++);
            p.protocol = g.pick(protocols);
            if (g.coin()) p.dataFormat = g.coin() ? "json" : "xml";
            p.interfaces = nonempty_subset(g, ifaceNames);
            for (auto& op : ops_of(u.interfaces, p.interfaces).ops) bg.inputs.push_back(op);
            locations.push_back(p.location);
            s.ports.push_back(std::move(p));
        }
        for (auto k = g.between(0, 2); k > 0; --k) {
            Port p;
            p.name = g.fresh("Out");
            p.direction = PortDirection::Output;
            p.location = g.pick(locations);
            p.protocol = g.pick(protocols);
            if (g.coin()) p.dataFormat = "json";
            p.interfaces = nonempty_subset(g, ifaceNames);
            bg.outputs.emplace_back(p.name, ops_of(u.interfaces, p.interfaces));
            s.ports.push_back(std::move(p));
        }
        if (g.coin(4) == false) s.behaviour = bg.term(static_cast<int>(g.between(0, 3)));
        u.services.push_back(std::move(s));
    }
    return u;
}

SourceUnit gen_lemma_unit(Gen& g, const std::string& path) {
    SourceUnit u;
    u.path = path;
    u.view = View::Lemma;
    u.imports.push_back({"behaviour_language", std::string(kJolieBehaviourLanguage), "jolie", {}});
    u.imports.push_back({"technology", std::string(kJolieTechnology), "jolie_interpreter", {}});
    std::vector<std::string> known = gen_types(g, u.types);

    for (auto n = g.between(1, 2); n > 0; --n) {
        TechnologyModel t;
        t.name = g.fresh("Tech");
        for (auto k = g.between(1, 2); k > 0; --k) t.dataFormats.push_back(g.fresh("fmt"));
        for (auto k = g.between(1, 2); k > 0; --k) {
            ProtocolDecl p{g.fresh("proto"), std::nullopt};
            if (g.coin()) p.defaultFormat = g.pick(t.dataFormats);
            t.protocols.push_back(std::move(p));
        }
        u.technologies.push_back(std::move(t));
    }

    static const std::vector<ServiceKind> kinds = {ServiceKind::Functional, ServiceKind::Utility,
                                                   ServiceKind::Infrastructure};
    int port = 20000;
    for (auto n = g.between(0, 3); n > 0; --n) {
        LemmaServiceModel m;
        m.qualifiedName = "org.gen" + std::to_string(g.below(100)) + "." + g.fresh("Svc");
        m.kind = g.pick(kinds);
        if (g.coin(4)) m.doc = "Generated microservice.";
        std::vector<std::string> ops;
        for (auto k = g.between(1, 2); k > 0; --k) {
            Interface i;
            i.name = g.fresh("Api");
            for (auto j = g.between(1, 3); j > 0; --j) {
                OperationSig op;
                op.name = g.fresh("op");
                LemmaOperation l;
                for (auto p = g.between(0, 3); p > 0; --p) {
                    Parameter param;
                    param.name = g.fresh("p");
                    param.exchange = g.coin() ? Exchange::Incoming : Exchange::Outgoing;
                    param.communication = g.coin() ? Communication::Synchronous : Communication::Asynchronous;
                    param.type = TypeRef{gen_type_name(g, known), {}};
                    l.parameters.push_back(std::move(param));
                }
                op.shape = std::move(l);
                ops.push_back(op.name);
                i.operations.push_back(std::move(op));
            }
            m.interfaces.push_back(std::move(i));
        }
        std::vector<std::string> ifaceNames;
        for (const auto& i : m.interfaces) ifaceNames.push_back(i.name);
        for (auto k = g.between(1, 2); k > 0; --k) {
            Endpoint e;
            e.name = g.fresh("Ep");
            e.location = "socket://localhost:" + std::to_string(port++);
            e.interfaces = nonempty_subset(g, ifaceNames);
            const TechnologyModel& t = g.pick(u.technologies);
            const ProtocolDecl& p = g.pick(t.protocols);
            const std::string& f = g.pick(t.dataFormats);
            if (g.coin()) {
                e.protocol = TechRef{t.name, p.name};
                e.dataFormat = TechRef{t.name, f};
            } else {
                MappingEntry map;
                map.serviceRef = m.qualifiedName;
                map.endpointRef = e.name;
                map.technology = t.name;
                map.protocol = p.name;
                map.format = f;
                u.mappings.push_back(std::move(map));
            }
            m.endpoints.push_back(std::move(e));
        }
        for (const auto& other : u.microservices) {
            if (!other.isExtension && g.coin()) m.requires_.push_back({"", other.qualifiedName, {}});
        }
        std::vector<std::string> unbound;
        for (const auto& op : ops) {
            if (g.coin(3)) {
                BehaviourBinding b;
                b.operation = op;
                b.language = "jolie";
                b.technology = "jolie_interpreter";
                b.body = gen_term(g, 2);
                m.behaviourBindings.push_back(std::move(b));
            } else {
                unbound.push_back(op);
            }
        }
        if (g.coin(4)) {
            BehaviourBinding b;
            b.operation = std::string(kServiceBehaviour);
            b.language = "jolie";
            b.technology = "jolie_interpreter";
            b.body = gen_term(g, 2);
            m.behaviourBindings.push_back(std::move(b));
        }
        std::string qname = m.qualifiedName;
        u.microservices.push_back(std::move(m));
        if (!unbound.empty() && g.coin(3)) {
            LemmaServiceModel ext;
            ext.qualifiedName = qname;
            ext.isExtension = true;
            BehaviourBinding b;
            b.operation = unbound.front();
            b.language = "jolie";
            b.technology = "jolie_interpreter";
            b.body = gen_term(g, 1);
            ext.behaviourBindings.push_back(std::move(b));
            u.microservices.push_back(std::move(ext));
        }
    }
    return u;
}

}  // namespace msadl::testing
