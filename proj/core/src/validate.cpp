#include <cmath>
#include <regex>
#include <set>

#include "msadl/model_set.hpp"

namespace msadl {

namespace {

using Diags = std::vector<Diagnostic>;

void err(Diags& out, std::string_view code, std::string msg, const SourceLocation& loc) {
    out.push_back(make_error(code, std::move(msg), loc));
}

void check_refinement_sanity(const BasicType& t, const SourceLocation& loc, Diags& out) {
    if (!t.refinement) return;
    const Refinement& r = *t.refinement;
    if (!refinement_compatible(t.native, r)) {
        err(out, codes::RefinementIncompatible,
            std::string(refinement_name(r)) + " refinement cannot apply to " + std::string(to_string(t.native)), loc);
        return;
    }
    if (const auto* l = std::get_if<LengthRefinement>(&r)) {
        if (l->min > l->max) {
            err(out, codes::RefinementInvalid,
                "length bounds " + std::to_string(l->min) + " > " + std::to_string(l->max), loc);
        }
    } else if (const auto* g = std::get_if<RangeRefinement>(&r)) {
        if (!std::isfinite(g->lo) || !std::isfinite(g->hi) || g->lo > g->hi) {
            err(out, codes::RefinementInvalid, "range bounds must be finite with lo <= hi", loc);
        }
    } else if (const auto* x = std::get_if<RegexRefinement>(&r)) {
        try {
            std::regex re(x->pattern, std::regex::ECMAScript);
        } catch (const std::regex_error&) {
            err(out, codes::RefinementInvalid, "regex '" + x->pattern + "' does not compile", loc);
        }
    } else if (const auto* e = std::get_if<EnumRefinement>(&r)) {
        std::set<std::string> distinct(e->values.begin(), e->values.end());
        if (e->values.empty()) {
            err(out, codes::RefinementInvalid, "enum needs at least one value", loc);
        } else if (distinct.size() != e->values.size()) {
            err(out, codes::RefinementInvalid, "enum values must be distinct", loc);
        }
    }
}

void check_body(const TypeBody& body, const SourceLocation& loc, const TypeLookup& lookup, Diags& out) {
    check_refinement_sanity(body.root, loc, out);
    std::set<std::string> names;
    for (const auto& n : body.nodes) {
        if (!names.insert(n.name).second) {
            err(out, codes::DuplicateName, "node '" + n.name + "' declared twice", n.loc);
        }
        if (n.cardinality.max && n.cardinality.min > *n.cardinality.max) {
            err(out, codes::CardinalityInvalid,
                "cardinality [" + std::to_string(n.cardinality.min) + "," + std::to_string(*n.cardinality.max) +
                    "] of '" + n.name + "' has min > max",
                n.loc);
        }
        if (const auto* ref = std::get_if<TypeRef>(&n.type)) {
            if (!lookup(ref->name)) {
                err(out, codes::RefUnresolved, "type '" + ref->name + "' is not declared", ref->loc.line ? ref->loc : n.loc);
            }
        } else {
            check_body(std::get<TypeBody>(n.type), n.loc, lookup, out);
        }
    }
}

// Root basic type of a node, following one type reference.
std::optional<BasicType> node_root(const Node& n, const TypeLookup& lookup) {
    if (const auto* body = std::get_if<TypeBody>(&n.type)) return body->root;
    const TypeDecl* t = lookup(std::get<TypeRef>(n.type).name);
    if (!t) return std::nullopt;
    return t->body.root;
}

void check_annotations(const TypeDecl& t, const TypeLookup& lookup, Diags& out) {
    for (const auto& a : t.annotations) {
        const auto& e = std::get<EntityPattern>(a.pattern);
        const SourceLocation& loc = a.loc.line ? a.loc : t.loc;
        if (e.identityFields.empty()) {
            err(out, codes::AnnotationMalformed, "@entity identity list is empty", loc);
        }
        std::set<std::string> seen;
        for (const auto& f : e.identityFields) {
            if (!seen.insert(f).second) {
                err(out, codes::DddIdentityDuplicate, "identity field '" + f + "' listed twice", loc);
                continue;
            }
            const Node* n = find_node(t.body, f);
            if (!n) {
                err(out, codes::DddIdentityFieldMissing,
                    "identity field '" + f + "' is not a node of type '" + t.name + "'", loc);
                continue;
            }
            auto root = node_root(*n, lookup);
            if (!n->cardinality.is_single() || (root && root->native == NativeType::Void)) {
                err(out, codes::DddIdentityNotScalar,
                    "identity field '" + f + "' must be a single non-void value", loc);
            }
        }
    }
}

}  // namespace

std::vector<Diagnostic> validate_type(const TypeDecl& t, const TypeLookup& lookup) {
    Diags out;
    check_body(t.body, t.loc, lookup, out);
    check_annotations(t, lookup, out);
    sort_diagnostics(out);
    return out;
}

namespace {

struct UnitValidator {
    const ModelSet& set;
    std::size_t unitIndex;
    Diags& out;

    const SourceUnit& unit() const { return set.unit(unitIndex); }

    void type_ref(const TypeRef& ref, const SourceLocation& fallback) {
        if (!set.find_type(unitIndex, ref.name)) {
            err(out, codes::RefUnresolved, "type '" + ref.name + "' is not declared", ref.loc.line ? ref.loc : fallback);
        }
    }

    void run() {
        const SourceUnit& u = unit();
        TypeLookup lookup = set.type_lookup(unitIndex);
        for (const auto& t : u.types) {
            check_body(t.body, t.loc, lookup, out);
            check_annotations(t, lookup, out);
        }
        for (const auto& i : u.interfaces) interface(i, View::Jolie);
        for (const auto& t : u.technologies) technology(t);
        for (const auto& s : u.services) service(s);
        for (const auto& m : u.microservices) microservice(m);
        for (const auto& m : u.mappings) mapping(m);
    }

    void interface(const Interface& iface, View view) {
        std::set<std::string> ops;
        bool style = view == View::Jolie;
        for (const auto& op : iface.operations) {
            if (!ops.insert(op.name).second) {
                err(out, codes::DuplicateName,
                    "operation '" + op.name + "' declared twice in interface '" + iface.name + "'", op.loc);
            }
            if (op.is_jolie_style() != style) {
                err(out, codes::InterfaceMixedStyle,
                    "operation '" + op.name + "' of interface '" + iface.name + "' uses the " +
                        (op.is_jolie_style() ? "Jolie" : "LEMMA") + " operation style in the " +
                        std::string(to_string(view)) + " view",
                    op.loc);
            }
            if (const auto* j = std::get_if<JolieOperation>(&op.shape)) {
                type_ref(j->request, op.loc);
                if (j->paradigm == Paradigm::RequestResponse) {
                    if (j->response) type_ref(*j->response, op.loc);
                    else err(out, codes::RefUnresolved, "request-response '" + op.name + "' lacks a response type", op.loc);
                }
            } else {
                std::set<std::string> params;
                for (const auto& p : std::get<LemmaOperation>(op.shape).parameters) {
                    if (!params.insert(p.name).second) {
                        err(out, codes::DuplicateName,
                            "parameter '" + p.name + "' declared twice in operation '" + op.name + "'", p.loc);
                    }
                    type_ref(p.type, p.loc);
                }
            }
        }
    }

    void technology(const TechnologyModel& t) {
        std::set<std::string> protocols;
        std::set<std::string> formats;
        for (const auto& f : t.dataFormats) {
            if (!formats.insert(f).second) {
                err(out, codes::DuplicateName, "data format '" + f + "' declared twice in '" + t.name + "'", t.loc);
            }
        }
        for (const auto& p : t.protocols) {
            if (!protocols.insert(p.name).second) {
                err(out, codes::DuplicateName, "protocol '" + p.name + "' declared twice in '" + t.name + "'", t.loc);
            }
            if (p.defaultFormat && !t.has_format(*p.defaultFormat)) {
                err(out, codes::TechDefaultFormat,
                    "default format '" + *p.defaultFormat + "' of protocol '" + p.name + "' is not a data format of '" +
                        t.name + "'",
                    t.loc);
            }
        }
    }

    struct OpInfo {
        const OperationSig* sig = nullptr;
        PortDirection direction = PortDirection::Input;
    };

    const OperationSig* op_in_port(const Port& port, std::string_view op) {
        for (const auto& name : port.interfaces) {
            if (const Interface* i = set.find_interface(unitIndex, name)) {
                if (const OperationSig* sig = i->find(op)) return sig;
            }
        }
        return nullptr;
    }

    void service(const JolieServiceModel& s) {
        std::set<std::string> ports;
        for (const auto& p : s.ports) {
            if (!ports.insert(p.name).second) {
                err(out, codes::DuplicateName, "port '" + p.name + "' declared twice in service '" + s.name + "'", p.loc);
            }
            if (!is_valid_uri(p.location)) {
                err(out, codes::UriInvalid, "location '" + p.location + "' of port '" + p.name + "' is not a URI", p.loc);
            }
            if (p.interfaces.empty()) {
                err(out, codes::PortNoInterfaces, "port '" + p.name + "' lists no interfaces", p.loc);
            }
            for (const auto& i : p.interfaces) {
                if (!set.find_interface(unitIndex, i)) {
                    err(out, codes::RefUnresolved, "interface '" + i + "' is not declared", p.loc);
                }
            }
        }
        if (s.behaviour) {
            visit_terms(*s.behaviour, [&](const Term& t) { behaviour_term(s, t); });
        }
    }

    static const JolieOperation* jolie_shape(const OperationSig* sig) {
        return sig ? std::get_if<JolieOperation>(&sig->shape) : nullptr;
    }

    void behaviour_term(const JolieServiceModel& s, const Term& t) {
        const SourceLocation& loc = t.loc.line ? t.loc : s.loc;
        if (const auto* inv = std::get_if<Invoke>(&t.node)) {
            const Port* port = s.find_port(inv->port);
            if (!port) {
                err(out, codes::RefUnresolved, "service '" + s.name + "' has no port '" + inv->port + "'", loc);
                return;
            }
            if (port->direction != PortDirection::Output) {
                err(out, codes::BehaviourDirection,
                    "'" + inv->op + "@" + inv->port + "' invokes through an input port", loc);
                return;
            }
            const auto* shape = jolie_shape(op_in_port(*port, inv->op));
            if (!shape) {
                err(out, codes::BehaviourOpUnknown,
                    "operation '" + inv->op + "' is not offered by port '" + inv->port + "'", loc);
                return;
            }
            bool rr = shape->paradigm == Paradigm::RequestResponse;
            if (rr != inv->responseVar.has_value()) {
                err(out, codes::BehaviourParadigm,
                    "'" + inv->op + "' is " +
                        (rr ? "request-response and needs a response variable" : "one-way and takes no response variable"),
                    loc);
            }
            return;
        }
        std::string op;
        bool hasReply = false;
        if (const auto* r = std::get_if<Receive>(&t.node)) {
            op = r->op;
            hasReply = r->reply.has_value();
        } else if (const auto* g = std::get_if<GuardedReplication>(&t.node)) {
            op = g->op;
            hasReply = g->reply.has_value();
        } else {
            return;
        }
        const JolieOperation* shape = nullptr;
        bool onOutput = false;
        for (const auto& p : s.ports) {
            const auto* found = jolie_shape(op_in_port(p, op));
            if (!found) continue;
            if (p.direction == PortDirection::Input) {
                shape = found;
                break;
            }
            onOutput = true;
        }
        if (!shape) {
            if (onOutput) {
                err(out, codes::BehaviourDirection, "operation '" + op + "' is received but only offered by an output port", loc);
            } else {
                err(out, codes::BehaviourOpUnknown, "operation '" + op + "' is not offered by any input port of '" + s.name + "'", loc);
            }
            return;
        }
        bool rr = shape->paradigm == Paradigm::RequestResponse;
        if (rr != hasReply) {
            err(out, codes::BehaviourParadigm,
                "'" + op + "' is " + (rr ? "request-response and needs a reply expression" : "one-way and takes no reply"),
                loc);
        }
    }

    bool alias_known(std::string_view alias) const {
        for (const auto& imp : unit().imports) {
            if (imp.alias == alias) return true;
        }
        return false;
    }

    void bindings(const LemmaServiceModel* target, const std::vector<BehaviourBinding>& list, Diags& ops) {
        std::set<std::string> seen;
        for (const auto& b : list) {
            const SourceLocation& loc = b.loc;
            if (!seen.insert(b.operation).second) {
                err(ops, codes::DuplicateName, "behaviour for '" + b.operation + "' given twice", loc);
            }
            if (target && b.operation != kServiceBehaviour) {
                bool known = false;
                for (const auto& i : target->interfaces) known = known || i.find(b.operation);
                if (!known) {
                    err(ops, codes::BehaviourOpUnknown,
                        "'" + target->qualifiedName + "' has no operation '" + b.operation + "'", loc);
                }
            }
            for (const auto* alias : {&b.language, &b.technology}) {
                if (!alias_known(*alias)) {
                    err(ops, codes::RefUnresolved, "import alias '" + *alias + "' is not declared", loc);
                }
            }
        }
    }

    void microservice(const LemmaServiceModel& m) {
        if (m.isExtension) {
            const LemmaServiceModel* target = set.find_microservice(unitIndex, m.alias, m.qualifiedName);
            if (!target) {
                std::string ref = m.alias.empty() ? m.qualifiedName : m.alias + "::" + m.qualifiedName;
                err(out, codes::RefUnresolved, "microservice '" + ref + "' is not declared", m.loc);
            }
            bindings(target, m.behaviourBindings, out);
            return;
        }
        std::set<std::string> names;
        for (const auto& i : m.interfaces) {
            if (!names.insert(i.name).second) {
                err(out, codes::DuplicateName, "interface '" + i.name + "' declared twice in '" + m.qualifiedName + "'", i.loc);
            }
            interface(i, View::Lemma);
        }
        std::set<std::string> endpoints;
        for (const auto& e : m.endpoints) {
            if (!endpoints.insert(e.name).second) {
                err(out, codes::DuplicateName, "endpoint '" + e.name + "' declared twice in '" + m.qualifiedName + "'", e.loc);
            }
            endpoint(m, e);
        }
        std::set<std::pair<std::string, std::string>> required;
        for (const auto& r : m.requires_) {
            const LemmaServiceModel* target = set.find_microservice(unitIndex, r.alias, r.qualifiedName);
            std::string ref = r.alias.empty() ? r.qualifiedName : r.alias + "::" + r.qualifiedName;
            if (!target) {
                err(out, codes::RefUnresolved, "required microservice '" + ref + "' is not declared", r.loc);
            }
            if (!required.insert({target ? target->qualifiedName : ref, ""}).second) {
                err(out, codes::RequiresDuplicate, "'" + ref + "' required twice", r.loc);
            }
        }
        bindings(&m, m.behaviourBindings, out);
    }

    void endpoint(const LemmaServiceModel& m, const Endpoint& e) {
        if (!is_valid_uri(e.location)) {
            err(out, codes::UriInvalid, "location '" + e.location + "' of endpoint '" + e.name + "' is not a URI", e.loc);
        }
        for (const auto& i : e.interfaces) {
            if (!m.find_interface(i)) {
                err(out, codes::RefUnresolved, "'" + m.qualifiedName + "' has no interface '" + i + "'", e.loc);
            }
        }
        if (e.protocol || e.dataFormat) {
            if (e.protocol) {
                const TechnologyModel* t = set.find_technology(unitIndex, e.protocol->technology);
                if (!t || !t->find_protocol(e.protocol->name)) {
                    err(out, codes::EndpointTechUnresolved,
                        "protocol '" + e.protocol->technology + "::" + e.protocol->name + "' does not resolve", e.loc);
                }
            }
            if (e.dataFormat) {
                const TechnologyModel* t = set.find_technology(unitIndex, e.dataFormat->technology);
                if (!t || !t->has_format(e.dataFormat->name)) {
                    err(out, codes::EndpointTechUnresolved,
                        "format '" + e.dataFormat->technology + "::" + e.dataFormat->name + "' does not resolve", e.loc);
                }
            }
        } else if (set.mappings_for(m.qualifiedName, e.name).empty()) {
            err(out, codes::EndpointTechUnresolved,
                "endpoint '" + e.name + "' of '" + m.qualifiedName + "' has no protocol and no mapping entry", e.loc);
        }
    }

    void mapping(const MappingEntry& m) {
        const LemmaServiceModel* svc = set.find_microservice(m.serviceRef);
        if (!svc) {
            err(out, codes::RefUnresolved, "mapped microservice '" + m.serviceRef + "' is not declared", m.loc);
        } else {
            bool found = false;
            for (const auto& e : svc->endpoints) found = found || e.name == m.endpointRef;
            if (!found) {
                err(out, codes::RefUnresolved, "'" + m.serviceRef + "' has no endpoint '" + m.endpointRef + "'", m.loc);
            }
        }
        const TechnologyModel* t = set.find_technology(unitIndex, m.technology);
        if (!t) t = set.find_technology(m.technology);
        if (!t) {
            err(out, codes::RefUnresolved, "technology '" + m.technology + "' is not declared", m.loc);
            return;
        }
        if (!t->find_protocol(m.protocol)) {
            err(out, codes::RefUnresolved, "technology '" + m.technology + "' has no protocol '" + m.protocol + "'", m.loc);
        }
        if (!t->has_format(m.format)) {
            err(out, codes::RefUnresolved, "technology '" + m.technology + "' has no data format '" + m.format + "'", m.loc);
        }
    }
};

}  // namespace

std::vector<Diagnostic> validate(const ModelSet& set, std::size_t unit) {
    Diags out;
    const std::string& path = set.unit(unit).path;
    for (const auto& d : set.resolve_diagnostics()) {
        if (d.location.file == path) out.push_back(d);
    }
    UnitValidator{set, unit, out}.run();
    sort_diagnostics(out);
    return out;
}

std::vector<Diagnostic> validate(const ModelSet& set) {
    Diags out = set.resolve_diagnostics();
    for (std::size_t u = 0; u < set.size(); ++u) UnitValidator{set, u, out}.run();
    sort_diagnostics(out);
    return out;
}

}  // namespace msadl
