#include "msadl/printer.hpp"

#include <algorithm>
#include <sstream>

namespace msadl {

namespace {

std::string pad(int indent) { return std::string(static_cast<std::size_t>(indent) * 4, ' '); }

std::string quoted(const std::string& s) { return scalar_literal(Scalar{s}); }

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

void write_doc(std::ostringstream& out, const std::optional<std::string>& doc, int indent) {
    if (!doc) return;
    std::istringstream lines(*doc);
    std::string line;
    bool any = false;
    while (std::getline(lines, line)) {
        any = true;
        out << pad(indent) << (line.empty() ? "///" : "/// " + line) << '\n';
    }
    if (!any) out << pad(indent) << "///\n";
}

std::string number_text(double d) {
    std::string t = scalar_literal(Scalar{d});
    // `range(0.0, 5.0)` reads poorly; integral bounds print without a fraction.
    if (t.size() > 2 && t.compare(t.size() - 2, 2, ".0") == 0) t.resize(t.size() - 2);
    return t;
}

void write_nodes(std::ostringstream& out, const std::vector<Node>& nodes, int indent);

std::string type_expr_text(const std::variant<TypeRef, TypeBody>& t, int indent) {
    if (const auto* ref = std::get_if<TypeRef>(&t)) return ref->name;
    const auto& body = std::get<TypeBody>(t);
    std::string text = serialize_basic_type(body.root);
    if (!body.nodes.empty()) {
        std::ostringstream out;
        write_nodes(out, body.nodes, indent);
        text += " " + out.str();
    }
    return text;
}

std::string cardinality_text(const Cardinality& c) {
    if (c.is_single()) return {};
    return "[" + std::to_string(c.min) + "," + (c.max ? std::to_string(*c.max) : "*") + "]";
}

// Writes `{ ... }` where the closing brace sits at `indent`.
void write_nodes(std::ostringstream& out, const std::vector<Node>& nodes, int indent) {
    out << "{\n";
    for (const auto& n : nodes) {
        out << pad(indent + 1) << n.name << cardinality_text(n.cardinality) << ": "
            << type_expr_text(n.type, indent + 1) << '\n';
    }
    out << pad(indent) << '}';
}

void write_type(std::ostringstream& out, const TypeDecl& t, int indent) {
    write_doc(out, t.doc, indent);
    for (const auto& a : t.annotations) out << pad(indent) << "/// " << a.raw << '\n';
    for (const auto& a : t.extraAnnotations) out << pad(indent) << "/// " << a << '\n';
    out << pad(indent) << "type " << t.name;
    bool plainVoid = t.body.root.native == NativeType::Void && !t.body.root.refinement;
    if (!plainVoid) out << ": " << serialize_basic_type(t.body.root);
    if (!t.body.nodes.empty()) {
        out << ' ';
        write_nodes(out, t.body.nodes, indent);
    }
    out << '\n';
}

std::string exchange_text(const Parameter& p) {
    std::string s = p.exchange == Exchange::Incoming ? "in" : "out";
    s += p.communication == Communication::Synchronous ? " sync" : " async";
    return s;
}

void write_interface(std::ostringstream& out, const Interface& iface, View view, int indent) {
    write_doc(out, iface.doc, indent);
    out << pad(indent) << "interface " << iface.name << " {\n";
    for (const auto& op : iface.operations) {
        out << pad(indent + 1);
        if (const auto* j = std::get_if<JolieOperation>(&op.shape)) {
            if (j->paradigm == Paradigm::OneWay) {
                out << "oneWay " << op.name << '(' << j->request.name << ')';
            } else {
                out << "requestResponse " << op.name << '(' << j->request.name << ") -> "
                    << (j->response ? j->response->name : std::string("void"));
            }
        } else {
            const auto& l = std::get<LemmaOperation>(op.shape);
            std::vector<std::string> params;
            for (const auto& p : l.parameters) {
                params.push_back(p.name + ": " + exchange_text(p) + " " + p.type.name);
            }
            out << op.name << '(' << join(params, ", ") << ')';
        }
        out << '\n';
    }
    out << pad(indent) << "}\n";
    (void)view;
}

void write_behaviour_block(std::ostringstream& out, const Term& t, int indent) {
    out << "{\n" << serialize(t, indent + 1) << '\n' << pad(indent) << '}';
}

void write_port(std::ostringstream& out, const Port& p, int indent) {
    out << pad(indent) << (p.direction == PortDirection::Input ? "inputPort " : "outputPort ") << p.name
        << " {\n";
    out << pad(indent + 1) << "location: " << quoted(p.location) << '\n';
    out << pad(indent + 1) << "protocol: " << p.protocol << '\n';
    if (p.dataFormat) out << pad(indent + 1) << "format: " << *p.dataFormat << '\n';
    if (!p.interfaces.empty()) out << pad(indent + 1) << "interfaces: " << join(p.interfaces, ", ") << '\n';
    out << pad(indent) << "}\n";
}

void write_service(std::ostringstream& out, const JolieServiceModel& s) {
    write_doc(out, s.doc, 0);
    out << "service " << s.name << " {\n";
    for (const auto& p : s.ports) write_port(out, p, 1);
    if (s.behaviour) {
        out << pad(1) << "main ";
        write_behaviour_block(out, *s.behaviour, 1);
        out << '\n';
    }
    out << "}\n";
}

void write_technology(std::ostringstream& out, const TechnologyModel& t) {
    out << "technology " << t.name << " {\n";
    if (!t.protocols.empty()) {
        std::vector<std::string> items;
        for (const auto& p : t.protocols) {
            items.push_back(p.defaultFormat ? p.name + " default " + *p.defaultFormat : p.name);
        }
        out << pad(1) << "protocols {\n" << pad(2) << join(items, ", ") << '\n' << pad(1) << "}\n";
    }
    if (!t.dataFormats.empty()) {
        out << pad(1) << "data formats {\n" << pad(2) << join(t.dataFormats, ", ") << '\n' << pad(1) << "}\n";
    }
    out << "}\n";
}

std::string tech_ref_text(const TechRef& r) { return r.technology + "::" + r.name; }

void write_endpoint(std::ostringstream& out, const Endpoint& e, int indent) {
    out << pad(indent) << "endpoint " << e.name << " {\n";
    out << pad(indent + 1) << "location: " << quoted(e.location) << '\n';
    if (e.protocol) out << pad(indent + 1) << "protocol: " << tech_ref_text(*e.protocol) << '\n';
    if (e.dataFormat) out << pad(indent + 1) << "format: " << tech_ref_text(*e.dataFormat) << '\n';
    if (!e.interfaces.empty()) out << pad(indent + 1) << "interfaces: " << join(e.interfaces, ", ") << '\n';
    out << pad(indent) << "}\n";
}

std::string ref_text(const std::string& alias, const std::string& qname) {
    return alias.empty() ? qname : alias + "::" + qname;
}

void write_binding(std::ostringstream& out, const BehaviourBinding& b, int indent) {
    out << pad(indent) << "@behaviour_language(" << b.language << ")\n";
    out << pad(indent) << "@technology(" << b.technology << ")\n";
    for (const auto& a : b.extraAnnotations) out << pad(indent) << a << '\n';
    out << pad(indent) << b.operation << "() ";
    write_behaviour_block(out, b.body, indent);
    out << '\n';
}

void write_microservice(std::ostringstream& out, const LemmaServiceModel& m) {
    write_doc(out, m.doc, 0);
    if (m.isExtension) {
        out << ref_text(m.alias, m.qualifiedName) << " {\n";
        for (const auto& b : m.behaviourBindings) write_binding(out, b, 1);
        out << "}\n";
        return;
    }
    out << "microservice " << m.qualifiedName << " kind " << to_string(m.kind) << " {\n";
    for (const auto& i : m.interfaces) write_interface(out, i, View::Lemma, 1);
    for (const auto& e : m.endpoints) write_endpoint(out, e, 1);
    for (const auto& r : m.requires_) out << pad(1) << "requires " << ref_text(r.alias, r.qualifiedName) << '\n';
    for (const auto& b : m.behaviourBindings) write_binding(out, b, 1);
    out << "}\n";
}

// ----- behaviour -----------------------------------------------------------

bool is_composite(const Term& t) {
    return std::holds_alternative<Sequence>(t.node) || std::holds_alternative<Parallel>(t.node);
}

std::string grouped(const Term& t, int indent) {
    return pad(indent) + "(\n" + serialize(t, indent + 1) + "\n" + pad(indent) + ")";
}

std::string body_suffix(const Term& body, int indent) {
    if (is_nil(body)) return {};
    return " {\n" + serialize(body, indent + 1) + "\n" + pad(indent) + "}";
}

}  // namespace

std::string serialize_refinement(const Refinement& r) {
    struct V {
        std::string operator()(const LengthRefinement& l) const {
            if (l.min == l.max) return "length(" + std::to_string(l.min) + ")";
            return "length(" + std::to_string(l.min) + ", " + std::to_string(l.max) + ")";
        }
        std::string operator()(const RangeRefinement& g) const {
            return "range(" + number_text(g.lo) + ", " + number_text(g.hi) + ")";
        }
        std::string operator()(const RegexRefinement& x) const { return "regex(" + quoted(x.pattern) + ")"; }
        std::string operator()(const EnumRefinement& e) const {
            std::vector<std::string> items;
            for (const auto& v : e.values) items.push_back(quoted(v));
            return "enum(" + join(items, ", ") + ")";
        }
    };
    return std::visit(V{}, r);
}

std::string serialize_basic_type(const BasicType& t) {
    std::string s(to_string(t.native));
    if (t.refinement) s += "(" + serialize_refinement(*t.refinement) + ")";
    return s;
}

std::string serialize_type_body(const TypeBody& body) { return type_expr_text(body, 0); }

std::string serialize(const TypeDecl& type) {
    std::ostringstream out;
    write_type(out, type, 0);
    return out.str();
}

std::string serialize(const Interface& iface, View view) {
    std::ostringstream out;
    write_interface(out, iface, view, 0);
    return out.str();
}

std::string serialize(const Expr& e) {
    struct V {
        std::string operator()(const LiteralExpr& l) const { return scalar_literal(l.value); }
        std::string operator()(const VariableExpr& v) const { return v.name; }
        std::string operator()(const FieldExpr& f) const { return serialize(*f.base) + "." + f.field; }
        std::string operator()(const TreeExpr& t) const {
            if (t.fields.empty()) return "{ }";
            std::vector<std::string> items;
            for (const auto& [name, sub] : t.fields) items.push_back(name + ": " + serialize(*sub));
            return "{ " + join(items, ", ") + " }";
        }
    };
    return std::visit(V{}, e.node);
}

std::string serialize(const Term& t, int indent) {
    struct V {
        int indent;
        std::string operator()(const Nil&) const { return pad(indent) + "nil"; }
        std::string operator()(const Invoke& i) const {
            std::string payload;
            const auto* lit = std::get_if<LiteralExpr>(&i.payload.node);
            if (!(lit && std::holds_alternative<Unit>(lit->value))) payload = serialize(i.payload);
            std::string s = pad(indent) + i.op + "@" + i.port + "(" + payload + ")";
            if (i.responseVar) s += "(" + *i.responseVar + ")";
            return s;
        }
        std::string operator()(const Receive& r) const {
            std::string s = pad(indent) + r.op + "(" + r.bindVar + ")";
            if (r.reply) s += "(" + serialize(*r.reply) + ")";
            return s + body_suffix(*r.body, indent);
        }
        std::string operator()(const GuardedReplication& r) const {
            std::string s = pad(indent) + "replicate " + r.op + "(" + r.bindVar + ")";
            if (r.reply) s += "(" + serialize(*r.reply) + ")";
            return s + body_suffix(*r.body, indent);
        }
        std::string operator()(const Sequence& s) const {
            std::string first = is_composite(*s.first) ? grouped(*s.first, indent) : serialize(*s.first, indent);
            std::string second = std::holds_alternative<Parallel>(s.second->node) ? grouped(*s.second, indent)
                                                                                   : serialize(*s.second, indent);
            return first + ";\n" + second;
        }
        std::string operator()(const Parallel& p) const {
            std::string left = std::holds_alternative<Parallel>(p.left->node) ? grouped(*p.left, indent)
                                                                              : serialize(*p.left, indent);
            return left + "\n" + pad(indent) + "|\n" + serialize(*p.right, indent);
        }
    };
    return std::visit(V{indent}, t.node);
}

std::string serialize(const SourceUnit& unit) {
    std::ostringstream out;
    out << "view " << to_string(unit.view) << '\n';
    std::vector<const Import*> imports;
    for (const auto& i : unit.imports) imports.push_back(&i);
    std::stable_sort(imports.begin(), imports.end(), [](const Import* a, const Import* b) {
        return std::tie(a->path, a->alias, a->kind) < std::tie(b->path, b->alias, b->kind);
    });
    if (!imports.empty()) out << '\n';
    for (const auto* i : imports) {
        out << "import " << i->kind << " from " << quoted(i->path);
        if (!i->alias.empty()) out << " as " << i->alias;
        out << '\n';
    }
    for (const auto& t : unit.types) {
        out << '\n';
        write_type(out, t, 0);
    }
    for (const auto& i : unit.interfaces) {
        out << '\n';
        write_interface(out, i, unit.view, 0);
    }
    for (const auto& t : unit.technologies) {
        out << '\n';
        write_technology(out, t);
    }
    for (const auto& s : unit.services) {
        out << '\n';
        write_service(out, s);
    }
    for (const auto& m : unit.microservices) {
        out << '\n';
        write_microservice(out, m);
    }
    if (!unit.mappings.empty()) out << '\n';
    for (const auto& m : unit.mappings) {
        out << "map service " << m.serviceRef << " endpoint " << m.endpointRef << " -> technology "
            << m.technology << " protocol " << m.protocol << " format " << m.format << '\n';
    }
    return out.str();
}

}  // namespace msadl
