#include "msadl/docs.hpp"

#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>

#include "msadl/printer.hpp"

namespace msadl {

namespace {

std::string number_text(double x) {
    if (std::floor(x) == x && std::fabs(x) < 1e15) return std::to_string(static_cast<long long>(x));
    std::ostringstream s;
    s << std::setprecision(15) << x;
    return s.str();
}

std::string join(const std::vector<std::string>& items, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) out += (i ? sep : "") + items[i];
    return out;
}

std::string cell(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '|') out += '\\';
        if (c == '\n') {
            out += ' ';
            continue;
        }
        out += c;
    }
    return out.empty() ? "-" : out;
}

std::string code(const std::string& s) { return "`" + s + "`"; }

std::string simple_name(const std::string& qname) {
    auto dot = qname.rfind('.');
    return dot == std::string::npos ? qname : qname.substr(dot + 1);
}

void write_doc(std::ostringstream& out, const std::optional<std::string>& doc) {
    if (doc && !doc->empty()) out << *doc << "\n\n";
}

std::string type_link(const ModelSet& set, std::size_t unit, const TypeRef& ref, const std::string& prefix) {
    const TypeDecl* t = set.find_type(unit, ref.name);
    if (t && t != builtin_type(t->body.root.native)) return "[" + t->name + "](" + prefix + t->name + ".md)";
    if (auto native = native_from_keyword(ref.name)) return std::string(to_string(*native));
    return ref.name + " (unresolved)";
}

struct NodeTable {
    const ModelSet& set;
    std::size_t unit;
    std::ostringstream& out;

    void rows(const TypeBody& body, const std::string& prefix) {
        for (const auto& n : body.nodes) {
            std::string path = prefix.empty() ? n.name : prefix + "." + n.name;
            std::string type;
            const TypeBody* inner = std::get_if<TypeBody>(&n.type);
            if (inner) {
                type = inner->nodes.empty() ? describe_basic_type(inner->root)
                                            : describe_basic_type(inner->root) + " with nested nodes";
            } else {
                type = type_link(set, unit, std::get<TypeRef>(n.type), "");
            }
            out << "| " << code(path) << " | " << describe_cardinality(n.cardinality) << " | " << cell(type) << " |\n";
            if (inner) rows(*inner, path);
        }
    }
};

std::string type_page(const ModelSet& set, std::size_t unit, const TypeDecl& t) {
    std::ostringstream out;
    out << "# Type " << t.name << "\n\n";
    write_doc(out, t.doc);
    if (const EntityPattern* p = entity_pattern(t)) out << "Entity, " << describe_identity(*p) << ".\n\n";
    out << "Root value: " << describe_basic_type(t.body.root) << ".\n\n";
    if (t.body.nodes.empty()) {
        out << "No nodes.\n";
    } else {
        out << "| Node | Occurrences | Type |\n|---|---|---|\n";
        NodeTable{set, unit, out}.rows(t.body, "");
    }
    if (!t.extraAnnotations.empty()) {
        out << "\nOther annotations:\n\n";
        for (const auto& a : t.extraAnnotations) out << "- " << code(a) << '\n';
    }
    return out.str();
}

struct OpRow {
    std::string paradigm;
    std::string request;
    std::string response;
};

OpRow jolie_row(const ModelSet& set, std::size_t unit, const JolieOperation& op) {
    OpRow r;
    r.paradigm = op.paradigm == Paradigm::OneWay ? "one-way" : "request-response";
    r.request = type_link(set, unit, op.request, "../types/");
    r.response = op.response ? type_link(set, unit, *op.response, "../types/") : "-";
    return r;
}

std::string parameter_text(const ModelSet& set, std::size_t unit, const Parameter& p) {
    return std::string(p.exchange == Exchange::Incoming ? "in " : "out ") +
           (p.communication == Communication::Synchronous ? "sync " : "async ") + p.name + ": " +
           type_link(set, unit, p.type, "../types/");
}

OpRow lemma_row(const ModelSet& set, std::size_t unit, const LemmaOperation& op) {
    OpRow r;
    const auto& ps = op.parameters;
    auto is = [](const Parameter& p, Exchange e, Communication c) { return p.exchange == e && p.communication == c; };
    if (ps.empty()) {
        r.paradigm = "one-way";
    } else if (ps.size() == 1 && is(ps[0], Exchange::Incoming, Communication::Asynchronous)) {
        r.paradigm = "one-way";
    } else if (ps.size() == 2 &&
               ((is(ps[0], Exchange::Incoming, Communication::Synchronous) &&
                 is(ps[1], Exchange::Outgoing, Communication::Synchronous)) ||
                (is(ps[1], Exchange::Incoming, Communication::Synchronous) &&
                 is(ps[0], Exchange::Outgoing, Communication::Synchronous)))) {
        r.paradigm = "request-response";
    } else {
        r.paradigm = "mixed";
    }
    std::vector<std::string> in, outs;
    for (const auto& p : ps) (p.exchange == Exchange::Incoming ? in : outs).push_back(parameter_text(set, unit, p));
    r.request = in.empty() ? "-" : join(in, ", ");
    r.response = outs.empty() ? "-" : join(outs, ", ");
    return r;
}

void operation_table(std::ostringstream& out, const ModelSet& set, std::size_t unit,
                     const std::vector<const Interface*>& ifaces) {
    out << "## Operations\n\n";
    bool any = false;
    for (const auto* i : ifaces) any = any || !i->operations.empty();
    if (!any) {
        out << "No operations.\n\n";
        return;
    }
    out << "| Operation | Interface | Paradigm | Input | Output |\n|---|---|---|---|---|\n";
    for (const auto* i : ifaces) {
        for (const auto& op : i->operations) {
            OpRow r = std::holds_alternative<JolieOperation>(op.shape)
                          ? jolie_row(set, unit, std::get<JolieOperation>(op.shape))
                          : lemma_row(set, unit, std::get<LemmaOperation>(op.shape));
            out << "| " << code(op.name) << " | " << i->name << " | " << r.paradigm << " | " << cell(r.request)
                << " | " << cell(r.response) << " |\n";
        }
    }
    out << '\n';
}

std::vector<const Interface*> service_interfaces(const ModelSet& set, std::size_t unit, const JolieServiceModel& s) {
    std::vector<const Interface*> out;
    std::set<std::string> seen;
    for (const auto& p : s.ports) {
        if (p.direction != PortDirection::Input) continue;
        for (const auto& name : p.interfaces) {
            const Interface* i = set.find_interface(unit, name);
            if (i && seen.insert(i->name).second) out.push_back(i);
        }
    }
    return out;
}

std::string service_page(const ModelSet& set, std::size_t unit, const JolieServiceModel& s) {
    std::ostringstream out;
    out << "# Service " << s.name << "\n\n";
    write_doc(out, s.doc);
    operation_table(out, set, unit, service_interfaces(set, unit, s));
    out << "## Endpoints\n\n";
    if (s.ports.empty()) {
        out << "No ports.\n\n";
    } else {
        out << "| Port | Direction | Location | Protocol | Format | Interfaces |\n|---|---|---|---|---|---|\n";
        for (const auto& p : s.ports) {
            out << "| " << p.name << " | " << (p.direction == PortDirection::Input ? "input" : "output") << " | "
                << code(p.location) << " | " << p.protocol << " | " << cell(p.dataFormat.value_or(""))
                << " | " << cell(join(p.interfaces, ", ")) << " |\n";
        }
        out << '\n';
    }
    out << "## Dependencies\n\n";
    bool any = false;
    for (const auto& p : s.ports) {
        if (p.direction != PortDirection::Output) continue;
        any = true;
        const JolieServiceModel* target = set.service_at_location(p.location);
        out << "- " << (target ? "[" + target->name + "](" + target->name + ".md)" : std::string("unresolved target"))
            << " through output port " << p.name << " at " << code(p.location) << '\n';
    }
    if (!any) out << "None.\n";
    return out.str();
}

std::string endpoint_tech(const ModelSet& set, const LemmaServiceModel& m, const Endpoint& e, bool protocol) {
    const auto& direct = protocol ? e.protocol : e.dataFormat;
    if (direct) return direct->technology + "::" + direct->name;
    auto maps = set.mappings_for(m.qualifiedName, e.name);
    if (maps.empty()) return "";
    return maps.front()->technology + "::" + (protocol ? maps.front()->protocol : maps.front()->format);
}

std::string microservice_page(const ModelSet& set, std::size_t unit, const LemmaServiceModel& m) {
    std::ostringstream out;
    out << "# Microservice " << m.qualifiedName << "\n\n";
    write_doc(out, m.doc);
    out << "Kind: " << to_string(m.kind) << ".\n\n";
    std::vector<const Interface*> ifaces;
    for (const auto& i : m.interfaces) ifaces.push_back(&i);
    operation_table(out, set, unit, ifaces);
    out << "## Endpoints\n\n";
    if (m.endpoints.empty()) {
        out << "No endpoints.\n\n";
    } else {
        out << "| Endpoint | Location | Protocol | Format | Interfaces |\n|---|---|---|---|---|\n";
        for (const auto& e : m.endpoints) {
            out << "| " << e.name << " | " << code(e.location) << " | " << cell(endpoint_tech(set, m, e, true))
                << " | " << cell(endpoint_tech(set, m, e, false)) << " | " << cell(join(e.interfaces, ", "))
                << " |\n";
        }
        out << '\n';
    }
    out << "## Dependencies\n\n";
    if (m.requires_.empty()) out << "None.\n";
    for (const auto& r : m.requires_) {
        const LemmaServiceModel* target = set.find_microservice(unit, r.alias, r.qualifiedName);
        out << "- "
            << (target ? "[" + target->qualifiedName + "](" + target->qualifiedName + ".md)"
                       : r.qualifiedName + " (unresolved)")
            << '\n';
    }
    auto bindings = set.bindings_for(m);
    if (!bindings.empty()) {
        out << "\n## Behaviours\n\n| Operation | Language | Technology |\n|---|---|---|\n";
        for (const auto& b : bindings) {
            out << "| " << code(b.operation) << " | " << b.language << " | " << b.technology << " |\n";
        }
    }
    return out.str();
}

// Inserts a TODO comment above every line whose trimmed text starts with one
// of the given stub prefixes.
std::string annotate_stubs(const std::string& text, const std::vector<std::pair<std::string, std::string>>& stubs) {
    std::istringstream in(text);
    std::ostringstream out;
    std::string line;
    std::size_t next = 0;
    while (std::getline(in, line)) {
        std::size_t indent = line.find_first_not_of(' ');
        if (next < stubs.size() && indent != std::string::npos &&
            line.compare(indent, stubs[next].first.size(), stubs[next].first) == 0) {
            out << std::string(indent, ' ') << "// TODO: implement " << stubs[next].second << '\n';
            ++next;
        }
        out << line << '\n';
    }
    return out.str();
}

std::string jolie_skeleton(const ModelSet& set, std::size_t unit, const JolieServiceModel& s) {
    SourceUnit u;
    u.view = View::Jolie;
    JolieServiceModel copy = s;
    copy.doc = "Behaviour skeleton for " + s.name + ".";
    std::vector<Term> stubs;
    std::vector<std::pair<std::string, std::string>> markers;
    for (const auto* i : service_interfaces(set, unit, s)) {
        for (const auto& op : i->operations) {
            bool rr = false;
            if (const auto* j = std::get_if<JolieOperation>(&op.shape)) rr = j->paradigm == Paradigm::RequestResponse;
            std::optional<Expr> reply;
            if (rr) {
                reply.emplace();
                reply->node = LiteralExpr{Scalar{Unit{}}};
            }
            stubs.push_back(replicate(op.name, "request", nil_term(), std::move(reply)));
            markers.emplace_back("replicate " + op.name + "(", op.name);
        }
    }
    copy.behaviour = stubs.empty() ? std::optional<Term>() : std::optional<Term>(parallel_of(std::move(stubs)));
    u.services.push_back(std::move(copy));
    return annotate_stubs(serialize(u), markers);
}

std::string lemma_skeleton(const LemmaServiceModel& m) {
    SourceUnit u;
    u.view = View::Lemma;
    u.imports.push_back({"behaviour_language", std::string(kJolieBehaviourLanguage), "jolie", {}});
    u.imports.push_back({"technology", std::string(kJolieTechnology), "jolie_interpreter", {}});
    LemmaServiceModel block;
    block.qualifiedName = m.qualifiedName;
    block.isExtension = true;
    block.doc = "Behaviour skeleton for " + m.qualifiedName + ".";
    std::vector<std::pair<std::string, std::string>> markers;
    for (const auto& i : m.interfaces) {
        for (const auto& op : i.operations) {
            BehaviourBinding b;
            b.operation = op.name;
            b.language = "jolie";
            b.technology = "jolie_interpreter";
            b.body = nil_term();
            block.behaviourBindings.push_back(std::move(b));
            markers.emplace_back("@behaviour_language(", op.name);
        }
    }
    u.microservices.push_back(std::move(block));
    return annotate_stubs(serialize(u), markers);
}

}  // namespace

std::string describe_basic_type(const BasicType& t) {
    std::string base(to_string(t.native));
    if (!t.refinement) return base;
    struct V {
        std::string operator()(const LengthRefinement& l) const {
            auto chars = [](std::uint64_t n) { return std::to_string(n) + (n == 1 ? " character" : " characters"); };
            if (l.min == l.max) return "exactly " + chars(l.min);
            if (l.min == 0) return "at most " + chars(l.max);
            return "between " + std::to_string(l.min) + " and " + chars(l.max);
        }
        std::string operator()(const RangeRefinement& r) const {
            if (r.lo == r.hi) return "exactly " + number_text(r.lo);
            return "between " + number_text(r.lo) + " and " + number_text(r.hi) + " inclusive";
        }
        std::string operator()(const RegexRefinement& r) const { return "matching the pattern " + code(r.pattern); }
        std::string operator()(const EnumRefinement& e) const {
            std::vector<std::string> quoted;
            for (const auto& v : e.values) quoted.push_back("\"" + v + "\"");
            return (e.values.size() == 1 ? "always " : "one of ") + join(quoted, ", ");
        }
    };
    return base + ", " + std::visit(V{}, *t.refinement);
}

std::string describe_cardinality(const Cardinality& c) {
    if (!c.max) {
        if (c.min == 0) return "zero or more";
        if (c.min == 1) return "one or more";
        return "at least " + std::to_string(c.min);
    }
    if (c.min == *c.max) return c.min == 1 ? "exactly one" : "exactly " + std::to_string(c.min);
    if (c.min == 0 && *c.max == 1) return "optional";
    if (c.min == 0) return "at most " + std::to_string(*c.max);
    return "between " + std::to_string(c.min) + " and " + std::to_string(*c.max);
}

std::string describe_identity(const EntityPattern& p) { return "identified by " + join(p.identityFields, ", "); }

SkeletonBundle generate_docs(const ModelSet& set) {
    SkeletonBundle bundle;
    std::vector<GeneratedFile> types, pages, skeletons;
    std::ostringstream index;
    index << "# Model documentation\n\n## Types\n\n";
    bool anyType = false;
    for (std::size_t u = 0; u < set.size(); ++u) {
        for (const auto& t : set.unit(u).types) {
            anyType = true;
            index << "- [" << t.name << "](types/" << t.name << ".md)";
            if (const EntityPattern* p = entity_pattern(t)) index << ": entity " << describe_identity(*p);
            index << '\n';
            types.push_back({"types/" + t.name + ".md", type_page(set, u, t)});
        }
    }
    if (!anyType) index << "No types declared.\n";
    index << "\n## Services\n\n";
    bool anyService = false;
    for (std::size_t u = 0; u < set.size(); ++u) {
        for (const auto& s : set.unit(u).services) {
            anyService = true;
            index << "- [" << s.name << "](services/" << s.name << ".md)\n";
            pages.push_back({"services/" + s.name + ".md", service_page(set, u, s)});
            skeletons.push_back({"skeletons/" + s.name + ".jsm", jolie_skeleton(set, u, s)});
        }
        for (const auto& m : set.unit(u).microservices) {
            if (m.isExtension) continue;
            anyService = true;
            index << "- [" << m.qualifiedName << "](services/" << m.qualifiedName << ".md)\n";
            pages.push_back({"services/" + m.qualifiedName + ".md", microservice_page(set, u, m)});
            skeletons.push_back({"skeletons/" + simple_name(m.qualifiedName) + ".lsm", lemma_skeleton(m)});
        }
    }
    if (!anyService) index << "No services declared.\n";
    bundle.files.push_back({"index.md", index.str()});
    for (auto* group : {&types, &pages, &skeletons}) {
        for (auto& f : *group) bundle.files.push_back(std::move(f));
    }
    return bundle;
}

}  // namespace msadl
