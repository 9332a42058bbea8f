#include "msadl/transform.hpp"

#include <algorithm>
#include <iomanip>
#include <set>
#include <sstream>

namespace msadl {

std::string_view to_string(TransformDirection d) {
    return d == TransformDirection::JolieToLemma ? "jolie_to_lemma" : "lemma_to_jolie";
}

std::string_view to_string(LossKind k) {
    switch (k) {
        case LossKind::DroppedKind: return "dropped_kind";
        case LossKind::DroppedDddSemantics: return "dropped_ddd_semantics";
        case LossKind::SynthesizedDefault: return "synthesized_default";
        case LossKind::AmbiguousParadigm: return "ambiguous_paradigm";
        case LossKind::DroppedAccessPoint: return "dropped_access_point";
        case LossKind::DroppedName: return "dropped_name";
        case LossKind::DroppedSharing: return "dropped_sharing";
    }
    return "synthesized_default";
}

void LossReport::append(const LossReport& other) {
    items.insert(items.end(), other.items.begin(), other.items.end());
}

nlohmann::json LossReport::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& i : items) {
        arr.push_back({{"direction", to_string(i.direction)},
                       {"element", i.elementPath},
                       {"kind", to_string(i.kind)},
                       {"detail", i.detail}});
    }
    return {{"items", arr}};
}

std::string LossReport::render_table() const {
    if (items.empty()) return "no information loss\n";
    std::size_t wKind = 4;
    std::size_t wElem = 7;
    for (const auto& i : items) {
        wKind = std::max(wKind, to_string(i.kind).size());
        wElem = std::max(wElem, i.elementPath.size());
    }
    std::ostringstream out;
    out << std::left << std::setw(static_cast<int>(wKind)) << "KIND" << "  " << std::setw(static_cast<int>(wElem))
        << "ELEMENT" << "  DETAIL\n";
    for (const auto& i : items) {
        out << std::setw(static_cast<int>(wKind)) << to_string(i.kind) << "  " << std::setw(static_cast<int>(wElem))
            << i.elementPath << "  " << i.detail << '\n';
    }
    return out.str();
}

namespace {

constexpr auto J2L = TransformDirection::JolieToLemma;
constexpr auto L2J = TransformDirection::LemmaToJolie;

void lose(LossReport& r, TransformDirection d, std::string path, LossKind k, std::string detail) {
    r.items.push_back(LossItem{d, std::move(path), k, std::move(detail)});
}

std::string simple_name(const std::string& qualified) {
    auto pos = qualified.rfind('.');
    return pos == std::string::npos ? qualified : qualified.substr(pos + 1);
}

Parameter param(std::string name, Exchange e, Communication c, TypeRef t) {
    Parameter p;
    p.name = std::move(name);
    p.exchange = e;
    p.communication = c;
    p.type = std::move(t);
    return p;
}

Interface to_lemma_interface(const Interface& in) {
    Interface out;
    out.name = in.name;
    out.doc = in.doc;
    out.loc = in.loc;
    for (const auto& op : in.operations) {
        OperationSig sig;
        sig.name = op.name;
        sig.loc = op.loc;
        LemmaOperation shape;
        if (const auto* j = std::get_if<JolieOperation>(&op.shape)) {
            if (j->paradigm == Paradigm::RequestResponse) {
                shape.parameters.push_back(param("request", Exchange::Incoming, Communication::Synchronous, j->request));
                shape.parameters.push_back(param("response", Exchange::Outgoing, Communication::Synchronous,
                                                 j->response.value_or(TypeRef{"void", {}})));
            } else {
                shape.parameters.push_back(param("request", Exchange::Incoming, Communication::Asynchronous, j->request));
            }
        } else {
            shape = std::get<LemmaOperation>(op.shape);
        }
        sig.shape = std::move(shape);
        out.operations.push_back(std::move(sig));
    }
    return out;
}

void merge_technology(std::vector<TechnologyModel>& techs, const TechnologyModel& t) {
    auto it = std::find_if(techs.begin(), techs.end(), [&](const TechnologyModel& x) { return x.name == t.name; });
    if (it == techs.end()) {
        techs.push_back(t);
        return;
    }
    for (const auto& p : t.protocols) {
        if (!it->find_protocol(p.name)) it->protocols.push_back(p);
    }
    for (const auto& f : t.dataFormats) {
        if (!it->has_format(f)) it->dataFormats.push_back(f);
    }
}

// Leaves of the right spine of nested Parallel terms.
std::vector<Term> parallel_spine(const Term& t) {
    std::vector<Term> leaves;
    const Term* cur = &t;
    while (const auto* p = std::get_if<Parallel>(&cur->node)) {
        leaves.push_back(*p->left);
        cur = &*p->right;
    }
    leaves.push_back(*cur);
    return leaves;
}

std::optional<std::string> rooted_operation(const Term& t) {
    if (const auto* r = std::get_if<Receive>(&t.node)) return r->op;
    if (const auto* g = std::get_if<GuardedReplication>(&t.node)) return g->op;
    return std::nullopt;
}

Term rename_ports(const Term& t, const std::map<std::string, std::string>& renames) {
    struct V {
        const std::map<std::string, std::string>& renames;
        Term operator()(const Nil&) const { return nil_term(); }
        Term operator()(const Invoke& i) const {
            auto it = renames.find(i.port);
            return invoke(it == renames.end() ? i.port : it->second, i.op, i.payload, i.responseVar);
        }
        Term operator()(const Receive& r) const { return receive(r.op, r.bindVar, rename_ports(*r.body, renames), r.reply); }
        Term operator()(const GuardedReplication& r) const {
            return replicate(r.op, r.bindVar, rename_ports(*r.body, renames), r.reply);
        }
        Term operator()(const Sequence& s) const {
            return sequence(rename_ports(*s.first, renames), rename_ports(*s.second, renames));
        }
        Term operator()(const Parallel& p) const {
            return parallel(rename_ports(*p.left, renames), rename_ports(*p.right, renames));
        }
    };
    Term out = std::visit(V{renames}, t.node);
    out.loc = t.loc;
    return out;
}

std::size_t interface_users(const ModelSet& context, const std::string& iface) {
    std::size_t users = 0;
    for (const auto& u : context.units()) {
        for (const auto& s : u.services) {
            bool uses = false;
            for (const auto& p : s.ports) {
                if (p.direction == PortDirection::Input &&
                    std::find(p.interfaces.begin(), p.interfaces.end(), iface) != p.interfaces.end()) {
                    uses = true;
                }
            }
            users += uses ? 1 : 0;
        }
    }
    return users;
}

}  // namespace

LemmaTransformResult jolie_to_lemma(const JolieServiceModel& m, const ModelSet& context) {
    LemmaTransformResult r;
    LemmaServiceModel& out = r.service;
    out.qualifiedName = m.name;
    out.kind = ServiceKind::Functional;
    out.doc = m.doc;
    out.loc = m.loc;
    lose(r.loss, J2L, m.name + ".kind", LossKind::SynthesizedDefault, "Jolie services carry no kind; set to functional");

    const std::optional<std::size_t> unit = context.unit_of_service(m.name);
    std::set<std::string> owned;
    for (const auto& p : m.ports) {
        if (p.direction != PortDirection::Input) continue;
        for (const auto& name : p.interfaces) {
            if (!owned.insert(name).second) continue;
            const Interface* iface = unit ? context.find_interface(*unit, name) : nullptr;
            if (!iface) continue;
            out.interfaces.push_back(to_lemma_interface(*iface));
            if (interface_users(context, name) > 1) {
                lose(r.loss, J2L, m.name + "." + name, LossKind::DroppedSharing,
                     "interface shared by several services is now owned by each microservice");
            }
        }
    }

    std::map<std::string, std::string> portRenames;
    std::set<std::string> requiredNames;
    for (const auto& p : m.ports) {
        if (p.direction == PortDirection::Input) {
            Endpoint e;
            e.name = p.name;
            e.location = p.location;
            e.interfaces = p.interfaces;
            e.loc = p.loc;
            out.endpoints.push_back(std::move(e));
            std::string format = p.dataFormat.value_or(std::string(kDefaultFormat));
            if (!p.dataFormat) {
                lose(r.loss, J2L, m.name + "." + p.name + ".format", LossKind::SynthesizedDefault,
                     "port gives no data format; mapped to " + std::string(kDefaultFormat));
            }
            TechnologyModel tech;
            tech.name = "tech_" + p.protocol;
            tech.protocols.push_back(ProtocolDecl{p.protocol, format});
            tech.dataFormats.push_back(format);
            merge_technology(r.technologies, tech);
            MappingEntry map;
            map.serviceRef = m.name;
            map.endpointRef = p.name;
            map.technology = tech.name;
            map.protocol = p.protocol;
            map.format = format;
            r.mappings.push_back(std::move(map));
            continue;
        }
        const JolieServiceModel* target = context.service_at_location(p.location);
        std::string targetName = target ? target->name : p.name;
        if (targetName != p.name) {
            portRenames[p.name] = targetName;
            lose(r.loss, J2L, m.name + "." + p.name, LossKind::DroppedName,
                 "output port renamed after its target '" + targetName + "'");
        }
        std::string detail = "callee access point dropped (location " + p.location + ", protocol " + p.protocol;
        if (p.dataFormat) detail += ", format " + *p.dataFormat;
        lose(r.loss, J2L, m.name + "." + p.name, LossKind::DroppedAccessPoint, detail + ")");
        if (requiredNames.insert(targetName).second) {
            RefMicroservice ref;
            ref.qualifiedName = targetName;
            ref.loc = p.loc;
            out.requires_.push_back(std::move(ref));
        }
    }

    if (m.behaviour) {
        Term behaviour = portRenames.empty() ? *m.behaviour : rename_ports(*m.behaviour, portRenames);
        std::vector<Term> leaves = parallel_spine(behaviour);
        std::set<std::string> ops;
        bool perOperation = true;
        for (const auto& leaf : leaves) {
            auto op = rooted_operation(leaf);
            bool known = false;
            if (op) {
                for (const auto& i : out.interfaces) known = known || i.find(*op);
            }
            if (!op || !known || !ops.insert(*op).second || *op == kServiceBehaviour) perOperation = false;
        }
        auto binding = [&](std::string op, Term body) {
            BehaviourBinding b;
            b.operation = std::move(op);
            b.language = std::string(kJolieLanguageAlias);
            b.technology = std::string(kJolieTechnologyAlias);
            b.loc = body.loc;
            b.body = std::move(body);
            out.behaviourBindings.push_back(std::move(b));
        };
        if (perOperation) {
            for (auto& leaf : leaves) {
                std::string op = *rooted_operation(leaf);
                binding(std::move(op), std::move(leaf));
            }
        } else {
            binding(std::string(kServiceBehaviour), std::move(behaviour));
        }
    }
    return r;
}

namespace {

struct PortTech {
    std::string protocol;
    std::optional<std::string> format;
    bool found = false;
};

PortTech endpoint_tech(const LemmaServiceModel& m, const Endpoint& e, const ModelSet& context) {
    PortTech t;
    auto maps = context.mappings_for(m.qualifiedName, e.name);
    if (!maps.empty()) {
        t.protocol = maps.front()->protocol;
        t.format = maps.front()->format;
        t.found = true;
    }
    if (e.protocol) {
        t.protocol = e.protocol->name;
        t.found = true;
    }
    if (e.dataFormat) t.format = e.dataFormat->name;
    if (!t.found) t.protocol = std::string(kFallbackProtocol);
    return t;
}

std::optional<std::size_t> unit_of_microservice(const ModelSet& context, const LemmaServiceModel& m) {
    for (std::size_t u = 0; u < context.size(); ++u) {
        for (const auto& x : context.unit(u).microservices) {
            if (&x == &m) return u;
        }
    }
    return std::nullopt;
}

}  // namespace

JolieTransformResult lemma_to_jolie(const LemmaServiceModel& m, const ModelSet& context) {
    JolieTransformResult r;
    JolieServiceModel& out = r.service;
    out.name = simple_name(m.qualifiedName);
    out.doc = m.doc;
    out.loc = m.loc;
    if (out.name != m.qualifiedName) {
        lose(r.loss, L2J, m.qualifiedName, LossKind::DroppedName, "qualified name shortened to '" + out.name + "'");
    }
    lose(r.loss, L2J, m.qualifiedName + ".kind", LossKind::DroppedKind,
         "service kind '" + std::string(to_string(m.kind)) + "' has no Jolie counterpart");

    for (const auto& iface : m.interfaces) {
        Interface j;
        j.name = iface.name;
        j.doc = iface.doc;
        j.loc = iface.loc;
        for (const auto& op : iface.operations) {
            const std::string path = m.qualifiedName + "." + iface.name + "." + op.name;
            if (const auto* already = std::get_if<JolieOperation>(&op.shape)) {
                j.operations.push_back(op);
                (void)already;
                continue;
            }
            const auto& params = std::get<LemmaOperation>(op.shape).parameters;
            OperationSig sig;
            sig.name = op.name;
            sig.loc = op.loc;
            JolieOperation shape;
            auto is = [](const Parameter& p, Exchange e, Communication c) {
                return p.exchange == e && p.communication == c;
            };
            if (params.empty()) {
                shape.paradigm = Paradigm::OneWay;
                shape.request = TypeRef{"void", {}};
                lose(r.loss, L2J, path, LossKind::SynthesizedDefault, "operation without parameters mapped to oneWay(void)");
            } else if (params.size() == 1 && is(params[0], Exchange::Incoming, Communication::Asynchronous)) {
                shape.paradigm = Paradigm::OneWay;
                shape.request = params[0].type;
                if (params[0].name != "request") {
                    lose(r.loss, L2J, path + "." + params[0].name, LossKind::DroppedName, "parameter name dropped");
                }
            } else if (params.size() == 2 &&
                       ((is(params[0], Exchange::Incoming, Communication::Synchronous) &&
                         is(params[1], Exchange::Outgoing, Communication::Synchronous)) ||
                        (is(params[1], Exchange::Incoming, Communication::Synchronous) &&
                         is(params[0], Exchange::Outgoing, Communication::Synchronous)))) {
                const Parameter& in = params[0].exchange == Exchange::Incoming ? params[0] : params[1];
                const Parameter& outp = params[0].exchange == Exchange::Incoming ? params[1] : params[0];
                shape.paradigm = Paradigm::RequestResponse;
                shape.request = in.type;
                shape.response = outp.type;
                if (in.name != "request" || outp.name != "response" || &in != &params[0]) {
                    lose(r.loss, L2J, path, LossKind::DroppedName, "parameter names and order dropped");
                }
            } else {
                r.diagnostics.push_back(make_error(
                    codes::AmbiguousParadigm,
                    "operation '" + op.name + "' of '" + m.qualifiedName +
                        "' matches neither the request-response nor the one-way parameter shape",
                    op.loc));
                lose(r.loss, L2J, path, LossKind::AmbiguousParadigm, "operation refused");
                continue;
            }
            sig.shape = std::move(shape);
            j.operations.push_back(std::move(sig));
        }
        r.interfaces.push_back(std::move(j));
    }

    for (const auto& e : m.endpoints) {
        Port p;
        p.name = e.name;
        p.direction = PortDirection::Input;
        p.location = e.location;
        p.interfaces = e.interfaces;
        p.loc = e.loc;
        PortTech tech = endpoint_tech(m, e, context);
        if (!tech.found) {
            lose(r.loss, L2J, m.qualifiedName + "." + e.name + ".protocol", LossKind::SynthesizedDefault,
                 "endpoint has no protocol; defaulted to " + std::string(kFallbackProtocol));
        }
        p.protocol = tech.protocol;
        p.dataFormat = tech.format;
        out.ports.push_back(std::move(p));
    }

    const std::optional<std::size_t> unit = unit_of_microservice(context, m);
    for (const auto& req : m.requires_) {
        const LemmaServiceModel* target =
            unit ? context.find_microservice(*unit, req.alias, req.qualifiedName) : context.find_microservice(req.qualifiedName);
        Port p;
        p.name = simple_name(req.qualifiedName);
        p.direction = PortDirection::Output;
        p.location = std::string(kUnresolvedLocation);
        p.loc = req.loc;
        const std::string path = m.qualifiedName + "." + p.name;
        lose(r.loss, L2J, path + ".location", LossKind::SynthesizedDefault,
             "dependency carries no location; set to " + std::string(kUnresolvedLocation));
        if (target && !target->endpoints.empty()) {
            const Endpoint& first = target->endpoints.front();
            PortTech tech = endpoint_tech(*target, first, context);
            p.protocol = tech.protocol;
            p.dataFormat = tech.format;
            p.interfaces = first.interfaces;
        } else {
            p.protocol = std::string(kFallbackProtocol);
            if (target) {
                for (const auto& i : target->interfaces) p.interfaces.push_back(i.name);
            }
            lose(r.loss, L2J, path + ".protocol", LossKind::SynthesizedDefault,
                 "target has no endpoint; protocol defaulted to " + std::string(kFallbackProtocol));
        }
        out.ports.push_back(std::move(p));
    }

    std::vector<BehaviourBinding> bindings = unit ? context.bindings_for(m) : m.behaviourBindings;
    if (!bindings.empty()) {
        std::vector<Term> parts;
        for (auto& b : bindings) parts.push_back(std::move(b.body));
        out.behaviour = parallel_of(std::move(parts));
    }
    return r;
}

namespace {

std::string swap_extension(const std::string& path, View target) {
    std::string base = path;
    for (std::string_view ext : {".jsm", ".lsm"}) {
        if (base.size() > ext.size() && base.compare(base.size() - ext.size(), ext.size(), ext) == 0) {
            base.resize(base.size() - ext.size());
            return base + (target == View::Jolie ? ".jsm" : ".lsm");
        }
    }
    return base;
}

void add_builtin_import(SourceUnit& unit, std::string kind, std::string_view path, std::string_view alias) {
    for (const auto& i : unit.imports) {
        if (i.alias == alias) return;
    }
    unit.imports.push_back(Import{std::move(kind), std::string(path), std::string(alias), {}});
}

}  // namespace

UnitTransformResult transform_unit(const ModelSet& context, std::size_t unitIndex, View target) {
    UnitTransformResult r;
    const SourceUnit& in = context.unit(unitIndex);
    if (in.view == target) {
        r.unit = in;
        return r;
    }
    SourceUnit& out = r.unit;
    out.path = swap_extension(in.path, target);
    out.view = target;
    out.types = in.types;

    if (target == View::Lemma) {
        out.imports = in.imports;
        std::set<std::string> used;
        bool anyBehaviour = false;
        for (const auto& s : in.services) {
            for (const auto& p : s.ports) {
                if (p.direction == PortDirection::Input) used.insert(p.interfaces.begin(), p.interfaces.end());
            }
            LemmaTransformResult t = jolie_to_lemma(s, context);
            anyBehaviour = anyBehaviour || !t.service.behaviourBindings.empty();
            for (const auto& tech : t.technologies) merge_technology(out.technologies, tech);
            out.mappings.insert(out.mappings.end(), t.mappings.begin(), t.mappings.end());
            out.microservices.push_back(std::move(t.service));
            r.loss.append(t.loss);
            r.diagnostics.insert(r.diagnostics.end(), t.diagnostics.begin(), t.diagnostics.end());
        }
        for (const auto& i : in.interfaces) {
            if (!used.count(i.name)) {
                r.diagnostics.push_back(make_warning(codes::InterfaceOrphaned,
                                                     "interface '" + i.name + "' is not offered by any input port; dropped",
                                                     i.loc));
                lose(r.loss, J2L, i.name, LossKind::DroppedName, "orphaned interface dropped");
            }
        }
        if (anyBehaviour) {
            add_builtin_import(out, "behaviour_language", kJolieBehaviourLanguage, kJolieLanguageAlias);
            add_builtin_import(out, "technology", kJolieTechnology, kJolieTechnologyAlias);
        }
    } else {
        for (std::size_t i = 0; i < in.imports.size(); ++i) {
            if (!context.import_is_builtin(unitIndex, i)) out.imports.push_back(in.imports[i]);
        }
        std::set<std::string> declared;
        for (const auto& m : in.microservices) {
            if (m.isExtension) continue;
            JolieTransformResult t = lemma_to_jolie(m, context);
            for (auto& iface : t.interfaces) {
                if (declared.insert(iface.name).second) out.interfaces.push_back(std::move(iface));
            }
            out.services.push_back(std::move(t.service));
            r.loss.append(t.loss);
            r.diagnostics.insert(r.diagnostics.end(), t.diagnostics.begin(), t.diagnostics.end());
        }
    }
    sort_diagnostics(r.diagnostics);
    return r;
}

}  // namespace msadl
