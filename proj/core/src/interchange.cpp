#include "msadl/interchange.hpp"

#include <set>

#include "msadl/value.hpp"

namespace msadl {

using nlohmann::json;

namespace {

// ----- writing -----------------------------------------------------------------

json basic_json(const BasicType& b) {
    json j = {{"native", to_string(b.native)}};
    if (!b.refinement) return j;
    struct V {
        json operator()(const LengthRefinement& l) const { return {{"kind", "length"}, {"min", l.min}, {"max", l.max}}; }
        json operator()(const RangeRefinement& r) const { return {{"kind", "range"}, {"lo", r.lo}, {"hi", r.hi}}; }
        json operator()(const RegexRefinement& r) const { return {{"kind", "regex"}, {"pattern", r.pattern}}; }
        json operator()(const EnumRefinement& e) const { return {{"kind", "enum"}, {"values", e.values}}; }
    };
    j["refinement"] = std::visit(V{}, *b.refinement);
    return j;
}

json body_json(const TypeBody& body);

json node_json(const Node& n) {
    json j = {{"name", n.name}, {"min", n.cardinality.min}};
    j["max"] = n.cardinality.max ? json(*n.cardinality.max) : json(nullptr);
    if (const auto* ref = std::get_if<TypeRef>(&n.type)) {
        j["type"] = {{"ref", ref->name}};
    } else {
        j["type"] = {{"body", body_json(std::get<TypeBody>(n.type))}};
    }
    return j;
}

json body_json(const TypeBody& body) {
    json nodes = json::array();
    for (const auto& n : body.nodes) nodes.push_back(node_json(n));
    return {{"root", basic_json(body.root)}, {"nodes", nodes}};
}

json expr_json(const Expr& e) {
    struct V {
        json operator()(const LiteralExpr& l) const {
            if (std::holds_alternative<Unit>(l.value)) return {{"literal", nullptr}};
            return {{"literal", scalar_to_json(l.value)}};
        }
        json operator()(const VariableExpr& v) const { return {{"var", v.name}}; }
        json operator()(const FieldExpr& f) const { return {{"field", {{"base", expr_json(*f.base)}, {"name", f.field}}}}; }
        json operator()(const TreeExpr& t) const {
            json fields = json::array();
            for (const auto& [name, sub] : t.fields) fields.push_back(json::array({name, expr_json(*sub)}));
            return {{"tree", fields}};
        }
    };
    return std::visit(V{}, e.node);
}

json interface_json(const Interface& i) {
    json ops = json::array();
    for (const auto& op : i.operations) {
        json o = {{"name", op.name}};
        if (const auto* j = std::get_if<JolieOperation>(&op.shape)) {
            if (j->paradigm == Paradigm::OneWay) {
                o["oneWay"] = {{"request", j->request.name}};
            } else {
                o["requestResponse"] = {{"request", j->request.name},
                                        {"response", j->response ? j->response->name : std::string("void")}};
            }
        } else {
            json params = json::array();
            for (const auto& p : std::get<LemmaOperation>(op.shape).parameters) {
                params.push_back({{"name", p.name},
                                  {"exchange", p.exchange == Exchange::Incoming ? "in" : "out"},
                                  {"communication", p.communication == Communication::Synchronous ? "sync" : "async"},
                                  {"type", p.type.name}});
            }
            o["parameters"] = params;
        }
        ops.push_back(o);
    }
    json j = {{"name", i.name}, {"operations", ops}};
    if (i.doc) j["doc"] = *i.doc;
    return j;
}

json tech_ref_json(const TechRef& r) { return {{"technology", r.technology}, {"name", r.name}}; }

json microservice_json(const LemmaServiceModel& m) {
    json j = {{"qualifiedName", m.qualifiedName}, {"extension", m.isExtension}, {"kind", to_string(m.kind)}};
    if (!m.alias.empty()) j["alias"] = m.alias;
    if (m.doc) j["doc"] = *m.doc;
    json ifaces = json::array();
    for (const auto& i : m.interfaces) ifaces.push_back(interface_json(i));
    j["interfaces"] = ifaces;
    json eps = json::array();
    for (const auto& e : m.endpoints) {
        json ej = {{"name", e.name}, {"location", e.location}, {"interfaces", e.interfaces}};
        if (e.protocol) ej["protocol"] = tech_ref_json(*e.protocol);
        if (e.dataFormat) ej["format"] = tech_ref_json(*e.dataFormat);
        eps.push_back(ej);
    }
    j["endpoints"] = eps;
    json reqs = json::array();
    for (const auto& r : m.requires_) {
        json rj = {{"qualifiedName", r.qualifiedName}};
        if (!r.alias.empty()) rj["alias"] = r.alias;
        reqs.push_back(rj);
    }
    j["requires"] = reqs;
    json bs = json::array();
    for (const auto& b : m.behaviourBindings) {
        bs.push_back({{"operation", b.operation},
                      {"language", b.language},
                      {"technology", b.technology},
                      {"extraAnnotations", b.extraAnnotations},
                      {"body", to_json(b.body)}});
    }
    j["behaviours"] = bs;
    return j;
}

// ----- reading -----------------------------------------------------------------

[[noreturn]] void invalid(const std::string& where, const std::string& why) {
    throw DiagnosticError(make_error(codes::InterchangeInvalid, where + ": " + why));
}

class Reader {
public:
    Reader(const json& j, std::string where, std::initializer_list<std::string_view> allowed)
        : j_(j), where_(std::move(where)) {
        if (!j.is_object()) invalid(where_, "expected an object");
        std::set<std::string_view> ok(allowed);
        for (const auto& [k, v] : j.items()) {
            if (!ok.count(k)) invalid(where_, "unknown field '" + k + "'");
        }
    }

    bool has(const char* key) const { return j_.contains(key); }
    const json& at(const char* key) const {
        if (!j_.contains(key)) invalid(where_, std::string("missing field '") + key + "'");
        return j_.at(key);
    }
    std::string str(const char* key) const {
        const json& v = at(key);
        if (!v.is_string()) invalid(where_, std::string("field '") + key + "' must be a string");
        return v.get<std::string>();
    }
    std::optional<std::string> opt_str(const char* key) const {
        if (!has(key)) return std::nullopt;
        return str(key);
    }
    std::uint64_t nat(const char* key) const {
        const json& v = at(key);
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
            invalid(where_, std::string("field '") + key + "' must be a non-negative integer");
        }
        return v.get<std::uint64_t>();
    }
    double number(const char* key) const {
        const json& v = at(key);
        if (!v.is_number()) invalid(where_, std::string("field '") + key + "' must be a number");
        return v.get<double>();
    }
    bool boolean(const char* key) const {
        const json& v = at(key);
        if (!v.is_boolean()) invalid(where_, std::string("field '") + key + "' must be a boolean");
        return v.get<bool>();
    }
    const json& array(const char* key) const {
        static const json empty = json::array();
        if (!has(key)) return empty;
        const json& v = at(key);
        if (!v.is_array()) invalid(where_, std::string("field '") + key + "' must be an array");
        return v;
    }
    std::vector<std::string> strings(const char* key) const {
        std::vector<std::string> out;
        for (const auto& v : array(key)) {
            if (!v.is_string()) invalid(where_, std::string("field '") + key + "' must hold strings");
            out.push_back(v.get<std::string>());
        }
        return out;
    }
    const std::string& where() const { return where_; }

private:
    const json& j_;
    std::string where_;
};

NativeType read_native(const std::string& s, const std::string& where) {
    auto n = native_from_keyword(s);
    if (!n) invalid(where, "unknown native type '" + s + "'");
    return *n;
}

BasicType read_basic(const json& j, const std::string& where) {
    Reader r(j, where, {"native", "refinement"});
    BasicType b;
    b.native = read_native(r.str("native"), where);
    if (r.has("refinement")) {
        const json& rj = r.at("refinement");
        std::string rwhere = where + ".refinement";
        if (!rj.is_object() || !rj.contains("kind") || !rj["kind"].is_string()) invalid(rwhere, "missing 'kind'");
        std::string kind = rj["kind"].get<std::string>();
        if (kind == "length") {
            Reader rr(rj, rwhere, {"kind", "min", "max"});
            b.refinement = LengthRefinement{rr.nat("min"), rr.nat("max")};
        } else if (kind == "range") {
            Reader rr(rj, rwhere, {"kind", "lo", "hi"});
            b.refinement = RangeRefinement{rr.number("lo"), rr.number("hi")};
        } else if (kind == "regex") {
            Reader rr(rj, rwhere, {"kind", "pattern"});
            b.refinement = RegexRefinement{rr.str("pattern")};
        } else if (kind == "enum") {
            Reader rr(rj, rwhere, {"kind", "values"});
            b.refinement = EnumRefinement{rr.strings("values")};
        } else {
            invalid(rwhere, "unknown refinement kind '" + kind + "'");
        }
    }
    return b;
}

TypeBody read_body(const json& j, const std::string& where);

Node read_node(const json& j, const std::string& where) {
    Reader r(j, where, {"name", "min", "max", "type"});
    Node n;
    n.name = r.str("name");
    n.cardinality.min = r.nat("min");
    if (r.at("max").is_null()) {
        n.cardinality.max = std::nullopt;
    } else {
        n.cardinality.max = r.nat("max");
    }
    const json& t = r.at("type");
    std::string twhere = where + ".type";
    if (t.is_object() && t.contains("ref")) {
        Reader tr(t, twhere, {"ref"});
        n.type = TypeRef{tr.str("ref"), {}};
    } else if (t.is_object() && t.contains("body")) {
        Reader tr(t, twhere, {"body"});
        n.type = read_body(tr.at("body"), twhere + ".body");
    } else {
        invalid(twhere, "expected {\"ref\"} or {\"body\"}");
    }
    return n;
}

TypeBody read_body(const json& j, const std::string& where) {
    Reader r(j, where, {"root", "nodes"});
    TypeBody b;
    b.root = read_basic(r.at("root"), where + ".root");
    std::size_t i = 0;
    for (const auto& n : r.array("nodes")) b.nodes.push_back(read_node(n, where + ".nodes[" + std::to_string(i++) + "]"));
    return b;
}

TypeDecl read_type(const json& j, const std::string& where) {
    Reader r(j, where, {"name", "root", "nodes", "annotations", "extraAnnotations", "doc"});
    TypeDecl t;
    t.name = r.str("name");
    json bodyJ = {{"root", r.at("root")}, {"nodes", r.array("nodes")}};
    t.body = read_body(bodyJ, where);
    std::size_t i = 0;
    for (const auto& a : r.array("annotations")) {
        std::string awhere = where + ".annotations[" + std::to_string(i++) + "]";
        Reader ar(a, awhere, {"entity"});
        Reader er(ar.at("entity"), awhere + ".entity", {"identity"});
        EntityPattern p{er.strings("identity")};
        DddAnnotation ann;
        std::string list;
        for (std::size_t k = 0; k < p.identityFields.size(); ++k) list += (k ? ", " : "") + p.identityFields[k];
        ann.raw = "@entity { identity = [ " + list + " ] }";
        ann.pattern = std::move(p);
        t.annotations.push_back(std::move(ann));
    }
    t.extraAnnotations = r.strings("extraAnnotations");
    t.doc = r.opt_str("doc");
    return t;
}

Expr read_expr(const json& j, const std::string& where) {
    if (!j.is_object() || j.size() != 1) invalid(where, "expression must be a single-key object");
    const auto& [key, v] = *j.items().begin();
    Expr e;
    if (key == "literal") {
        try {
            e.node = LiteralExpr{v.is_null() ? Scalar{Unit{}} : scalar_from_json(v)};
        } catch (const DiagnosticError& err) {
            invalid(where, err.diagnostic().message);
        }
    } else if (key == "var") {
        if (!v.is_string()) invalid(where, "'var' must be a string");
        e.node = VariableExpr{v.get<std::string>()};
    } else if (key == "field") {
        Reader r(v, where + ".field", {"base", "name"});
        e.node = FieldExpr{Box<Expr>(read_expr(r.at("base"), where + ".field.base")), r.str("name")};
    } else if (key == "tree") {
        if (!v.is_array()) invalid(where, "'tree' must be an array");
        TreeExpr t;
        for (const auto& f : v) {
            if (!f.is_array() || f.size() != 2 || !f[0].is_string()) invalid(where, "tree fields are [name, expr] pairs");
            t.fields.emplace_back(f[0].get<std::string>(), Box<Expr>(read_expr(f[1], where + "." + f[0].get<std::string>())));
        }
        e.node = std::move(t);
    } else {
        invalid(where, "unknown expression kind '" + key + "'");
    }
    return e;
}

Term read_term(const json& j, const std::string& where) {
    if (!j.is_object() || j.size() != 1) invalid(where, "behaviour term must be a single-key object");
    const auto& [key, v] = *j.items().begin();
    if (key == "nil") {
        Reader r(v, where + ".nil", {});
        return nil_term();
    }
    if (key == "invoke") {
        Reader r(v, where + ".invoke", {"port", "op", "payload", "responseVar"});
        return invoke(r.str("port"), r.str("op"), read_expr(r.at("payload"), where + ".invoke.payload"),
                      r.opt_str("responseVar"));
    }
    if (key == "receive" || key == "replicate") {
        std::string w = where + "." + key;
        Reader r(v, w, {"op", "var", "body", "reply"});
        std::optional<Expr> reply;
        if (r.has("reply")) reply = read_expr(r.at("reply"), w + ".reply");
        Term body = read_term(r.at("body"), w + ".body");
        return key == "receive" ? receive(r.str("op"), r.str("var"), std::move(body), std::move(reply))
                                : replicate(r.str("op"), r.str("var"), std::move(body), std::move(reply));
    }
    if (key == "sequence" || key == "parallel") {
        if (!v.is_array() || v.size() != 2) invalid(where, "'" + key + "' takes exactly two terms");
        Term a = read_term(v[0], where + "." + key + "[0]");
        Term b = read_term(v[1], where + "." + key + "[1]");
        return key == "sequence" ? sequence(std::move(a), std::move(b)) : parallel(std::move(a), std::move(b));
    }
    invalid(where, "unknown behaviour term '" + key + "'");
}

Interface read_interface(const json& j, const std::string& where) {
    Reader r(j, where, {"name", "operations", "doc"});
    Interface i;
    i.name = r.str("name");
    i.doc = r.opt_str("doc");
    std::size_t k = 0;
    for (const auto& o : r.array("operations")) {
        std::string ow = where + ".operations[" + std::to_string(k++) + "]";
        Reader orr(o, ow, {"name", "oneWay", "requestResponse", "parameters"});
        OperationSig op;
        op.name = orr.str("name");
        int shapes = orr.has("oneWay") + orr.has("requestResponse") + orr.has("parameters");
        if (shapes != 1) invalid(ow, "exactly one of oneWay, requestResponse, parameters is required");
        if (orr.has("oneWay")) {
            Reader s(orr.at("oneWay"), ow + ".oneWay", {"request"});
            op.shape = JolieOperation{Paradigm::OneWay, TypeRef{s.str("request"), {}}, std::nullopt};
        } else if (orr.has("requestResponse")) {
            Reader s(orr.at("requestResponse"), ow + ".requestResponse", {"request", "response"});
            op.shape = JolieOperation{Paradigm::RequestResponse, TypeRef{s.str("request"), {}},
                                      TypeRef{s.str("response"), {}}};
        } else {
            LemmaOperation l;
            std::size_t pi = 0;
            for (const auto& p : orr.array("parameters")) {
                std::string pw = ow + ".parameters[" + std::to_string(pi++) + "]";
                Reader pr(p, pw, {"name", "exchange", "communication", "type"});
                Parameter param;
                param.name = pr.str("name");
                std::string ex = pr.str("exchange");
                std::string co = pr.str("communication");
                if (ex != "in" && ex != "out") invalid(pw, "exchange must be 'in' or 'out'");
                if (co != "sync" && co != "async") invalid(pw, "communication must be 'sync' or 'async'");
                param.exchange = ex == "in" ? Exchange::Incoming : Exchange::Outgoing;
                param.communication = co == "sync" ? Communication::Synchronous : Communication::Asynchronous;
                param.type = TypeRef{pr.str("type"), {}};
                l.parameters.push_back(std::move(param));
            }
            op.shape = std::move(l);
        }
        i.operations.push_back(std::move(op));
    }
    return i;
}

std::optional<TechRef> read_tech_ref(const Reader& r, const char* key) {
    if (!r.has(key)) return std::nullopt;
    Reader t(r.at(key), r.where() + "." + key, {"technology", "name"});
    return TechRef{t.str("technology"), t.str("name")};
}

template <class T, class Fn>
std::vector<T> read_list(const Reader& r, const char* key, Fn fn) {
    std::vector<T> out;
    std::size_t i = 0;
    for (const auto& item : r.array(key)) out.push_back(fn(item, r.where() + "." + key + "[" + std::to_string(i++) + "]"));
    return out;
}

}  // namespace

json to_json(const TypeDecl& t) {
    json j = body_json(t.body);
    j["name"] = t.name;
    json anns = json::array();
    for (const auto& a : t.annotations) {
        anns.push_back({{"entity", {{"identity", std::get<EntityPattern>(a.pattern).identityFields}}}});
    }
    j["annotations"] = anns;
    j["extraAnnotations"] = t.extraAnnotations;
    if (t.doc) j["doc"] = *t.doc;
    return j;
}

json to_json(const Term& t) {
    struct V {
        json operator()(const Nil&) const { return {{"nil", json::object()}}; }
        json operator()(const Invoke& i) const {
            json j = {{"port", i.port}, {"op", i.op}, {"payload", expr_json(i.payload)}};
            if (i.responseVar) j["responseVar"] = *i.responseVar;
            return {{"invoke", j}};
        }
        json operator()(const Receive& r) const {
            json j = {{"op", r.op}, {"var", r.bindVar}, {"body", to_json(*r.body)}};
            if (r.reply) j["reply"] = expr_json(*r.reply);
            return {{"receive", j}};
        }
        json operator()(const GuardedReplication& r) const {
            json j = {{"op", r.op}, {"var", r.bindVar}, {"body", to_json(*r.body)}};
            if (r.reply) j["reply"] = expr_json(*r.reply);
            return {{"replicate", j}};
        }
        json operator()(const Sequence& s) const { return {{"sequence", json::array({to_json(*s.first), to_json(*s.second)})}}; }
        json operator()(const Parallel& p) const { return {{"parallel", json::array({to_json(*p.left), to_json(*p.right)})}}; }
    };
    return std::visit(V{}, t.node);
}

json to_interchange(const SourceUnit& unit) {
    json p = json::object();
    json imports = json::array();
    for (const auto& i : unit.imports) {
        json ij = {{"kind", i.kind}, {"path", i.path}};
        if (!i.alias.empty()) ij["alias"] = i.alias;
        imports.push_back(ij);
    }
    p["imports"] = imports;
    json types = json::array();
    for (const auto& t : unit.types) types.push_back(to_json(t));
    p["types"] = types;
    json ifaces = json::array();
    for (const auto& i : unit.interfaces) ifaces.push_back(interface_json(i));
    p["interfaces"] = ifaces;
    json services = json::array();
    for (const auto& s : unit.services) {
        json ports = json::array();
        for (const auto& port : s.ports) {
            json pj = {{"name", port.name},
                       {"direction", port.direction == PortDirection::Input ? "input" : "output"},
                       {"location", port.location},
                       {"protocol", port.protocol},
                       {"interfaces", port.interfaces}};
            if (port.dataFormat) pj["format"] = *port.dataFormat;
            ports.push_back(pj);
        }
        json sj = {{"name", s.name}, {"ports", ports}};
        if (s.behaviour) sj["behaviour"] = to_json(*s.behaviour);
        if (s.doc) sj["doc"] = *s.doc;
        services.push_back(sj);
    }
    p["services"] = services;
    json techs = json::array();
    for (const auto& t : unit.technologies) {
        json protocols = json::array();
        for (const auto& pr : t.protocols) {
            json pj = {{"name", pr.name}};
            if (pr.defaultFormat) pj["defaultFormat"] = *pr.defaultFormat;
            protocols.push_back(pj);
        }
        techs.push_back({{"name", t.name}, {"protocols", protocols}, {"dataFormats", t.dataFormats}});
    }
    p["technologies"] = techs;
    json ms = json::array();
    for (const auto& m : unit.microservices) ms.push_back(microservice_json(m));
    p["microservices"] = ms;
    json maps = json::array();
    for (const auto& m : unit.mappings) {
        maps.push_back({{"service", m.serviceRef},
                        {"endpoint", m.endpointRef},
                        {"technology", m.technology},
                        {"protocol", m.protocol},
                        {"format", m.format}});
    }
    p["mappings"] = maps;
    return {{"formatVersion", kInterchangeVersion}, {"view", to_string(unit.view)}, {"payload", p}};
}

SourceUnit from_interchange(const json& doc, std::string path) {
    Reader top(doc, "document", {"formatVersion", "view", "payload"});
    std::string version = top.str("formatVersion");
    if (version.rfind("1.", 0) != 0) invalid("document", "unsupported formatVersion '" + version + "'");
    SourceUnit unit;
    unit.path = std::move(path);
    std::string view = top.str("view");
    if (view == "jolie") {
        unit.view = View::Jolie;
    } else if (view == "lemma") {
        unit.view = View::Lemma;
    } else {
        invalid("document", "view must be 'jolie' or 'lemma'");
    }
    Reader p(top.at("payload"), "payload",
             {"imports", "types", "interfaces", "services", "technologies", "microservices", "mappings"});
    unit.imports = read_list<Import>(p, "imports", [](const json& j, const std::string& w) {
        Reader r(j, w, {"kind", "path", "alias"});
        return Import{r.str("kind"), r.str("path"), r.opt_str("alias").value_or(""), {}};
    });
    unit.types = read_list<TypeDecl>(p, "types", read_type);
    unit.interfaces = read_list<Interface>(p, "interfaces", read_interface);
    unit.services = read_list<JolieServiceModel>(p, "services", [](const json& j, const std::string& w) {
        Reader r(j, w, {"name", "ports", "behaviour", "doc"});
        JolieServiceModel s;
        s.name = r.str("name");
        s.doc = r.opt_str("doc");
        s.ports = read_list<Port>(r, "ports", [](const json& pj, const std::string& pw) {
            Reader pr(pj, pw, {"name", "direction", "location", "protocol", "format", "interfaces"});
            Port port;
            port.name = pr.str("name");
            std::string dir = pr.str("direction");
            if (dir != "input" && dir != "output") invalid(pw, "direction must be 'input' or 'output'");
            port.direction = dir == "input" ? PortDirection::Input : PortDirection::Output;
            port.location = pr.str("location");
            port.protocol = pr.str("protocol");
            port.dataFormat = pr.opt_str("format");
            port.interfaces = pr.strings("interfaces");
            return port;
        });
        if (r.has("behaviour")) s.behaviour = read_term(r.at("behaviour"), w + ".behaviour");
        return s;
    });
    unit.technologies = read_list<TechnologyModel>(p, "technologies", [](const json& j, const std::string& w) {
        Reader r(j, w, {"name", "protocols", "dataFormats"});
        TechnologyModel t;
        t.name = r.str("name");
        t.protocols = read_list<ProtocolDecl>(r, "protocols", [](const json& pj, const std::string& pw) {
            Reader pr(pj, pw, {"name", "defaultFormat"});
            return ProtocolDecl{pr.str("name"), pr.opt_str("defaultFormat")};
        });
        t.dataFormats = r.strings("dataFormats");
        return t;
    });
    unit.microservices = read_list<LemmaServiceModel>(p, "microservices", [](const json& j, const std::string& w) {
        Reader r(j, w,
                 {"qualifiedName", "alias", "extension", "kind", "doc", "interfaces", "endpoints", "requires", "behaviours"});
        LemmaServiceModel m;
        m.qualifiedName = r.str("qualifiedName");
        m.alias = r.opt_str("alias").value_or("");
        m.isExtension = r.has("extension") && r.boolean("extension");
        auto kind = service_kind_from_keyword(r.opt_str("kind").value_or("functional"));
        if (!kind) invalid(w, "unknown service kind");
        m.kind = *kind;
        m.doc = r.opt_str("doc");
        m.interfaces = read_list<Interface>(r, "interfaces", read_interface);
        m.endpoints = read_list<Endpoint>(r, "endpoints", [](const json& ej, const std::string& ew) {
            Reader er(ej, ew, {"name", "location", "protocol", "format", "interfaces"});
            Endpoint e;
            e.name = er.str("name");
            e.location = er.str("location");
            e.protocol = read_tech_ref(er, "protocol");
            e.dataFormat = read_tech_ref(er, "format");
            e.interfaces = er.strings("interfaces");
            return e;
        });
        m.requires_ = read_list<RefMicroservice>(r, "requires", [](const json& rj, const std::string& rw) {
            Reader rr(rj, rw, {"qualifiedName", "alias"});
            return RefMicroservice{rr.opt_str("alias").value_or(""), rr.str("qualifiedName"), {}};
        });
        m.behaviourBindings = read_list<BehaviourBinding>(r, "behaviours", [](const json& bj, const std::string& bw) {
            Reader br(bj, bw, {"operation", "language", "technology", "extraAnnotations", "body"});
            BehaviourBinding b;
            b.operation = br.str("operation");
            b.language = br.str("language");
            b.technology = br.str("technology");
            b.extraAnnotations = br.strings("extraAnnotations");
            b.body = read_term(br.at("body"), bw + ".body");
            return b;
        });
        return m;
    });
    unit.mappings = read_list<MappingEntry>(p, "mappings", [](const json& j, const std::string& w) {
        Reader r(j, w, {"service", "endpoint", "technology", "protocol", "format"});
        MappingEntry m;
        m.serviceRef = r.str("service");
        m.endpointRef = r.str("endpoint");
        m.technology = r.str("technology");
        m.protocol = r.str("protocol");
        m.format = r.str("format");
        return m;
    });
    return unit;
}

}  // namespace msadl
