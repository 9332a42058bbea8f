#include "msadl/model_set.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <filesystem>
#include <set>

namespace msadl {

namespace {

std::string location_text(const SourceLocation& loc) {
    std::string s = loc.file.empty() ? std::string("<input>") : loc.file;
    return s + ":" + std::to_string(loc.line) + ":" + std::to_string(loc.column);
}

std::string normal(const std::filesystem::path& p) { return p.lexically_normal().generic_string(); }

std::string strip_model_extension(const std::string& path) {
    for (std::string_view ext : {".jsm", ".lsm"}) {
        if (path.size() > ext.size() && path.compare(path.size() - ext.size(), ext.size(), ext) == 0) {
            return path.substr(0, path.size() - ext.size());
        }
    }
    return path;
}

// 0 = exact path, 1 = relative to importer, 2 = without extension, 3 = file stem.
int match_rank(const std::string& importer, const std::string& importPath, const std::string& unitPath) {
    const std::string unitNorm = normal(unitPath);
    const std::string rel = normal(std::filesystem::path(importer).parent_path() / importPath);
    if (normal(importPath) == unitNorm) return 0;
    if (rel == unitNorm) return 1;
    const std::string unitBare = strip_model_extension(unitNorm);
    if (normal(importPath) == unitBare || rel == unitBare) return 2;
    if (std::filesystem::path(strip_model_extension(unitPath)).filename().generic_string() == importPath) return 3;
    return -1;
}

bool is_builtin_import(std::string_view path) {
    return path == kJolieBehaviourLanguage || path == kJolieTechnology;
}

std::pair<std::string_view, std::string_view> split_alias(std::string_view ref) {
    auto pos = ref.find("::");
    if (pos == std::string_view::npos) return {{}, ref};
    return {ref.substr(0, pos), ref.substr(pos + 2)};
}

}  // namespace

const TypeDecl* builtin_type(NativeType native) {
    static const std::array<TypeDecl, 6> table = [] {
        std::array<TypeDecl, 6> t;
        for (int i = 0; i < 6; ++i) {
            auto n = static_cast<NativeType>(i);
            t[i].name = std::string(to_string(n));
            t[i].body.root = BasicType{n, std::nullopt};
        }
        return t;
    }();
    return &table[static_cast<std::size_t>(native)];
}

struct Resolver {
    static void run(ResolveResult& out, std::vector<SourceUnit> units);

    ModelSet& set;
    std::vector<Diagnostic>& diags;

    void bind_imports() {
        const auto& units = set.units_;
        set.importTargets_.assign(units.size(), {});
        for (std::size_t u = 0; u < units.size(); ++u) {
            std::set<std::string> aliases;
            for (const auto& imp : units[u].imports) {
                long target = -1;
                if (is_builtin_import(imp.path)) {
                    target = -2;
                } else {
                    int best = 99;
                    for (std::size_t v = 0; v < units.size(); ++v) {
                        int rank = match_rank(units[u].path, imp.path, units[v].path);
                        if (rank >= 0 && rank < best) {
                            best = rank;
                            target = static_cast<long>(v);
                        }
                    }
                }
                if (target == -1) {
                    diags.push_back(make_error(codes::RefUnresolved,
                                               "import target '" + imp.path + "' not found", imp.loc));
                }
                if (!imp.alias.empty() && !aliases.insert(imp.alias).second) {
                    diags.push_back(make_error(codes::DuplicateName,
                                               "import alias '" + imp.alias + "' declared twice", imp.loc));
                }
                set.importTargets_[u].push_back(target);
            }
        }
    }

    void detect_cycles() {
        const std::size_t n = set.units_.size();
        std::vector<int> color(n, 0);
        std::vector<std::size_t> stack;
        for (std::size_t u = 0; u < n; ++u) {
            if (color[u] == 0) dfs(u, color, stack);
        }
    }

    void dfs(std::size_t u, std::vector<int>& color, std::vector<std::size_t>& stack) {
        color[u] = 1;
        stack.push_back(u);
        const auto& targets = set.importTargets_[u];
        for (std::size_t i = 0; i < targets.size(); ++i) {
            if (targets[i] < 0) continue;
            auto v = static_cast<std::size_t>(targets[i]);
            if (color[v] == 1) {
                std::string chain;
                auto start = std::find(stack.begin(), stack.end(), v);
                for (auto it = start; it != stack.end(); ++it) chain += set.units_[*it].path + " -> ";
                chain += set.units_[v].path;
                diags.push_back(make_error(codes::ImportCycle, "import cycle: " + chain,
                                           set.units_[u].imports[i].loc));
            } else if (color[v] == 0) {
                dfs(v, color, stack);
            }
        }
        stack.pop_back();
        color[u] = 2;
    }

    void check_duplicates() {
        std::map<std::string, std::map<std::string, SourceLocation>> seen;
        auto note = [&](const char* kind, const std::string& name, const SourceLocation& loc) {
            auto& ns = seen[kind];
            auto [it, fresh] = ns.emplace(name, loc);
            if (!fresh) {
                diags.push_back(make_error(codes::DuplicateName,
                                           std::string(kind) + " '" + name + "' declared at " +
                                               location_text(it->second) + " and " + location_text(loc),
                                           loc));
            }
        };
        for (const auto& unit : set.units_) {
            for (const auto& t : unit.types) note("type", t.name, t.loc);
            for (const auto& i : unit.interfaces) note("interface", i.name, i.loc);
            for (const auto& s : unit.services) note("service", s.name, s.loc);
            for (const auto& m : unit.microservices) {
                if (!m.isExtension) note("microservice", m.qualifiedName, m.loc);
            }
            for (const auto& t : unit.technologies) note("technology", t.name, t.loc);
        }
    }
};

void Resolver::run(ResolveResult& out, std::vector<SourceUnit> units) {
    out.set.units_ = std::move(units);
    Resolver r{out.set, out.diagnostics};
    r.bind_imports();
    r.detect_cycles();
    r.check_duplicates();
    sort_diagnostics(out.diagnostics);
    out.set.resolveDiagnostics_ = out.diagnostics;
}

ResolveResult resolve(std::vector<SourceUnit> units) {
    ResolveResult out;
    Resolver::run(out, std::move(units));
    return out;
}

std::optional<std::size_t> ModelSet::find_unit(std::string_view path) const {
    for (std::size_t i = 0; i < units_.size(); ++i) {
        if (units_[i].path == path) return i;
    }
    return std::nullopt;
}

std::optional<std::size_t> ModelSet::import_target(std::size_t unit, std::size_t index) const {
    long t = importTargets_.at(unit).at(index);
    if (t < 0) return std::nullopt;
    return static_cast<std::size_t>(t);
}

bool ModelSet::import_is_builtin(std::size_t unit, std::size_t index) const {
    return importTargets_.at(unit).at(index) == -2;
}

const Import* ModelSet::find_alias(std::size_t unit, std::string_view alias) const {
    for (const auto& imp : units_.at(unit).imports) {
        if (!alias.empty() && imp.alias == alias) return &imp;
    }
    return nullptr;
}

namespace {

template <class T, class Get>
const T* lookup_scoped(const ModelSet& set, const std::vector<std::vector<long>>& targets, std::size_t unit,
                       std::string_view ref, Get get) {
    auto [alias, name] = split_alias(ref);
    auto search = [&](std::size_t u) -> const T* {
        for (const auto& item : get(set.unit(u))) {
            if (item.name == name) return &item;
        }
        return nullptr;
    };
    const auto& imports = set.unit(unit).imports;
    if (!alias.empty()) {
        for (std::size_t i = 0; i < imports.size(); ++i) {
            if (imports[i].alias == alias && targets[unit][i] >= 0) return search(static_cast<std::size_t>(targets[unit][i]));
        }
        return nullptr;
    }
    if (const T* own = search(unit)) return own;
    for (std::size_t i = 0; i < imports.size(); ++i) {
        if (targets[unit][i] < 0) continue;
        if (const T* found = search(static_cast<std::size_t>(targets[unit][i]))) return found;
    }
    return nullptr;
}

}  // namespace

const TypeDecl* ModelSet::find_type(std::size_t unit, std::string_view ref) const {
    if (auto native = native_from_keyword(ref)) return builtin_type(*native);
    return lookup_scoped<TypeDecl>(*this, importTargets_, unit, ref,
                                   [](const SourceUnit& u) -> const std::vector<TypeDecl>& { return u.types; });
}

TypeLookup ModelSet::type_lookup(std::size_t unit) const {
    return [this, unit](std::string_view name) { return find_type(unit, name); };
}

const Interface* ModelSet::find_interface(std::size_t unit, std::string_view ref) const {
    return lookup_scoped<Interface>(
        *this, importTargets_, unit, ref,
        [](const SourceUnit& u) -> const std::vector<Interface>& { return u.interfaces; });
}

const JolieServiceModel* ModelSet::find_service(std::string_view name) const {
    for (const auto& u : units_) {
        for (const auto& s : u.services) {
            if (s.name == name) return &s;
        }
    }
    return nullptr;
}

std::optional<std::size_t> ModelSet::unit_of_service(std::string_view name) const {
    for (std::size_t i = 0; i < units_.size(); ++i) {
        for (const auto& s : units_[i].services) {
            if (s.name == name) return i;
        }
    }
    return std::nullopt;
}

const JolieServiceModel* ModelSet::service_at_location(std::string_view location) const {
    for (const auto& u : units_) {
        for (const auto& s : u.services) {
            for (const auto& p : s.ports) {
                if (p.direction == PortDirection::Input && p.location == location) return &s;
            }
        }
    }
    return nullptr;
}

const LemmaServiceModel* ModelSet::find_microservice(std::size_t unit, std::string_view alias,
                                                     std::string_view qualifiedName) const {
    if (alias.empty()) return find_microservice(qualifiedName);
    const auto& imports = units_.at(unit).imports;
    for (std::size_t i = 0; i < imports.size(); ++i) {
        if (imports[i].alias != alias || importTargets_[unit][i] < 0) continue;
        for (const auto& m : units_[static_cast<std::size_t>(importTargets_[unit][i])].microservices) {
            if (!m.isExtension && m.qualifiedName == qualifiedName) return &m;
        }
    }
    return nullptr;
}

const LemmaServiceModel* ModelSet::find_microservice(std::string_view qualifiedName) const {
    for (const auto& u : units_) {
        for (const auto& m : u.microservices) {
            if (!m.isExtension && m.qualifiedName == qualifiedName) return &m;
        }
    }
    return nullptr;
}

const TechnologyModel* ModelSet::find_technology(std::size_t unit, std::string_view name) const {
    return lookup_scoped<TechnologyModel>(
        *this, importTargets_, unit, name,
        [](const SourceUnit& u) -> const std::vector<TechnologyModel>& { return u.technologies; });
}

const TechnologyModel* ModelSet::find_technology(std::string_view name) const {
    for (const auto& u : units_) {
        for (const auto& t : u.technologies) {
            if (t.name == name) return &t;
        }
    }
    return nullptr;
}

std::vector<const MappingEntry*> ModelSet::mappings_for(std::string_view service,
                                                        std::string_view endpoint) const {
    std::vector<const MappingEntry*> out;
    for (const auto& u : units_) {
        for (const auto& m : u.mappings) {
            if (m.serviceRef == service && m.endpointRef == endpoint) out.push_back(&m);
        }
    }
    return out;
}

std::vector<BehaviourBinding> ModelSet::bindings_for(const LemmaServiceModel& m) const {
    std::vector<BehaviourBinding> out = m.behaviourBindings;
    for (std::size_t u = 0; u < units_.size(); ++u) {
        for (const auto& ext : units_[u].microservices) {
            if (!ext.isExtension || ext.qualifiedName != m.qualifiedName) continue;
            if (find_microservice(u, ext.alias, ext.qualifiedName) != &m) continue;
            out.insert(out.end(), ext.behaviourBindings.begin(), ext.behaviourBindings.end());
        }
    }
    return out;
}

bool is_valid_uri(std::string_view s) {
    auto colon = s.find(':');
    if (colon == std::string_view::npos || colon == 0 || colon + 1 >= s.size()) return false;
    if (!std::isalpha(static_cast<unsigned char>(s[0]))) return false;
    for (std::size_t i = 1; i < colon; ++i) {
        char c = s[i];
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '+' && c != '-' && c != '.') return false;
    }
    for (char c : s) {
        auto uc = static_cast<unsigned char>(c);
        if (uc <= 0x20 || uc == 0x7f) return false;
    }
    return true;
}

}  // namespace msadl
