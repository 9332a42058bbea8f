#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "msadl/diagnostic.hpp"
#include "msadl/model.hpp"

namespace msadl {

/// Name lookup for types, as seen from one unit.
using TypeLookup = std::function<const TypeDecl*(std::string_view name)>;

/// Synthetic declaration for a native keyword used as a type reference
/// (`void`, `string`, ...). Body root is the native, no nodes.
const TypeDecl* builtin_type(NativeType native);

/// Import targets provided by the toolkit itself.
inline constexpr std::string_view kJolieBehaviourLanguage = "jolie.behaviour_language";
inline constexpr std::string_view kJolieTechnology = "jolie.technology";

/// A set of parsed units with their imports resolved. Immutable once built;
/// safe to share across threads.
///
/// Scoping: an unqualified name is looked up in its own unit, then in the
/// units it imports directly. `Alias::Name` is looked up only in the unit
/// imported under `Alias`. Aliases are scoped per unit. Declared names must be
/// unique across the whole set per namespace (types, interfaces, services,
/// microservices, technologies).
class ModelSet {
public:
    ModelSet() = default;

    const std::vector<SourceUnit>& units() const noexcept { return units_; }
    const SourceUnit& unit(std::size_t i) const { return units_.at(i); }
    std::size_t size() const noexcept { return units_.size(); }
    std::optional<std::size_t> find_unit(std::string_view path) const;

    /// Resolved target unit of `units()[unit].imports[index]`; nullopt for
    /// built-in or unresolved imports.
    std::optional<std::size_t> import_target(std::size_t unit, std::size_t index) const;
    bool import_is_builtin(std::size_t unit, std::size_t index) const;
    /// Import of `unit` declared with the given alias.
    const Import* find_alias(std::size_t unit, std::string_view alias) const;

    const TypeDecl* find_type(std::size_t unit, std::string_view ref) const;
    TypeLookup type_lookup(std::size_t unit) const;

    /// Top-level (Jolie-view) interface declarations.
    const Interface* find_interface(std::size_t unit, std::string_view ref) const;

    const JolieServiceModel* find_service(std::string_view name) const;
    std::optional<std::size_t> unit_of_service(std::string_view name) const;
    /// Jolie service exposing an input port at `location`.
    const JolieServiceModel* service_at_location(std::string_view location) const;

    /// Non-extension microservice. With an alias, searched in the aliased
    /// unit only; otherwise in the whole set.
    const LemmaServiceModel* find_microservice(std::size_t unit, std::string_view alias,
                                               std::string_view qualifiedName) const;
    const LemmaServiceModel* find_microservice(std::string_view qualifiedName) const;

    const TechnologyModel* find_technology(std::size_t unit, std::string_view name) const;
    const TechnologyModel* find_technology(std::string_view name) const;

    std::vector<const MappingEntry*> mappings_for(std::string_view service,
                                                  std::string_view endpoint) const;

    /// Own bindings of a microservice plus those attached by extension blocks.
    std::vector<BehaviourBinding> bindings_for(const LemmaServiceModel& m) const;

    /// Findings of the `resolve` call that built this set.
    const std::vector<Diagnostic>& resolve_diagnostics() const noexcept { return resolveDiagnostics_; }

private:
    friend struct Resolver;
    std::vector<SourceUnit> units_;
    // importTargets_[unit][import] = target unit index, -1 unresolved, -2 builtin
    std::vector<std::vector<long>> importTargets_;
    std::vector<Diagnostic> resolveDiagnostics_;
};

struct ResolveResult {
    ModelSet set;
    std::vector<Diagnostic> diagnostics;
};

/// Binds imports and checks declaration uniqueness. Errors: REF_UNRESOLVED
/// (import target missing), IMPORT_CYCLE, DUPLICATE_NAME. Never aborts; the
/// returned set is usable even with errors.
ResolveResult resolve(std::vector<SourceUnit> units);

/// Full structural validation of every unit in the set (references,
/// uniqueness, cardinality/refinement sanity, DDD annotation invariants,
/// behaviour well-formedness). Result is sorted by location and deterministic.
std::vector<Diagnostic> validate(const ModelSet& set);

/// Validation restricted to declarations of one unit.
std::vector<Diagnostic> validate(const ModelSet& set, std::size_t unit);

/// Validates a single type declaration in isolation (native type names only).
std::vector<Diagnostic> validate_type(const TypeDecl& t, const TypeLookup& lookup);

/// `scheme:rest` with an RFC 3986 scheme and no whitespace.
bool is_valid_uri(std::string_view s);

}  // namespace msadl
