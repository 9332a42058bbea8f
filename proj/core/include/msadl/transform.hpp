#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "msadl/diagnostic.hpp"
#include "msadl/model.hpp"
#include "msadl/model_set.hpp"

namespace msadl {

enum class TransformDirection { JolieToLemma, LemmaToJolie };

/// DroppedAccessPoint records the callee location/protocol a Jolie output
/// port loses when it becomes a microservice dependency; DroppedName records
/// a renamed port, parameter or service; DroppedSharing records an interface
/// used by several Jolie services that each microservice now owns a copy of.
enum class LossKind {
    DroppedKind,
    DroppedDddSemantics,
    SynthesizedDefault,
    AmbiguousParadigm,
    DroppedAccessPoint,
    DroppedName,
    DroppedSharing,
};

std::string_view to_string(TransformDirection d);
std::string_view to_string(LossKind k);

struct LossItem {
    TransformDirection direction = TransformDirection::JolieToLemma;
    std::string elementPath;
    LossKind kind = LossKind::SynthesizedDefault;
    std::string detail;
    friend bool operator==(const LossItem&, const LossItem&) = default;
};

struct LossReport {
    std::vector<LossItem> items;

    bool empty() const { return items.empty(); }
    void append(const LossReport& other);
    nlohmann::json to_json() const;
    /// Fixed-width text table for terminal output.
    std::string render_table() const;
};

inline constexpr std::string_view kUnresolvedLocation = "socket://UNRESOLVED";
inline constexpr std::string_view kDefaultFormat = "json";
inline constexpr std::string_view kFallbackProtocol = "sodep";
inline constexpr std::string_view kJolieLanguageAlias = "jolie";
inline constexpr std::string_view kJolieTechnologyAlias = "jolie_interpreter";

struct LemmaTransformResult {
    LemmaServiceModel service;
    std::vector<TechnologyModel> technologies;
    std::vector<MappingEntry> mappings;
    LossReport loss;
    std::vector<Diagnostic> diagnostics;
};

struct JolieTransformResult {
    JolieServiceModel service;
    /// Jolie-style interfaces rebuilt from the microservice's owned ones.
    std::vector<Interface> interfaces;
    LossReport loss;
    std::vector<Diagnostic> diagnostics;
};

/// Per-service translation. `context` supplies the service's unit (for
/// interfaces and callee lookup by location).
LemmaTransformResult jolie_to_lemma(const JolieServiceModel& m, const ModelSet& context);

/// Inverse translation. Operations whose parameters match neither the
/// request-response nor the one-way shape get an AMBIGUOUS_PARADIGM error and
/// are left out; the rest proceed.
JolieTransformResult lemma_to_jolie(const LemmaServiceModel& m, const ModelSet& context);

struct UnitTransformResult {
    SourceUnit unit;
    LossReport loss;
    std::vector<Diagnostic> diagnostics;
};

/// Whole-unit translation: types carried over unchanged, technology models
/// merged by name, mapping entries collected, behaviour-language imports
/// added or dropped as needed.
UnitTransformResult transform_unit(const ModelSet& context, std::size_t unit, View target);

}  // namespace msadl
