#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace msadl {

/// Position of a construct in a source unit. Lines and columns are 1-based;
/// a default-constructed location (line 0) means "no source position".
///
/// Locations are metadata: two locations always compare equal so that model
/// values keep structural equality across parse/serialize cycles. Code that
/// needs to order or compare positions uses `same_position` or the fields.
struct SourceLocation {
    std::string file;
    std::uint32_t line = 0;
    std::uint32_t column = 0;
    std::uint32_t endColumn = 0;

    friend bool operator==(const SourceLocation&, const SourceLocation&) { return true; }
};

bool same_position(const SourceLocation& a, const SourceLocation& b);
bool position_less(const SourceLocation& a, const SourceLocation& b);

enum class Severity { Error, Warning, Info };

std::string_view to_string(Severity s);

/// Registry of diagnostic codes. Every diagnostic the toolkit emits uses one
/// of these; docs/diagnostics.md describes each.
namespace codes {
inline constexpr std::string_view ParseError = "PARSE_ERROR";
inline constexpr std::string_view AnnotationMalformed = "ANNOTATION_MALFORMED";
inline constexpr std::string_view AnnotationUnknown = "ANNOTATION_UNKNOWN";
inline constexpr std::string_view RefinementIncompatible = "REFINEMENT_INCOMPATIBLE";
inline constexpr std::string_view RefinementInvalid = "REFINEMENT_INVALID";
inline constexpr std::string_view CardinalityInvalid = "CARDINALITY_INVALID";
inline constexpr std::string_view DuplicateName = "DUPLICATE_NAME";
inline constexpr std::string_view RefUnresolved = "REF_UNRESOLVED";
inline constexpr std::string_view ImportCycle = "IMPORT_CYCLE";
inline constexpr std::string_view UriInvalid = "URI_INVALID";
inline constexpr std::string_view PortNoInterfaces = "PORT_NO_INTERFACES";
inline constexpr std::string_view InterfaceMixedStyle = "INTERFACE_MIXED_STYLE";
inline constexpr std::string_view TechDefaultFormat = "TECH_DEFAULT_FORMAT_UNKNOWN";
inline constexpr std::string_view EndpointTechUnresolved = "ENDPOINT_TECH_UNRESOLVED";
inline constexpr std::string_view RequiresDuplicate = "REQUIRES_DUPLICATE";
inline constexpr std::string_view BehaviourOpUnknown = "BEHAVIOUR_OP_UNKNOWN";
inline constexpr std::string_view BehaviourDirection = "BEHAVIOUR_DIRECTION";
inline constexpr std::string_view BehaviourParadigm = "BEHAVIOUR_PARADIGM";
inline constexpr std::string_view DddIdentityFieldMissing = "DDD_IDENTITY_FIELD_MISSING";
inline constexpr std::string_view DddIdentityDuplicate = "DDD_IDENTITY_DUPLICATE";
inline constexpr std::string_view DddIdentityNotScalar = "DDD_IDENTITY_NOT_SCALAR";
inline constexpr std::string_view DddNoAnnotation = "DDD_NO_ANNOTATION";
inline constexpr std::string_view DddConflict = "DDD_CONFLICT";
inline constexpr std::string_view AmbiguousParadigm = "AMBIGUOUS_PARADIGM";
inline constexpr std::string_view InterfaceOrphaned = "INTERFACE_ORPHANED";
inline constexpr std::string_view TypeError = "TYPE_ERROR";
inline constexpr std::string_view UnboundVariable = "UNBOUND_VARIABLE";
inline constexpr std::string_view RouteUnresolved = "ROUTE_UNRESOLVED";
inline constexpr std::string_view StuckDeadlock = "STUCK_DEADLOCK";
inline constexpr std::string_view MaxStepsExceeded = "MAX_STEPS_EXCEEDED";
inline constexpr std::string_view DepthExceeded = "DEPTH_EXCEEDED";
inline constexpr std::string_view ScheduleInvalid = "SCHEDULE_INVALID";
inline constexpr std::string_view ValueInvalid = "VALUE_INVALID";
inline constexpr std::string_view InterchangeInvalid = "INTERCHANGE_INVALID";
inline constexpr std::string_view RegistryInvalid = "REGISTRY_INVALID";
inline constexpr std::string_view IoError = "IO_ERROR";

/// All registered codes, in registry order.
const std::vector<std::string_view>& all();
bool is_registered(std::string_view code);
}  // namespace codes

struct Diagnostic {
    Severity severity = Severity::Error;
    std::string code;
    std::string message;
    SourceLocation location;

    friend bool operator==(const Diagnostic& a, const Diagnostic& b) {
        return a.severity == b.severity && a.code == b.code && a.message == b.message &&
               same_position(a.location, b.location);
    }
};

Diagnostic make_error(std::string_view code, std::string message, SourceLocation loc = {});
Diagnostic make_warning(std::string_view code, std::string message, SourceLocation loc = {});

/// Orders diagnostics by file, line, column, then code and message.
void sort_diagnostics(std::vector<Diagnostic>& diags);

bool has_errors(const std::vector<Diagnostic>& diags);

/// `file:line:col: error[CODE]: message`
std::string format_diagnostic(const Diagnostic& d);

/// Thrown by operations whose contract has an error outcome that is not a
/// diagnostics list (precondition failures of the checker, entity engine and
/// simulator).
class DiagnosticError : public std::runtime_error {
public:
    explicit DiagnosticError(Diagnostic d);
    const Diagnostic& diagnostic() const noexcept { return diag_; }
    const std::string& code() const noexcept { return diag_.code; }

private:
    Diagnostic diag_;
};

}  // namespace msadl
