#include "msadl/diagnostic.hpp"

#include <algorithm>
#include <tuple>

namespace msadl {

bool same_position(const SourceLocation& a, const SourceLocation& b) {
    return a.file == b.file && a.line == b.line && a.column == b.column && a.endColumn == b.endColumn;
}

bool position_less(const SourceLocation& a, const SourceLocation& b) {
    return std::tie(a.file, a.line, a.column, a.endColumn) <
           std::tie(b.file, b.line, b.column, b.endColumn);
}

std::string_view to_string(Severity s) {
    switch (s) {
        case Severity::Error: return "error";
        case Severity::Warning: return "warning";
        case Severity::Info: return "info";
    }
    return "error";
}

namespace codes {

const std::vector<std::string_view>& all() {
    static const std::vector<std::string_view> registry = {
        ParseError, AnnotationMalformed, AnnotationUnknown, RefinementIncompatible,
        RefinementInvalid, CardinalityInvalid, DuplicateName, RefUnresolved, ImportCycle,
        UriInvalid, PortNoInterfaces, InterfaceMixedStyle, TechDefaultFormat,
        EndpointTechUnresolved, RequiresDuplicate, BehaviourOpUnknown, BehaviourDirection,
        BehaviourParadigm, DddIdentityFieldMissing, DddIdentityDuplicate, DddIdentityNotScalar,
        DddNoAnnotation, DddConflict, AmbiguousParadigm, InterfaceOrphaned, TypeError,
        UnboundVariable, RouteUnresolved, StuckDeadlock, MaxStepsExceeded, DepthExceeded,
        ScheduleInvalid, ValueInvalid, InterchangeInvalid, RegistryInvalid, IoError,
    };
    return registry;
}

bool is_registered(std::string_view code) {
    const auto& r = all();
    return std::find(r.begin(), r.end(), code) != r.end();
}

}  // namespace codes

Diagnostic make_error(std::string_view code, std::string message, SourceLocation loc) {
    return Diagnostic{Severity::Error, std::string(code), std::move(message), std::move(loc)};
}

Diagnostic make_warning(std::string_view code, std::string message, SourceLocation loc) {
    return Diagnostic{Severity::Warning, std::string(code), std::move(message), std::move(loc)};
}

void sort_diagnostics(std::vector<Diagnostic>& diags) {
    std::stable_sort(diags.begin(), diags.end(), [](const Diagnostic& a, const Diagnostic& b) {
        const auto& la = a.location;
        const auto& lb = b.location;
        return std::tie(la.file, la.line, la.column, a.code, a.message) <
               std::tie(lb.file, lb.line, lb.column, b.code, b.message);
    });
    diags.erase(std::unique(diags.begin(), diags.end()), diags.end());
}

bool has_errors(const std::vector<Diagnostic>& diags) {
    return std::any_of(diags.begin(), diags.end(),
                       [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

std::string format_diagnostic(const Diagnostic& d) {
    std::string out;
    if (!d.location.file.empty() || d.location.line != 0) {
        out += d.location.file.empty() ? "<input>" : d.location.file;
        if (d.location.line != 0) {
            out += ':' + std::to_string(d.location.line) + ':' + std::to_string(d.location.column);
        }
        out += ": ";
    }
    out += to_string(d.severity);
    out += '[' + d.code + "]: " + d.message;
    return out;
}

DiagnosticError::DiagnosticError(Diagnostic d)
    : std::runtime_error(format_diagnostic(d)), diag_(std::move(d)) {}

}  // namespace msadl
