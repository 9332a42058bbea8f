#pragma once

#include <string>
#include <vector>

#include "msadl/model.hpp"
#include "msadl/model_set.hpp"
#include "msadl/value.hpp"

namespace msadl {

enum class ViolationRule { NativeMismatch, RefinementViolated, CardinalityViolated, UnknownNode };

std::string_view to_string(ViolationRule r);

struct Violation {
    /// Dotted node path, `country`, `items[1]`, `address.street`; empty for the root.
    std::string path;
    ViolationRule rule = ViolationRule::NativeMismatch;
    std::string detail;
    friend bool operator==(const Violation&, const Violation&) = default;
};

struct CheckReport {
    bool ok = true;
    std::vector<Violation> violations;
};

/// Whether `value` satisfies `refinement`. Strings are measured in code
/// points; regexes must match the whole string. Throws DiagnosticError
/// (REFINEMENT_INCOMPATIBLE) when the scalar kind cannot carry the refinement.
bool check_refinement(const Scalar& value, const Refinement& refinement);

/// Closed-world structural check of a value tree against a type: root kind,
/// refinement, node cardinalities, recursion into children, and no
/// undeclared children. Int and Double never coerce.
CheckReport check_value(const ValueTree& value, const TypeBody& type, const TypeLookup& lookup);
CheckReport check_value(const ValueTree& value, const TypeDecl& type, const TypeLookup& lookup);

/// Convenience for self-contained types whose nodes use only inline or
/// native types.
CheckReport check_value(const ValueTree& value, const TypeDecl& type);

}  // namespace msadl
