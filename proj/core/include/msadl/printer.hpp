#pragma once

#include <string>

#include "msadl/model.hpp"

namespace msadl {

/// Canonical text of a unit: `view` header line, sorted imports, then types,
/// interfaces, technologies, services/microservices and mappings in
/// declaration order, four-space indentation, LF line endings.
std::string serialize(const SourceUnit& unit);

std::string serialize(const TypeDecl& type);
std::string serialize(const Interface& iface, View view);
std::string serialize_type_body(const TypeBody& body);
std::string serialize_basic_type(const BasicType& t);
std::string serialize_refinement(const Refinement& r);
std::string serialize(const Expr& e);

/// Behaviour term at the given indentation depth (no trailing newline).
std::string serialize(const Term& t, int indent = 0);

}  // namespace msadl
