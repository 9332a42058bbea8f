#pragma once

#include <string_view>

#include <nlohmann/json.hpp>

#include "msadl/model.hpp"

namespace msadl {

inline constexpr std::string_view kInterchangeVersion = "1.0.0";

/// `{"formatVersion": "1.0.0", "view": "jolie"|"lemma", "payload": {...}}`.
/// Source locations are not part of the payload.
nlohmann::json to_interchange(const SourceUnit& unit);

/// Strict reader: unknown fields, wrong types and unsupported major versions
/// are rejected with DiagnosticError(INTERCHANGE_INVALID).
SourceUnit from_interchange(const nlohmann::json& doc, std::string path = {});

nlohmann::json to_json(const TypeDecl& t);
nlohmann::json to_json(const Term& t);

}  // namespace msadl
