#pragma once

#include <string>
#include <vector>

#include "msadl/model.hpp"
#include "msadl/model_set.hpp"

namespace msadl {

struct GeneratedFile {
    /// Relative to the output directory, `/`-separated.
    std::string path;
    std::string content;
};

/// Documentation pages (CommonMark) and behaviour skeletons (toolkit DSL)
/// for a model set:
///   index.md, types/<Type>.md, services/<Service>.md, skeletons/<Service>.jsm
/// (Jolie services) and skeletons/<SimpleName>.lsm (LEMMA microservices)
struct SkeletonBundle {
    std::vector<GeneratedFile> files;
};

SkeletonBundle generate_docs(const ModelSet& set);

/// Prose for a basic type, e.g. "string, exactly 3 characters".
std::string describe_basic_type(const BasicType& t);
std::string describe_cardinality(const Cardinality& c);
/// "identified by SSN, country"
std::string describe_identity(const EntityPattern& p);

}  // namespace msadl
