#pragma once

#include "crp/instances.hpp"
#include "crp/scene.hpp"
#include "crp/tabular_oracle.hpp"

#include <stdexcept>
#include <string>
#include <variant>

namespace crp {

class ParseError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kFileFormatVersion = 1;

/// Lengths are in metres, angles in radians. In strict mode unknown fields are
/// errors; otherwise they are ignored. Parsed scenes are finalized.
std::string scene_to_json(const Scene& scene);
Scene scene_from_json(const std::string& text, bool strict = true);

std::string instance_to_json(const AbstractInstance& instance);
AbstractInstance instance_from_json(const std::string& text, bool strict = true);

std::string formula_to_json(const MpsatFormula& formula);
MpsatFormula formula_from_json(const std::string& text, bool strict = true);

using Document = std::variant<Scene, AbstractInstance, MpsatFormula>;

/// Dispatches on the "format" field.
Document document_from_json(const std::string& text, bool strict = true);

/// Throws std::runtime_error on IO failure.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace crp
