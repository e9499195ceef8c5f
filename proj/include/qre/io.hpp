#pragma once

#include <string>

#include "qre/quantum_objects.hpp"

// Shared JSON file format: objects carry a "type" discriminator
// (state | pure_state | channel | povm); matrices are flattened row-major as
// [re, im] pairs. Doubles round-trip bit-exactly.
namespace qre::io {

std::string to_json_string(const DensityOperator& rho);
std::string to_json_string(const PureState& psi);
std::string to_json_string(const KrausChannel& ch);
std::string to_json_string(const Povm& povm);

void save(const std::string& path, const std::string& json_text);

/// Loads a density operator; a pure_state file is converted to its density.
DensityOperator load_state(const std::string& path);
PureState load_pure_state(const std::string& path);
KrausChannel load_channel(const std::string& path);
Povm load_povm(const std::string& path);

/// The "type" field of a stored object (for dispatch and diagnostics).
std::string peek_type(const std::string& path);

}  // namespace qre::io
