#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include "metadyn/reference_set.hpp"
#include "metadyn/toysim.hpp"

namespace metadyn {

inline constexpr const char* kRefsetHeader = "# metadyn-close refset v1";

/// Reference-set text format:
///
///   # metadyn-close refset v1
///   STRUCTURE <id> q=<real>
///   x y z w wprime
///   ...
///   <blank line>
///   STRUCTURE <id>
///   ...
///
/// `q=` may be omitted, in which case the property is the structure's
/// position in the file. Structures are centered and weight-normalized on load.
ReferenceSet read_references(std::istream& in, double lambda);
ReferenceSet load_references(const std::string& path, double lambda);

/// Writes with 17 significant digits so a reload reproduces the values.
void write_references(std::ostream& out, const ReferenceSet& ref);
void save_references(const std::string& path, const ReferenceSet& ref);

/// Frames as a line with the step followed by one "x y z" line per bead.
void write_trajectory(std::ostream& out, std::span<const Frame> frames);

/// CSV with header "step,cv_value,bias".
void write_cv_series(std::ostream& out, const RunReport& report);

}  // namespace metadyn
