#pragma once

#include <iosfwd>
#include <string>

#include "emc/emc.hpp"

namespace emc {

// Versioned line-based text snapshot of a full Emc state. Doubles are
// written with 17 significant digits, so save -> load -> save reproduces the
// file byte for byte and the restored state is bit-identical. The last line
// carries an FNV-1a 64 checksum of everything above it; loading rejects
// version mismatches, truncation, and checksum failures with an
// IntegrityError.
void save_snapshot(const Emc& emc, std::ostream& out);
void save_snapshot(const Emc& emc, const std::string& path);

Emc load_snapshot(std::istream& in);
Emc load_snapshot(const std::string& path);

}  // namespace emc
