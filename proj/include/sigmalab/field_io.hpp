#pragma once

#include <filesystem>

#include "sigmalab/grid.hpp"

namespace sigmalab {

// On-disk ScalarField: `<stem>.fld.json` holds dim/bounds/resolution/byte order,
// `<stem>.fld.bin` holds little-endian float64 values in row-major node order.
// `path` may be given with or without the `.fld.json` suffix.
void write_field(const ScalarField& field, const std::filesystem::path& path);
ScalarField read_field(const std::filesystem::path& path);

std::filesystem::path field_stem(const std::filesystem::path& path);

}  // namespace sigmalab
